#include "tcbm/pcaf.hpp"

#include <algorithm>

namespace tcbm
{
	PcafTrace accumulate_positions(const PointMatrix &positions, double dt, const MeasureSpec &spec, double a0)
	{
		require(positions.rows() == spec.dim, "accumulate: dimension mismatch");
		require(positions.cols() >= 1, "accumulate: empty path");
		PcafTrace trace;
		trace.dt = dt;
		trace.a_values.resize(static_cast<std::size_t>(positions.cols()));
		PcafAccumulator acc(dt, spec.density(positions.col(0)));
		acc.add(a0);
		trace.a_values[0] = a0;
		for (Eigen::Index i = 1; i < positions.cols(); ++i)
		{
			acc.step(spec.density(positions.col(i)));
			trace.a_values[static_cast<std::size_t>(i)] = acc.value();
		}
		if (!std::isfinite(trace.horizon()))
			throw PcafOverflow("accumulate: non-finite additive functional");
		return trace;
	}

	PcafTrace accumulate(const PathSample &path, const MeasureSpec &spec)
	{
		return accumulate_positions(path.positions, path.dt, spec);
	}

	std::optional<double> inverse_clock(const PcafTrace &trace, double s)
	{
		require(s >= 0.0, "inverse_clock: s must be nonnegative");
		const auto &a = trace.a_values;
		if (a.empty() || s >= a.back())
			return std::nullopt;
		const auto it = std::upper_bound(a.begin(), a.end(), s);
		const auto j = static_cast<std::size_t>(it - a.begin());
		if (j == 0)
			return 0.0;
		const double lo = a[j - 1], hi = a[j];
		const double frac = (s - lo) / (hi - lo);
		return (static_cast<double>(j - 1) + frac) * trace.dt;
	}

	std::optional<Point> time_changed_position(const PathSample &path, const PcafTrace &trace, double s)
	{
		const auto tau = inverse_clock(trace, s);
		if (!tau)
			return std::nullopt;
		const double u = *tau / path.dt;
		const int i = std::min(static_cast<int>(std::floor(u)), path.n_steps);
		if (i >= path.n_steps)
			return Point(path.positions.col(path.n_steps));
		const double w = u - i;
		return Point((1.0 - w) * path.positions.col(i) + w * path.positions.col(i + 1));
	}

	ClockCrossing stream_time_change(const MeasureSpec &spec, const Point &z0, double s, double dt, double t_max, Rng &rng)
	{
		const int n = step_count(dt, t_max);
		if (spec.family == Family::Constant)
		{
			// A_t = c t, so tau_s = s / c and B there is one Gaussian draw.
			const double horizon = n * dt;
			if (spec.c <= 0.0 || s > spec.c * horizon)
				return {std::nullopt, spec.c * horizon};
			Point z = z0;
			rng.fill_normal(z, 1.0);
			return {Point(z0 + std::sqrt(s / spec.c) * z), s};
		}
		const double sd = std::sqrt(dt);
		PcafAccumulator clock(dt, spec.density(z0));
		Point z = z0, next(z0.size());
		for (int i = 0; i < n; ++i)
		{
			for (Eigen::Index k = 0; k < z.size(); ++k)
				next(k) = z(k) + sd * rng.normal();
			const double before = clock.value();
			const double inc = clock.step(spec.density(next));
			if (clock.value() >= s)
			{
				const double w = inc > 0.0 ? std::clamp((s - before) / inc, 0.0, 1.0) : 1.0;
				return {Point((1.0 - w) * z + w * next), s};
			}
			z = next;
		}
		return {std::nullopt, clock.value()};
	}

	namespace
	{
		// int_0^T h(B_t) rho(B_t) dt on the dt grid, with a final partial step to T.
		template <typename H>
		double killed_integral(const Point &x, double T, double dt, Rng &rng, const H &h)
		{
			const double sd = std::sqrt(dt);
			Point z = x, next(x.size());
			double prev = h(z), sum = 0.0, t = 0.0;
			while (t < T)
			{
				const double step = std::min(dt, T - t);
				const double s = step == dt ? sd : std::sqrt(step);
				for (Eigen::Index k = 0; k < z.size(); ++k)
					next(k) = z(k) + s * rng.normal();
				const double cur = h(next);
				sum += 0.5 * (prev + cur) * step;
				prev = cur;
				z = next;
				t += step;
			}
			return sum;
		}
	} // namespace

	RevuzReport revuz_check(const MeasureSpec &spec, const Observable &f, const Observable &g, double alpha, const Box &box,
		std::size_t n_outer, std::size_t n_inner, Seed seed, double dt)
	{
		require(alpha > 0.0, "revuz_check: alpha must be positive");
		require(box.lo.size() == spec.dim && box.hi.size() == spec.dim, "revuz_check: box dimension mismatch");
		require((box.hi.array() > box.lo.array()).all(), "revuz_check: empty box");
		require(n_outer >= 2 && n_inner >= 1, "revuz_check: need n_outer >= 2 and n_inner >= 1");
		require(dt > 0.0, "revuz_check: dt must be positive");
		const double vol = box.volume();
		struct Acc
		{
			RunningStats lhs, rhs;
			void merge(const Acc &o)
			{
				lhs.merge(o.lhs);
				rhs.merge(o.rhs);
			}
		};
		const auto fr = [&](const Point &z) { return f(z) * spec.density(z); };
		const auto unit = [&](const Point &z) { return g(z); };
		auto acc = reduce_blocks<Acc>(n_outer, [&](std::size_t i, Acc &a) {
			Rng outer(derive_seed(seed, streams::kOuter, i));
			Point x(spec.dim);
			for (int k = 0; k < spec.dim; ++k)
				x(k) = box.lo(k) + (box.hi(k) - box.lo(k)) * outer.uniform();
			const double gx = g(x), fx = fr(x);
			double lhs = 0.0, rhs = 0.0;
			for (std::size_t j = 0; j < n_inner; ++j)
			{
				const std::uint64_t idx = i * n_inner + j;
				if (gx != 0.0)
				{
					Rng rng(derive_seed(seed, streams::kPath, 2 * idx));
					const double T = rng.exponential(alpha);
					lhs += gx * killed_integral(x, T, dt, rng, fr);
				}
				if (fx != 0.0)
				{
					Rng rng(derive_seed(seed, streams::kPath, 2 * idx + 1));
					const double T = rng.exponential(alpha);
					rhs += fx * killed_integral(x, T, dt, rng, unit);
				}
			}
			a.lhs.add(vol * lhs / static_cast<double>(n_inner));
			a.rhs.add(vol * rhs / static_cast<double>(n_inner));
		});
		RevuzReport report;
		report.lhs = acc.lhs.estimate();
		report.rhs = acc.rhs.estimate();
		const double se = std::hypot(report.lhs.stderr(), report.rhs.stderr());
		const double gap = std::abs(report.lhs.value - report.rhs.value);
		report.z_score = se > 0.0 ? gap / se : (gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
		report.agree = report.z_score <= 3.0;
		return report;
	}
} // namespace tcbm
