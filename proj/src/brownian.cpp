#include "tcbm/brownian.hpp"

#include <algorithm>
#include <limits>

namespace tcbm
{
	PathSample sample_path(int dim, const Point &x0, double dt, double t_max, Seed seed)
	{
		require(dim >= 1 && dim <= kMaxDim, "sample_path: bad dimension");
		require(x0.size() == dim, "sample_path: start point dimension mismatch");
		const int n = step_count(dt, t_max);
		PathSample path;
		path.dim = dim;
		path.dt = dt;
		path.n_steps = n;
		path.seed = seed;
		path.increments.resize(dim, n);
		path.positions.resize(dim, n + 1);
		Rng rng(seed);
		const double sd = std::sqrt(dt);
		rng.fill_normal(path.increments, sd);
		path.positions.col(0) = x0;
		for (int i = 0; i < n; ++i)
			path.positions.col(i + 1) = path.positions.col(i) + path.increments.col(i);
		return path;
	}

	ExitRecord exit_time_ball(const PathSample &path, const Point &center, double r, Seed rng)
	{
		require(r > 0.0, "exit_time_ball: radius must be positive");
		require(center.size() == path.dim, "exit_time_ball: center dimension mismatch");
		ExitDetector detector(center, r, path.dt, rng);
		if (detector.start_outside(path.positions.col(0)))
			return detector.record();
		for (int i = 0; i < path.n_steps; ++i)
			if (detector.step(path.positions.col(i), path.positions.col(i + 1), i))
				break;
		return detector.record();
	}

	namespace
	{
		struct ExitRun
		{
			bool exited = false;
			double time = 0.0;
		};

		// Streams one path from x0 until exit or n_steps.
		ExitRun stream_exit(const Point &x0, const Point &center, double r, double dt, int n_steps, Seed path_seed, Seed bridge_seed)
		{
			ExitDetector detector(center, r, dt, bridge_seed);
			if (detector.start_outside(x0))
				return {true, 0.0};
			Rng rng(path_seed);
			const double sd = std::sqrt(dt);
			Point z = x0, next(x0.size());
			for (int i = 0; i < n_steps; ++i)
			{
				for (Eigen::Index k = 0; k < z.size(); ++k)
					next(k) = z(k) + sd * rng.normal();
				if (detector.step(z, next, i))
					return {true, detector.record().exit_time};
				z = next;
			}
			return {false, n_steps * dt};
		}
	} // namespace

	McEstimate exit_probability(int dim, double r, double t, std::size_t n_paths, Seed seed, int steps_per_t)
	{
		require(r > 0.0 && t > 0.0, "exit_probability: r and t must be positive");
		require(n_paths >= 2, "exit_probability: need at least two paths");
		const double dt = std::min(t / steps_per_t, r * r / 100.0);
		const int n = step_count(dt, t);
		const double dt_grid = t / n;
		const Point c = Point::Zero(dim);
		auto stats = reduce_blocks<RunningStats>(n_paths, [&](std::size_t i, RunningStats &acc) {
			const ExitRun run = stream_exit(c, c, r, dt_grid, n, derive_seed(seed, streams::kPath, i), derive_seed(seed, streams::kBridge, i));
			acc.add(run.exited ? 1.0 : 0.0);
		});
		return stats.estimate();
	}

	McEstimate mean_exit_time(int dim, const Point &x0, double r, double dt, double t_max, std::size_t n_paths, Seed seed)
	{
		require(x0.size() == dim, "mean_exit_time: start point dimension mismatch");
		require(r > 0.0, "mean_exit_time: radius must be positive");
		const int n = step_count(dt, t_max);
		struct Acc
		{
			RunningStats time;
			std::size_t truncated = 0;
			void merge(const Acc &o)
			{
				time.merge(o.time);
				truncated += o.truncated;
			}
		};
		auto acc = reduce_blocks<Acc>(n_paths, [&](std::size_t i, Acc &a) {
			const ExitRun run = stream_exit(x0, x0, r, dt, n, derive_seed(seed, streams::kPath, i), derive_seed(seed, streams::kBridge, i));
			a.time.add(run.time);
			if (!run.exited)
				++a.truncated;
		});
		return acc.time.estimate(static_cast<double>(acc.truncated) / static_cast<double>(n_paths));
	}

	double min_exit_constant(double x, double p)
	{
		if (p <= 0.0)
			return 0.0;
		auto g = [x](double c) { return c * std::exp(-x / c); };
		double lo = 1e-12, hi = 1.0;
		while (g(hi) < p)
			hi *= 2.0;
		for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it)
		{
			const double mid = 0.5 * (lo + hi);
			(g(mid) >= p ? hi : lo) = mid;
		}
		return hi;
	}

	ExitTailReport exit_tail_check(int dim, std::span<const double> radii, std::span<const double> times, std::size_t n_paths, Seed seed)
	{
		require(!radii.empty() && !times.empty(), "exit_tail_check: empty grid");
		ExitTailReport report;
		report.dim = dim;
		std::vector<double> xs, ys;
		std::uint64_t cell = 0;
		for (double r : radii)
			for (double t : times)
			{
				ExitTailCell c;
				c.r = r;
				c.t = t;
				c.prob = exit_probability(dim, r, t, n_paths, derive_seed(seed, streams::kOuter, cell++));
				c.min_c = min_exit_constant(r * r / t, std::min(1.0, c.prob.ci_hi));
				report.fitted_c = std::max(report.fitted_c, c.min_c);
				if (c.prob.value > 0.0)
				{
					xs.push_back(r * r / t);
					ys.push_back(std::log(c.prob.value));
				}
				report.cells.push_back(c);
			}
		if (xs.size() >= 2)
			report.log_fit = fit_line(xs, ys);
		report.bound_holds = std::isfinite(report.fitted_c);
		for (const auto &c : report.cells)
			if (report.fitted_c * std::exp(-c.r * c.r / (report.fitted_c * c.t)) < c.prob.value)
				report.bound_holds = false;
		return report;
	}
} // namespace tcbm
