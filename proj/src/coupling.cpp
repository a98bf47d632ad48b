#include "tcbm/coupling.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <limits>
#include <sstream>

namespace tcbm
{
	namespace
	{
		constexpr double kPi = boost::math::constants::pi<double>();

		double z_score(double value, double reference, double se)
		{
			const double gap = std::abs(value - reference);
			if (se > 0.0)
				return gap / se;
			return gap < 1e-15 ? 0.0 : std::numeric_limits<double>::infinity();
		}
	} // namespace

	MirrorFrame::MirrorFrame(const Point &x, const Point &y)
	{
		require(x.size() == y.size(), "mirror coupling: dimension mismatch");
		separation = (x - y).norm();
		require(separation > 0.0, "mirror coupling: x and y must differ");
		mid = 0.5 * (x + y);
		u = (x - y) / separation;
	}

	Point reflect(const Point &x, const Point &y, const Point &z)
	{
		require(z.size() == x.size(), "reflect: dimension mismatch");
		return MirrorFrame(x, y).mirror(z);
	}

	CoupledTrajectory sample_coupled(const Point &x, const Point &y, const MeasureSpec &spec, double dt, double t_max, Seed seed)
	{
		require(x.size() == spec.dim && y.size() == spec.dim, "sample_coupled: dimension mismatch");
		const MirrorFrame frame(x, y);
		CoupledTrajectory out;
		out.base = sample_path(spec.dim, x, dt, t_max, derive_seed(seed, streams::kPath));
		const int n = out.base.n_steps;
		out.mirrored.resize(spec.dim, n + 1);
		out.signed_dist.resize(static_cast<std::size_t>(n) + 1);
		out.mirrored.col(0) = y;
		out.signed_dist[0] = 0.5 * frame.separation;
		MeetingDetector meeting(dt, derive_seed(seed, streams::kBridge));
		bool met = false;
		for (int i = 0; i < n; ++i)
		{
			const auto z = out.base.positions.col(i + 1);
			const double s1 = frame.signed_distance(z);
			out.signed_dist[static_cast<std::size_t>(i) + 1] = s1;
			if (!met && meeting.step(out.signed_dist[static_cast<std::size_t>(i)], s1))
			{
				met = true;
				out.xi = (i + 0.5) * dt;
				out.meet_step = i + 1;
			}
			out.mirrored.col(i + 1) = met ? Point(z) : frame.mirror(z);
		}
		out.a_trace = accumulate(out.base, spec);
		out.a_tilde_trace = accumulate_positions(out.mirrored, dt, spec);
		return out;
	}

	double meeting_tail_exact(double a, double t)
	{
		require(a >= 0.0, "meeting_tail_exact: a must be nonnegative");
		require(t > 0.0, "meeting_tail_exact: t must be positive");
		return std::erf(a / std::sqrt(2.0 * t));
	}

	std::vector<LemmaCpCell> lemma_cp_check(int dim, std::span<const double> separations, std::span<const double> times,
		std::size_t n_paths, Seed seed, int steps)
	{
		require(dim >= 1 && dim <= kMaxDim, "lemma_cp_check: bad dimension");
		require(steps >= 1 && n_paths >= 2, "lemma_cp_check: need steps >= 1 and n_paths >= 2");
		std::vector<LemmaCpCell> cells;
		std::uint64_t cell_index = 0;
		for (double a : separations)
			for (double t : times)
			{
				require(a > 0.0 && t > 0.0, "lemma_cp_check: a and t must be positive");
				const Point x = Point::Zero(dim);
				const Point y = a * unit_vector(dim, 0);
				const MirrorFrame frame(x, y);
				const double dt = t / steps;
				const double sd = std::sqrt(dt);
				const Seed cell_seed = derive_seed(seed, streams::kOuter, cell_index++);
				auto stats = reduce_blocks<RunningStats>(n_paths, [&](std::size_t i, RunningStats &acc) {
					Rng rng(derive_seed(cell_seed, streams::kPath, i));
					MeetingDetector meeting(dt, derive_seed(cell_seed, streams::kBridge, i));
					Point z = x;
					double s = 0.5 * frame.separation;
					for (int k = 0; k < steps; ++k)
					{
						for (int j = 0; j < dim; ++j)
							z(j) += sd * rng.normal();
						const double s1 = frame.signed_distance(z);
						if (meeting.step(s, s1))
						{
							acc.add(0.0);
							return;
						}
						s = s1;
					}
					acc.add(1.0);
				});
				LemmaCpCell c;
				c.a = a;
				c.t = t;
				c.survival = stats.estimate();
				c.literal = meeting_tail_exact(a, t);
				c.coupling = meeting_tail_exact(0.5 * a, t);
				c.stated_bound = a / std::sqrt(2.0 * kPi * t);
				c.doubled_bound = 2.0 * c.stated_bound;
				c.z_literal = z_score(c.survival.value, c.literal, c.survival.stderr());
				c.z_coupling = z_score(c.survival.value, c.coupling, c.survival.stderr());
				cells.push_back(c);
			}
		return cells;
	}

	std::string StopRule::describe() const
	{
		std::ostringstream os;
		switch (kind)
		{
		case Kind::BallExit:
			os << "ball-exit(r=" << radius << ",cap=" << time << ")";
			break;
		case Kind::FixedTime:
			os << "fixed-time(t=" << time << ")";
			break;
		case Kind::Min:
			os << "min(ball r=" << radius << ",t=" << time << ")";
			break;
		}
		return os.str();
	}

	std::vector<LemmaKeyRow> lemma_key_check(const Point &x, const Point &y, std::span<const double> thetas, const StopRule &stop,
		std::size_t n_paths, Seed seed, double dt)
	{
		require(!thetas.empty(), "lemma_key_check: no theta values");
		for (double th : thetas)
			require(th > 0.0 && th <= 1.0, "lemma_key_check: theta must lie in (0, 1]");
		require(stop.time > 0.0, "lemma_key_check: stop time must be positive");
		require(stop.kind == StopRule::Kind::FixedTime || stop.radius > 0.0, "lemma_key_check: ball radius must be positive");
		const MirrorFrame frame(x, y);
		const int n = step_count(dt, stop.time);
		const double sd = std::sqrt(dt);
		const bool ball = stop.kind != StopRule::Kind::FixedTime;
		const double r2 = stop.radius * stop.radius;
		struct Acc
		{
			std::vector<RunningStats> moments;
			void merge(const Acc &o)
			{
				if (moments.empty())
					moments.resize(o.moments.size());
				for (std::size_t k = 0; k < o.moments.size(); ++k)
					moments[k].merge(o.moments[k]);
			}
		};
		auto acc = reduce_blocks<Acc>(n_paths, [&](std::size_t i, Acc &a) {
			if (a.moments.empty())
				a.moments.resize(thetas.size());
			Rng rng(derive_seed(seed, streams::kPath, i));
			MeetingDetector meeting(dt, derive_seed(seed, streams::kBridge, i));
			Point z = x;
			double s = 0.5 * frame.separation;
			double gap = frame.separation; // |Z - Z~| at the stopping time
			for (int k = 0; k < n; ++k)
			{
				for (Eigen::Index j = 0; j < z.size(); ++j)
					z(j) += sd * rng.normal();
				const double s1 = frame.signed_distance(z);
				if (meeting.step(s, s1))
				{
					gap = 0.0;
					break;
				}
				s = s1;
				gap = 2.0 * s;
				if (ball && (z - x).squaredNorm() > r2)
					break;
			}
			for (std::size_t k = 0; k < thetas.size(); ++k)
				a.moments[k].add(gap > 0.0 ? std::pow(gap, thetas[k]) : 0.0);
		});
		std::vector<LemmaKeyRow> rows;
		for (std::size_t k = 0; k < thetas.size(); ++k)
		{
			LemmaKeyRow row;
			row.theta = thetas[k];
			row.moment = acc.moments[k].estimate();
			row.bound = std::pow(frame.separation, thetas[k]);
			row.holds = row.moment.value - 3.0 * row.moment.stderr() <= row.bound;
			row.bound_in_ci = row.moment.ci_lo <= row.bound && row.bound <= row.moment.ci_hi;
			rows.push_back(row);
		}
		return rows;
	}

	LemmaExcpReport lemma_excp_check(int dim, double chi, double eps, double n, double R, std::span<const double> separations,
		std::size_t n_paths, Seed seed)
	{
		require(chi > 0.0 && chi <= 1.0 && eps > 0.0 && eps <= 1.0, "lemma_excp_check: chi and eps must lie in (0, 1]");
		require(n >= 1.0 && R > 0.0, "lemma_excp_check: need n >= 1 and R > 0");
		require(separations.size() >= 2, "lemma_excp_check: need at least two separations");
		LemmaExcpReport report;
		report.exponent = 1.0 - chi - eps;
		std::vector<double> lx, ly, ls;
		std::uint64_t cell = 0;
		for (double h : separations)
		{
			require(h > 0.0 && h <= 1.0, "lemma_excp_check: separations must lie in (0, 1]");
			const Point x = Point::Zero(dim);
			const Point y = h * unit_vector(dim, 0);
			const MirrorFrame frame(x, y);
			const double radius = std::pow(2.0, -n) * R * std::pow(h, chi);
			const double dt = std::min(h * h, radius * radius) / 200.0;
			const int n_steps = static_cast<int>(std::ceil(20.0 * radius * radius / dt));
			const double sd = std::sqrt(dt);
			const Seed cell_seed = derive_seed(seed, streams::kOuter, cell++);
			auto stats = reduce_blocks<RunningStats>(n_paths, [&](std::size_t i, RunningStats &acc) {
				Rng rng(derive_seed(cell_seed, streams::kPath, i));
				MeetingDetector meeting(dt, derive_seed(cell_seed, streams::kBridge, i));
				ExitDetector exit(x, radius, dt, derive_seed(cell_seed, streams::kContinuation, i));
				Point z = x, next(dim);
				double s = 0.5 * h;
				for (int k = 0; k < n_steps; ++k)
				{
					for (int j = 0; j < dim; ++j)
						next(j) = z(j) + sd * rng.normal();
					const double s1 = frame.signed_distance(next);
					// Both events placed at this step's midpoint count as tau <= xi.
					if (exit.step(z, next, k))
					{
						acc.add(1.0);
						return;
					}
					if (meeting.step(s, s1))
					{
						acc.add(0.0);
						return;
					}
					s = s1;
					z = next;
				}
				acc.add(0.0);
			});
			LemmaExcpRow row;
			row.separation = h;
			row.radius = radius;
			row.prob = stats.estimate();
			report.rows.push_back(row);
			if (row.prob.value > 0.0 && row.prob.stderr() > 0.0)
			{
				lx.push_back(std::log(h));
				ly.push_back(std::log(row.prob.value));
				ls.push_back(row.prob.stderr() / row.prob.value);
			}
		}
		// C fitted on the coarsest separation, tested on the finer ones.
		const auto coarsest = std::max_element(report.rows.begin(), report.rows.end(),
			[](const LemmaExcpRow &a, const LemmaExcpRow &b) { return a.separation < b.separation; });
		report.fitted_c = coarsest->prob.value / std::pow(coarsest->separation, report.exponent);
		report.bound_holds = true;
		for (auto &row : report.rows)
		{
			row.bound = report.fitted_c * std::pow(row.separation, report.exponent);
			row.holds = row.prob.value - 3.0 * row.prob.stderr() <= row.bound;
			report.bound_holds = report.bound_holds && row.holds;
		}
		if (lx.size() >= 2)
			report.slope = fit_line_weighted(lx, ly, ls);
		return report;
	}

	CoupledOutcome run_coupled_path(const CoupledSetup &setup, std::size_t index)
	{
		const MeasureSpec &spec = setup.spec;
		const Observable &f = setup.f;
		const MirrorFrame frame(setup.x, setup.y);
		const double dt = setup.dt;
		const double alpha = setup.alpha;
		const int n = step_count(dt, setup.t_max);
		const double sd = std::sqrt(dt);
		const int dim = spec.dim;
		const bool resolvent = setup.resolvent;

		Rng rng(derive_seed(setup.seed, streams::kPath, index));
		MeetingDetector meeting(dt, derive_seed(setup.seed, streams::kBridge, index));

		Point z = setup.x, zt = setup.y, zn(dim), ztn(dim);
		double s = 0.5 * frame.separation;
		double rz = spec.density(z), rzt = spec.density(zt);
		PcafAccumulator clock(dt, rz), clock_t(dt, rzt);
		double gz = 0.0, gzt = 0.0, e = 1.0, et = 1.0;
		CompensatedSum diff;
		if (resolvent)
		{
			gz = f(z);
			gzt = f(zt);
		}

		CoupledOutcome out;
		for (int i = 0; i < n; ++i)
		{
			for (int j = 0; j < dim; ++j)
				zn(j) = z(j) + sd * rng.normal();
			const double sn = frame.signed_distance(zn);
			ztn = zn - 2.0 * sn * frame.u;
			const double rn = spec.density(zn), rtn = spec.density(ztn);
			if (meeting.step(s, sn))
			{
				// Meeting at the step midpoint: half of each trapezoid increment.
				out.met = true;
				out.xi = (i + 0.5) * dt;
				out.a_xi = clock.value() + 0.25 * (rz + rn) * dt;
				out.a_tilde_xi = clock_t.value() + 0.25 * (rzt + rtn) * dt;
				if (resolvent)
				{
					const double gn = f(zn), gtn = f(ztn);
					const double eh = std::exp(-alpha * out.a_xi), eth = std::exp(-alpha * out.a_tilde_xi);
					diff.add(0.5 * (gz + gn) * (e - eh) / alpha - 0.5 * (gzt + gtn) * (et - eth) / alpha);
					const double weight = eh - eth;
					if (weight != 0.0 && !f.is_zero())
					{
						// Common continuation from the meeting point, one exponential-clock draw.
						Rng cont(derive_seed(setup.seed, streams::kContinuation, index));
						const double T = cont.exponential(alpha);
						const Point meet_point = frame.project(0.5 * (z + zn));
						const ClockCrossing cross = stream_time_change(spec, meet_point, T, dt, setup.continuation_t_max, cont);
						if (cross.position)
							diff.add(weight * f(*cross.position) / alpha);
						else
						{
							out.continuation_truncated = true;
							out.tail_weight = std::abs(weight);
						}
					}
				}
				out.diff = diff.value();
				return out;
			}
			clock.step(rn);
			clock_t.step(rtn);
			if (resolvent)
			{
				const double gn = f(zn), gtn = f(ztn);
				const double en = std::exp(-alpha * clock.value()), etn = std::exp(-alpha * clock_t.value());
				diff.add(0.5 * (gz + gn) * (e - en) / alpha - 0.5 * (gzt + gtn) * (et - etn) / alpha);
				gz = gn;
				gzt = gtn;
				e = en;
				et = etn;
			}
			z = zn;
			zt = ztn;
			s = sn;
			rz = rn;
			rzt = rtn;
		}
		out.a_xi = clock.value();
		out.a_tilde_xi = clock_t.value();
		out.tail_weight = resolvent ? e + et : 0.0;
		out.diff = diff.value();
		return out;
	}

	IQuantities i_quantities(const Point &x, const Point &y, const MeasureSpec &spec, double dt, double t_max, std::size_t n_paths,
		Seed seed)
	{
		require(x.size() == spec.dim && y.size() == spec.dim, "i_quantities: dimension mismatch");
		require(n_paths >= 2, "i_quantities: need at least two paths");
		CoupledSetup setup;
		setup.x = x;
		setup.y = y;
		setup.spec = spec;
		setup.dt = dt;
		setup.t_max = t_max;
		setup.resolvent = false;
		setup.seed = seed;
		struct Acc
		{
			RunningStats i, it;
			std::size_t unmet = 0;
			void merge(const Acc &o)
			{
				i.merge(o.i);
				it.merge(o.it);
				unmet += o.unmet;
			}
		};
		auto acc = reduce_blocks<Acc>(n_paths, [&](std::size_t k, Acc &a) {
			const CoupledOutcome o = run_coupled_path(setup, k);
			a.i.add(std::min(o.a_xi, 1.0));
			a.it.add(std::min(o.a_tilde_xi, 1.0));
			if (!o.met)
				++a.unmet;
		});
		IQuantities out;
		out.unmet_fraction = static_cast<double>(acc.unmet) / static_cast<double>(n_paths);
		out.i = acc.i.estimate(out.unmet_fraction);
		out.i_tilde = acc.it.estimate(out.unmet_fraction);
		return out;
	}
} // namespace tcbm
