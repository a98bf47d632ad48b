#include "tcbm/resolvent.hpp"

#include "tcbm/indices.hpp"
#include "tcbm/pcaf.hpp"

#include <cmath>

namespace tcbm
{
	namespace
	{
		struct TruncatedStats
		{
			RunningStats value;
			std::size_t truncated = 0;
			void merge(const TruncatedStats &o)
			{
				value.merge(o.value);
				truncated += o.truncated;
			}
		};

		void check_common(const MeasureSpec &spec, double alpha, const Point &x, const ResolventGrid &grid, std::size_t n_paths)
		{
			require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
			require(x.size() == spec.dim, "point dimension mismatch");
			require(grid.dt > 0.0 && grid.t_max >= grid.dt, "bad time grid");
			require(n_paths >= 2, "need at least two paths");
		}

		// One clock draw: f(B at A = T)/alpha, or nothing when A stays below T up to t_max.
		std::optional<double> clock_draw(const MeasureSpec &spec, const Observable &f, double alpha, const Point &x, const ResolventGrid &grid,
			Seed seed)
		{
			Rng rng(seed);
			const double T = rng.exponential(alpha);
			const ClockCrossing cross = stream_time_change(spec, x, T, grid.dt, grid.t_max, rng);
			if (!cross.position)
				return std::nullopt;
			return f(*cross.position) / alpha;
		}

		ResolventEstimate finish(const TruncatedStats &acc, std::size_t n_paths, double f_sup, double alpha, double weight)
		{
			ResolventEstimate out;
			const double frac = static_cast<double>(acc.truncated) / static_cast<double>(n_paths);
			out.value = acc.value.estimate(frac);
			out.sample_variance = acc.value.variance();
			out.bias_bound = weight * f_sup * frac / alpha;
			return out;
		}
	} // namespace

	ResolventEstimate v_alpha_point(const MeasureSpec &spec, const Observable &f, double alpha, const Point &x, const ResolventGrid &grid,
		std::size_t n_paths, Seed seed)
	{
		check_common(spec, alpha, x, grid, n_paths);
		auto acc = reduce_blocks<TruncatedStats>(n_paths, [&](std::size_t i, TruncatedStats &a) {
			if (f.is_zero())
			{
				a.value.add(0.0);
				return;
			}
			const auto y = clock_draw(spec, f, alpha, x, grid, derive_seed(seed, streams::kPath, i));
			a.value.add(y.value_or(0.0));
			if (!y)
				++a.truncated;
		});
		return finish(acc, n_paths, f.sup_norm(), alpha, 1.0);
	}

	ResolventEstimate v_alpha_independent_diff(const MeasureSpec &spec, const Observable &f, double alpha, const Point &x, const Point &y,
		const ResolventGrid &grid, std::size_t n_paths, Seed seed)
	{
		check_common(spec, alpha, x, grid, n_paths);
		require(y.size() == spec.dim, "point dimension mismatch");
		auto acc = reduce_blocks<TruncatedStats>(n_paths, [&](std::size_t i, TruncatedStats &a) {
			const auto vx = clock_draw(spec, f, alpha, x, grid, derive_seed(seed, streams::kPath, 2 * i));
			const auto vy = clock_draw(spec, f, alpha, y, grid, derive_seed(seed, streams::kPath, 2 * i + 1));
			a.value.add(vx.value_or(0.0) - vy.value_or(0.0));
			if (!vx || !vy)
				++a.truncated;
		});
		return finish(acc, n_paths, f.sup_norm(), alpha, 2.0);
	}

	namespace
	{
		CoupledSetup make_setup(const MeasureSpec &spec, const Observable &f, double alpha, const Point &x, const Point &y,
			const ResolventGrid &grid, Seed seed)
		{
			CoupledSetup setup;
			setup.x = x;
			setup.y = y;
			setup.spec = spec;
			setup.f = f;
			setup.alpha = alpha;
			setup.dt = grid.dt;
			setup.t_max = grid.t_max;
			setup.continuation_t_max = grid.continuation_t_max;
			setup.resolvent = true;
			setup.seed = seed;
			return setup;
		}

		struct CoupledStats
		{
			RunningStats diff;
			RunningStats i_sum;
			RunningStats tail;
			std::size_t unmet = 0;
			std::size_t cont_truncated = 0;
			void merge(const CoupledStats &o)
			{
				diff.merge(o.diff);
				i_sum.merge(o.i_sum);
				tail.merge(o.tail);
				unmet += o.unmet;
				cont_truncated += o.cont_truncated;
			}
		};

		CoupledStats run_coupled(const CoupledSetup &setup, std::size_t n_paths)
		{
			return reduce_blocks<CoupledStats>(n_paths, [&](std::size_t i, CoupledStats &a) {
				const CoupledOutcome o = run_coupled_path(setup, i);
				a.diff.add(o.diff);
				a.i_sum.add(std::min(o.a_xi, 1.0) + std::min(o.a_tilde_xi, 1.0));
				a.tail.add(o.tail_weight);
				if (!o.met)
					++a.unmet;
				if (o.continuation_truncated)
					++a.cont_truncated;
			});
		}

		// Each path misses at most ||f|| / alpha times its tail weight.
		double coupled_bias_bound(const CoupledStats &s, double f_sup, double alpha) { return f_sup / alpha * s.tail.mean(); }
	} // namespace

	ResolventEstimate v_alpha_coupled_diff(const MeasureSpec &spec, const Observable &f, double alpha, const Point &x, const Point &y,
		const ResolventGrid &grid, std::size_t n_paths, Seed seed)
	{
		check_common(spec, alpha, x, grid, n_paths);
		require(y.size() == spec.dim, "point dimension mismatch");
		const CoupledStats s = run_coupled(make_setup(spec, f, alpha, x, y, grid, seed), n_paths);
		ResolventEstimate out;
		out.value = s.diff.estimate(static_cast<double>(s.unmet + s.cont_truncated) / static_cast<double>(n_paths));
		out.sample_variance = s.diff.variance();
		out.bias_bound = coupled_bias_bound(s, f.sup_norm(), alpha);
		return out;
	}

	std::vector<Rsf4Row> rsf4_check(const MeasureSpec &spec, const Observable &f, double alpha, std::span<const std::pair<Point, Point>> pairs,
		const ResolventGrid &grid, std::size_t n_paths, Seed seed)
	{
		require(f.sup_norm() <= 1.0, "rsf4_check: needs sup |f| <= 1");
		std::vector<Rsf4Row> rows;
		std::uint64_t k = 0;
		for (const auto &[x, y] : pairs)
		{
			check_common(spec, alpha, x, grid, n_paths);
			const CoupledStats s = run_coupled(make_setup(spec, f, alpha, x, y, grid, derive_seed(seed, streams::kOuter, k++)), n_paths);
			Rsf4Row row;
			row.x = x;
			row.y = y;
			const double frac = static_cast<double>(s.unmet + s.cont_truncated) / static_cast<double>(n_paths);
			row.diff = s.diff.estimate(frac);
			row.i_sum = s.i_sum.estimate(frac);
			const double c = 2.0 * (1.0 + 1.0 / alpha);
			row.rhs = c * row.i_sum.value;
			row.combined_stderr = std::hypot(row.diff.stderr(), c * row.i_sum.stderr());
			row.margin = row.rhs + 3.0 * row.combined_stderr - std::abs(row.diff.value);
			row.bias_bound = coupled_bias_bound(s, f.sup_norm(), alpha);
			row.holds = row.margin >= 0.0;
			rows.push_back(row);
		}
		return rows;
	}

	HolderReport holder_exponent(const MeasureSpec &spec, const Observable &f, double alpha, double eps, double h0, int n_scales,
		const ResolventGrid &grid, std::size_t n_paths, Seed seed)
	{
		require(n_scales >= 2, "holder_exponent: need at least two scales");
		require(h0 > 0.0, "holder_exponent: h0 must be positive");
		HolderReport report;
		report.predicted = static_cast<double>(limit_exponent<long double>(spec.dim, spec.kappa, eps).exponent);
		report.depth = min_depth<long double>(spec.dim, spec.kappa, eps);
		report.ball_radius = std::ldexp(spec.R, -report.depth);
		require(h0 < report.ball_radius, "holder_exponent: largest pair leaves B(p, 2^-depth R)");
		const Point e1 = unit_vector(spec.dim, 0);
		std::vector<double> lx, ly, ls;
		for (int k = 0; k < n_scales; ++k)
		{
			HolderScale scale;
			scale.h = std::ldexp(h0, -k);
			scale.diff = v_alpha_coupled_diff(spec, f, alpha, spec.p, spec.p + scale.h * e1, grid, n_paths,
				derive_seed(seed, streams::kOuter, static_cast<std::uint64_t>(k)));
			const McEstimate &d = scale.diff.value;
			scale.excluded = d.ci_lo <= 0.0 && d.ci_hi >= 0.0;
			if (!scale.excluded)
			{
				lx.push_back(std::log(scale.h));
				ly.push_back(std::log(std::abs(d.value)));
				ls.push_back(d.stderr() / std::abs(d.value));
			}
			report.scales.push_back(scale);
		}
		report.n_used = lx.size();
		if (lx.size() >= 2)
		{
			report.fit = fit_line_weighted(lx, ly, ls);
			report.ols_fit = fit_line(lx, ly);
		}
		return report;
	}
} // namespace tcbm
