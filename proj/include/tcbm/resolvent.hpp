#pragma once

#include "tcbm/coupling.hpp"
#include "tcbm/measures.hpp"
#include "tcbm/observable.hpp"
#include "tcbm/stats.hpp"

#include <span>
#include <vector>

namespace tcbm
{
	struct ResolventEstimate
	{
		McEstimate value;
		double bias_bound = 0.0;      // bound on the horizon truncation bias
		double sample_variance = 0.0; // per-path variance of the estimator
	};

	/// Horizon and step settings shared by the resolvent estimators.
	struct ResolventGrid
	{
		double dt = 1e-3;
		double t_max = 10.0;
		double continuation_t_max = 10.0;
	};

	/// Exponential-clock estimator of V_alpha f(x): f(B at A = T)/alpha with T ~ Exp(alpha),
	/// zero when A stays below T up to t_max.
	ResolventEstimate v_alpha_point(const MeasureSpec &spec, const Observable &f, double alpha, const Point &x, const ResolventGrid &grid,
		std::size_t n_paths, Seed seed);

	/// Difference of two independent point estimators at x and y.
	ResolventEstimate v_alpha_independent_diff(const MeasureSpec &spec, const Observable &f, double alpha, const Point &x, const Point &y,
		const ResolventGrid &grid, std::size_t n_paths, Seed seed);

	/// Mirror-coupled pathwise estimator of V_alpha f(x) - V_alpha f(y).
	ResolventEstimate v_alpha_coupled_diff(const MeasureSpec &spec, const Observable &f, double alpha, const Point &x, const Point &y,
		const ResolventGrid &grid, std::size_t n_paths, Seed seed);

	struct Rsf4Row
	{
		Point x;
		Point y;
		McEstimate diff;    // coupled V_alpha f(x) - V_alpha f(y)
		McEstimate i_sum;   // I + I~ on the same paths
		double rhs = 0.0;   // 2(1 + 1/alpha)(I + I~)
		double combined_stderr = 0.0;
		double margin = 0.0; // rhs + 3 combined stderr - |diff|
		double bias_bound = 0.0;
		bool holds = false;
	};

	std::vector<Rsf4Row> rsf4_check(const MeasureSpec &spec, const Observable &f, double alpha, std::span<const std::pair<Point, Point>> pairs,
		const ResolventGrid &grid, std::size_t n_paths, Seed seed);

	struct HolderScale
	{
		double h = 0.0;
		ResolventEstimate diff;
		bool excluded = false; // CI contains zero
	};

	struct HolderReport
	{
		std::vector<HolderScale> scales;
		LineFit fit;     // weighted by propagated Monte Carlo errors
		LineFit ols_fit; // residual-based standard error
		double predicted = 0.0;
		int depth = 0;
		double ball_radius = 0.0; // 2^{-depth} R
		std::size_t n_used = 0;
	};

	/// Pairs x = p, y = p + h_k e_1 with h_k = h0 2^{-k}; log-log slope of |diff| against h.
	HolderReport holder_exponent(const MeasureSpec &spec, const Observable &f, double alpha, double eps, double h0, int n_scales,
		const ResolventGrid &grid, std::size_t n_paths, Seed seed);
} // namespace tcbm
