#pragma once

#include "tcbm/measures.hpp"
#include "tcbm/stats.hpp"

#include <span>
#include <vector>

namespace tcbm
{
	/// 1-d Green function of (a, b): 2(x^y - a)(b - x v y)/(b - a).
	double green_interval(double a, double b, double x, double y);

	/// Green-function constant Gamma(d/2 - 1)/(2 pi^{d/2}) for d >= 3.
	double green_constant(int d);

	/// Kernel at the center of a ball as a function of |x - y|, without boundary term.
	double green_whole_space(int d, double distance);
	double green_whole_space(int d, const Point &x_center, const Point &y);

	/// Exact Green function of B(x, r) at its center x, at distance rho.
	double green_ball_exact_center(int d, double r, double rho);

	/// zeta_d(s, t): s^{2-d+t} for d != 2, -s^t log s for d = 2.
	double zeta(int d, double s, double t);

	/// Constant C of the mean-clock bound int g dmu <= C zeta_d(r, kappa), written out
	/// from the dyadic-shell series.
	double lemma_constant(int d, double kappa, double K);

	struct GreenMass
	{
		double value = 0.0;
		double tail_bound = 0.0; // analytic bound on the neglected shells
		int shells = 0;
	};

	/// Dyadic-shell upper sum of int_{B(x,r)} g_{B(x,r)}(x,y) dmu(y) with the whole-space kernel's
	/// supremum on each shell; d = 1 uses the exact interval kernel.
	GreenMass green_mass(const MeasureSpec &spec, const Point &x, double r, int max_shells = -1);

	/// int_{B(x,r)} g_{B(x,r)}(x,y) dmu(y) with the exact kernel, equal to E_x[A at exit].
	double green_integral_exact(const MeasureSpec &spec, const Point &x, double r);

	struct LemmaPcafReport
	{
		McEstimate estimate;     // E_x[A at exit of B(x, r)]
		double bound = 0.0;      // C zeta_d(r, kappa)
		double green_exact = 0.0; // exact-kernel Green integral
		double green_z = 0.0;    // |estimate - green_exact| / stderr
		bool bound_holds = false;
		bool green_agrees = false;
	};

	/// Monte Carlo E_x[A_{tau_{B(x,r)}}] with dt = r^2 / steps_per_r2.
	LemmaPcafReport lemma_pcaf_check(const MeasureSpec &spec, const Point &x, double r, std::size_t n_paths, Seed seed,
		int steps_per_r2 = 1000);

	struct LogPowerReport
	{
		std::size_t n_log_checked = 0;
		std::size_t n_log_violations = 0;
		double log_worst_gap = 0.0; // max of lhs - rhs over the grid
		double m2_min_constant = 0.0; // max_r exp(-c r^-delta)/r on the grid
		double m2_argmax = 0.0;
		double m2_analytic = 0.0;  // e^{-1/delta}/(c delta)^{1/delta}
		double m2_claimed = 0.0;
		bool m2_claim_holds = false;
		bool pass = false;
	};

	/// Grid check of -s^a log s <= s^{a-b}/b and of exp(-c r^-delta) <= c_delta r.
	LogPowerReport log_power_inequality_check(std::span<const double> s_grid, std::span<const double> ab_grid, double delta, double c,
		double claimed_c_delta, std::span<const double> r_grid);
} // namespace tcbm
