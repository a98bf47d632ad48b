#include "tcbm/green.hpp"

#include "quadrature.hpp"
#include "tcbm/brownian.hpp"
#include "tcbm/pcaf.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <limits>

namespace tcbm
{
	namespace
	{
		constexpr double kPi = boost::math::constants::pi<double>();
		constexpr double kLn2 = boost::math::constants::ln_two<double>();
	}

	double green_interval(double a, double b, double x, double y)
	{
		require(a < b, "green_interval: need a < b");
		require(x >= a && x <= b && y >= a && y <= b, "green_interval: points must lie in [a, b]");
		return 2.0 * (std::min(x, y) - a) * (b - std::max(x, y)) / (b - a);
	}

	double green_constant(int d)
	{
		require(d >= 3, "green_constant: d must be at least 3");
		return std::tgamma(0.5 * d - 1.0) / (2.0 * std::pow(kPi, 0.5 * d));
	}

	double green_whole_space(int d, double distance)
	{
		require(d >= 2, "green_whole_space: d must be at least 2");
		require(distance > 0.0, "green_whole_space: singular at the pole");
		if (d == 2)
		{
			require(distance <= 1.0, "green_whole_space: d = 2 needs |x - y| <= 1");
			return -std::log(distance) / kPi;
		}
		return green_constant(d) * std::pow(distance, 2.0 - d);
	}

	double green_whole_space(int d, const Point &x_center, const Point &y)
	{
		require(x_center.size() == d && y.size() == d, "green_whole_space: dimension mismatch");
		return green_whole_space(d, (x_center - y).norm());
	}

	double green_ball_exact_center(int d, double r, double rho)
	{
		require(d >= 2, "green_ball_exact_center: d must be at least 2");
		require(rho > 0.0 && rho <= r, "green_ball_exact_center: need 0 < rho <= r");
		if (d == 2)
			return std::log(r / rho) / kPi;
		return green_constant(d) * (std::pow(rho, 2.0 - d) - std::pow(r, 2.0 - d));
	}

	double zeta(int d, double s, double t)
	{
		require(d >= 1, "zeta: d must be positive");
		require(s > 0.0 && s <= 1.0, "zeta: s must lie in (0, 1]");
		if (d == 2)
			return -std::pow(s, t) * std::log(s);
		return std::pow(s, 2.0 - d + t);
	}

	double lemma_constant(int d, double kappa, double K)
	{
		require(kappa > d - 2, "lemma_constant: need kappa > d - 2");
		if (d == 1)
			return 4.0 * K;
		if (d == 2)
		{
			// sum_k 2^{-kappa k} (k ln 2 - ln r) with ln 2 <= -ln r for r <= 1/2.
			const double x = std::pow(2.0, -kappa);
			const double s0 = x / (1.0 - x);
			const double s1 = x / ((1.0 - x) * (1.0 - x));
			return K / kPi * std::pow(2.0, kappa) * (s0 + s1);
		}
		const double gamma = 2.0 - d + kappa;
		const double q = std::pow(2.0, -gamma);
		return K * green_constant(d) * std::pow(2.0, kappa) * q / (1.0 - q);
	}

	namespace
	{
		// Radii at which rho -> mu(B(x, rho)) may fail to be smooth.
		std::vector<double> mass_breakpoints(const MeasureSpec &spec, const Point &x, double r)
		{
			const double D = (x - spec.center).norm();
			std::vector<double> radii;
			auto add_sphere = [&](double s) {
				for (double v : {std::abs(D - s), D + s})
					radii.push_back(v);
			};
			radii.push_back(D);
			switch (spec.family)
			{
			case Family::RadialPower:
				add_sphere(spec.r_cap);
				break;
			case Family::Shell:
				add_sphere(spec.rho - spec.eps_s);
				add_sphere(spec.rho + spec.eps_s);
				break;
			case Family::PointMass1d:
				add_sphere(spec.eps_s);
				break;
			case Family::Constant:
				break;
			}
			std::vector<double> cuts{0.0, r};
			for (double v : radii)
				if (v > 1e-12 * r && v < r * (1.0 - 1e-12))
					cuts.push_back(v);
			std::sort(cuts.begin(), cuts.end());
			cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
			return cuts;
		}
	} // namespace

	double green_integral_exact(const MeasureSpec &spec, const Point &x, double r)
	{
		require(r > 0.0, "green_integral_exact: radius must be positive");
		require(x.size() == spec.dim, "green_integral_exact: dimension mismatch");
		const int d = spec.dim;
		const double sigma = unit_sphere_area(d);
		if (spec.family == Family::Constant)
			return spec.c * r * r / d;
		// Integration by parts: int_0^r mu(B(x, rho)) (-g'(rho)) drho with -g' = 2 rho^{1-d} / sigma_d.
		auto integrand = [&](double rho) {
			const double m = rho > 0.0 ? ball_mass(spec, x, rho) : 0.0;
			return m > 0.0 ? m * 2.0 * std::pow(rho, 1.0 - d) / sigma : 0.0;
		};
		const auto cuts = mass_breakpoints(spec, x, r);
		double total = 0.0;
		for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
		{
			const auto q = detail::integrate_mapped(integrand, cuts[i], cuts[i + 1], 1e-9);
			total += q.value;
			if (q.l1 > 0.0 && q.error > 1e-6 * q.l1)
				throw QuadratureError("green_integral_exact did not converge", q.error / q.l1);
		}
		return total;
	}

	GreenMass green_mass(const MeasureSpec &spec, const Point &x, double r, int max_shells)
	{
		require(r > 0.0, "green_mass: radius must be positive");
		require(x.size() == spec.dim, "green_mass: dimension mismatch");
		GreenMass out;
		const int d = spec.dim;
		if (d == 1)
		{
			out.value = green_integral_exact(spec, x, r);
			return out;
		}
		require(d != 2 || r <= 1.0, "green_mass: d = 2 needs r <= 1");
		const int m = max_shells > 0 ? max_shells : static_cast<int>(std::ceil(std::log2(1e6)));
		double outer = ball_mass(spec, x, r);
		for (int k = 1; k <= m; ++k)
		{
			const double rk = r * std::ldexp(1.0, -k);
			const double inner = ball_mass(spec, x, rk);
			out.value += std::max(0.0, outer - inner) * green_whole_space(d, rk);
			outer = inner;
		}
		out.shells = m;
		// Neglected core B(x, r 2^-m) bounded with the density supremum.
		const double fs = spec.sup_density();
		const double q = std::ldexp(1.0, -2 * m);
		if (d == 2)
			out.tail_bound = 4.0 * fs * r * r * (kLn2 * q * (m / 3.0 + 4.0 / 9.0) - std::log(r) * q / 3.0);
		else
			out.tail_bound = fs * unit_ball_volume(d) * green_constant(d) * std::pow(2.0, d) * r * r * q / 3.0;
		out.value += out.tail_bound;
		return out;
	}

	LemmaPcafReport lemma_pcaf_check(const MeasureSpec &spec, const Point &x, double r, std::size_t n_paths, Seed seed, int steps_per_r2)
	{
		require(r > 0.0, "lemma_pcaf_check: radius must be positive");
		require(x.size() == spec.dim, "lemma_pcaf_check: dimension mismatch");
		require(n_paths >= 2, "lemma_pcaf_check: need at least two paths");
		const double dt = r * r / steps_per_r2;
		const int n_max = 50 * steps_per_r2;
		struct Acc
		{
			RunningStats a;
			std::size_t truncated = 0;
			void merge(const Acc &o)
			{
				a.merge(o.a);
				truncated += o.truncated;
			}
		};
		const double sd = std::sqrt(dt);
		auto acc = reduce_blocks<Acc>(n_paths, [&](std::size_t i, Acc &out) {
			ExitDetector exit(x, r, dt, derive_seed(seed, streams::kBridge, i));
			Rng rng(derive_seed(seed, streams::kPath, i));
			PcafAccumulator clock(dt, spec.density(x));
			Point z = x, next(x.size());
			for (int step = 0; step < n_max; ++step)
			{
				for (Eigen::Index k = 0; k < z.size(); ++k)
					next(k) = z(k) + sd * rng.normal();
				const double fn = spec.density(next);
				if (exit.step(z, next, step))
				{
					// Exit at the step midpoint: half the trapezoid increment.
					out.a.add(clock.value() + 0.25 * (clock.last_density() + fn) * dt);
					return;
				}
				clock.step(fn);
				z = next;
			}
			out.a.add(clock.value());
			++out.truncated;
		});
		LemmaPcafReport report;
		report.estimate = acc.a.estimate(static_cast<double>(acc.truncated) / static_cast<double>(n_paths));
		report.bound = lemma_constant(spec.dim, spec.kappa, spec.K) * zeta(spec.dim, std::min(r, 1.0), spec.kappa);
		report.bound_holds = report.estimate.value - 3.0 * report.estimate.stderr() <= report.bound;
		report.green_exact = green_integral_exact(spec, x, r);
		const double se = report.estimate.stderr();
		const double gap = std::abs(report.estimate.value - report.green_exact);
		report.green_z = se > 0.0 ? gap / se : (gap < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity());
		report.green_agrees = report.green_z <= 3.0;
		return report;
	}

	LogPowerReport log_power_inequality_check(std::span<const double> s_grid, std::span<const double> ab_grid, double delta, double c,
		double claimed_c_delta, std::span<const double> r_grid)
	{
		require(ab_grid.size() % 2 == 0, "log_power_inequality_check: (a, b) grid must hold pairs");
		require(delta > 0.0 && delta <= 1.0 && c > 0.0, "log_power_inequality_check: need delta in (0, 1] and c > 0");
		LogPowerReport report;
		report.log_worst_gap = -std::numeric_limits<double>::infinity();
		for (std::size_t k = 0; k < ab_grid.size(); k += 2)
		{
			const double a = ab_grid[k], b = ab_grid[k + 1];
			require(b > 0.0 && b <= a, "log_power_inequality_check: need 0 < b <= a");
			for (double s : s_grid)
			{
				require(s > 0.0 && s <= 1.0, "log_power_inequality_check: s must lie in (0, 1]");
				const double lhs = -std::pow(s, a) * std::log(s);
				const double rhs = std::pow(s, a - b) / b;
				++report.n_log_checked;
				report.log_worst_gap = std::max(report.log_worst_gap, lhs - rhs);
				if (lhs > rhs * (1.0 + 1e-14))
					++report.n_log_violations;
			}
		}
		report.m2_claimed = claimed_c_delta;
		report.m2_claim_holds = true;
		for (double r : r_grid)
		{
			require(r > 0.0, "log_power_inequality_check: r must be positive");
			const double ratio = std::exp(-c * std::pow(r, -delta)) / r;
			if (ratio > report.m2_min_constant)
			{
				report.m2_min_constant = ratio;
				report.m2_argmax = r;
			}
			if (ratio > claimed_c_delta)
				report.m2_claim_holds = false;
		}
		const double r_star = std::pow(c * delta, 1.0 / delta);
		report.m2_analytic = std::exp(-1.0 / delta) / r_star;
		report.pass = report.n_log_violations == 0 && report.m2_min_constant <= report.m2_analytic * (1.0 + 1e-12);
		return report;
	}
} // namespace tcbm
