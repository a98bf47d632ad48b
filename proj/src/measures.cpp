#include "tcbm/measures.hpp"

#include "quadrature.hpp"
#include "tcbm/rng.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <sstream>
#include <vector>

namespace tcbm
{
	namespace
	{
		constexpr double kPi = boost::math::constants::pi<double>();

		void check_dim(int dim)
		{
			require(dim >= 1 && dim <= kMaxDim, "dimension must be in [1, " + std::to_string(kMaxDim) + "]");
		}

		// mu(B(center, r)) for the radially symmetric families.
		double centered_mass(const MeasureSpec &s, double r)
		{
			const int d = s.dim;
			const double omega = unit_ball_volume(d);
			const double sigma = unit_sphere_area(d);
			switch (s.family)
			{
			case Family::Constant:
				return s.c * omega * std::pow(r, d);
			case Family::RadialPower:
			{
				const double inner = std::min(r, s.r_cap);
				double m = s.c * std::pow(s.r_cap, -s.beta) * omega * std::pow(inner, d);
				if (r > s.r_cap)
				{
					const double e = d - s.beta;
					m += s.c * sigma * (e == 0.0 ? std::log(r / s.r_cap) : (std::pow(r, e) - std::pow(s.r_cap, e)) / e);
				}
				return m;
			}
			case Family::Shell:
			{
				const double lo = s.rho - s.eps_s;
				const double hi = std::min(r, s.rho + s.eps_s);
				return hi > lo ? s.level * omega * (std::pow(hi, d) - std::pow(lo, d)) : 0.0;
			}
			case Family::PointMass1d:
				return s.level * 2.0 * std::min(r, s.eps_s);
			}
			return 0.0;
		}

		// Fraction of the unit sphere in R^d with cos(angle to an axis) > 1 - delta, delta in [0, 2].
		double cap_fraction(int d, double delta)
		{
			delta = std::clamp(delta, 0.0, 2.0);
			if (d == 2)
				return 2.0 * std::asin(std::sqrt(0.5 * delta)) / kPi;
			if (d == 3)
				return 0.5 * delta;
			const double half = 0.5 * boost::math::ibeta(0.5 * (d - 1), 0.5, delta * (2.0 - delta));
			return delta <= 1.0 ? half : 1.0 - half;
		}

		// Pieces may instead meet this fraction of the mass of the enclosing centered ball.
		constexpr double kEnclosingFraction = 1e-10;

		double integrate_checked(const std::function<double(double)> &g, double a, double b, double abs_floor)
		{
			if (!(b > a))
				return 0.0;
			const auto q = detail::integrate_mapped(g, a, b, 1e-10);
			const double rel = q.l1 > 0.0 ? q.error / q.l1 : 0.0;
			// Slivers with negligible mass only need an absolute floor.
			if (rel > kBallMassTolerance && q.error > abs_floor)
				throw QuadratureError("ball_mass radial quadrature did not converge", rel);
			return q.value;
		}

		// Radial breakpoints of the density profile.
		std::vector<double> profile_breaks(const MeasureSpec &s)
		{
			switch (s.family)
			{
			case Family::RadialPower:
				return {s.r_cap};
			case Family::Shell:
				return {s.rho - s.eps_s, s.rho + s.eps_s};
			default:
				return {};
			}
		}

		// Support of the radial profile, as [lo, hi].
		std::pair<double, double> profile_support(const MeasureSpec &s)
		{
			if (s.family == Family::Shell)
				return {s.rho - s.eps_s, s.rho + s.eps_s};
			if (s.family == Family::PointMass1d)
				return {0.0, s.eps_s};
			return {0.0, std::numeric_limits<double>::infinity()};
		}

		// Mass of B(x, r) when x sits at distance D > 0 from the symmetry center (d >= 2).
		double offcenter_mass(const MeasureSpec &s, double D, double r)
		{
			const int d = s.dim;
			const double sigma = unit_sphere_area(d);
			double mass = r > D ? centered_mass(s, r - D) : 0.0;

			auto [sup_lo, sup_hi] = profile_support(s);
			const double lo = std::max(std::abs(r - D), sup_lo);
			const double hi = std::min(r + D, sup_hi);
			if (!(hi > lo))
				return mass;

			const double floor = kEnclosingFraction * centered_mass(s, r + D);
			std::vector<double> cuts{lo, hi};
			for (double b : profile_breaks(s))
				if (b > lo && b < hi)
					cuts.push_back(b);
			std::sort(cuts.begin(), cuts.end());

			auto shell_part = [&](double rr) {
				if (rr <= 0.0)
					return 0.0;
				// 1 - cos of the cap angle, free of cancellation when r << D
				const double gap = rr - D;
				const double delta = (r - gap) * (r + gap) / (2.0 * rr * D);
				return s.radial_density(rr) * cap_fraction(d, delta) * sigma * std::pow(rr, d - 1);
			};
			for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
				mass += integrate_checked(shell_part, cuts[i], cuts[i + 1], floor);
			return mass;
		}

		// Antiderivative of the 1-d profile, odd in u: H(u) = sign(u) mu((-|u|, |u|)) / 2.
		double half_line_mass(const MeasureSpec &s, double u)
		{
			const double m = 0.5 * centered_mass(s, std::abs(u));
			return u < 0.0 ? -m : m;
		}

		// Sharp sup of mu(B(x,r)) / r^kappa over r <= R and |x - p| <= r for the shell,
		// found by grid search with local refinement. Depends on x only through |x - center|.
		double shell_ratio_sup(const MeasureSpec &s)
		{
			auto ratio = [&](double D, double r) {
				return (D > 1e-14 ? offcenter_mass(s, D, r) : centered_mass(s, r)) / std::pow(r, s.kappa);
			};
			double best = 0.0, best_D = s.rho, best_r = s.R;
			const int nr = 48, nd = 33;
			for (int i = 0; i < nr; ++i)
			{
				const double r = s.R * std::pow(1e-3, 1.0 - static_cast<double>(i) / (nr - 1));
				const double dlo = std::max(0.0, s.rho - r), dhi = s.rho + r;
				for (int j = 0; j < nd; ++j)
				{
					const double D = dlo + (dhi - dlo) * j / (nd - 1);
					const double v = ratio(D, r);
					if (v > best)
					{
						best = v;
						best_D = D;
						best_r = r;
					}
				}
			}
			// Refine around the best cell.
			double step_r = best_r * 0.15, step_D = 2.0 * best_r / (nd - 1);
			for (int round = 0; round < 12; ++round)
			{
				for (int i = -2; i <= 2; ++i)
					for (int j = -2; j <= 2; ++j)
					{
						const double r = std::clamp(best_r + i * step_r, 1e-3 * s.R, s.R);
						const double D = std::clamp(best_D + j * step_D, std::max(0.0, s.rho - r), s.rho + r);
						const double v = ratio(D, r);
						if (v > best)
						{
							best = v;
							best_D = D;
							best_r = r;
						}
					}
				step_r *= 0.5;
				step_D *= 0.5;
			}
			return best;
		}
	} // namespace

	double unit_ball_volume(int dim) { return std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0); }

	double unit_sphere_area(int dim) { return dim * unit_ball_volume(dim); }

	double MeasureSpec::radial_density(double radius) const
	{
		switch (family)
		{
		case Family::Constant:
			return c;
		case Family::RadialPower:
			return c * std::pow(std::max(radius, r_cap), -beta);
		case Family::Shell:
			return std::abs(radius - rho) < eps_s ? level : 0.0;
		case Family::PointMass1d:
			return std::abs(radius) < eps_s ? level : 0.0;
		}
		return 0.0;
	}

	double MeasureSpec::sup_density() const
	{
		switch (family)
		{
		case Family::Constant:
			return c;
		case Family::RadialPower:
			return c * std::pow(r_cap, -beta);
		case Family::Shell:
		case Family::PointMass1d:
			return level;
		}
		return 0.0;
	}

	std::string MeasureSpec::describe() const
	{
		std::ostringstream os;
		switch (family)
		{
		case Family::Constant:
			os << "constant(c=" << c << ")";
			break;
		case Family::RadialPower:
			os << "radial-power(c=" << c << ",beta=" << beta << ",r_cap=" << r_cap << ")";
			break;
		case Family::Shell:
			os << "shell(rho=" << rho << ",eps=" << eps_s << ")";
			break;
		case Family::PointMass1d:
			os << "point-mass(a=" << center(0) << ",eps=" << eps_s << ")";
			break;
		}
		os << " d=" << dim << " kappa=" << kappa << " K=" << K << " R=" << R;
		return os.str();
	}

	MeasureSpec constant_density(int dim, double c)
	{
		check_dim(dim);
		require(std::isfinite(c) && c >= 0.0, "constant density must be finite and nonnegative");
		MeasureSpec s;
		s.family = Family::Constant;
		s.dim = dim;
		s.p = Point::Zero(dim);
		s.center = Point::Zero(dim);
		s.c = c;
		s.kappa = dim;
		// The null measure keeps a nominal positive K.
		s.K = std::max(kSafetyMargin * c * unit_ball_volume(dim), 1e-300);
		s.R = 1.0;
		return s;
	}

	MeasureSpec radial_power(int dim, double c, double beta, const Point &p, double r_cap)
	{
		check_dim(dim);
		require(p.size() == dim, "radial_power: center dimension mismatch");
		require(c > 0.0 && std::isfinite(c), "radial_power: c must be positive");
		require(beta >= 0.0 && beta < 2.0, "radial_power: beta must lie in [0, 2)");
		require(r_cap > 0.0, "radial_power: cap radius must be positive");
		MeasureSpec s;
		s.family = Family::RadialPower;
		s.dim = dim;
		s.p = p;
		s.center = p;
		s.c = c;
		s.beta = beta;
		s.r_cap = r_cap;
		s.kappa = dim - beta;
		s.R = 1.0;
		if (beta < dim)
		{
			// Balls centered at p carry the most mass of a radially decreasing density.
			s.K = kSafetyMargin * c * unit_sphere_area(dim) / (dim - beta);
		}
		else
		{
			// kappa <= 0: the ratio mu(B(p,r)) / r^kappa is increasing in r, so its sup sits at R.
			s.K = kSafetyMargin * centered_mass(s, s.R) / std::pow(s.R, s.kappa);
		}
		return s;
	}

	MeasureSpec shell(int dim, double rho, double eps_s, const Point &center)
	{
		check_dim(dim);
		require(dim >= 2, "shell: dimension must be at least 2");
		require(center.size() == dim, "shell: center dimension mismatch");
		require(eps_s > 0.0 && rho > eps_s, "shell: need 0 < eps_s < rho");
		MeasureSpec s;
		s.family = Family::Shell;
		s.dim = dim;
		s.center = center;
		s.p = center + rho * unit_vector(dim, 0);
		s.rho = rho;
		s.eps_s = eps_s;
		const double mass = unit_sphere_area(dim) * std::pow(rho, dim - 1);
		s.level = mass / (unit_ball_volume(dim) * (std::pow(rho + eps_s, dim) - std::pow(rho - eps_s, dim)));
		s.kappa = dim - 1;
		s.R = 1.0;
		s.K = kSafetyMargin * shell_ratio_sup(s);
		return s;
	}

	MeasureSpec point_mass_1d(double a, double eps_s)
	{
		require(std::isfinite(a), "point_mass_1d: location must be finite");
		require(eps_s > 0.0, "point_mass_1d: smoothing width must be positive");
		MeasureSpec s;
		s.family = Family::PointMass1d;
		s.dim = 1;
		s.center = make_point({a});
		s.p = s.center;
		s.eps_s = eps_s;
		s.level = 1.0 / (2.0 * eps_s);
		s.kappa = 0.0;
		s.K = kSafetyMargin * 1.0;
		s.R = 1.0;
		return s;
	}

	MeasureSpec with_regularity(MeasureSpec spec, double kappa, double K, double R)
	{
		require(kappa > spec.dim - 2, "kappa must exceed d - 2");
		require(K > 0.0, "K must be positive");
		require(R > 0.0 && R <= 1.0, "R must lie in (0, 1]");
		spec.kappa = kappa;
		spec.K = K;
		spec.R = R;
		return spec;
	}

	double density_at(const MeasureSpec &spec, const Point &x)
	{
		require(x.size() == spec.dim, "density_at: dimension mismatch");
		require(x.allFinite(), "density_at: non-finite coordinates");
		return spec.density(x);
	}

	double ball_mass(const MeasureSpec &spec, const Point &x, double r)
	{
		require(r > 0.0, "ball_mass: radius must be positive");
		require(x.size() == spec.dim, "ball_mass: dimension mismatch");
		require(x.allFinite(), "ball_mass: non-finite center");
		if (spec.family == Family::Constant)
			return centered_mass(spec, r);
		const double offset = (x - spec.center).norm();
		if (spec.dim == 1)
		{
			const double u = x(0) - spec.center(0);
			return half_line_mass(spec, u + r) - half_line_mass(spec, u - r);
		}
		if (offset == 0.0)
			return centered_mass(spec, r);
		return offcenter_mass(spec, offset, r);
	}

	BallBoundReport verify_ball_bound(const MeasureSpec &spec, int n_probe, Seed seed)
	{
		require(n_probe >= 1, "verify_ball_bound: need at least one probe");
		Rng rng(derive_seed(seed, streams::kProbe));
		BallBoundReport report;
		report.n_probe = n_probe;
		report.worst_x = spec.p;
		auto probe = [&](const Point &x, double r) {
			const double ratio = ball_mass(spec, x, r) / std::pow(r, spec.kappa);
			if (ratio > report.max_ratio)
			{
				report.max_ratio = ratio;
				report.worst_x = x;
				report.worst_r = r;
			}
		};
		for (int i = 0; i < n_probe; ++i)
		{
			// Half the probes log-uniform in [1e-4 R, R] to reach small scales.
			const double u = rng.uniform();
			const double r = (i % 2 == 0) ? spec.R * std::pow(1e-4, u) : spec.R * (1.0 - u);
			if (r <= 0.0)
				continue;
			Point dir(spec.dim);
			rng.fill_normal(dir, 1.0);
			const double norm = dir.norm();
			const double radial = r * std::pow(rng.uniform(), 1.0 / spec.dim);
			const Point x = norm > 0.0 ? Point(spec.p + (radial / norm) * dir) : spec.p;
			probe(x, r);
		}
		report.pass = report.max_ratio <= spec.K;
		return report;
	}
} // namespace tcbm
