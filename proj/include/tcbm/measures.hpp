#pragma once

#include "tcbm/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tcbm
{
	enum class Family
	{
		Constant,
		RadialPower,
		Shell,
		PointMass1d,
	};

	/// Revuz measure mu = f dm of one of the shipped families, together with the
	/// regularity data (p, kappa, K, R) of the ball-mass condition
	/// mu(B(x,r)) <= K r^kappa for r <= R and |x - p| <= r.
	///
	/// Singular members (sphere surface measure, 1-d point mass) are represented by
	/// their eps_s-smoothed densities. Instances are immutable once built by the
	/// factories below.
	struct MeasureSpec
	{
		Family family = Family::Constant;
		int dim = 1;
		Point p;
		double kappa = 1.0;
		double K = 1.0;
		double R = 1.0;

		double c = 1.0;     // constant level, or radial-power prefactor
		double beta = 0.0;  // radial-power exponent
		double r_cap = 0.0; // radial-power density is flat inside this radius
		Point center;       // symmetry center of the density
		double rho = 0.0;   // shell radius
		double eps_s = 0.0; // smoothing half-width (shell, point mass)
		double level = 0.0; // density on the smoothed support

		/// Unchecked density evaluation for inner loops.
		template <typename Derived>
		double density(const Eigen::MatrixBase<Derived> &x) const
		{
			switch (family)
			{
			case Family::Constant:
				return c;
			case Family::RadialPower:
			{
				const double r = std::max((x - center).norm(), r_cap);
				if (beta == 1.5)
					return c / (r * std::sqrt(r));
				return c * std::pow(r, -beta);
			}
			case Family::Shell:
				return std::abs((x - center).norm() - rho) < eps_s ? level : 0.0;
			case Family::PointMass1d:
				return std::abs(x(0) - center(0)) < eps_s ? level : 0.0;
			}
			return 0.0;
		}

		/// Radial profile of the density about `center`.
		double radial_density(double radius) const;

		/// Supremum of the density over R^d.
		double sup_density() const;

		std::string describe() const;
	};

	/// Quadrature failed to meet its tolerance.
	class QuadratureError : public std::runtime_error
	{
	public:
		QuadratureError(const std::string &what, double achieved)
			: std::runtime_error(what + " (achieved relative error " + std::to_string(achieved) + ")"),
			  achieved_tolerance(achieved)
		{
		}
		double achieved_tolerance;
	};

	inline constexpr double kBallMassTolerance = 1e-6;
	inline constexpr double kSafetyMargin = 1.01;

	/// c times Lebesgue measure; c = 0 gives the null measure.
	MeasureSpec constant_density(int dim, double c = 1.0);
	inline MeasureSpec lebesgue(int dim) { return constant_density(dim, 1.0); }

	/// c * max(|x - p|, r_cap)^(-beta) with 0 <= beta < 2.
	MeasureSpec radial_power(int dim, double c, double beta, const Point &p, double r_cap);

	/// Unit-density surface measure of the sphere |x - center| = rho, smoothed over
	/// the annulus ||x - center| - rho| < eps_s. The regularity center sits on the sphere.
	MeasureSpec shell(int dim, double rho, double eps_s, const Point &center);

	/// Unit point mass at `a` on the line, smoothed over (a - eps_s, a + eps_s).
	MeasureSpec point_mass_1d(double a, double eps_s);

	/// Copy of `spec` with different declared regularity data.
	MeasureSpec with_regularity(MeasureSpec spec, double kappa, double K, double R);

	/// Checked density: rejects non-finite coordinates and dimension mismatches.
	double density_at(const MeasureSpec &spec, const Point &x);

	/// mu(B(x, r)); closed form where available, otherwise adaptive radial quadrature
	/// to relative tolerance kBallMassTolerance.
	double ball_mass(const MeasureSpec &spec, const Point &x, double r);

	struct BallBoundReport
	{
		double max_ratio = 0.0;
		Point worst_x;
		double worst_r = 0.0;
		int n_probe = 0;
		bool pass = false;
	};

	/// Probes mu(B(x,r)) / r^kappa over r <= R, |x - p| <= r and compares with K.
	BallBoundReport verify_ball_bound(const MeasureSpec &spec, int n_probe, Seed seed);

	/// Volume of the unit ball in R^d.
	double unit_ball_volume(int dim);
	/// Surface area of the unit sphere in R^d.
	double unit_sphere_area(int dim);
} // namespace tcbm
