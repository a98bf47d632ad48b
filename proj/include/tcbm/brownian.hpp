#pragma once

#include "tcbm/rng.hpp"
#include "tcbm/stats.hpp"
#include "tcbm/types.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace tcbm
{
	/// Discretized Brownian trajectory on the uniform grid t_i = i dt.
	struct PathSample
	{
		int dim = 1;
		double dt = 0.0;
		int n_steps = 0;
		PointMatrix positions;  // dim x (n_steps + 1)
		PointMatrix increments; // dim x n_steps
		Seed seed;

		double time(int i) const { return i * dt; }
		auto position(int i) const { return positions.col(i); }
	};

	/// Number of grid steps covering [0, t_max].
	inline int step_count(double dt, double t_max)
	{
		require(dt > 0.0 && std::isfinite(dt), "dt must be positive and finite");
		require(t_max >= dt, "t_max must be at least dt");
		const double n = std::ceil(t_max / dt - 1e-9);
		require(n < 2e9, "too many steps");
		return static_cast<int>(n);
	}

	PathSample sample_path(int dim, const Point &x0, double dt, double t_max, Seed seed);

	struct ExitRecord
	{
		bool exited = false;
		int exit_step = 0;
		double exit_time = 0.0;
		double crossing_prob_used = 0.0;
	};

	// Crossing probability of a Brownian bridge over one step for a flat boundary at
	// distances s0, s1 > 0 on the same side.
	inline double bridge_crossing_probability(double s0, double s1, double dt)
	{
		const double e = 2.0 * s0 * s1 / dt;
		return e > 40.0 ? 0.0 : std::exp(-e);
	}

	/// Stepwise exit detector for the ball B(center, r). A step that ends outside
	/// declares exit; a step with both ends inside declares exit with the tangent-plane
	/// bridge probability. Exits inside a step are placed at its midpoint.
	class ExitDetector
	{
	public:
		ExitDetector(const Point &center, double r, double dt, Seed bridge_seed)
			: center_(center), r_(r), dt_(dt), rng_(bridge_seed)
		{
		}

		template <typename D>
		bool outside(const Eigen::MatrixBase<D> &z) const
		{
			return (z - center_).squaredNorm() > r_ * r_;
		}

		/// Step from z0 (inside) to z1 covering grid interval [i, i+1].
		template <typename D0, typename D1>
		bool step(const Eigen::MatrixBase<D0> &z0, const Eigen::MatrixBase<D1> &z1, int i)
		{
			if (outside(z1))
				return declare(i, 1.0);
			const double s0 = r_ - (z0 - center_).norm();
			const double s1 = r_ - (z1 - center_).norm();
			const double p = bridge_crossing_probability(s0, s1, dt_);
			if (p > 0.0 && rng_.uniform() < p)
				return declare(i, p);
			return false;
		}

		const ExitRecord &record() const { return record_; }

		bool start_outside(const Point &x0)
		{
			if (!outside(x0))
				return false;
			record_ = ExitRecord{true, 0, 0.0, 1.0};
			return true;
		}

	private:
		bool declare(int i, double p)
		{
			record_ = ExitRecord{true, i + 1, (i + 0.5) * dt_, p};
			return true;
		}

		Point center_;
		double r_;
		double dt_;
		Rng rng_;
		ExitRecord record_;
	};

	ExitRecord exit_time_ball(const PathSample &path, const Point &center, double r, Seed rng);

	/// P(tau_{B(x,r)} <= t) from the center of the ball, streamed without storing paths.
	McEstimate exit_probability(int dim, double r, double t, std::size_t n_paths, Seed seed, int steps_per_t = 200);

	/// Mean exit time of B(x0, r) started at its center x0; unexited paths count t_max.
	McEstimate mean_exit_time(int dim, const Point &x0, double r, double dt, double t_max, std::size_t n_paths, Seed seed);

	struct ExitTailCell
	{
		double r = 0.0;
		double t = 0.0;
		McEstimate prob;
		double min_c = 0.0; // smallest C with C exp(-r^2/(C t)) >= upper CI of prob
	};

	struct ExitTailReport
	{
		int dim = 1;
		std::vector<ExitTailCell> cells;
		double fitted_c = 0.0;
		LineFit log_fit; // log P vs r^2/t over cells with positive estimates
		bool bound_holds = false;
	};

	/// Smallest C > 0 with C exp(-x / C) >= p for x = r^2/t.
	double min_exit_constant(double x, double p);

	ExitTailReport exit_tail_check(int dim, std::span<const double> radii, std::span<const double> times, std::size_t n_paths, Seed seed);
} // namespace tcbm
