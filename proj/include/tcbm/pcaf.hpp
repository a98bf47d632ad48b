#pragma once

#include "tcbm/brownian.hpp"
#include "tcbm/measures.hpp"
#include "tcbm/observable.hpp"
#include "tcbm/stats.hpp"

#include <optional>
#include <vector>

namespace tcbm
{
	/// Compensated running sum of trapezoid increments of a density along a path.
	class PcafAccumulator
	{
	public:
		PcafAccumulator(double dt, double f0) : dt_(dt), f_prev_(f0) {}

		/// Adds the step ending at density value f1; returns the increment.
		double step(double f1)
		{
			const double inc = 0.5 * (f_prev_ + f1) * dt_;
			f_prev_ = f1;
			sum_.add(inc);
			return inc;
		}

		void add(double inc) { sum_.add(inc); }
		double value() const { return sum_.value(); }
		double last_density() const { return f_prev_; }

	private:
		double dt_;
		double f_prev_;
		CompensatedSum sum_;
	};

	/// Values of A on the path grid; linear in between.
	struct PcafTrace
	{
		double dt = 0.0;
		std::vector<double> a_values;

		double horizon() const { return a_values.empty() ? 0.0 : a_values.back(); }
		double t_max() const { return dt * static_cast<double>(a_values.size() - 1); }
	};

	class PcafOverflow : public std::runtime_error
	{
	public:
		using std::runtime_error::runtime_error;
	};

	PcafTrace accumulate(const PathSample &path, const MeasureSpec &spec);

	/// Accumulates over grid columns of `positions`, continuing from `a0`.
	PcafTrace accumulate_positions(const PointMatrix &positions, double dt, const MeasureSpec &spec, double a0 = 0.0);

	/// tau_s = inf{t : A_t > s}; empty when s is at or beyond the accumulated horizon.
	std::optional<double> inverse_clock(const PcafTrace &trace, double s);

	/// B at time tau_s, linearly interpolated on the grid.
	std::optional<Point> time_changed_position(const PathSample &path, const PcafTrace &trace, double s);

	struct ClockCrossing
	{
		std::optional<Point> position; // B at tau_s; empty when A stays below s up to t_max
		double a_final = 0.0;          // A at the stopping time or at the horizon
	};

	/// Streams a path from z0 until A reaches s, without storing it; the crossing
	/// position is interpolated linearly within the step. Constant densities are sampled exactly.
	ClockCrossing stream_time_change(const MeasureSpec &spec, const Point &z0, double s, double dt, double t_max, Rng &rng);

	/// Axis-aligned box.
	struct Box
	{
		Point lo;
		Point hi;
		double volume() const { return (hi - lo).prod(); }
	};

	struct RevuzReport
	{
		McEstimate lhs;      // int g(x) E_x[int e^{-at} f(B) dA] dm(x)
		McEstimate rhs;      // int f(x) E_x[int e^{-at} g(B) dt] dmu(x)
		double z_score = 0.0; // |lhs - rhs| / combined stderr
		bool agree = false;
	};

	/// Both sides of the Revuz duality with killing at an independent Exp(alpha) time.
	/// Outer points are uniform in `box`, each followed by n_inner killed paths per side.
	RevuzReport revuz_check(const MeasureSpec &spec, const Observable &f, const Observable &g, double alpha, const Box &box,
		std::size_t n_outer, std::size_t n_inner, Seed seed, double dt);
} // namespace tcbm
