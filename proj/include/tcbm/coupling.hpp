#pragma once

#include "tcbm/brownian.hpp"
#include "tcbm/measures.hpp"
#include "tcbm/observable.hpp"
#include "tcbm/pcaf.hpp"
#include "tcbm/stats.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tcbm
{
	/// Mirror image of z in the bisecting hyperplane H_{x,y} of x and y.
	Point reflect(const Point &x, const Point &y, const Point &z);

	/// Precomputed hyperplane H_{x,y}: midpoint m and unit normal u = (x - y)/|x - y|.
	struct MirrorFrame
	{
		Point mid;
		Point u;
		double separation = 0.0;

		MirrorFrame(const Point &x, const Point &y);

		template <typename D>
		double signed_distance(const Eigen::MatrixBase<D> &z) const
		{
			return (z - mid).dot(u);
		}

		template <typename D>
		Point mirror(const Eigen::MatrixBase<D> &z) const
		{
			return z - 2.0 * signed_distance(z) * u;
		}

		template <typename D>
		Point project(const Eigen::MatrixBase<D> &z) const
		{
			return z - signed_distance(z) * u;
		}
	};

	/// First hitting of 0 by the signed distance, a standard 1-d Brownian motion:
	/// a sign change, or a bridge crossing with probability exp(-2 s0 s1 / dt).
	class MeetingDetector
	{
	public:
		MeetingDetector(double dt, Seed bridge_seed) : dt_(dt), rng_(bridge_seed) {}

		bool step(double s0, double s1)
		{
			if (s1 <= 0.0)
				return true;
			const double p = bridge_crossing_probability(s0, s1, dt_);
			return p > 0.0 && rng_.uniform() < p;
		}

	private:
		double dt_;
		Rng rng_;
	};

	/// Mirror-coupled pair on a common grid. After the meeting step both paths coincide.
	struct CoupledTrajectory
	{
		PathSample base;
		PointMatrix mirrored;
		std::optional<double> xi;  // step midpoint of the meeting step
		int meet_step = -1;        // first grid index at which the paths coincide
		std::vector<double> signed_dist;
		PcafTrace a_trace;
		PcafTrace a_tilde_trace;
	};

	CoupledTrajectory sample_coupled(const Point &x, const Point &y, const MeasureSpec &spec, double dt, double t_max, Seed seed);

	/// Survival of the first hitting time of 0 by a 1-d Brownian motion started at a:
	/// the integral of the N(0, t) density over (-a, a).
	double meeting_tail_exact(double a, double t);

	struct LemmaCpCell
	{
		double a = 0.0; // |x - y|
		double t = 0.0;
		McEstimate survival;   // empirical P(xi > t)
		double literal = 0.0;  // meeting_tail_exact(a, t)
		double coupling = 0.0; // meeting_tail_exact(a / 2, t)
		double stated_bound = 0.0;   // a / sqrt(2 pi t)
		double doubled_bound = 0.0; // 2a / sqrt(2 pi t)
		double z_literal = 0.0;
		double z_coupling = 0.0;
	};

	/// Empirical meeting-time survival on an (a, t) grid in dimension dim.
	std::vector<LemmaCpCell> lemma_cp_check(int dim, std::span<const double> separations, std::span<const double> times,
		std::size_t n_paths, Seed seed, int steps = 200);

	/// Grid-measurable stopping rule for the coupled pair.
	struct StopRule
	{
		enum class Kind
		{
			BallExit, // first grid time Z leaves B(x, radius), capped at `time`
			FixedTime,
			Min,
		};
		Kind kind = Kind::FixedTime;
		double radius = 0.0;
		double time = 1.0;

		std::string describe() const;
	};

	struct LemmaKeyRow
	{
		double theta = 0.0;
		McEstimate moment; // E|Z - Z~|^theta at xi ^ tau
		double bound = 0.0; // |x - y|^theta
		bool holds = false; // moment - 3 stderr <= bound
		bool bound_in_ci = false;
	};

	std::vector<LemmaKeyRow> lemma_key_check(const Point &x, const Point &y, std::span<const double> thetas, const StopRule &stop,
		std::size_t n_paths, Seed seed, double dt);

	struct LemmaExcpRow
	{
		double separation = 0.0;
		double radius = 0.0;
		McEstimate prob; // P(tau_{B(x, radius)} <= xi)
		double bound = 0.0; // fitted C * separation^{1 - chi - eps}
		bool holds = false;
	};

	struct LemmaExcpReport
	{
		std::vector<LemmaExcpRow> rows;
		double exponent = 0.0; // 1 - chi - eps
		double fitted_c = 0.0;
		LineFit slope;
		bool bound_holds = false;
	};

	/// Exit-before-meeting probabilities at separations h with ball radius 2^{-n} R h^chi.
	LemmaExcpReport lemma_excp_check(int dim, double chi, double eps, double n, double R, std::span<const double> separations,
		std::size_t n_paths, Seed seed);

	/// Settings shared by all paths of a coupled run.
	struct CoupledSetup
	{
		Point x;
		Point y;
		MeasureSpec spec;
		Observable f;
		double alpha = 1.0;
		double dt = 1e-3;
		double t_max = 1.0;
		double continuation_t_max = 1.0;
		bool resolvent = true; // accumulate the discounted integrals and continuation
		Seed seed;
	};

	/// Per-path outcome of the fused coupled kernel.
	struct CoupledOutcome
	{
		bool met = false;
		double xi = 0.0;
		double a_xi = 0.0;       // A at xi, or at the horizon when unmet
		double a_tilde_xi = 0.0;
		double diff = 0.0;       // pathwise V_alpha f(x) - V_alpha f(y) estimate
		double tail_weight = 0.0; // discount mass the estimate misses: e^{-alpha A} + e^{-alpha A~} when unmet, |e^{-alpha A} - e^{-alpha A~}| at xi when the continuation is truncated
		bool continuation_truncated = false;
	};

	CoupledOutcome run_coupled_path(const CoupledSetup &setup, std::size_t index);

	struct IQuantities
	{
		McEstimate i;       // E[A_xi ^ 1]
		McEstimate i_tilde; // E[A~_xi ^ 1]
		double unmet_fraction = 0.0; // P(xi > t_max); bounds the downward bias
	};

	IQuantities i_quantities(const Point &x, const Point &y, const MeasureSpec &spec, double dt, double t_max, std::size_t n_paths,
		Seed seed);
} // namespace tcbm
