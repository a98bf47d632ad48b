#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace tcbm
{
	/// Monte Carlo value with its sampling uncertainty.
	struct McEstimate
	{
		double value = 0.0;
		std::size_t n_samples = 0;
		double stderr_ = 0.0;
		double ci_lo = 0.0;
		double ci_hi = 0.0;
		double truncation_fraction = 0.0;

		double stderr() const { return stderr_; }
	};

	/// Neumaier-compensated sum.
	class CompensatedSum
	{
	public:
		void add(double x)
		{
			const double t = sum_ + x;
			comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
			sum_ = t;
		}
		double value() const { return sum_ + comp_; }

	private:
		double sum_ = 0.0;
		double comp_ = 0.0;
	};

	inline constexpr double kZ95 = 1.959963984540054;

	/// Welford accumulator; merges are Chan's pairwise update.
	class RunningStats
	{
	public:
		void add(double x)
		{
			++n_;
			const double delta = x - mean_;
			mean_ += delta / static_cast<double>(n_);
			m2_ += delta * (x - mean_);
		}

		void merge(const RunningStats &other)
		{
			if (other.n_ == 0)
				return;
			if (n_ == 0)
			{
				*this = other;
				return;
			}
			const double n = static_cast<double>(n_ + other.n_);
			const double delta = other.mean_ - mean_;
			mean_ += delta * static_cast<double>(other.n_) / n;
			m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / n;
			n_ += other.n_;
		}

		std::size_t count() const { return n_; }
		double mean() const { return mean_; }
		double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
		double stderr() const { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

		McEstimate estimate(double truncation_fraction = 0.0) const
		{
			const double se = stderr();
			return McEstimate{mean_, n_, se, mean_ - kZ95 * se, mean_ + kZ95 * se, truncation_fraction};
		}

	private:
		std::size_t n_ = 0;
		double mean_ = 0.0;
		double m2_ = 0.0;
	};

	inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

	/// Survival function of the Kolmogorov distribution, P(K > x).
	double kolmogorov_survival(double x);

	/// sup |F_n - F| of a sample against a continuous CDF; sorts `sample`.
	double ks_statistic(std::vector<double> &sample, const std::function<double(double)> &cdf);

	/// Two-sample Kolmogorov–Smirnov statistic; sorts both inputs.
	double ks_two_sample(std::vector<double> &a, std::vector<double> &b);

	struct LineFit
	{
		double slope = 0.0;
		double intercept = 0.0;
		double slope_stderr = 0.0;
		std::size_t n_points = 0;
	};

	/// Ordinary least squares; slope_stderr from the residual variance (needs >= 3 points).
	LineFit fit_line(std::span<const double> x, std::span<const double> y);

	/// Weighted least squares with known per-point standard deviations.
	LineFit fit_line_weighted(std::span<const double> x, std::span<const double> y, std::span<const double> sigma);

	// Work is cut into fixed-size blocks; block results merge in block order, so the
	// reduction is bit-identical for any worker count.
	inline constexpr std::size_t kPathBlock = 1024;

	int default_workers();

	template <typename Acc, typename Body>
	Acc reduce_blocks(std::size_t n_items, Body &&body, int workers = default_workers())
	{
		const std::size_t n_blocks = (n_items + kPathBlock - 1) / kPathBlock;
		std::vector<Acc> partial(n_blocks);
		auto run_block = [&](std::size_t b) {
			const std::size_t lo = b * kPathBlock;
			const std::size_t hi = std::min(n_items, lo + kPathBlock);
			for (std::size_t i = lo; i < hi; ++i)
				body(i, partial[b]);
		};
		workers = std::max(1, std::min<int>(workers, static_cast<int>(n_blocks)));
		if (workers == 1)
		{
			for (std::size_t b = 0; b < n_blocks; ++b)
				run_block(b);
		}
		else
		{
			std::atomic<std::size_t> next{0};
			std::vector<std::jthread> pool;
			for (int w = 0; w < workers; ++w)
				pool.emplace_back([&] {
					for (std::size_t b = next++; b < n_blocks; b = next++)
						run_block(b);
				});
		}
		Acc total{};
		for (const Acc &p : partial)
			total.merge(p);
		return total;
	}
} // namespace tcbm
