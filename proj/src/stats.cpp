#include "tcbm/stats.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tcbm
{
	double kolmogorov_survival(double x)
	{
		if (x <= 0.0)
			return 1.0;
		double sum = 0.0;
		for (int k = 1; k <= 100; ++k)
		{
			const double term = std::exp(-2.0 * k * k * x * x);
			sum += (k % 2 == 1 ? term : -term);
			if (term < 1e-16)
				break;
		}
		return std::clamp(2.0 * sum, 0.0, 1.0);
	}

	double ks_statistic(std::vector<double> &sample, const std::function<double(double)> &cdf)
	{
		std::sort(sample.begin(), sample.end());
		const double n = static_cast<double>(sample.size());
		double d = 0.0;
		for (std::size_t i = 0; i < sample.size(); ++i)
		{
			const double f = cdf(sample[i]);
			d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
		}
		return d;
	}

	double ks_two_sample(std::vector<double> &a, std::vector<double> &b)
	{
		std::sort(a.begin(), a.end());
		std::sort(b.begin(), b.end());
		const double na = static_cast<double>(a.size());
		const double nb = static_cast<double>(b.size());
		std::size_t i = 0, j = 0;
		double d = 0.0;
		while (i < a.size() && j < b.size())
		{
			const double v = std::min(a[i], b[j]);
			while (i < a.size() && a[i] <= v)
				++i;
			while (j < b.size() && b[j] <= v)
				++j;
			d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
		}
		return d;
	}

	LineFit fit_line(std::span<const double> x, std::span<const double> y)
	{
		if (x.size() != y.size() || x.size() < 2)
			throw std::invalid_argument("fit_line: need at least two matching points");
		const double n = static_cast<double>(x.size());
		double mx = 0.0, my = 0.0;
		for (std::size_t i = 0; i < x.size(); ++i)
		{
			mx += x[i];
			my += y[i];
		}
		mx /= n;
		my /= n;
		double sxx = 0.0, sxy = 0.0;
		for (std::size_t i = 0; i < x.size(); ++i)
		{
			sxx += (x[i] - mx) * (x[i] - mx);
			sxy += (x[i] - mx) * (y[i] - my);
		}
		LineFit fit;
		fit.n_points = x.size();
		fit.slope = sxy / sxx;
		fit.intercept = my - fit.slope * mx;
		if (x.size() > 2)
		{
			double rss = 0.0;
			for (std::size_t i = 0; i < x.size(); ++i)
			{
				const double r = y[i] - fit.intercept - fit.slope * x[i];
				rss += r * r;
			}
			fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
		}
		return fit;
	}

	LineFit fit_line_weighted(std::span<const double> x, std::span<const double> y, std::span<const double> sigma)
	{
		if (x.size() != y.size() || x.size() != sigma.size() || x.size() < 2)
			throw std::invalid_argument("fit_line_weighted: need at least two matching points");
		double sw = 0.0, swx = 0.0, swy = 0.0;
		for (std::size_t i = 0; i < x.size(); ++i)
		{
			const double w = 1.0 / (sigma[i] * sigma[i]);
			sw += w;
			swx += w * x[i];
			swy += w * y[i];
		}
		const double mx = swx / sw, my = swy / sw;
		double sxx = 0.0, sxy = 0.0;
		for (std::size_t i = 0; i < x.size(); ++i)
		{
			const double w = 1.0 / (sigma[i] * sigma[i]);
			sxx += w * (x[i] - mx) * (x[i] - mx);
			sxy += w * (x[i] - mx) * (y[i] - my);
		}
		LineFit fit;
		fit.n_points = x.size();
		fit.slope = sxy / sxx;
		fit.intercept = my - fit.slope * mx;
		fit.slope_stderr = std::sqrt(1.0 / sxx);
		return fit;
	}

	int default_workers()
	{
		if (const char *env = std::getenv("TCBM_WORKERS"))
		{
			const int w = std::atoi(env);
			if (w > 0)
				return w;
		}
		return std::max(1u, std::thread::hardware_concurrency());
	}
} // namespace tcbm
