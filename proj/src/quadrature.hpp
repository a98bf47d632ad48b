#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace tcbm::detail
{
	struct QuadratureResult
	{
		double value = 0.0;
		double error = 0.0;
		double l1 = 0.0;
	};

	/// Tanh-sinh on [a, b] after an affine map onto [0, 1]; the raw error estimate
	/// degrades like 1/(b - a) on short intervals.
	template <typename F>
	QuadratureResult integrate_mapped(F &&f, double a, double b, double tol)
	{
		static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
		const double w = b - a;
		auto g = [&](double u) { return f(a + w * u) * w; };
		QuadratureResult out;
		out.value = integrator.integrate(g, 0.0, 1.0, tol, &out.error, &out.l1);
		return out;
	}
} // namespace tcbm::detail
