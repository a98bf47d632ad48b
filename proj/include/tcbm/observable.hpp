#pragma once

#include "tcbm/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tcbm
{
	/// Bounded test functions f used by the resolvent and Revuz estimators.
	struct Observable
	{
		enum class Kind
		{
			Zero,
			Constant,
			ClampFirst,     // clamp(z_1, lo, hi)
			RadialRamp,     // min(1, |z - center| / scale)
			IndicatorFirst, // 1 if lo < z_1 < hi
		};

		Kind kind = Kind::Zero;
		double lo = -1.0;
		double hi = 1.0;
		double scale = 1.0;
		double level = 0.0;
		Point center;

		template <typename D>
		double operator()(const Eigen::MatrixBase<D> &z) const
		{
			switch (kind)
			{
			case Kind::Zero:
				return 0.0;
			case Kind::Constant:
				return level;
			case Kind::ClampFirst:
				return std::clamp(z(0), lo, hi);
			case Kind::RadialRamp:
				return std::min(1.0, (z - center).norm() / scale);
			case Kind::IndicatorFirst:
				return (z(0) > lo && z(0) < hi) ? 1.0 : 0.0;
			}
			return 0.0;
		}

		double sup_norm() const
		{
			switch (kind)
			{
			case Kind::Zero:
				return 0.0;
			case Kind::Constant:
				return std::abs(level);
			case Kind::ClampFirst:
				return std::max(std::abs(lo), std::abs(hi));
			case Kind::RadialRamp:
			case Kind::IndicatorFirst:
				return 1.0;
			}
			return 0.0;
		}

		bool is_zero() const { return kind == Kind::Zero || (kind == Kind::Constant && level == 0.0); }

		std::string describe() const;
	};

	Observable zero_function();
	Observable constant_function(double level);
	Observable clamp_first(double lo = -1.0, double hi = 1.0);
	Observable radial_ramp(const Point &center, double scale);
	Observable indicator_first(double lo, double hi);
} // namespace tcbm
