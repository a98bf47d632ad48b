#include "tcbm/observable.hpp"

#include <sstream>

namespace tcbm
{
	std::string Observable::describe() const
	{
		std::ostringstream os;
		switch (kind)
		{
		case Kind::Zero:
			os << "zero";
			break;
		case Kind::Constant:
			os << "constant(" << level << ")";
			break;
		case Kind::ClampFirst:
			os << "clamp(z1," << lo << "," << hi << ")";
			break;
		case Kind::RadialRamp:
			os << "ramp(scale=" << scale << ")";
			break;
		case Kind::IndicatorFirst:
			os << "indicator(" << lo << "<z1<" << hi << ")";
			break;
		}
		return os.str();
	}

	Observable zero_function() { return Observable{}; }

	Observable constant_function(double level)
	{
		Observable f;
		f.kind = Observable::Kind::Constant;
		f.level = level;
		return f;
	}

	Observable clamp_first(double lo, double hi)
	{
		require(lo < hi, "clamp_first: need lo < hi");
		Observable f;
		f.kind = Observable::Kind::ClampFirst;
		f.lo = lo;
		f.hi = hi;
		return f;
	}

	Observable radial_ramp(const Point &center, double scale)
	{
		require(scale > 0.0, "radial_ramp: scale must be positive");
		Observable f;
		f.kind = Observable::Kind::RadialRamp;
		f.center = center;
		f.scale = scale;
		return f;
	}

	Observable indicator_first(double lo, double hi)
	{
		require(lo < hi, "indicator_first: need lo < hi");
		Observable f;
		f.kind = Observable::Kind::IndicatorFirst;
		f.lo = lo;
		f.hi = hi;
		return f;
	}
} // namespace tcbm
