#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tcbm
{
	// Points live on the stack; dimension is a runtime value up to kMaxDim.
	inline constexpr int kMaxDim = 8;

	template <typename Scalar>
	using PointT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
	using Point = PointT<double>;

	// Paths are stored column-wise: one column per grid time.
	using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;

	struct Seed
	{
		std::uint64_t value = 0;
		friend bool operator==(Seed, Seed) = default;
	};

	/// Thrown when an argument violates an operation's precondition.
	class DomainError : public std::invalid_argument
	{
	public:
		using std::invalid_argument::invalid_argument;
	};

	inline void require(bool condition, const std::string &message)
	{
		if (!condition)
			throw DomainError(message);
	}

	inline Point make_point(std::initializer_list<double> coords)
	{
		Point p(static_cast<Eigen::Index>(coords.size()));
		Eigen::Index i = 0;
		for (double c : coords)
			p(i++) = c;
		return p;
	}

	inline Point unit_vector(int dim, int axis)
	{
		Point e = Point::Zero(dim);
		e(axis) = 1.0;
		return e;
	}
} // namespace tcbm
