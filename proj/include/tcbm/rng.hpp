#pragma once

#include "tcbm/types.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <cmath>
#include <cstdint>

namespace tcbm
{
	// SplitMix64 finalizer; used only to derive independent stream seeds.
	constexpr std::uint64_t mix64(std::uint64_t z)
	{
		z += 0x9e3779b97f4a7c15ULL;
		z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
		z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
		return z ^ (z >> 31);
	}

	/// Seed of the `index`-th member of stream `stream` under `master`.
	/// A pure function of its arguments, so per-path seeds do not depend on scheduling.
	constexpr Seed derive_seed(Seed master, std::uint64_t stream, std::uint64_t index = 0)
	{
		return Seed{mix64(mix64(master.value ^ mix64(stream + 0x632be59bd9b4e019ULL)) + index)};
	}

	// Named stream tags keep the derived seeds of different roles apart.
	namespace streams
	{
		inline constexpr std::uint64_t kPath = 1;
		inline constexpr std::uint64_t kBridge = 2;
		inline constexpr std::uint64_t kClock = 3;
		inline constexpr std::uint64_t kContinuation = 4;
		inline constexpr std::uint64_t kProbe = 5;
		inline constexpr std::uint64_t kOuter = 6;
	} // namespace streams

	class Rng
	{
	public:
		explicit Rng(Seed seed) : engine_(seed.value) {}

		double normal() { return normal_(engine_); }
		double uniform() { return uniform_(engine_); }
		double exponential(double rate) { return exponential_(engine_) / rate; }

		template <typename Derived>
		void fill_normal(Eigen::MatrixBase<Derived> &out, double scale)
		{
			for (Eigen::Index i = 0; i < out.size(); ++i)
				out(i) = scale * normal();
		}

	private:
		boost::random::mt19937_64 engine_; // same sequence as std::mt19937_64
		boost::random::normal_distribution<double> normal_;
		boost::random::uniform_01<double> uniform_;
		boost::random::exponential_distribution<double> exponential_;
	};
} // namespace tcbm
