#include "tcbm/measures.hpp"
#include "tcbm/rng.hpp"
#include "tcbm/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace tcbm;

namespace
{
	constexpr double pi = std::numbers::pi;

	// mu(B(0, r)) for c |x|^-beta capped at r_cap, d = 3, by hand.
	double capped_power_mass_d3(double beta, double cap, double r)
	{
		const double inner = 4.0 * pi / 3.0 * std::pow(cap, 3.0 - beta);
		return inner + 4.0 * pi * (std::pow(r, 3.0 - beta) - std::pow(cap, 3.0 - beta)) / (3.0 - beta);
	}

	// Uniform points in B(x, r) by rejection; returns the mean of density * volume.
	McEstimate mc_ball_mass(const MeasureSpec &spec, const Point &x, double r, int n, Seed seed)
	{
		Rng rng(seed);
		RunningStats s;
		const double vol = unit_ball_volume(spec.dim) * std::pow(r, spec.dim);
		Point z(spec.dim);
		for (int i = 0; i < n;)
		{
			for (int k = 0; k < spec.dim; ++k)
				z(k) = 2.0 * rng.uniform() - 1.0;
			if (z.squaredNorm() > 1.0)
				continue;
			s.add(spec.density(x + r * z) * vol);
			++i;
		}
		return s.estimate();
	}
} // namespace

TEST_CASE("density evaluation")
{
	CHECK(density_at(constant_density(2, 2.0), make_point({0.3, -7.0})) == 2.0);
	const MeasureSpec rp = radial_power(3, 1.0, 1.5, Point::Zero(3), 0.01);
	CHECK(density_at(rp, make_point({4.0, 0.0, 0.0})) == doctest::Approx(0.125).epsilon(1e-15));
	CHECK(density_at(rp, Point::Zero(3)) == doctest::Approx(1000.0));
	const MeasureSpec sh = shell(2, 1.0, 0.1, Point::Zero(2));
	CHECK(density_at(sh, make_point({0.5, 0.0})) == 0.0);
	CHECK(density_at(sh, make_point({0.0, 1.05})) > 0.0);
}

TEST_CASE("density rejects bad points")
{
	const MeasureSpec leb = lebesgue(2);
	CHECK_THROWS_AS(density_at(leb, make_point({std::numeric_limits<double>::quiet_NaN(), 0.0})), DomainError);
	CHECK_THROWS_AS(density_at(leb, make_point({0.0})), DomainError);
}

TEST_CASE("factories reject invalid parameters")
{
	CHECK_THROWS_AS(radial_power(3, 1.0, 2.5, Point::Zero(3), 0.01), DomainError);
	CHECK_THROWS_AS(radial_power(3, 1.0, 1.5, Point::Zero(3), 0.0), DomainError);
	CHECK_THROWS_AS(shell(2, 0.1, 0.2, Point::Zero(2)), DomainError);
	CHECK_THROWS_AS(constant_density(2, -1.0), DomainError);
	CHECK_THROWS_AS(with_regularity(lebesgue(3), 0.5, 1.0, 1.0), DomainError);
}

TEST_CASE("Lebesgue ball masses are ball volumes")
{
	CHECK(ball_mass(lebesgue(1), make_point({3.0}), 0.3) == doctest::Approx(0.6).epsilon(1e-14));
	CHECK(ball_mass(lebesgue(2), make_point({0.2, 0.1}), 0.5) == doctest::Approx(pi * 0.25).epsilon(1e-14));
	CHECK(ball_mass(lebesgue(3), Point::Zero(3), 0.7) == doctest::Approx(4.0 / 3.0 * pi * 0.343).epsilon(1e-14));
	CHECK(ball_mass(constant_density(3, 0.0), Point::Zero(3), 0.7) == 0.0);
}

TEST_CASE("centered radial-power mass matches the radial integral")
{
	const double cap = 1e-2;
	const MeasureSpec rp = radial_power(3, 1.0, 1.5, Point::Zero(3), cap);
	for (double r : {0.005, 0.05, 0.3, 1.0})
	{
		const double expect = r <= cap ? 4.0 * pi / 3.0 * std::pow(cap, -1.5) * r * r * r : capped_power_mass_d3(1.5, cap, r);
		CHECK(ball_mass(rp, Point::Zero(3), r) == doctest::Approx(expect).epsilon(1e-8));
	}
	// Without the cap the mass is 4 pi r^1.5 / 1.5.
	CHECK(capped_power_mass_d3(1.5, 1e-12, 1.0) == doctest::Approx(4.0 * pi / 1.5).epsilon(1e-8));
}

TEST_CASE("off-center masses agree with Monte Carlo over the ball")
{
	const MeasureSpec rp = radial_power(3, 1.0, 1.5, Point::Zero(3), 1e-2);
	const MeasureSpec sh = shell(3, 0.5, 0.05, Point::Zero(3));
	const struct
	{
		const MeasureSpec *spec;
		Point x;
		double r;
	} cases[] = {
		{&rp, make_point({0.3, 0.0, 0.0}), 0.5},
		{&rp, make_point({0.2, 0.2, 0.1}), 0.1},
		{&sh, make_point({0.5, 0.0, 0.0}), 0.2},
		{&sh, make_point({0.1, 0.1, 0.0}), 0.6},
	};
	std::uint64_t k = 0;
	for (const auto &c : cases)
	{
		const double exact = ball_mass(*c.spec, c.x, c.r);
		const McEstimate mc = mc_ball_mass(*c.spec, c.x, c.r, 400000, derive_seed(Seed{3}, streams::kProbe, k++));
		CHECK(std::abs(exact - mc.value) <= 4.0 * mc.stderr());
	}
}

TEST_CASE("shell mass in the plane agrees with grid quadrature")
{
	const MeasureSpec sh = shell(2, 1.0, 0.1, Point::Zero(2));
	const Point x = make_point({1.0, 0.0});
	const double r = 0.3;
	const int n = 3000;
	const double h = 2.0 * r / n;
	double grid = 0.0;
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
		{
			const Point z = make_point({x(0) - r + (i + 0.5) * h, x(1) - r + (j + 0.5) * h});
			if ((z - x).squaredNorm() < r * r)
				grid += sh.density(z) * h * h;
		}
	const double mass = ball_mass(sh, x, r);
	CHECK(mass == doctest::Approx(grid).epsilon(2e-3));
	// A short arc: mass is close to the chord length 2r.
	CHECK(mass == doctest::Approx(2.0 * r).epsilon(0.05));
}

TEST_CASE("smoothed point mass carries unit mass")
{
	const MeasureSpec pm = point_mass_1d(0.0, 0.01);
	CHECK(ball_mass(pm, make_point({0.0}), 0.5) == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(ball_mass(pm, make_point({0.005}), 0.005) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ball-mass bound verification")
{
	const MeasureSpec leb3 = with_regularity(lebesgue(3), 3.0, 4.0 / 3.0 * pi + 0.01, 1.0);
	CHECK(verify_ball_bound(leb3, 400, Seed{1}).pass);

	const MeasureSpec rp = radial_power(3, 1.0, 1.5, Point::Zero(3), 1e-4);
	CHECK(rp.kappa == doctest::Approx(1.5));
	CHECK(verify_ball_bound(rp, 400, Seed{2}).pass);

	const MeasureSpec wrong = with_regularity(rp, 2.0, rp.K, rp.R);
	const BallBoundReport bad = verify_ball_bound(wrong, 400, Seed{3});
	CHECK_FALSE(bad.pass);
	CHECK(bad.max_ratio > wrong.K);

	CHECK(verify_ball_bound(shell(2, 0.5, 0.05, Point::Zero(2)), 300, Seed{4}).pass);
	CHECK(verify_ball_bound(point_mass_1d(0.0, 0.01), 300, Seed{5}).pass);
}

TEST_CASE("unit ball and sphere constants")
{
	CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
	CHECK(unit_ball_volume(2) == doctest::Approx(pi));
	CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0));
	CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * pi));
	CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * pi));
}
