#include "tcbm/measures.hpp"
#include "tcbm/observable.hpp"
#include "tcbm/resolvent.hpp"

#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

using namespace tcbm;

TEST_CASE("point resolvent of constants")
{
	const ResolventGrid grid{1e-3, 40.0, 40.0};
	for (double alpha : {0.5, 1.0, 4.0})
	{
		const ResolventEstimate one = v_alpha_point(lebesgue(1), constant_function(1.0), alpha, make_point({0.3}), grid, 2000, Seed{1});
		CHECK(one.value.value == doctest::Approx(1.0 / alpha).epsilon(1e-3));
		CHECK(one.bias_bound < 1e-6);
	}
	const ResolventEstimate zero = v_alpha_point(lebesgue(2), zero_function(), 1.0, Point::Zero(2), grid, 100, Seed{2});
	CHECK(zero.value.value == 0.0);
	CHECK(zero.value.stderr() == 0.0);

	// A transient clock that grows slowly: the horizon cuts some paths.
	const MeasureSpec rp = radial_power(3, 1.0, 1.5, Point::Zero(3), 1e-2);
	const ResolventEstimate cut = v_alpha_point(rp, constant_function(1.0), 1.0, make_point({0.5, 0.0, 0.0}), ResolventGrid{1e-3, 1.0, 1.0}, 2000, Seed{3});
	CHECK(cut.value.value <= 1.0);
	CHECK(cut.value.truncation_fraction > 0.0);
	CHECK(cut.bias_bound > 0.0);
}

TEST_CASE("point resolvent closed form in one dimension")
{
	// V_alpha 1_(0,inf)(0) = 1/(2 alpha) for Lebesgue; symmetric start.
	const ResolventEstimate half = v_alpha_point(lebesgue(1), indicator_first(0.0, 1e9), 2.0, make_point({0.0}), ResolventGrid{1e-3, 40.0, 40.0},
		40000, Seed{4});
	CHECK(std::abs(half.value.value - 0.25) < 3.0 * half.value.stderr());
	CHECK(std::abs(half.value.value) <= 0.5 + 3.0 * half.value.stderr());
}

TEST_CASE("monotone in alpha")
{
	const MeasureSpec rp = radial_power(2, 1.0, 1.0, Point::Zero(2), 1e-2);
	const Observable f = radial_ramp(Point::Zero(2), 0.5);
	const ResolventGrid grid{1e-3, 10.0, 10.0};
	const ResolventEstimate a1 = v_alpha_point(rp, f, 1.0, make_point({0.2, 0.0}), grid, 10000, Seed{5});
	const ResolventEstimate a2 = v_alpha_point(rp, f, 2.0, make_point({0.2, 0.0}), grid, 10000, Seed{6});
	CHECK(a1.value.value >= a2.value.value - 3.0 * std::hypot(a1.value.stderr(), a2.value.stderr()));
}

TEST_CASE("coupled differences")
{
	const ResolventGrid grid{1e-3, 10.0, 10.0};
	const Point x = make_point({0.0}), y = make_point({0.1});
	const ResolventEstimate flat = v_alpha_coupled_diff(lebesgue(1), constant_function(1.0), 1.0, x, y, grid, 2000, Seed{7});
	CHECK(std::abs(flat.value.value) < 1e-12);

	const Observable f = clamp_first(-1.0, 1.0);
	const ResolventEstimate coupled = v_alpha_coupled_diff(lebesgue(1), f, 1.0, x, y, grid, 20000, Seed{8});
	const ResolventEstimate indep = v_alpha_independent_diff(lebesgue(1), f, 1.0, x, y, grid, 20000, Seed{9});
	const double se = std::hypot(coupled.value.stderr(), indep.value.stderr());
	CHECK(std::abs(coupled.value.value - indep.value.value) < 3.0 * se);
	CHECK(coupled.sample_variance <= 0.5 * indep.sample_variance);

	const MeasureSpec rp = radial_power(2, 1.0, 1.0, Point::Zero(2), 1e-2);
	const Observable g = radial_ramp(Point::Zero(2), 0.5);
	const Point u = make_point({0.1, 0.0}), v = make_point({0.2, 0.05});
	const ResolventEstimate c2 = v_alpha_coupled_diff(rp, g, 1.0, u, v, grid, 10000, Seed{10});
	const ResolventEstimate i2 = v_alpha_independent_diff(rp, g, 1.0, u, v, grid, 10000, Seed{11});
	CHECK(std::abs(c2.value.value - i2.value.value) < 3.0 * std::hypot(c2.value.stderr(), i2.value.stderr()) + c2.bias_bound + i2.bias_bound);
}

TEST_CASE("difference bound through the clock at meeting")
{
	const ResolventGrid grid{1e-3, 10.0, 10.0};
	std::vector<std::pair<Point, Point>> pairs{{make_point({0.0, 0.0}), make_point({0.1, 0.0})},
		{make_point({0.3, -0.2}), make_point({0.3, -0.1})}};
	const auto zero = rsf4_check(lebesgue(2), zero_function(), 1.0, pairs, grid, 500, Seed{12});
	for (const auto &row : zero)
	{
		CHECK(row.diff.value == 0.0);
		CHECK(row.holds);
	}
	const auto rows = rsf4_check(lebesgue(2), clamp_first(-1.0, 1.0), 1.0, pairs, grid, 5000, Seed{13});
	for (const auto &row : rows)
	{
		CHECK(row.holds);
		CHECK(row.margin >= 0.0);
		CHECK(row.rhs == doctest::Approx(4.0 * row.i_sum.value));
	}
	// Large alpha: the left side shrinks while the right side tends to 2(I + I~).
	double prev = 1e9;
	for (double alpha : {1.0, 10.0, 100.0})
	{
		const auto r = rsf4_check(lebesgue(2), clamp_first(-1.0, 1.0), alpha, std::span(pairs).first(1), grid, 5000, Seed{14});
		CHECK(r[0].holds);
		CHECK(std::abs(r[0].diff.value) <= prev + 3.0 * r[0].diff.stderr());
		prev = std::abs(r[0].diff.value);
	}
	CHECK_THROWS_AS(rsf4_check(lebesgue(2), clamp_first(-2.0, 2.0), 1.0, pairs, grid, 100, Seed{15}), DomainError);
}

TEST_CASE("Hoelder slope")
{
	const ResolventGrid grid{1e-4, 4.0, 4.0};
	const HolderReport lip = holder_exponent(lebesgue(1), clamp_first(-1.0, 1.0), 1.0, 0.15, 0.1, 4, grid, 20000, Seed{16});
	CHECK(lip.predicted == doctest::Approx(0.85));
	CHECK(lip.n_used == 4);
	CHECK(lip.fit.slope >= 0.85);
	for (std::size_t k = 1; k < lip.scales.size(); ++k)
		CHECK(lip.scales[k].h == doctest::Approx(lip.scales[k - 1].h / 2.0));

	const HolderReport flat = holder_exponent(lebesgue(1), constant_function(1.0), 1.0, 0.15, 0.1, 3, grid, 500, Seed{17});
	CHECK(flat.n_used == 0);
	for (const auto &s : flat.scales)
		CHECK(s.excluded);

	CHECK_THROWS_AS(holder_exponent(lebesgue(1), clamp_first(), 1.0, 0.15, 0.5, 3, grid, 100, Seed{18}), DomainError);
}
