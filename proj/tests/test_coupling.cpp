#include "tcbm/coupling.hpp"
#include "tcbm/measures.hpp"
#include "tcbm/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace tcbm;

TEST_CASE("reflection across the bisecting hyperplane")
{
	const Point x = make_point({0.0, 0.0}), y = make_point({2.0, 0.0});
	CHECK((reflect(x, y, make_point({0.0, 1.0})) - make_point({2.0, 1.0})).norm() < 1e-15);
	CHECK((reflect(x, y, make_point({1.0, -3.0})) - make_point({1.0, -3.0})).norm() < 1e-15);
	CHECK((reflect(x, y, x) - y).norm() < 1e-15);

	Rng rng(Seed{1});
	for (int i = 0; i < 100; ++i)
	{
		Point a(4), b(4), z(4);
		rng.fill_normal(a, 1.0);
		rng.fill_normal(b, 1.0);
		rng.fill_normal(z, 3.0);
		const Point once = reflect(a, b, z);
		CHECK((reflect(a, b, once) - z).norm() < 1e-12);
		CHECK((once - b).norm() == doctest::Approx((z - a).norm()).epsilon(1e-12));
	}
}

TEST_CASE("coupled trajectory structure")
{
	const Point x = make_point({0.0, 0.0}), y = make_point({0.3, 0.1});
	const MeasureSpec rp = radial_power(2, 1.0, 1.0, Point::Zero(2), 0.01);
	int met = 0;
	for (std::uint64_t k = 0; k < 50; ++k)
	{
		const CoupledTrajectory c = sample_coupled(x, y, rp, 1e-3, 2.0, derive_seed(Seed{2}, streams::kPath, k));
		CHECK(c.signed_dist[0] == doctest::Approx((x - y).norm() / 2.0).epsilon(1e-14));
		const int last = c.meet_step < 0 ? c.base.n_steps : c.meet_step - 1;
		for (int i = 0; i <= last; ++i)
		{
			const Point z = c.base.positions.col(i);
			CHECK((c.mirrored.col(i) - reflect(x, y, z)).norm() < 1e-12);
		}
		if (c.meet_step < 0)
			continue;
		++met;
		REQUIRE(c.xi.has_value());
		CHECK(*c.xi == doctest::Approx((c.meet_step - 0.5) * 1e-3));
		for (int i = c.meet_step; i <= c.base.n_steps; ++i)
			CHECK(c.mirrored.col(i) == c.base.positions.col(i));
		for (std::size_t i = c.meet_step + 1; i < c.a_trace.a_values.size(); ++i)
			CHECK(c.a_trace.a_values[i] - c.a_trace.a_values[i - 1] ==
				  doctest::Approx(c.a_tilde_trace.a_values[i] - c.a_tilde_trace.a_values[i - 1]).epsilon(1e-12));
	}
	CHECK(met > 30);
	CHECK_THROWS_AS(sample_coupled(x, x, rp, 1e-3, 1.0, Seed{1}), DomainError);
}

TEST_CASE("meeting survival function")
{
	CHECK(meeting_tail_exact(0.0, 1.0) == 0.0);
	CHECK(meeting_tail_exact(0.1, 1.0) == doctest::Approx(0.0797).epsilon(1e-3));
	CHECK(meeting_tail_exact(0.1, 1.0) == doctest::Approx(std::erf(0.1 / std::sqrt(2.0))).epsilon(1e-14));
	CHECK(meeting_tail_exact(50.0, 1.0) == doctest::Approx(1.0));
	// Small-a linearization: 2a/sqrt(2 pi t).
	CHECK(meeting_tail_exact(0.01, 1.0) == doctest::Approx(0.02 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-4));
}

TEST_CASE("meeting time follows the half-separation law")
{
	// The signed distance to the hyperplane starts at |x - y|/2.
	const std::vector<double> seps{0.1, 0.2};
	const std::vector<double> times{0.25, 1.0};
	const auto cells = lemma_cp_check(2, seps, times, 40000, Seed{3});
	REQUIRE(cells.size() == 4);
	for (const auto &c : cells)
	{
		CHECK(c.coupling == doctest::Approx(meeting_tail_exact(c.a / 2.0, c.t)));
		CHECK(c.z_coupling <= 3.5);
		CHECK(c.survival.value - 3.0 * c.survival.stderr() <= c.doubled_bound);
		// Survival at full separation overstates the empirical law by about a factor 2.
		CHECK(c.z_literal > 5.0);
	}
}

TEST_CASE("theta moments of the distance")
{
	const Point x = make_point({0.0, 0.0}), y = make_point({0.2, 0.0});
	const std::vector<double> thetas{0.25, 0.5, 1.0};
	const StopRule fixed{StopRule::Kind::FixedTime, 0.0, 1.0};
	const auto rows = lemma_key_check(x, y, thetas, fixed, 20000, Seed{4}, 1e-3);
	REQUIRE(rows.size() == 3);
	for (const auto &row : rows)
	{
		CHECK(row.holds);
		CHECK(row.bound == doctest::Approx(std::pow(0.2, row.theta)));
	}
	CHECK(rows[2].bound_in_ci);

	const StopRule exit{StopRule::Kind::BallExit, 0.5, 2.0};
	for (const auto &row : lemma_key_check(x, y, thetas, exit, 20000, Seed{5}, 1e-3))
		CHECK(row.holds);
}

TEST_CASE("exit before meeting")
{
	const std::vector<double> seps{0.2, 0.1, 0.05, 0.025};
	const LemmaExcpReport rep = lemma_excp_check(2, 0.5, 0.1, 1.0, 1.0, seps, 4000, Seed{6});
	CHECK(rep.exponent == doctest::Approx(0.4));
	CHECK(rep.bound_holds);
	CHECK(rep.slope.slope >= 0.3);
	for (std::size_t i = 1; i < rep.rows.size(); ++i)
		CHECK(rep.rows[i].prob.value <= rep.rows[i - 1].prob.value + 3.0 * rep.rows[i - 1].prob.stderr());

	const std::vector<double> two{0.2, 0.1};
	CHECK(lemma_excp_check(2, 1.0, 1.0, 1.0, 1.0, two, 100, Seed{7}).exponent == doctest::Approx(-1.0));
}

TEST_CASE("clock at the meeting time")
{
	const Point x = Point::Zero(3), y = make_point({0.1, 0.0, 0.0});
	const IQuantities none = i_quantities(x, y, constant_density(3, 0.0), 1e-3, 1.0, 500, Seed{8});
	CHECK(none.i.value == 0.0);
	CHECK(none.i_tilde.value == 0.0);

	const IQuantities near = i_quantities(x, make_point({0.01, 0.0, 0.0}), lebesgue(3), 1e-4, 1.0, 4000, Seed{9});
	const IQuantities far = i_quantities(x, make_point({0.2, 0.0, 0.0}), lebesgue(3), 1e-4, 1.0, 4000, Seed{9});
	CHECK(near.i.value < far.i.value);
	// Lebesgue clocks agree at the meeting time.
	CHECK(far.i.value == doctest::Approx(far.i_tilde.value).epsilon(1e-12));
}
