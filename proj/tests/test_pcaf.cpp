#include "tcbm/brownian.hpp"
#include "tcbm/measures.hpp"
#include "tcbm/observable.hpp"
#include "tcbm/pcaf.hpp"
#include "tcbm/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace tcbm;

TEST_CASE("constant density gives A_t = c t")
{
	const PathSample p = sample_path(2, Point::Zero(2), 0.01, 1.0, Seed{3});
	const PcafTrace a = accumulate(p, constant_density(2, 2.0));
	REQUIRE(a.a_values.size() == 101);
	for (int i = 0; i <= p.n_steps; ++i)
		CHECK(a.a_values[i] == doctest::Approx(2.0 * p.time(i)).epsilon(1e-14));

	const PcafTrace zero = accumulate(p, constant_density(2, 0.0));
	for (double v : zero.a_values)
		CHECK(v == 0.0);
}

TEST_CASE("trapezoid increments on a hand-made path")
{
	const MeasureSpec rp = radial_power(1, 1.0, 1.0, make_point({0.0}), 0.1);
	PointMatrix pos(1, 4);
	pos << 0.5, 0.25, 0.05, -1.0;
	const PcafTrace a = accumulate_positions(pos, 0.1, rp, 0.3);
	// densities 2, 4, 10 (capped), 1
	CHECK(a.a_values[0] == doctest::Approx(0.3));
	CHECK(a.a_values[1] == doctest::Approx(0.3 + 0.05 * 6.0));
	CHECK(a.a_values[2] == doctest::Approx(0.6 + 0.05 * 14.0));
	CHECK(a.a_values[3] == doctest::Approx(1.3 + 0.05 * 11.0));
	for (std::size_t i = 1; i < a.a_values.size(); ++i)
		CHECK(a.a_values[i] >= a.a_values[i - 1]);
}

TEST_CASE("right-continuous inverse clock")
{
	const PathSample p = sample_path(1, make_point({0.0}), 0.01, 1.0, Seed{4});
	const PcafTrace a = accumulate(p, constant_density(1, 2.0));
	CHECK(*inverse_clock(a, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
	CHECK(*inverse_clock(a, 0.0) == 0.0);
	CHECK_FALSE(inverse_clock(a, 2.0).has_value());
	CHECK_FALSE(inverse_clock(a, 5.0).has_value());
	CHECK_THROWS_AS(inverse_clock(a, -1.0), DomainError);

	PcafTrace flat;
	flat.dt = 1.0;
	flat.a_values = {0.0, 1.0, 1.0, 2.0};
	CHECK(*inverse_clock(flat, 1.0) == doctest::Approx(2.0));
	CHECK(*inverse_clock(flat, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("identity and scaled time changes")
{
	const PathSample p = sample_path(2, Point::Zero(2), 0.01, 1.0, Seed{5});
	const PcafTrace a = accumulate(p, lebesgue(2));
	for (int i : {0, 10, 57, 99})
	{
		const auto pos = time_changed_position(p, a, p.time(i));
		REQUIRE(pos.has_value());
		CHECK((*pos - p.positions.col(i)).norm() < 1e-9);
	}

	// c = 4: B^mu_s = B_{s/4}, so the quadratic variation over s in [0, 1] is d/4.
	RunningStats qv;
	for (std::uint64_t k = 0; k < 200; ++k)
	{
		const PathSample q = sample_path(2, Point::Zero(2), 2.5e-4, 0.3, derive_seed(Seed{6}, streams::kPath, k));
		const PcafTrace aq = accumulate(q, constant_density(2, 4.0));
		double sum = 0.0;
		Point prev = *time_changed_position(q, aq, 0.0);
		for (int j = 1; j <= 1000; ++j)
		{
			const Point cur = *time_changed_position(q, aq, j * 1e-3);
			sum += (cur - prev).squaredNorm();
			prev = cur;
		}
		qv.add(sum);
	}
	CHECK(std::abs(qv.mean() - 0.5) < 4.0 * qv.stderr() + 1e-3);

	const PcafTrace none = accumulate(p, constant_density(2, 0.0));
	CHECK_FALSE(time_changed_position(p, none, 1e-6).has_value());
}

TEST_CASE("streamed crossings")
{
	// Constant density 4: the crossing of A = 1 sits at B_{1/4}.
	RunningStats var;
	for (std::uint64_t k = 0; k < 40000; ++k)
	{
		Rng rng(derive_seed(Seed{7}, streams::kClock, k));
		const ClockCrossing c = stream_time_change(constant_density(1, 4.0), make_point({1.0}), 1.0, 1e-3, 1.0, rng);
		REQUIRE(c.position.has_value());
		var.add(((*c.position)(0) - 1.0) * ((*c.position)(0) - 1.0));
	}
	CHECK(var.mean() == doctest::Approx(0.25).epsilon(0.03));

	Rng rng(Seed{8});
	const ClockCrossing late = stream_time_change(constant_density(1, 4.0), make_point({0.0}), 5.0, 1e-3, 1.0, rng);
	CHECK_FALSE(late.position.has_value());
	CHECK(late.a_final == doctest::Approx(4.0));
	const ClockCrossing never = stream_time_change(constant_density(1, 0.0), make_point({0.0}), 0.1, 1e-3, 1.0, rng);
	CHECK_FALSE(never.position.has_value());
}

TEST_CASE("streamed and stored time changes have the same law")
{
	const MeasureSpec rp = radial_power(2, 1.0, 1.0, Point::Zero(2), 0.01);
	const Point z0 = make_point({0.2, 0.0});
	std::vector<double> streamed, stored;
	for (std::uint64_t k = 0; k < 2000; ++k)
	{
		Rng rng(derive_seed(Seed{9}, streams::kClock, k));
		const ClockCrossing c = stream_time_change(rp, z0, 0.3, 1e-3, 2.0, rng);
		if (c.position)
			streamed.push_back(c.position->norm());
		const PathSample p = sample_path(2, z0, 1e-3, 2.0, derive_seed(Seed{10}, streams::kPath, k));
		const auto pos = time_changed_position(p, accumulate(p, rp), 0.3);
		if (pos)
			stored.push_back(pos->norm());
	}
	REQUIRE(streamed.size() > 1800);
	REQUIRE(stored.size() > 1800);
	const double na = static_cast<double>(streamed.size()), nb = static_cast<double>(stored.size());
	const double stat = ks_two_sample(streamed, stored);
	CHECK(kolmogorov_survival(stat * std::sqrt(na * nb / (na + nb))) > 1e-3);
}

TEST_CASE("Revuz duality")
{
	const Observable ind = indicator_first(0.0, 1.0);
	const Box box{make_point({0.0}), make_point({1.0})};
	const RevuzReport rep = revuz_check(lebesgue(1), ind, ind, 1.0, box, 4000, 5, Seed{11}, 1e-3);
	CHECK(rep.agree);
	const double s2 = std::sqrt(2.0);
	const double exact = 1.0 - (1.0 - std::exp(-s2)) / s2;
	CHECK(std::abs(rep.lhs.value - exact) < 3.0 * rep.lhs.stderr());

	const RevuzReport zero = revuz_check(lebesgue(1), zero_function(), ind, 1.0, box, 200, 2, Seed{11}, 1e-3);
	CHECK(zero.lhs.value == 0.0);
	CHECK(zero.rhs.value == 0.0);

	// Doubling the density doubles the left side path by path.
	const RevuzReport one = revuz_check(lebesgue(1), ind, ind, 1.0, box, 500, 2, Seed{12}, 1e-3);
	const RevuzReport two = revuz_check(constant_density(1, 2.0), ind, ind, 1.0, box, 500, 2, Seed{12}, 1e-3);
	CHECK(two.lhs.value == doctest::Approx(2.0 * one.lhs.value).epsilon(1e-12));
}
