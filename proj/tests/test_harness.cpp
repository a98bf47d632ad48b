#include "tcbm/harness/config.hpp"
#include "tcbm/harness/experiments.hpp"
#include "tcbm/harness/report.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

using namespace tcbm;
using namespace tcbm::harness;
using nlohmann::json;

namespace
{
	bool mentions(const ConfigError &e, const std::string &key)
	{
		return std::any_of(e.problems().begin(), e.problems().end(), [&](const std::string &p) { return p.rfind(key, 0) == 0; });
	}
} // namespace

TEST_CASE("config validation collects every problem")
{
	const json j = {{"experiment", "holder"}, {"d", 9}, {"eps", 1.5}, {"colour", "red"}};
	try
	{
		validate(config_from_json(j));
		FAIL("expected a ConfigError");
	}
	catch (const ConfigError &e)
	{
		CHECK(mentions(e, "colour"));
	}

	ExperimentConfig cfg;
	cfg.experiment = "holder";
	cfg.d = 9;
	cfg.eps = 1.5;
	try
	{
		validate(cfg);
		FAIL("expected a ConfigError");
	}
	catch (const ConfigError &e)
	{
		CHECK(mentions(e, "seed"));
		CHECK(mentions(e, "d"));
		CHECK(mentions(e, "eps"));
		CHECK(e.problems().size() >= 3);
	}

	cfg = ExperimentConfig{};
	cfg.experiment = "holder";
	cfg.seed = 1;
	cfg.d = 3;
	cfg.kappa = 0.5;
	CHECK_THROWS_AS(validate(cfg), ConfigError);
	cfg.kappa = 1.5;
	CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("config round trip")
{
	const json j = {{"experiment", "rsf4"}, {"seed", 42}, {"measure", "radial-power:beta=1.5"}, {"d", 3}, {"alpha", 2.0},
		{"dt", 1e-4}, {"t_max", 4.0}, {"paths", 1000}, {"scales", {0.2, 0.1}}, {"out", "outdir"}, {"profile", "quick"}};
	const ExperimentConfig cfg = config_from_json(j);
	CHECK(cfg.seed == 42u);
	CHECK(cfg.n_paths == 1000u);
	CHECK(cfg.profile == Profile::Quick);
	CHECK(cfg.scales.size() == 2);
	const ExperimentConfig back = config_from_json(to_json(cfg));
	CHECK(to_json(back) == to_json(cfg));

	const auto dir = std::filesystem::temp_directory_path() / "tcbm_config_test";
	std::filesystem::create_directories(dir);
	{
		std::ofstream(dir / "c.json") << j.dump();
	}
	CHECK(to_json(load_config(dir / "c.json")) == to_json(cfg));
	CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
	std::filesystem::remove_all(dir);
}

TEST_CASE("measure strings")
{
	const MeasureSpec rp = parse_measure("radial-power:beta=1.5", 3, 1e-4);
	CHECK(rp.family == Family::RadialPower);
	CHECK(rp.beta == 1.5);
	CHECK(rp.kappa == doctest::Approx(1.5));
	CHECK(rp.r_cap == doctest::Approx(1e-2));
	CHECK(parse_measure("radial-power:beta=1,r_cap=0.001", 2, 1e-4).r_cap == doctest::Approx(1e-3));
	CHECK(parse_measure("lebesgue", 2, 1e-4).family == Family::Constant);
	CHECK(parse_measure("constant:c=3", 1, 1e-4).c == 3.0);
	CHECK(parse_measure("shell:rho=0.4,eps_s=0.02", 3, 1e-4).rho == 0.4);
	CHECK(parse_measure("point-mass:a=0.5", 1, 1e-4).center(0) == 0.5);

	CHECK_THROWS_AS(parse_measure("gaussian", 2, 1e-4), ConfigError);
	CHECK_THROWS_AS(parse_measure("radial-power:gamma=1", 2, 1e-4), ConfigError);
	CHECK_THROWS_AS(parse_measure("radial-power:beta=abc", 2, 1e-4), ConfigError);
	CHECK_THROWS_AS(parse_measure("point-mass", 2, 1e-4), ConfigError);
}

TEST_CASE("catalog")
{
	std::set<std::string> names;
	for (const auto &e : catalog())
	{
		CHECK(names.insert(e.name).second);
		CHECK_FALSE(e.reference.empty());
		CHECK(e.run != nullptr);
	}
	for (const char *n : {"lemma-cp", "rsf4", "holder", "verify-all", "indices", "revuz", "variance"})
		CHECK(find_experiment(n) != nullptr);
	CHECK(find_experiment("nope") == nullptr);

	ExperimentConfig cfg;
	cfg.experiment = "nope";
	cfg.seed = 1;
	CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("reports are deterministic and serialize special values")
{
	ExperimentConfig cfg;
	cfg.experiment = "indices";
	cfg.seed = 42;
	const ExperimentResult a = run_experiment(cfg);
	const ExperimentResult b = run_experiment(cfg);
	CHECK(a.passed());
	CHECK(report_json(a).dump() == report_json(b).dump());
	CHECK_FALSE(report_json(a).contains("wall_seconds"));
	CHECK(report_json(a)["version"] == std::string(kVersion));

	ExperimentResult r;
	r.experiment = "demo";
	auto &t = r.table("t", {"name", "x"});
	t.add_exact({"a,b", 1.5}, std::numeric_limits<double>::quiet_NaN(), Verdict::Flagged);
	t.add_exact({"c", 2.0}, std::numeric_limits<double>::infinity(), Verdict::Pass);
	r.check("flagged checks never fail a run", "demo", Verdict::Flagged);
	CHECK(r.passed());
	const json j = report_json(r);
	CHECK(j["tables"][0]["rows"][0]["estimate"].is_null());
	CHECK(j["tables"][0]["rows"][1]["estimate"] == "inf");

	std::ostringstream csv;
	write_csv(csv, r.experiment, t);
	const std::string text = csv.str();
	CHECK(text.rfind("experiment,name,x,estimate,stderr,ci_lo,ci_hi,verdict\n", 0) == 0);
	CHECK(text.find("\"a,b\"") != std::string::npos);

	r.check("a failing check", "demo", Verdict::Fail);
	CHECK_FALSE(r.passed());
}

TEST_CASE("outputs land in the requested directory")
{
	ExperimentConfig cfg;
	cfg.experiment = "kernels";
	cfg.seed = 7;
	const ExperimentResult res = run_experiment(cfg);
	CHECK(res.passed());
	const auto dir = std::filesystem::temp_directory_path() / "tcbm_output_test";
	std::filesystem::remove_all(dir);
	write_outputs(res, dir);
	CHECK(std::filesystem::exists(dir / "report.json"));
	CHECK(std::filesystem::exists(dir / "timing.json"));
	for (const auto &t : res.tables)
		CHECK(std::filesystem::exists(dir / (t.name + ".csv")));
	std::ifstream in(dir / "report.json");
	const json back = json::parse(in);
	CHECK(back["experiment"] == "kernels");
	CHECK(back["passed"] == true);
	std::filesystem::remove_all(dir);
}

TEST_CASE("quick experiments pass")
{
	for (const char *name : {"ball-bound", "log-power", "support", "mirror", "lemma-key", "lemma-excp", "lemma-ind"})
	{
		ExperimentConfig cfg;
		cfg.experiment = name;
		cfg.seed = 42;
		cfg.profile = Profile::Quick;
		const ExperimentResult res = run_experiment(cfg);
		INFO(name);
		CHECK(res.passed());
	}
}
