#pragma once

#include "tcbm/harness/config.hpp"
#include "tcbm/stats.hpp"

#include <json.hpp>

#include <deque>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tcbm::harness
{
	inline constexpr std::string_view kVersion = "tcbm 0.1.0";

	enum class Verdict
	{
		Pass,
		Fail,
		Flagged, // reported, never fails a run
	};

	std::string_view to_string(Verdict v);
	inline Verdict verdict_of(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }
	inline Verdict flag_unless(bool ok) { return ok ? Verdict::Pass : Verdict::Flagged; }

	struct Check
	{
		std::string name;
		std::string reference; // statement the check exercises
		Verdict verdict = Verdict::Pass;
		std::string detail;
	};

	using Param = std::variant<double, std::string>;

	struct TableRow
	{
		std::vector<Param> params;
		double estimate = 0.0;
		double stderr_ = 0.0;
		double ci_lo = 0.0;
		double ci_hi = 0.0;
		Verdict verdict = Verdict::Pass;
	};

	/// CSV layout: experiment, params..., estimate, stderr, ci_lo, ci_hi, verdict.
	struct Table
	{
		std::string name;
		std::vector<std::string> columns; // parameter columns only
		std::vector<TableRow> rows;

		void add(std::vector<Param> params, const McEstimate &e, Verdict v);
		void add_exact(std::vector<Param> params, double value, Verdict v);
	};

	struct ExperimentResult
	{
		std::string experiment;
		std::string reference;
		nlohmann::json config;
		std::vector<Check> checks;
		std::deque<Table> tables; // deque: table() references stay valid
		nlohmann::json summary = nlohmann::json::object();
		double wall_seconds = 0.0;

		bool passed() const;
		Check &check(std::string name, std::string reference, Verdict v, std::string detail = {});
		Table &table(std::string name, std::vector<std::string> columns);
	};

	struct ExperimentInfo
	{
		std::string name;
		std::string description;
		std::string reference;
		ExperimentResult (*run)(const ExperimentConfig &);
	};

	struct NamedMeasure
	{
		std::string name;
		MeasureSpec spec;
	};

	/// The measures every per-measure experiment runs over. Radial-power caps sit at sqrt(dt_ref).
	std::vector<NamedMeasure> shipped_measures(double dt_ref = 1e-4);

	const std::vector<ExperimentInfo> &catalog();
	const ExperimentInfo *find_experiment(std::string_view name);

	/// Validates, runs and times one experiment. Unknown names raise ConfigError.
	ExperimentResult run_experiment(const ExperimentConfig &cfg);
} // namespace tcbm::harness
