#pragma once

#include "tcbm/harness/experiments.hpp"

#include <filesystem>
#include <ostream>

namespace tcbm::harness
{
	/// Deterministic report: no wall time, no host data.
	nlohmann::json report_json(const ExperimentResult &result);

	void write_csv(std::ostream &os, const std::string &experiment, const Table &table);

	/// Writes report.json, timing.json and one CSV per table into dir.
	void write_outputs(const ExperimentResult &result, const std::filesystem::path &dir);

	/// One line per check.
	void print_summary(std::ostream &os, const ExperimentResult &result);
} // namespace tcbm::harness
