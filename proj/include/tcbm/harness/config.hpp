#pragma once

#include "tcbm/measures.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcbm::harness
{
	/// Every violated field, one message each.
	class ConfigError : public std::runtime_error
	{
	public:
		explicit ConfigError(std::vector<std::string> problems);
		const std::vector<std::string> &problems() const { return problems_; }

	private:
		std::vector<std::string> problems_;
	};

	enum class Profile
	{
		Full,
		Quick,
	};

	struct ExperimentConfig
	{
		std::string experiment;
		std::optional<std::uint64_t> seed;
		std::optional<std::string> measure; // "family[:key=value,...]"
		std::optional<int> d;
		std::optional<double> alpha;
		std::optional<double> eps;
		std::optional<double> kappa;
		std::optional<double> dt;
		std::optional<double> t_max;
		std::optional<std::size_t> n_paths;
		std::optional<int> n_rows;
		std::vector<double> scales;
		std::filesystem::path out_dir = "out";
		Profile profile = Profile::Full;

		std::uint64_t master_seed() const { return *seed; }
	};

	/// Schema check; throws ConfigError listing every problem.
	void validate(const ExperimentConfig &cfg);

	/// Reads the JSON config schema (see README). Unknown keys are errors.
	ExperimentConfig config_from_json(const nlohmann::json &j);
	ExperimentConfig load_config(const std::filesystem::path &path);
	nlohmann::json to_json(const ExperimentConfig &cfg);

	/// Builds a measure from "family[:key=value,...]" in dimension dim.
	/// Families: lebesgue, constant (c), radial-power (c, beta, r_cap), shell (rho, eps_s), point-mass (a, eps_s).
	/// Centers sit at the origin.
	MeasureSpec parse_measure(const std::string &text, int dim, double dt_ref);
} // namespace tcbm::harness
