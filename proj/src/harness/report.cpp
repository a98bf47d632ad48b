#include "tcbm/harness/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace tcbm::harness
{
	namespace
	{
		nlohmann::json number(double v)
		{
			if (std::isfinite(v))
				return v;
			if (std::isnan(v))
				return nullptr;
			return v > 0 ? "inf" : "-inf";
		}

		nlohmann::json param_json(const Param &p)
		{
			if (const double *d = std::get_if<double>(&p))
				return number(*d);
			return std::get<std::string>(p);
		}

		std::string csv_number(double v)
		{
			std::ostringstream os;
			os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
			return os.str();
		}

		std::string csv_field(const Param &p)
		{
			if (const double *d = std::get_if<double>(&p))
				return csv_number(*d);
			const auto &s = std::get<std::string>(p);
			if (s.find_first_of(",\"\n") == std::string::npos)
				return s;
			std::string quoted = "\"";
			for (char c : s)
			{
				if (c == '"')
					quoted += '"';
				quoted += c;
			}
			return quoted + '"';
		}
	} // namespace

	nlohmann::json report_json(const ExperimentResult &r)
	{
		nlohmann::json j;
		j["version"] = kVersion;
		j["experiment"] = r.experiment;
		j["reference"] = r.reference;
		j["config"] = r.config;
		j["passed"] = r.passed();
		auto &checks = j["checks"] = nlohmann::json::array();
		for (const auto &c : r.checks)
			checks.push_back({{"name", c.name}, {"reference", c.reference}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}});
		auto &tables = j["tables"] = nlohmann::json::array();
		for (const auto &t : r.tables)
		{
			nlohmann::json tj;
			tj["name"] = t.name;
			tj["columns"] = t.columns;
			auto &rows = tj["rows"] = nlohmann::json::array();
			for (const auto &row : t.rows)
			{
				nlohmann::json params = nlohmann::json::array();
				for (const auto &p : row.params)
					params.push_back(param_json(p));
				rows.push_back({{"params", params}, {"estimate", number(row.estimate)}, {"stderr", number(row.stderr_)},
					{"ci_lo", number(row.ci_lo)}, {"ci_hi", number(row.ci_hi)}, {"verdict", to_string(row.verdict)}});
			}
			tables.push_back(std::move(tj));
		}
		j["summary"] = r.summary;
		return j;
	}

	void write_csv(std::ostream &os, const std::string &experiment, const Table &table)
	{
		os << "experiment";
		for (const auto &c : table.columns)
			os << ',' << c;
		os << ",estimate,stderr,ci_lo,ci_hi,verdict\n";
		for (const auto &row : table.rows)
		{
			os << experiment;
			for (const auto &p : row.params)
				os << ',' << csv_field(p);
			os << ',' << csv_number(row.estimate) << ',' << csv_number(row.stderr_) << ',' << csv_number(row.ci_lo) << ','
			   << csv_number(row.ci_hi) << ',' << to_string(row.verdict) << '\n';
		}
	}

	void write_outputs(const ExperimentResult &result, const std::filesystem::path &dir)
	{
		std::filesystem::create_directories(dir);
		{
			std::ofstream out(dir / "report.json");
			out << report_json(result).dump(2) << '\n';
		}
		{
			std::ofstream out(dir / "timing.json");
			out << nlohmann::json{{"experiment", result.experiment}, {"wall_seconds", result.wall_seconds}}.dump(2) << '\n';
		}
		for (const auto &t : result.tables)
		{
			std::ofstream out(dir / (t.name + ".csv"));
			write_csv(out, result.experiment, t);
		}
		if (!std::filesystem::exists(dir / "report.json"))
			throw std::runtime_error("could not write outputs to " + dir.string());
	}

	void print_summary(std::ostream &os, const ExperimentResult &result)
	{
		for (const auto &c : result.checks)
		{
			os << '[' << to_string(c.verdict) << "] " << c.name;
			if (!c.detail.empty())
				os << ": " << c.detail;
			os << '\n';
		}
		os << result.experiment << ": " << (result.passed() ? "PASS" : "FAIL") << " (" << std::fixed << std::setprecision(1)
		   << result.wall_seconds << " s)\n";
		os.unsetf(std::ios::fixed);
	}
} // namespace tcbm::harness
