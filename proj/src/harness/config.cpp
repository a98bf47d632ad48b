#include "tcbm/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tcbm::harness
{
	namespace
	{
		std::string join_problems(const std::vector<std::string> &problems)
		{
			std::ostringstream os;
			os << "invalid configuration:";
			for (const auto &p : problems)
				os << "\n  - " << p;
			return os.str();
		}

		const std::set<std::string> kKeys = {"experiment", "seed", "measure", "d", "alpha", "eps", "kappa", "dt", "t_max", "paths", "rows",
			"scales", "out", "profile"};

		template <typename T>
		void read_number(const nlohmann::json &j, const char *key, std::optional<T> &dst, std::vector<std::string> &problems)
		{
			if (!j.contains(key))
				return;
			const auto &v = j.at(key);
			if constexpr (std::is_integral_v<T>)
			{
				if (!v.is_number_integer())
				{
					problems.push_back(std::string(key) + ": expected an integer");
					return;
				}
				if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
				{
					problems.push_back(std::string(key) + ": must be nonnegative");
					return;
				}
			}
			else if (!v.is_number())
			{
				problems.push_back(std::string(key) + ": expected a number");
				return;
			}
			dst = v.get<T>();
		}

		double parse_double(const std::string &key, const std::string &text)
		{
			double value = 0.0;
			const auto *end = text.data() + text.size();
			const auto [ptr, ec] = std::from_chars(text.data(), end, value);
			if (ec != std::errc() || ptr != end)
				throw ConfigError({"measure: bad value '" + text + "' for " + key});
			return value;
		}
	} // namespace

	ConfigError::ConfigError(std::vector<std::string> problems) : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

	void validate(const ExperimentConfig &cfg)
	{
		std::vector<std::string> problems;
		auto positive = [&](const std::optional<double> &v, const char *name) {
			if (v && !(*v > 0.0 && std::isfinite(*v)))
				problems.push_back(std::string(name) + ": must be positive and finite");
		};
		if (cfg.experiment.empty())
			problems.push_back("experiment: missing");
		if (!cfg.seed)
			problems.push_back("seed: missing (a master seed is mandatory)");
		if (cfg.d && (*cfg.d < 1 || *cfg.d > kMaxDim))
			problems.push_back("d: must lie in [1, " + std::to_string(kMaxDim) + "]");
		positive(cfg.alpha, "alpha");
		positive(cfg.dt, "dt");
		positive(cfg.t_max, "t_max");
		if (cfg.eps && !(*cfg.eps > 0.0 && *cfg.eps < 1.0))
			problems.push_back("eps: must lie in (0, 1)");
		if (cfg.kappa && !std::isfinite(*cfg.kappa))
			problems.push_back("kappa: must be finite");
		if (cfg.kappa && cfg.d && !(*cfg.kappa > *cfg.d - 2))
			problems.push_back("kappa: must exceed d - 2");
		if (cfg.dt && cfg.t_max && *cfg.t_max < *cfg.dt)
			problems.push_back("t_max: must be at least dt");
		if (cfg.n_paths && *cfg.n_paths < 2)
			problems.push_back("paths: need at least 2");
		if (cfg.n_rows && (*cfg.n_rows < 1 || *cfg.n_rows > 10000))
			problems.push_back("rows: must lie in [1, 10000]");
		for (double s : cfg.scales)
			if (!(s > 0.0 && s <= 1.0))
			{
				problems.push_back("scales: every entry must lie in (0, 1]");
				break;
			}
		if (cfg.measure)
		{
			try
			{
				parse_measure(*cfg.measure, cfg.d.value_or(1), cfg.dt.value_or(1e-4));
			}
			catch (const ConfigError &e)
			{
				problems.insert(problems.end(), e.problems().begin(), e.problems().end());
			}
			catch (const std::exception &e)
			{
				problems.push_back(std::string("measure: ") + e.what());
			}
		}
		if (!problems.empty())
			throw ConfigError(std::move(problems));
	}

	ExperimentConfig config_from_json(const nlohmann::json &j)
	{
		if (!j.is_object())
			throw ConfigError({"config: top level must be an object"});
		std::vector<std::string> problems;
		for (const auto &[key, value] : j.items())
			if (!kKeys.count(key))
				problems.push_back(key + ": unknown key");

		ExperimentConfig cfg;
		if (j.contains("experiment"))
		{
			if (j["experiment"].is_string())
				cfg.experiment = j["experiment"].get<std::string>();
			else
				problems.push_back("experiment: expected a string");
		}
		read_number(j, "seed", cfg.seed, problems);
		read_number(j, "d", cfg.d, problems);
		read_number(j, "alpha", cfg.alpha, problems);
		read_number(j, "eps", cfg.eps, problems);
		read_number(j, "kappa", cfg.kappa, problems);
		read_number(j, "dt", cfg.dt, problems);
		read_number(j, "t_max", cfg.t_max, problems);
		read_number(j, "paths", cfg.n_paths, problems);
		read_number(j, "rows", cfg.n_rows, problems);
		if (j.contains("measure"))
		{
			if (j["measure"].is_string())
				cfg.measure = j["measure"].get<std::string>();
			else
				problems.push_back("measure: expected a string such as \"radial-power:beta=1.5\"");
		}
		if (j.contains("scales"))
		{
			const auto &s = j["scales"];
			if (!s.is_array())
				problems.push_back("scales: expected an array of numbers");
			else
				for (const auto &v : s)
				{
					if (!v.is_number())
					{
						problems.push_back("scales: expected an array of numbers");
						break;
					}
					cfg.scales.push_back(v.get<double>());
				}
		}
		if (j.contains("out"))
		{
			if (j["out"].is_string())
				cfg.out_dir = j["out"].get<std::string>();
			else
				problems.push_back("out: expected a path string");
		}
		if (j.contains("profile"))
		{
			const auto &p = j["profile"];
			if (p == "full")
				cfg.profile = Profile::Full;
			else if (p == "quick")
				cfg.profile = Profile::Quick;
			else
				problems.push_back("profile: expected \"full\" or \"quick\"");
		}
		if (!problems.empty())
			throw ConfigError(std::move(problems));
		return cfg;
	}

	ExperimentConfig load_config(const std::filesystem::path &path)
	{
		std::ifstream in(path);
		if (!in)
			throw ConfigError({"config: cannot open " + path.string()});
		nlohmann::json j;
		try
		{
			in >> j;
		}
		catch (const nlohmann::json::parse_error &e)
		{
			throw ConfigError({std::string("config: ") + e.what()});
		}
		return config_from_json(j);
	}

	nlohmann::json to_json(const ExperimentConfig &cfg)
	{
		nlohmann::json j;
		j["experiment"] = cfg.experiment;
		if (cfg.seed)
			j["seed"] = *cfg.seed;
		auto put = [&](const char *key, const auto &v) {
			if (v)
				j[key] = *v;
		};
		put("measure", cfg.measure);
		put("d", cfg.d);
		put("alpha", cfg.alpha);
		put("eps", cfg.eps);
		put("kappa", cfg.kappa);
		put("dt", cfg.dt);
		put("t_max", cfg.t_max);
		put("paths", cfg.n_paths);
		put("rows", cfg.n_rows);
		if (!cfg.scales.empty())
			j["scales"] = cfg.scales;
		j["profile"] = cfg.profile == Profile::Quick ? "quick" : "full";
		return j;
	}

	MeasureSpec parse_measure(const std::string &text, int dim, double dt_ref)
	{
		const auto colon = text.find(':');
		const std::string family = text.substr(0, colon);
		std::map<std::string, double> params;
		if (colon != std::string::npos)
		{
			std::istringstream list(text.substr(colon + 1));
			std::string item;
			while (std::getline(list, item, ','))
			{
				const auto eq = item.find('=');
				if (eq == std::string::npos)
					throw ConfigError({"measure: expected key=value, got '" + item + "'"});
				const std::string key = item.substr(0, eq);
				params[key] = parse_double(key, item.substr(eq + 1));
			}
		}
		auto take = [&](const std::string &key, double fallback) {
			auto it = params.find(key);
			if (it == params.end())
				return fallback;
			const double v = it->second;
			params.erase(it);
			return v;
		};
		MeasureSpec spec;
		const Point origin = Point::Zero(dim);
		if (family == "lebesgue")
			spec = lebesgue(dim);
		else if (family == "constant")
			spec = constant_density(dim, take("c", 1.0));
		else if (family == "radial-power")
		{
			const double c = take("c", 1.0);
			const double beta = take("beta", 1.5);
			const double cap = take("r_cap", std::sqrt(dt_ref));
			spec = radial_power(dim, c, beta, origin, cap);
		}
		else if (family == "shell")
		{
			const double rho = take("rho", 0.5);
			const double eps_s = take("eps_s", 0.05);
			spec = shell(dim, rho, eps_s, origin);
		}
		else if (family == "point-mass")
		{
			if (dim != 1)
				throw ConfigError({"measure: point-mass needs d = 1"});
			const double a = take("a", 0.0);
			const double eps_s = take("eps_s", 0.01);
			spec = point_mass_1d(a, eps_s);
		}
		else
			throw ConfigError({"measure: unknown family '" + family + "'"});
		if (!params.empty())
		{
			std::vector<std::string> problems;
			for (const auto &[key, v] : params)
				problems.push_back("measure: parameter '" + key + "' does not apply to " + family);
			throw ConfigError(std::move(problems));
		}
		return spec;
	}
} // namespace tcbm::harness
