#include "tcbm/harness/config.hpp"
#include "tcbm/harness/experiments.hpp"
#include "tcbm/harness/report.hpp"
#include "tcbm/indices.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <limits>

namespace
{
	using namespace tcbm::harness;

	struct Overrides
	{
		std::string experiment;
		std::string config_path;
		std::optional<std::uint64_t> seed;
		std::optional<std::size_t> paths;
		std::optional<double> dt, t_max, alpha, eps, kappa;
		std::optional<int> d, n_rows;
		std::optional<std::string> measure, out, profile;
	};

	void add_shared(CLI::App *cmd, Overrides &o)
	{
		cmd->add_option("--seed", o.seed, "master seed (mandatory)");
		cmd->add_option("--paths", o.paths, "Monte Carlo paths per estimate");
		cmd->add_option("--dt", o.dt, "time step");
		cmd->add_option("--t-max", o.t_max, "time horizon");
		cmd->add_option("--measure", o.measure, "measure, e.g. radial-power:beta=1.5");
		cmd->add_option("--d", o.d, "dimension");
		cmd->add_option("--alpha", o.alpha, "resolvent parameter");
		cmd->add_option("--eps", o.eps, "exponent slack");
		cmd->add_option("--kappa", o.kappa, "ball-mass exponent");
		cmd->add_option("--n", o.n_rows, "rows of the exponent table");
	}

	ExperimentConfig build_config(const Overrides &o)
	{
		ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
		if (!o.experiment.empty())
			cfg.experiment = o.experiment;
		if (o.seed)
			cfg.seed = o.seed;
		if (o.paths)
			cfg.n_paths = o.paths;
		if (o.dt)
			cfg.dt = o.dt;
		if (o.t_max)
			cfg.t_max = o.t_max;
		if (o.alpha)
			cfg.alpha = o.alpha;
		if (o.eps)
			cfg.eps = o.eps;
		if (o.kappa)
			cfg.kappa = o.kappa;
		if (o.d)
			cfg.d = o.d;
		if (o.n_rows)
			cfg.n_rows = o.n_rows;
		if (o.measure)
			cfg.measure = o.measure;
		if (o.out)
			cfg.out_dir = *o.out;
		if (o.profile)
		{
			if (*o.profile == "quick")
				cfg.profile = Profile::Quick;
			else if (*o.profile == "full")
				cfg.profile = Profile::Full;
			else
				throw ConfigError({"profile: expected full or quick"});
		}
		return cfg;
	}

	int run(const Overrides &o)
	{
		const ExperimentConfig cfg = build_config(o);
		const ExperimentResult result = run_experiment(cfg);
		write_outputs(result, cfg.out_dir);
		print_summary(std::cout, result);
		std::cout << "outputs in " << cfg.out_dir.string() << '\n';
		return result.passed() ? 0 : 1;
	}

	void list()
	{
		for (const auto &e : catalog())
			std::cout << std::left << std::setw(22) << e.name << e.description << "\n" << std::setw(22) << "" << "checks: " << e.reference << '\n';
	}

	int indices(const Overrides &o)
	{
		using L = long double;
		const int d = o.d.value_or(3);
		const auto table = tcbm::exponent_table<L>(d, o.kappa.value_or(1.5), o.eps.value_or(0.05), o.n_rows.value_or(10));
		std::cout << std::setprecision(std::numeric_limits<double>::max_digits10);
		std::cout << "n,r_n,q_n,a_n,b_n,eta\n";
		for (const auto &row : table.rows)
			std::cout << row.n << ',' << double(row.r) << ',' << double(row.q) << ',' << double(row.a) << ',' << double(row.b) << ','
					  << double(row.eta) << '\n';
		return 0;
	}
} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"Time-changed Brownian motion laboratory"};
	app.require_subcommand(1);

	Overrides run_opts;
	auto *run_cmd = app.add_subcommand("run", "run one experiment and write report.json plus CSV tables");
	run_cmd->add_option("experiment", run_opts.experiment, "experiment name (see list)");
	run_cmd->add_option("--config", run_opts.config_path, "JSON config file")->check(CLI::ExistingFile);
	run_cmd->add_option("--out", run_opts.out, "output directory");
	run_cmd->add_option("--profile", run_opts.profile, "full or quick sample sizes");
	add_shared(run_cmd, run_opts);

	app.add_subcommand("list", "list experiments and the statements they check");

	Overrides idx_opts;
	auto *idx_cmd = app.add_subcommand("indices", "print the exponent table as CSV");
	add_shared(idx_cmd, idx_opts);

	CLI11_PARSE(app, argc, argv);

	try
	{
		if (*run_cmd)
			return run(run_opts);
		if (app.got_subcommand("list"))
		{
			list();
			return 0;
		}
		return indices(idx_opts);
	}
	catch (const ConfigError &e)
	{
		std::cerr << e.what() << '\n';
		return 2;
	}
	catch (const std::exception &e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return 2;
	}
}
