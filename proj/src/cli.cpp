#include <iostream>

#include "CLI11.hpp"
#include "gsp/harness.hpp"

namespace gsp {

namespace {

struct CliOptions {
  std::string config;
  std::string profile;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string model;
  std::optional<std::size_t> n;
  std::optional<std::size_t> graphs;
};

void add_common_flags(CLI::App* sub, CliOptions& opts) {
  sub->add_option("--config", opts.config, "JSON experiment config");
  sub->add_option("--seed", opts.seed, "Master seed (overrides the config)");
  sub->add_option("--out-dir", opts.out_dir, "Directory for output files");
  sub->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--profile", opts.profile, "Named defaults")
      ->check(CLI::IsMember({"paper", "desk"}));
}

ExperimentConfig build_config(const CliOptions& opts) {
  ExperimentConfig config = profile_config(opts.profile.empty() ? "desk" : opts.profile);
  if (!opts.config.empty()) config = load_config(opts.config, std::move(config));
  if (!opts.model.empty()) config.model = parse_model_name(opts.model);
  if (opts.n) config.n = *opts.n;
  if (opts.graphs) config.n_graphs = *opts.graphs;
  if (opts.seed) config.seed = *opts.seed;
  if (opts.threads) config.threads = *opts.threads;
  if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
  return config;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Sample-size experiments for noisy bandlimited graph signals", "gsp"};
  app.require_subcommand(1);
  CliOptions opts;

  CLI::App* gen = app.add_subcommand("gen-graph", "Write random graphs as edge lists");
  CLI::App* mse = app.add_subcommand("sweep-mse", "MSE against sample size (closed form and Monte Carlo)");
  CLI::App* tau = app.add_subcommand("sweep-tau", "Least-squares SNR thresholds along sampling orders");
  CLI::App* glr = app.add_subcommand("glr-bounds", "GLR thresholds, bounds and condition flags");
  CLI::App* cond = app.add_subcommand("check-conditions", "Fraction of graphs meeting the GLR conditions");
  for (CLI::App* sub : {gen, mse, tau, glr, cond}) add_common_flags(sub, opts);
  cond->add_option("--model", opts.model, "Graph model")->check(CLI::IsMember({"er", "ba", "sbm"}));
  cond->add_option("--n", opts.n, "Vertices per graph")->check(CLI::PositiveNumber);
  cond->add_option("--graphs", opts.graphs, "Number of graphs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const bool has_source = !opts.config.empty() || !opts.profile.empty() ||
                          (chosen == cond && !opts.model.empty());
  if (!has_source) {
    std::cerr << "error: one of --config or --profile is required\n\n" << chosen->help();
    return 2;
  }

  ExperimentConfig config;
  try {
    config = build_config(opts);
    if (chosen != cond) config.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::vector<OutputFile> outputs;
    const std::string name = chosen->get_name();
    if (chosen == gen) outputs = gen_graphs(config);
    else if (chosen == mse) outputs.push_back(sweep_mse(config));
    else if (chosen == tau) outputs.push_back(sweep_tau(config));
    else if (chosen == glr) outputs.push_back(glr_bounds_report(config));
    else outputs.push_back(check_conditions(config));
    write_metadata(config, name);
    for (const OutputFile& f : outputs) std::cout << summary_line(f) << '\n';
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gsp
