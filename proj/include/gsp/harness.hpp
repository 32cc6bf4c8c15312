#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gsp/graph.hpp"
#include "gsp/reconstruction.hpp"
#include "gsp/rng.hpp"
#include "gsp/sampling.hpp"
#include "gsp/signal.hpp"
#include "gsp/theory.hpp"

namespace gsp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string profile = "desk";
  GraphModel model = ErdosRenyi{0.8};
  std::optional<std::filesystem::path> graph_file;
  std::size_t n = 100;
  std::size_t n_graphs = 5;
  std::optional<std::size_t> k;  // floor(N/10) when absent
  std::vector<Scheme> schemes;
  std::vector<NoiseKind> noise_kinds;
  std::vector<double> snrs;
  std::vector<double> mus;
  std::vector<std::size_t> sample_sizes;  // default grid when empty
  std::size_t n_signals = 200;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::filesystem::path out_dir = ".";
  NoiseDistribution distribution = NoiseDistribution::Gaussian;
  BandlimitedTauVariant tau_bl_variant = BandlimitedTauVariant::Printed;

  std::size_t bandwidth(std::size_t n_vertices) const;
  /// Explicit sizes, or round(N f) over the default fraction grid, clipped to
  /// [1, N] and deduplicated.
  std::vector<std::size_t> sizes(std::size_t n_vertices) const;
  /// Throws ConfigError when a grid is empty or a value is out of range.
  void validate() const;
};

/// Default-parameter model for "er", "ba" or "sbm".
GraphModel parse_model_name(const std::string& name);

/// "desk" (N=100, 5 graphs) or "paper" (N=500, 10 graphs); 200 signals each.
ExperimentConfig profile_config(const std::string& name);

/// Applies the keys of a JSON object on top of `base`. Unknown keys and
/// malformed values raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text, ExperimentConfig base);
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base);
std::string config_to_json(const ExperimentConfig& config);

struct GraphInstance {
  std::size_t id = 0;
  Graph graph;
  Eigen::MatrixXd laplacian;
  Spectrum spectrum;
};

GraphInstance make_instance(std::size_t id, Graph graph);
/// Seed for graph `graph_id` of an experiment.
std::uint64_t graph_seed(std::uint64_t master_seed, std::size_t graph_id);
/// The experiment's graphs (the loaded file, or n_graphs model draws).
std::vector<GraphInstance> make_graphs(const ExperimentConfig& config);

/// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

double mse_closed_form(const ReconstructionOperator& op, const Spectrum& spectrum, std::size_t k,
                       double sigma, NoiseKind kind);

struct McEstimate {
  double mean = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double std_error = 0.0;
};

/// Two-sided 90% normal-approximation interval.
inline constexpr double kCiZ = 1.645;

/// Mean squared reconstruction error over n_signals draws of (x, noise).
McEstimate mse_monte_carlo(const Spectrum& spectrum, const ReconstructionOperator& op,
                           std::size_t k, double sigma, NoiseKind kind, std::size_t n_signals,
                           CounterRng& rng,
                           NoiseDistribution dist = NoiseDistribution::Gaussian);

/// Sample order of `scheme` on one graph, long enough for `m` samples.
/// `mu`, `kind` and `snr` are only read by the MMSE scheme; `rng` only by the
/// random ones.
SampleSet scheme_order(Scheme scheme, const GraphInstance& g, std::size_t k, std::size_t m,
                       double mu, NoiseKind kind, double snr, CounterRng& rng);

struct MseRow {
  std::size_t graph_id = 0;
  std::string model;
  std::size_t n = 0;
  std::size_t k = 0;
  Scheme scheme = Scheme::AOptimal;
  NoiseKind noise_kind = NoiseKind::FullBand;
  double snr = 0.0;
  std::optional<double> mu;
  std::size_t sample_size = 0;
  McEstimate mc;
  double mse_closed = 0.0;
  std::optional<double> mse_upper_bound;
};

struct TauRow {
  std::size_t graph_id = 0;
  std::string model;
  std::size_t n = 0;
  std::size_t k = 0;
  Scheme scheme = Scheme::AOptimal;
  std::size_t step = 0;
  std::size_t vertex_added = 0;
  double tau = 0.0;
};

struct GlrBoundsRow {
  std::size_t graph_id = 0;
  std::string model;
  ThresholdReport report;
};

struct ConditionsRow {
  std::string model;
  std::size_t n = 0;
  std::size_t n_graphs = 0;
  double frac_thm5 = 0.0;
  double frac_thm_bl = 0.0;
};

std::vector<MseRow> mse_sweep_rows(const ExperimentConfig& config);
std::vector<TauRow> tau_sweep_rows(const ExperimentConfig& config);
std::vector<GlrBoundsRow> glr_bounds_rows(const ExperimentConfig& config);
ConditionsRow check_conditions_row(const ExperimentConfig& config);

std::string format_mse_csv(const std::vector<MseRow>& rows);
std::string format_tau_csv(const std::vector<TauRow>& rows);
std::string format_glr_bounds_csv(const std::vector<GlrBoundsRow>& rows);
std::string format_conditions_csv(const std::vector<ConditionsRow>& rows);

/// Output of one subcommand: file written and its row count.
struct OutputFile {
  std::filesystem::path path;
  std::string kind;
  std::size_t rows = 0;
};

/// One-line JSON summary printed by the CLI for each output file.
std::string summary_line(const OutputFile& file);

OutputFile sweep_mse(const ExperimentConfig& config);
OutputFile sweep_tau(const ExperimentConfig& config);
OutputFile glr_bounds_report(const ExperimentConfig& config);
OutputFile check_conditions(const ExperimentConfig& config);
std::vector<OutputFile> gen_graphs(const ExperimentConfig& config);

/// Writes metadata.json (config and confidence-interval method) in out_dir.
void write_metadata(const ExperimentConfig& config, const std::string& command);

/// CLI entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace gsp
