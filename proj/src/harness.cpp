#include "gsp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "gsp/csv.hpp"
#include "gsp/kernels/kernels.hpp"
#include "json.hpp"

namespace gsp {

using nlohmann::json;

namespace {

constexpr double kDefaultFractions[] = {0.01, 0.02, 0.04, 0.06, 0.08, 0.09, 0.10,
                                        0.11, 0.12, 0.14, 0.16, 0.2,  0.25, 0.3,
                                        0.4,  0.5,  0.6,  0.7,  0.85, 1.0};

// FNV-1a, used to turn names into stable stream ids.
std::uint64_t name_id(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t double_bits(double x) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &x, sizeof bits);
  return bits;
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> schemes = {
      Scheme::AOptimal,       Scheme::DOptimal, Scheme::EOptimal, Scheme::WeightedRandom,
      Scheme::UniformRandom,  Scheme::Mmse,     Scheme::Wmse};
  return schemes;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error("cannot create directory '" + path.parent_path().string() +
                               "': " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

GraphModel parse_model_name(const std::string& name) {
  if (name == "er") return ErdosRenyi{};
  if (name == "ba") return BarabasiAlbert{};
  if (name == "sbm") return StochasticBlock{};
  throw ConfigError("unknown graph model '" + name + "' (expected er, ba or sbm)");
}

std::size_t ExperimentConfig::bandwidth(std::size_t n_vertices) const {
  if (k) return *k;
  return std::max<std::size_t>(1, n_vertices / 10);
}

std::vector<std::size_t> ExperimentConfig::sizes(std::size_t n_vertices) const {
  std::vector<std::size_t> out;
  if (!sample_sizes.empty()) {
    out = sample_sizes;
  } else {
    for (double f : kDefaultFractions) {
      const long m = std::lround(f * static_cast<double>(n_vertices));
      out.push_back(static_cast<std::size_t>(std::clamp<long>(m, 1, static_cast<long>(n_vertices))));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void ExperimentConfig::validate() const {
  if (!graph_file && n < 2) throw ConfigError("n must be at least 2");
  if (!graph_file && n_graphs == 0) throw ConfigError("n_graphs must be positive");
  if (schemes.empty()) throw ConfigError("schemes must be nonempty");
  if (noise_kinds.empty()) throw ConfigError("noise_kinds must be nonempty");
  if (snrs.empty()) throw ConfigError("snrs must be nonempty");
  if (mus.empty()) throw ConfigError("mus must be nonempty");
  if (n_signals < 2) throw ConfigError("n_signals must be at least 2");
  for (double s : snrs) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("every snr must be positive and finite");
  }
  for (double m : mus) {
    if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("every mu must be positive and finite");
  }
  if (k && *k == 0) throw ConfigError("k must be positive");
  if (!graph_file) {
    if (k && *k > n) throw ConfigError("k exceeds n");
    for (std::size_t m : sample_sizes) {
      if (m == 0 || m > n) throw ConfigError("sample sizes must lie in [1, n]");
    }
  }
  if (threads == 0) throw ConfigError("threads must be positive");
}

ExperimentConfig profile_config(const std::string& name) {
  ExperimentConfig c;
  if (name == "desk") {
    c.n = 100;
    c.n_graphs = 5;
  } else if (name == "paper") {
    c.n = 500;
    c.n_graphs = 10;
  } else {
    throw ConfigError("unknown profile '" + name + "' (expected desk or paper)");
  }
  c.profile = name;
  c.model = ErdosRenyi{0.8};
  c.schemes = all_schemes();
  c.noise_kinds = {NoiseKind::FullBand};
  c.snrs = {0.1, 100.0, 1e10};
  c.mus = {1e-4, 1e-2, 1.0};
  c.n_signals = 200;
  return c;
}

namespace {

GraphModel model_from_json(const json& j) {
  if (j.is_string()) return parse_model_name(j.get<std::string>());
  if (!j.is_object() || !j.contains("name")) {
    throw ConfigError("model must be a name or an object with a \"name\" key");
  }
  GraphModel model = parse_model_name(j.at("name").get<std::string>());
  for (const auto& [key, value] : j.items()) {
    if (key == "name") continue;
    if (auto* er = std::get_if<ErdosRenyi>(&model); er && key == "p") {
      er->p = value.get<double>();
    } else if (auto* ba = std::get_if<BarabasiAlbert>(&model); ba && key == "attach") {
      ba->attach = value.get<std::size_t>();
    } else if (auto* sbm = std::get_if<StochasticBlock>(&model);
               sbm && (key == "blocks" || key == "p_in" || key == "p_out")) {
      if (key == "blocks") sbm->blocks = value.get<std::size_t>();
      else if (key == "p_in") sbm->p_in = value.get<double>();
      else sbm->p_out = value.get<double>();
    } else {
      throw ConfigError("unknown parameter '" + key + "' for model " + model_name(model));
    }
  }
  return model;
}

json model_to_json(const GraphModel& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ErdosRenyi>) {
          return {{"name", "er"}, {"p", m.p}};
        } else if constexpr (std::is_same_v<T, BarabasiAlbert>) {
          return {{"name", "ba"}, {"attach", m.attach}};
        } else {
          return {{"name", "sbm"}, {"blocks", m.blocks}, {"p_in", m.p_in}, {"p_out", m.p_out}};
        }
      },
      model);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, ExperimentConfig c) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    if (j.contains("profile")) c = profile_config(j.at("profile").get<std::string>());
    for (const auto& [key, value] : j.items()) {
      if (key == "profile") {
        continue;
      } else if (key == "model") {
        c.model = model_from_json(value);
      } else if (key == "graph_file") {
        c.graph_file = std::filesystem::path(value.get<std::string>());
      } else if (key == "n") {
        c.n = value.get<std::size_t>();
      } else if (key == "n_graphs") {
        c.n_graphs = value.get<std::size_t>();
      } else if (key == "k") {
        if (value.is_null()) c.k.reset();
        else c.k = value.get<std::size_t>();
      } else if (key == "schemes") {
        c.schemes.clear();
        for (const auto& s : value) c.schemes.push_back(parse_scheme(s.get<std::string>()));
      } else if (key == "noise_kinds") {
        c.noise_kinds.clear();
        for (const auto& s : value) c.noise_kinds.push_back(parse_noise_kind(s.get<std::string>()));
      } else if (key == "snrs") {
        c.snrs = value.get<std::vector<double>>();
      } else if (key == "mus") {
        c.mus = value.get<std::vector<double>>();
      } else if (key == "sample_sizes") {
        c.sample_sizes = value.get<std::vector<std::size_t>>();
      } else if (key == "n_signals") {
        c.n_signals = value.get<std::size_t>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "threads") {
        c.threads = value.get<std::size_t>();
      } else if (key == "out_dir") {
        c.out_dir = value.get<std::string>();
      } else if (key == "noise_distribution") {
        c.distribution = parse_noise_distribution(value.get<std::string>());
      } else if (key == "tau_bl_variant") {
        const std::string v = value.get<std::string>();
        if (v == "printed") c.tau_bl_variant = BandlimitedTauVariant::Printed;
        else if (v == "strict") c.tau_bl_variant = BandlimitedTauVariant::Strict;
        else throw ConfigError("tau_bl_variant must be \"printed\" or \"strict\"");
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["profile"] = c.profile;
  j["model"] = model_to_json(c.model);
  if (c.graph_file) j["graph_file"] = c.graph_file->string();
  j["n"] = c.n;
  j["n_graphs"] = c.n_graphs;
  j["k"] = c.k ? json(*c.k) : json(nullptr);
  j["schemes"] = json::array();
  for (Scheme s : c.schemes) j["schemes"].push_back(to_string(s));
  j["noise_kinds"] = json::array();
  for (NoiseKind kind : c.noise_kinds) j["noise_kinds"].push_back(to_string(kind));
  j["snrs"] = c.snrs;
  j["mus"] = c.mus;
  j["sample_sizes"] = c.sample_sizes;
  j["n_signals"] = c.n_signals;
  j["seed"] = c.seed;
  j["noise_distribution"] = to_string(c.distribution);
  j["tau_bl_variant"] = c.tau_bl_variant == BandlimitedTauVariant::Printed ? "printed" : "strict";
  return j.dump(2);
}

GraphInstance make_instance(std::size_t id, Graph graph) {
  Eigen::MatrixXd laplacian = laplacian_from_graph(graph);
  Spectrum spec = spectrum(laplacian);
  return GraphInstance{id, std::move(graph), std::move(laplacian), std::move(spec)};
}

std::uint64_t graph_seed(std::uint64_t master_seed, std::size_t graph_id) {
  return hash_words({master_seed, name_id("graph"), graph_id});
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<GraphInstance> make_graphs(const ExperimentConfig& config) {
  std::vector<GraphInstance> out;
  if (config.graph_file) {
    out.push_back(make_instance(0, load_graph(*config.graph_file)));
    return out;
  }
  std::vector<std::optional<GraphInstance>> slots(config.n_graphs);
  parallel_for(config.n_graphs, config.threads, [&](std::size_t i) {
    slots[i] = make_instance(i, generate_graph(config.model, config.n, graph_seed(config.seed, i)));
  });
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

double mse_closed_form(const ReconstructionOperator& op, const Spectrum& spectrum, std::size_t k,
                       double sigma, NoiseKind kind) {
  return xi_pair(op, spectrum, k, kind).mse(sigma);
}

McEstimate mse_monte_carlo(const Spectrum& spectrum, const ReconstructionOperator& op,
                           std::size_t k, double sigma, NoiseKind kind, std::size_t n_signals,
                           CounterRng& rng, NoiseDistribution dist) {
  if (n_signals < 2) throw std::invalid_argument("mse_monte_carlo: need at least two signals");
  const std::size_t n = spectrum.size();
  const SignalSpec signal{k};
  std::vector<double> errors(n_signals);
  for (std::size_t j = 0; j < n_signals; ++j) {
    const Eigen::VectorXd x = draw_signal(signal, spectrum, rng, dist);
    Eigen::VectorXd y = x;
    if (sigma != 0.0) {
      const Eigen::VectorXd noise = draw_noise(kind, spectrum, k, rng, dist);
      kernels::axpy(sigma, noise.data(), y.data(), n);
    }
    const Eigen::VectorXd x_hat = reconstruct(op, restrict_to(y, op.sample()));
    errors[j] = kernels::squared_distance(x_hat.data(), x.data(), n);
  }
  double mean = 0.0;
  for (double e : errors) mean += e;
  mean /= static_cast<double>(n_signals);
  double ss = 0.0;
  for (double e : errors) ss += (e - mean) * (e - mean);
  const double variance = ss / static_cast<double>(n_signals - 1);
  McEstimate out;
  out.mean = mean;
  out.std_error = std::sqrt(variance / static_cast<double>(n_signals));
  out.ci_lo = mean - kCiZ * out.std_error;
  out.ci_hi = mean + kCiZ * out.std_error;
  return out;
}

SampleSet scheme_order(Scheme scheme, const GraphInstance& g, std::size_t k, std::size_t m,
                       double mu, NoiseKind kind, double snr, CounterRng& rng) {
  switch (scheme) {
    case Scheme::AOptimal:
      return greedy_optimal(g.spectrum, k, Criterion::A, m);
    case Scheme::DOptimal:
      return greedy_optimal(g.spectrum, k, Criterion::D, m);
    case Scheme::EOptimal:
      return greedy_optimal(g.spectrum, k, Criterion::E, m);
    case Scheme::WeightedRandom:
      return weighted_random(g.spectrum, k, m, rng);
    case Scheme::UniformRandom:
      return uniform_random(g.spectrum.size(), m, rng);
    case Scheme::Mmse:
      return greedy_mmse_glr(g.laplacian, g.spectrum, k, mu, kind, snr, m);
    case Scheme::Wmse:
      return greedy_wmse_glr(g.spectrum, k, m);
  }
  throw std::logic_error("unhandled scheme");
}

namespace {

CounterRng order_stream(const ExperimentConfig& config, std::size_t graph_id, Scheme scheme) {
  return task_stream(config.seed, graph_id, hash_words({name_id("order"), name_id(to_string(scheme))}));
}

struct OrderKey {
  std::size_t graph = 0;
  Scheme scheme = Scheme::AOptimal;
  NoiseKind kind = NoiseKind::FullBand;
  double snr = 0.0;
  double mu = 0.0;

  auto tie() const { return std::tie(graph, scheme, kind, snr, mu); }
  bool operator<(const OrderKey& o) const { return tie() < o.tie(); }
};

struct MsePoint {
  std::size_t graph = 0;
  Scheme scheme = Scheme::AOptimal;
  NoiseKind kind = NoiseKind::FullBand;
  double snr = 0.0;
  std::optional<double> mu;
  std::size_t m = 0;
  std::size_t order = 0;
};

}  // namespace

std::vector<MseRow> mse_sweep_rows(const ExperimentConfig& config) {
  config.validate();
  const std::vector<GraphInstance> graphs = make_graphs(config);

  std::map<OrderKey, std::size_t> order_index;
  std::vector<OrderKey> order_keys;
  std::vector<MsePoint> points;
  for (const GraphInstance& g : graphs) {
    const std::size_t n = g.spectrum.size();
    const std::vector<std::size_t> sizes = config.sizes(n);
    for (Scheme scheme : config.schemes) {
      const bool glr = scheme_uses_glr(scheme);
      for (NoiseKind kind : config.noise_kinds) {
        for (double snr : config.snrs) {
          const std::vector<std::optional<double>> mus =
              glr ? std::vector<std::optional<double>>(config.mus.begin(), config.mus.end())
                  : std::vector<std::optional<double>>{std::nullopt};
          for (const std::optional<double>& mu : mus) {
            OrderKey key{g.id, scheme, NoiseKind::FullBand, 0.0, 0.0};
            if (scheme == Scheme::Mmse) {
              key.kind = kind;
              key.snr = snr;
              key.mu = *mu;
            }
            auto [it, inserted] = order_index.emplace(key, order_keys.size());
            if (inserted) order_keys.push_back(key);
            for (std::size_t m : sizes) {
              if (m > n) throw ConfigError("sample size exceeds the graph size");
              points.push_back(MsePoint{g.id, scheme, kind, snr, mu, m, it->second});
            }
          }
        }
      }
    }
  }

  std::vector<std::optional<SampleSet>> orders(order_keys.size());
  parallel_for(order_keys.size(), config.threads, [&](std::size_t i) {
    const OrderKey& key = order_keys[i];
    const GraphInstance& g = graphs[key.graph];
    const std::size_t n = g.spectrum.size();
    const std::vector<std::size_t> sizes = config.sizes(n);
    CounterRng rng = order_stream(config, key.graph, key.scheme);
    orders[i] = scheme_order(key.scheme, g, config.bandwidth(n), sizes.back(), key.mu, key.kind,
                             key.snr, rng);
  });

  std::vector<std::optional<MseRow>> rows(points.size());
  parallel_for(points.size(), config.threads, [&](std::size_t i) {
    const MsePoint& p = points[i];
    const GraphInstance& g = graphs[p.graph];
    const std::size_t n = g.spectrum.size();
    const std::size_t k = config.bandwidth(n);
    const SampleSet s = orders[p.order]->prefix(p.m);
    const Method method = p.mu ? Method{LaplacianRegularized{*p.mu}} : Method{LeastSquares{k}};
    const ReconstructionOperator op = make_operator(method, g.spectrum, g.laplacian, s);
    const double sigma = sigma_from_snr(p.snr, p.kind, k, n);

    MseRow row;
    row.graph_id = g.id;
    row.model = g.graph.model_tag();
    row.n = n;
    row.k = k;
    row.scheme = p.scheme;
    row.noise_kind = p.kind;
    row.snr = p.snr;
    row.mu = p.mu;
    row.sample_size = p.m;
    row.mse_closed = mse_closed_form(op, g.spectrum, k, sigma, p.kind);
    if (p.mu && k >= 2) row.mse_upper_bound = mse_upper_bound(g.spectrum, k, p.m, sigma, p.kind);
    const std::uint64_t point_id =
        hash_words({name_id(to_string(p.scheme)), static_cast<std::uint64_t>(p.kind),
                    double_bits(p.snr), double_bits(p.mu.value_or(0.0)), p.m});
    CounterRng rng = task_stream(config.seed, g.id, point_id);
    row.mc = mse_monte_carlo(g.spectrum, op, k, sigma, p.kind, config.n_signals, rng,
                             config.distribution);
    rows[i] = std::move(row);
  });

  std::vector<MseRow> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(std::move(*r));
  return out;
}

std::vector<TauRow> tau_sweep_rows(const ExperimentConfig& config) {
  config.validate();
  const std::vector<GraphInstance> graphs = make_graphs(config);
  struct Job {
    std::size_t graph;
    Scheme scheme;
  };
  std::vector<Job> jobs;
  for (const GraphInstance& g : graphs) {
    for (Scheme scheme : config.schemes) {
      if (!scheme_uses_glr(scheme)) jobs.push_back({g.id, scheme});
    }
  }
  std::vector<std::vector<TauRow>> results(jobs.size());
  parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
    const GraphInstance& g = graphs[jobs[i].graph];
    const std::size_t n = g.spectrum.size();
    const std::size_t k = config.bandwidth(n);
    CounterRng rng = order_stream(config, g.id, jobs[i].scheme);
    const SampleSet order = scheme_order(jobs[i].scheme, g, k, config.sizes(n).back(), 0.0,
                                         NoiseKind::FullBand, 1.0, rng);
    const std::vector<double> taus = tau_ls_sequence(g.spectrum, k, order.order());
    for (std::size_t step = 0; step < taus.size(); ++step) {
      results[i].push_back(TauRow{g.id, g.graph.model_tag(), n, k, jobs[i].scheme, step + 1,
                                  order[step], taus[step]});
    }
  });
  std::vector<TauRow> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<GlrBoundsRow> glr_bounds_rows(const ExperimentConfig& config) {
  config.validate();
  const std::vector<GraphInstance> graphs = make_graphs(config);
  std::vector<GlrBoundsRow> out(graphs.size() * config.mus.size());
  parallel_for(out.size(), config.threads, [&](std::size_t i) {
    const GraphInstance& g = graphs[i / config.mus.size()];
    const double mu = config.mus[i % config.mus.size()];
    out[i] = GlrBoundsRow{g.id, g.graph.model_tag(),
                          threshold_report(g.spectrum, config.bandwidth(g.spectrum.size()), mu,
                                           config.tau_bl_variant)};
  });
  return out;
}

ConditionsRow check_conditions_row(const ExperimentConfig& config) {
  if (config.n_graphs == 0) throw ConfigError("n_graphs must be positive");
  if (config.n < 2) throw ConfigError("n must be at least 2");
  const std::size_t k = config.bandwidth(config.n);
  std::vector<MoptResult> results(config.n_graphs);
  parallel_for(config.n_graphs, config.threads, [&](std::size_t i) {
    const Graph g = generate_graph(config.model, config.n, graph_seed(config.seed, i));
    results[i] = m_opt_search(spectrum(laplacian_from_graph(g)), k);
  });
  std::size_t thm5 = 0;
  std::size_t thm_bl = 0;
  for (const MoptResult& r : results) {
    thm5 += r.cond_fullband ? 1 : 0;
    thm_bl += r.cond_bl ? 1 : 0;
  }
  const double total = static_cast<double>(config.n_graphs);
  return ConditionsRow{model_name(config.model), config.n, config.n_graphs,
                       static_cast<double>(thm5) / total, static_cast<double>(thm_bl) / total};
}

std::string format_mse_csv(const std::vector<MseRow>& rows) {
  std::ostringstream out;
  csv::write_row(out, {"graph_id", "model", "n", "k", "scheme", "noise_kind", "snr", "mu",
                       "sample_size", "mse_mc_mean", "mse_mc_ci_lo", "mse_mc_ci_hi", "mse_closed",
                       "mse_upper_bound"});
  for (const MseRow& r : rows) {
    csv::write_row(out, {std::to_string(r.graph_id), r.model, std::to_string(r.n),
                         std::to_string(r.k), to_string(r.scheme), to_string(r.noise_kind),
                         csv::number(r.snr), csv::number(r.mu), std::to_string(r.sample_size),
                         csv::number(r.mc.mean), csv::number(r.mc.ci_lo), csv::number(r.mc.ci_hi),
                         csv::number(r.mse_closed), csv::number(r.mse_upper_bound)});
  }
  return out.str();
}

std::string format_tau_csv(const std::vector<TauRow>& rows) {
  std::ostringstream out;
  csv::write_row(out, {"graph_id", "model", "n", "k", "scheme", "step", "vertex_added", "tau"});
  for (const TauRow& r : rows) {
    csv::write_row(out, {std::to_string(r.graph_id), r.model, std::to_string(r.n),
                         std::to_string(r.k), to_string(r.scheme), std::to_string(r.step),
                         std::to_string(r.vertex_added), csv::number(r.tau)});
  }
  return out.str();
}

std::string format_glr_bounds_csv(const std::vector<GlrBoundsRow>& rows) {
  std::ostringstream out;
  csv::write_row(out, {"graph_id", "model", "n", "k", "mu", "r", "r_bl", "lambda_bar", "m_opt",
                       "B_mopt", "mu_ub", "tau_glr", "m_opt_bl", "Bk_moptbl", "mu_ub_bl",
                       "tau_glr_bl", "mu_ub_weak", "tau_glr_weak", "cond_fullband", "cond_bl",
                       "cond_weak"});
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  for (const GlrBoundsRow& row : rows) {
    const ThresholdReport& r = row.report;
    csv::write_row(out, {std::to_string(row.graph_id), row.model, std::to_string(r.n),
                         std::to_string(r.k), csv::number(r.mu), csv::number(r.ratios.r),
                         csv::number(r.ratios.r_bl), csv::number(r.ratios.lambda_bar),
                         std::to_string(r.mopt.m_opt), csv::number(r.mopt.B_mopt),
                         csv::number(r.glr.mu_ub), csv::number(r.glr.tau),
                         std::to_string(r.mopt.m_opt_bl), csv::number(r.mopt.Bk_moptbl),
                         csv::number(r.glr_bl.mu_ub), csv::number(r.glr_bl.tau),
                         csv::number(r.glr_weak.mu_ub), csv::number(r.glr_weak.tau),
                         flag(r.mopt.cond_fullband), flag(r.mopt.cond_bl), flag(r.mopt.cond_weak)});
  }
  return out.str();
}

std::string format_conditions_csv(const std::vector<ConditionsRow>& rows) {
  std::ostringstream out;
  csv::write_row(out, {"model", "n", "n_graphs", "frac_thm5", "frac_thm_bl"});
  for (const ConditionsRow& r : rows) {
    csv::write_row(out, {r.model, std::to_string(r.n), std::to_string(r.n_graphs),
                         csv::number(r.frac_thm5), csv::number(r.frac_thm_bl)});
  }
  return out.str();
}

std::string summary_line(const OutputFile& file) {
  json j;
  j["file"] = file.path.string();
  j["kind"] = file.kind;
  j["rows"] = file.rows;
  return j.dump();
}

void write_metadata(const ExperimentConfig& config, const std::string& command) {
  json j;
  j["command"] = command;
  j["confidence_interval"] = {{"method", "normal-approximation"},
                              {"level", 0.90},
                              {"z", kCiZ}};
  j["config"] = json::parse(config_to_json(config));
  write_text(config.out_dir / "metadata.json", j.dump(2) + "\n");
}

OutputFile sweep_mse(const ExperimentConfig& config) {
  const std::vector<MseRow> rows = mse_sweep_rows(config);
  const std::filesystem::path path = config.out_dir / "mse_sweep.csv";
  write_text(path, format_mse_csv(rows));
  return {path, "mse_sweep", rows.size()};
}

OutputFile sweep_tau(const ExperimentConfig& config) {
  const std::vector<TauRow> rows = tau_sweep_rows(config);
  const std::filesystem::path path = config.out_dir / "tau_sweep.csv";
  write_text(path, format_tau_csv(rows));
  return {path, "tau_sweep", rows.size()};
}

OutputFile glr_bounds_report(const ExperimentConfig& config) {
  const std::vector<GlrBoundsRow> rows = glr_bounds_rows(config);
  const std::filesystem::path path = config.out_dir / "glr_thresholds.csv";
  write_text(path, format_glr_bounds_csv(rows));
  return {path, "glr_thresholds", rows.size()};
}

OutputFile check_conditions(const ExperimentConfig& config) {
  const ConditionsRow row = check_conditions_row(config);
  const std::filesystem::path path = config.out_dir / "conditions.csv";
  write_text(path, format_conditions_csv({row}));
  return {path, "conditions", 1};
}

std::vector<OutputFile> gen_graphs(const ExperimentConfig& config) {
  const std::vector<GraphInstance> graphs = make_graphs(config);
  std::vector<OutputFile> out;
  for (const GraphInstance& g : graphs) {
    const std::filesystem::path path =
        config.out_dir / ("graph_" + std::to_string(g.id) + ".edges");
    write_text(path, format_edge_list(g.graph));
    out.push_back({path, "edge_list", g.graph.edges().size()});
  }
  return out;
}

}  // namespace gsp
