#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "gsp/csv.hpp"
#include "gsp/harness.hpp"
#include "helpers.hpp"
#include "json.hpp"

using namespace gsp;
using namespace gsp::testing;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c = profile_config("desk");
  c.n = 30;
  c.n_graphs = 2;
  c.k = 3;
  c.n_signals = 40;
  c.sample_sizes = {1, 2, 3, 5, 8, 13, 21, 30};
  c.seed = 17;
  return c;
}

}  // namespace

TEST_CASE("Profiles and config parsing") {
  const ExperimentConfig desk = profile_config("desk");
  CHECK(desk.n == 100);
  CHECK(desk.n_graphs == 5);
  CHECK(desk.n_signals == 200);
  CHECK(desk.schemes.size() == 7);
  CHECK(desk.bandwidth(100) == 10);
  CHECK(profile_config("paper").n == 500);
  CHECK(profile_config("paper").bandwidth(500) == 50);
  CHECK_THROWS_AS(profile_config("laptop"), ConfigError);

  const ExperimentConfig c = parse_config(
      R"({"model": {"name": "sbm", "blocks": 4}, "n": 40, "k": 6, "schemes": ["a-optimal", "mmse"],
          "noise_kinds": ["bandlimited"], "snrs": [1, 2], "mus": [0.5], "seed": 9,
          "noise_distribution": "rademacher", "tau_bl_variant": "strict"})",
      desk);
  CHECK(std::get<StochasticBlock>(c.model).blocks == 4);
  CHECK(c.n == 40);
  CHECK(c.bandwidth(40) == 6);
  CHECK(c.schemes == std::vector<Scheme>{Scheme::AOptimal, Scheme::Mmse});
  CHECK(c.noise_kinds == std::vector<NoiseKind>{NoiseKind::Bandlimited});
  CHECK(c.seed == 9);
  CHECK(c.distribution == NoiseDistribution::Rademacher);
  CHECK(c.tau_bl_variant == BandlimitedTauVariant::Strict);
  CHECK(c.n_graphs == 5);

  const ExperimentConfig large = parse_config(R"({"n_graphs": 3, "profile": "paper"})", desk);
  CHECK(large.n == 500);
  CHECK(large.n_graphs == 3);

  CHECK_THROWS_AS(parse_config(R"({"bogus": 1})", desk), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"n": "ten"})", desk), ConfigError);
  CHECK_THROWS_AS(parse_config("{", desk), ConfigError);
  CHECK_THROWS_AS(parse_config("[1]", desk), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schemes": ["greedy"]})", desk), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"name": "er", "attach": 2}})", desk), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json", desk), ConfigError);

  ExperimentConfig bad = desk;
  bad.snrs.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = desk;
  bad.n_signals = 1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = desk;
  bad.sample_sizes = {0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = desk;
  bad.mus = {-1.0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_NOTHROW(desk.validate());

  const ExperimentConfig round = parse_config(config_to_json(c), desk);
  CHECK(config_to_json(round) == config_to_json(c));
}

TEST_CASE("Default sample-size grid") {
  const ExperimentConfig desk = profile_config("desk");
  const std::vector<std::size_t> sizes = desk.sizes(100);
  CHECK(sizes.size() == 20);
  CHECK(sizes.front() == 1);
  CHECK(sizes.back() == 100);
  CHECK(std::is_sorted(sizes.begin(), sizes.end()));
  const std::vector<std::size_t> tiny = desk.sizes(10);
  CHECK(tiny.front() == 1);
  CHECK(tiny.back() == 10);
  CHECK(std::adjacent_find(tiny.begin(), tiny.end()) == tiny.end());
}

TEST_CASE("Closed-form MSE examples") {
  const GraphInstance g = p3();
  const SampleSet all({0, 1, 2}, 3);
  const ReconstructionOperator glr = glr_operator(g.laplacian, 1.0, all);
  CHECK(mse_closed_form(glr, g.spectrum, 2, 1.0, NoiseKind::FullBand) == doctest::Approx(25.0 / 16.0));

  const ReconstructionOperator ls = ls_operator(g.spectrum, 2, SampleSet({0, 2}, 3));
  CHECK(mse_closed_form(ls, g.spectrum, 2, 0.3, NoiseKind::FullBand) == doctest::Approx(0.09 * 2.5));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GraphInstance r = make_instance(0, random_weighted_graph(10, 0.4, seed));
    CounterRng rng(seed);
    for (std::size_t m = 1; m <= 10; ++m) {
      const SampleSet s = uniform_random(10, m, rng);
      const ReconstructionOperator op = ls_operator(r.spectrum, 4, s);
      const double rank = static_cast<double>(ls_rank(r.spectrum, 4, s));
      for (double sigma : {0.5, 1.0, 2.0}) {
        CHECK(std::abs(mse_closed_form(op, r.spectrum, 4, sigma, NoiseKind::Bandlimited) -
                       (4.0 + (sigma * sigma - 1.0) * rank)) < 1e-8);
      }
    }
  }
}

TEST_CASE("Monte-Carlo estimates") {
  const GraphInstance g = make_instance(0, generate_graph(ErdosRenyi{0.5}, 25, 4));
  const SampleSet uniq = greedy_optimal(g.spectrum, 4, Criterion::A, 4);
  const ReconstructionOperator ls = ls_operator(g.spectrum, 4, uniq);
  CounterRng rng(1);
  const McEstimate zero = mse_monte_carlo(g.spectrum, ls, 4, 0.0, NoiseKind::FullBand, 50, rng);
  CHECK(std::abs(zero.mean) < 1e-12);
  CHECK_THROWS_AS(mse_monte_carlo(g.spectrum, ls, 4, 0.0, NoiseKind::FullBand, 1, rng), std::invalid_argument);

  // Mean within four standard errors of the closed form over 100 random configurations.
  std::size_t outside = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterRng cfg(hash_words({i, 5}));
    const std::size_t m = 1 + uniform_below(cfg, 25);
    const SampleSet s = uniform_random(25, m, cfg);
    const NoiseKind kind = i % 2 == 0 ? NoiseKind::FullBand : NoiseKind::Bandlimited;
    const double sigma = 0.1 + 2.0 * uniform01(cfg);
    const Method method = i % 3 == 0 ? Method{LeastSquares{4}} : Method{LaplacianRegularized{0.01 + uniform01(cfg)}};
    const ReconstructionOperator op = make_operator(method, g.spectrum, g.laplacian, s);
    CounterRng draws(hash_words({i, 6}));
    const McEstimate est = mse_monte_carlo(g.spectrum, op, 4, sigma, kind, 400, draws);
    const double closed = mse_closed_form(op, g.spectrum, 4, sigma, kind);
    CHECK(est.ci_lo <= est.mean);
    CHECK(est.mean <= est.ci_hi);
    if (std::abs(est.mean - closed) > 4.0 * est.std_error) ++outside;
  }
  CHECK(outside <= 1);

  const ReconstructionOperator glr = glr_operator(g.laplacian, 0.1, uniform_random(25, 10, rng));
  CounterRng a(7);
  CounterRng b(7);
  const McEstimate small = mse_monte_carlo(g.spectrum, glr, 4, 1.0, NoiseKind::FullBand, 4000, a);
  const McEstimate large = mse_monte_carlo(g.spectrum, glr, 4, 1.0, NoiseKind::FullBand, 8000, b);
  const double ratio = (large.ci_hi - large.ci_lo) / (small.ci_hi - small.ci_lo);
  CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("parallel_for visits every index and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(100, 3,
                               [](std::size_t i) {
                                 if (i == 42) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("MSE sweep rows") {
  ExperimentConfig c = small_config();
  c.noise_kinds = {NoiseKind::FullBand, NoiseKind::Bandlimited};
  const std::vector<MseRow> rows = mse_sweep_rows(c);
  // 2 graphs x 2 kinds x 3 snrs x 8 sizes x (4 LS schemes + 3 GLR schemes x 3 mus)
  CHECK(rows.size() == 2 * 2 * 3 * 8 * (4 + 3 * 3));

  std::map<std::tuple<std::size_t, Scheme, NoiseKind, double>, std::vector<const MseRow*>> ls_curves;
  for (const MseRow& r : rows) {
    CHECK(r.mc.ci_lo <= r.mc.mean);
    CHECK(r.mc.mean <= r.mc.ci_hi);
    if (scheme_uses_glr(r.scheme)) {
      REQUIRE(r.mu.has_value());
      REQUIRE(r.mse_upper_bound.has_value());
      CHECK(r.mse_closed <= *r.mse_upper_bound);
    } else {
      CHECK_FALSE(r.mu.has_value());
      CHECK_FALSE(r.mse_upper_bound.has_value());
      ls_curves[{r.graph_id, r.scheme, r.noise_kind, r.snr}].push_back(&r);
    }
  }
  for (const auto& [key, curve] : ls_curves) {
    const auto& [graph, scheme, kind, snr] = key;
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (kind == NoiseKind::Bandlimited && curve[i - 1]->sample_size >= 3 &&
          !scheme_is_random(scheme)) {
        CHECK(curve[i]->mse_closed == doctest::Approx(curve[i - 1]->mse_closed));
      }
      if (snr == 1e10) CHECK(curve[i]->mse_closed <= curve[i - 1]->mse_closed * (1 + 1e-9));
    }
  }

  ExperimentConfig threaded = c;
  threaded.threads = 4;
  CHECK(format_mse_csv(mse_sweep_rows(threaded)) == format_mse_csv(rows));
  ExperimentConfig reseeded = c;
  reseeded.seed = 18;
  CHECK(format_mse_csv(mse_sweep_rows(reseeded)) != format_mse_csv(rows));
}

TEST_CASE("Tau sweep rows") {
  ExperimentConfig c = small_config();
  c.sample_sizes.clear();
  const std::vector<TauRow> rows = tau_sweep_rows(c);
  CHECK(rows.size() == 2 * 4 * 30);  // LS schemes only, full permutation each
  std::map<std::pair<std::size_t, Scheme>, std::size_t> positive;
  for (const TauRow& r : rows) {
    CHECK_FALSE(scheme_uses_glr(r.scheme));
    if (r.tau > 0.0) positive[{r.graph_id, r.scheme}]++;
    if (r.scheme == Scheme::AOptimal) {
      if (r.step <= 3) CHECK(r.tau >= 3.0 / 30.0);
      else CHECK(r.tau <= 0.0);
    }
  }
  for (const auto& [key, count] : positive) CHECK(count == 3);
  CHECK(positive.size() == 8);
}

TEST_CASE("GLR bounds and condition rows") {
  const std::string dir = scratch_dir("harness_p3").string();
  const std::string edges = dir + "/p3.edges";
  {
    std::ofstream out(edges);
    out << "0 1\n1 2\n";
  }
  ExperimentConfig c = profile_config("desk");
  c.graph_file = edges;
  c.k = 2;
  c.mus = {1.0};
  const std::vector<GlrBoundsRow> rows = glr_bounds_rows(c);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].report.mopt.cond_fullband);
  const std::vector<csv::Row> parsed = csv::parse(format_glr_bounds_csv(rows));
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].size() == 21);
  CHECK(parsed[1][18] == "false");
  CHECK(parsed[1][1] == "file:p3.edges");

  ExperimentConfig er = profile_config("desk");
  er.n = 200;
  er.n_graphs = 1;
  const std::vector<GlrBoundsRow> er_rows = glr_bounds_rows(er);
  REQUIRE(er_rows.size() == 3);
  CHECK(er_rows[0].report.glr.tau > er_rows[1].report.glr.tau);
  CHECK(er_rows[1].report.glr.tau > er_rows[2].report.glr.tau);

  ExperimentConfig cond = profile_config("desk");
  cond.n_graphs = 4;
  const ConditionsRow row = check_conditions_row(cond);
  CHECK(row.model == "er");
  CHECK(row.frac_thm5 == 1.0);
  cond.n_graphs = 0;
  CHECK_THROWS_AS(check_conditions_row(cond), ConfigError);
}

TEST_CASE("CSV formatting") {
  CHECK(csv::quote("plain") == "plain");
  CHECK(csv::quote("a,b") == "\"a,b\"");
  CHECK(csv::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv::number(0.1) == "0.1");
  CHECK(csv::number(1e10) == "10000000000");
  CHECK(csv::number(std::nan("")) == "");
  CHECK(csv::number(std::optional<double>{}) == "");
  const std::vector<csv::Row> rows = csv::parse("a,\"b,c\",\"d\"\"e\"\r\n1,,3\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == csv::Row{"a", "b,c", "d\"e"});
  CHECK(rows[1] == csv::Row{"1", "", "3"});

  ExperimentConfig c = small_config();
  c.model = StochasticBlock{};
  c.schemes = {Scheme::UniformRandom};
  c.snrs = {1.0};
  c.mus = {0.1};
  c.sample_sizes = {5};
  const std::string text = format_mse_csv(mse_sweep_rows(c));
  CHECK(text.find("\"sbm(blocks=5,p_in=0.7,p_out=0.1)\"") != std::string::npos);
  const std::vector<csv::Row> parsed = csv::parse(text);
  REQUIRE(parsed.size() == 3);
  CHECK(parsed[1][1] == "sbm(blocks=5,p_in=0.7,p_out=0.1)");
  CHECK(parsed[1][7] == "0.1");
}

TEST_CASE("Output files and metadata") {
  ExperimentConfig c = small_config();
  c.out_dir = scratch_dir("harness_out");
  c.schemes = {Scheme::AOptimal, Scheme::Mmse};
  c.threads = 3;
  const OutputFile f = sweep_mse(c);
  CHECK(f.kind == "mse_sweep");
  CHECK(std::filesystem::exists(f.path));
  CHECK(csv::parse(read_file(f.path)).size() == f.rows + 1);
  const nlohmann::json summary = nlohmann::json::parse(summary_line(f));
  CHECK(summary["rows"] == f.rows);
  CHECK(summary["kind"] == "mse_sweep");

  write_metadata(c, "sweep-mse");
  const nlohmann::json meta = nlohmann::json::parse(read_file(c.out_dir / "metadata.json"));
  CHECK(meta["command"] == "sweep-mse");
  CHECK(meta["confidence_interval"]["method"] == "normal-approximation");
  CHECK(meta["config"]["seed"] == 17);
  CHECK_FALSE(meta["config"].contains("threads"));

  const std::vector<OutputFile> graphs = gen_graphs(c);
  REQUIRE(graphs.size() == 2);
  const Graph reloaded = load_graph(graphs[1].path);
  CHECK(reloaded.edges() == make_graphs(c)[1].graph.edges());
}
