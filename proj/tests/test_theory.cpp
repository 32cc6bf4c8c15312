#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "gsp/theory.hpp"
#include "helpers.hpp"

using namespace gsp;
using namespace gsp::testing;

namespace {

Method least_squares(std::size_t k) { return LeastSquares{k}; }

Spectrum synthetic_spectrum(std::vector<double> eigenvalues) {
  Spectrum s;
  s.eigenvalues = Eigen::Map<Eigen::VectorXd>(eigenvalues.data(), static_cast<Eigen::Index>(eigenvalues.size()));
  return s;
}

std::vector<double> snr_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 12; ++i) grid.push_back(std::pow(10.0, -3.0 + 0.5 * i));
  return grid;
}

}  // namespace

TEST_CASE("Bias and noise sensitivity on P3") {
  const GraphInstance g = p3();
  const BiasVariance ls = xi_pair(least_squares(2), g.spectrum, g.laplacian, 2, SampleSet({0, 2}, 3), NoiseKind::FullBand);
  CHECK(ls.xi1 == doctest::Approx(0.0).scale(1.0));
  CHECK(ls.xi2 == doctest::Approx(2.5));

  const BiasVariance empty = xi_pair(least_squares(2), g.spectrum, g.laplacian, 2, SampleSet({}, 3), NoiseKind::FullBand);
  CHECK(empty.xi1 == 2.0);
  CHECK(empty.xi2 == 0.0);

  const BiasVariance glr = xi_pair(Method{LaplacianRegularized{1.0}}, g.spectrum, g.laplacian, 2,
                                   SampleSet({0, 1, 2}, 3), NoiseKind::FullBand);
  CHECK(glr.xi1 == doctest::Approx(0.25));
  CHECK(glr.xi2 == doctest::Approx(21.0 / 16.0));
  const BiasVariance closed = glr_full_observation_xi(g.spectrum, 2, 1.0, NoiseKind::FullBand);
  CHECK(closed.xi1 == doctest::Approx(0.25));
  CHECK(closed.xi2 == doctest::Approx(21.0 / 16.0));
}

TEST_CASE("Least-squares bias is k minus the rank") {
  const GraphInstance g = p3();
  CHECK(xi1_ls_rank(g.spectrum, 2, SampleSet({1}, 3)) == 1);
  CHECK(xi1_ls_rank(g.spectrum, 2, SampleSet({0, 2}, 3)) == 0);
  CHECK(xi1_ls_rank(g.spectrum, 2, SampleSet({}, 3)) == 2);
  CHECK(xi2_ls_closed(g.spectrum, 2, SampleSet({0, 2}, 3)) == doctest::Approx(2.5));
  CHECK(xi2_ls_closed(g.spectrum, 2, SampleSet({0, 1, 2}, 3)) == doctest::Approx(2.0));

  for (const Graph& graph : small_connected_graphs(6)) {
    const GraphInstance inst = make_instance(0, graph);
    const std::size_t n = inst.spectrum.size();
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const SampleSet s(subset_from_mask(mask), n);
        const double xi1 = xi_pair(least_squares(k), inst.spectrum, inst.laplacian, k, s, NoiseKind::FullBand).xi1;
        CHECK(std::abs(xi1 - static_cast<double>(xi1_ls_rank(inst.spectrum, k, s))) < 1e-8);
      }
    }
  }
}

TEST_CASE("Differences and thresholds on P3") {
  const GraphInstance g = p3();
  const SampleSet s({0, 2}, 3);
  const DeltaPair d = delta_pair(least_squares(2), g.spectrum, g.laplacian, 2, s, {2}, NoiseKind::FullBand);
  CHECK(d.d1 == doctest::Approx(-1.0));
  CHECK(d.d2 == doctest::Approx(1.3));
  CHECK_THROWS_AS(delta_pair(least_squares(2), g.spectrum, g.laplacian, 2, s, {}, NoiseKind::FullBand), std::invalid_argument);
  CHECK_THROWS_AS(delta_pair(least_squares(2), g.spectrum, g.laplacian, 2, s, {1}, NoiseKind::FullBand), std::invalid_argument);

  const Threshold t = tau_general(d, 2.0 / 3.0);
  CHECK(t.kind == Threshold::Kind::Below);
  CHECK(t.value == doctest::Approx(13.0 / 15.0));
  CHECK(t.better_at(0.5));
  CHECK_FALSE(t.better_at(1.0));
  CHECK(tau_general({0.0, -1.0}, 1.0).kind == Threshold::Kind::Never);
  CHECK(tau_general({0.0, 1.0}, 1.0).kind == Threshold::Kind::Always);
  CHECK(tau_general({0.5, 1.0}, 1.0).kind == Threshold::Kind::Above);
  CHECK_THROWS(tau_general(d, 0.0));

  CHECK(tau_ls(g.spectrum, 2, s, 2, NoiseKind::FullBand) == doctest::Approx(13.0 / 15.0));
  CHECK(tau_ls(g.spectrum, 2, s, 2, NoiseKind::Bandlimited) == 1.0);
  CHECK(tau_ls(g.spectrum, 2, SampleSet({0, 1, 2}, 3), 1, NoiseKind::FullBand) <= 0.0);
  CHECK_THROWS_AS(tau_ls(g.spectrum, 2, SampleSet({0}, 3), 2, NoiseKind::FullBand), std::invalid_argument);
}

TEST_CASE("Threshold predicate agrees with closed-form MSE differences") {
  const std::vector<double> grid = snr_grid();
  std::size_t decided = 0;
  for (const Graph& graph : small_connected_graphs(5)) {
    const GraphInstance g = make_instance(0, graph);
    const std::size_t n = g.spectrum.size();
    for (std::size_t k : {2u, 3u}) {
      if (k > n) continue;
      for (const Method& method : {least_squares(k), Method{LaplacianRegularized{0.5}}}) {
        for (NoiseKind kind : {NoiseKind::FullBand, NoiseKind::Bandlimited}) {
          std::vector<BiasVariance> xi(1u << n);
          for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            xi[mask] = xi_pair(method, g.spectrum, g.laplacian, k, SampleSet(subset_from_mask(mask), n), kind);
          }
          const double ratio = kind == NoiseKind::FullBand ? static_cast<double>(k) / static_cast<double>(n) : 1.0;
          for (std::uint32_t s = 1; s < (1u << n); ++s) {
            for (std::uint32_t t = s; t != 0; t = (t - 1) & s) {
              const DeltaPair d{xi[s].xi1 - xi[s & ~t].xi1, xi[s].xi2 - xi[s & ~t].xi2};
              const Threshold th = tau_general(d, ratio);
              for (double snr : grid) {
                if ((th.kind == Threshold::Kind::Below || th.kind == Threshold::Kind::Above) &&
                    std::abs(snr - th.value) < 1e-9 * std::max(1.0, std::abs(th.value))) {
                  continue;
                }
                const double sigma = sigma_from_snr(snr, kind, k, n);
                const double diff = xi[s].mse(sigma) - xi[s & ~t].mse(sigma);
                if (std::abs(diff) < 1e-9 * std::max(1.0, xi[s].mse(sigma))) continue;
                CHECK(th.better_at(snr) == (diff > 0.0));
                ++decided;
              }
            }
          }
        }
      }
    }
  }
  CHECK(decided > 100000);
}

TEST_CASE("Least-squares bias drops exactly when noise sensitivity rises") {
  std::vector<GraphInstance> graphs;
  for (const Graph& graph : small_connected_graphs(7)) graphs.push_back(make_instance(0, graph));
  for (std::uint64_t seed = 0; seed < 3; ++seed) graphs.push_back(make_instance(0, random_weighted_graph(8, 0.5, seed)));
  std::size_t pairs = 0;
  for (const GraphInstance& g : graphs) {
    const std::size_t n = g.spectrum.size();
    for (std::size_t k : {2u, 3u}) {
      if (k > n) continue;
      std::vector<double> xi2(1u << n);
      std::vector<std::size_t> rank(1u << n);
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const SampleSet s(subset_from_mask(mask), n);
        rank[mask] = ls_rank(g.spectrum, k, s);
        xi2[mask] = xi2_ls_closed(g.spectrum, k, s);
      }
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        for (std::size_t v = 0; v < n; ++v) {
          if (!(mask & (1u << v))) continue;
          const std::uint32_t rest = mask & ~(1u << v);
          const bool bias_drops = rank[mask] > rank[rest];
          const double d2 = xi2[mask] - xi2[rest];
          if (bias_drops) {
            CHECK(d2 > 1e-9);
          } else {
            CHECK(d2 <= 1e-9);
          }
          ++pairs;
        }
      }
    }
  }
  CHECK(pairs > 100000);
}

TEST_CASE("omega and Kantorovich ratios") {
  CHECK(omega(1.0) == 1.0);
  CHECK(omega(3.0) == doctest::Approx(4.0 / 3.0));
  CHECK(omega(2.0) < omega(3.0));
  CHECK_THROWS_AS(omega(0.5), std::invalid_argument);

  const GraphInstance g = p3();
  const KantorovichRatios r = kantorovich_ratios(g.spectrum, 2);
  CHECK(r.r == doctest::Approx(4.0 / 3.0));
  CHECK(r.r_bl == doctest::Approx(1.0));
  CHECK(r.lambda_bar == doctest::Approx(4.0 / 3.0));

  const GraphInstance k5 = make_instance(0, complete_graph(5));
  CHECK(kantorovich_ratios(k5.spectrum, 2).r == doctest::Approx(1.0));
  CHECK_THROWS_AS(kantorovich_ratios(synthetic_spectrum({0.0, 0.0, 1.0}), 2), DisconnectedSpectrumError);
  CHECK_THROWS_AS(kantorovich_ratios(g.spectrum, 1), std::invalid_argument);
}

TEST_CASE("Bound tables on P3") {
  const GraphInstance g = p3();
  const std::vector<double> b = bound_B_table(g.spectrum);
  CHECK(b[0] == doctest::Approx(4.0));
  CHECK(b[1] == doctest::Approx(10.0 / 3.0));
  CHECK(b[2] == doctest::Approx(11.0 / 3.0));
  const std::vector<double> bk = bound_Bk_table(g.spectrum, 2);
  CHECK(bk[0] == doctest::Approx(3.0));
  CHECK(bk[1] == doctest::Approx(2.5));
  CHECK(bound_Bk(g.spectrum, 2, 2) == doctest::Approx(2.5));
  CHECK_THROWS_AS(bound_B(g.spectrum, 0), std::out_of_range);
  CHECK_THROWS_AS(bound_B(g.spectrum, 4), std::out_of_range);

  const MoptResult m = m_opt_search(g.spectrum, 2);
  CHECK(m.m_opt == 2);
  CHECK(m.B_mopt == doctest::Approx(10.0 / 3.0));
  CHECK_FALSE(m.cond_fullband);
  CHECK_FALSE(m.cond_bl);

  CHECK(mse_upper_bound(g.spectrum, 2, 2, 1.0, NoiseKind::FullBand) == doctest::Approx(47.0 / 6.0));
  CHECK(mse_upper_bound(g.spectrum, 2, 2, 0.0, NoiseKind::FullBand) == doctest::Approx(4.5));
  CHECK(mse_upper_bound(g.spectrum, 2, 2, 1.0, NoiseKind::Bandlimited) == doctest::Approx(1.0 + 2.0 * 3.5));
  CHECK_THROWS_AS(mse_upper_bound(g.spectrum, 2, 4, 1.0, NoiseKind::FullBand), std::out_of_range);
}

TEST_CASE("m_opt with a flat spectrum sits next to sqrt(N)") {
  for (std::size_t n : {10u, 50u, 99u, 400u}) {
    std::vector<double> ev(n, 2.0);
    ev[0] = 0.0;
    const MoptResult m = m_opt_search(synthetic_spectrum(ev), 2);
    const double root = std::sqrt(static_cast<double>(n));
    CHECK((m.m_opt == static_cast<std::size_t>(std::floor(root)) ||
           m.m_opt == static_cast<std::size_t>(std::ceil(root))));
  }
}

TEST_CASE("Bound properties on random spectra") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 20 + 5 * (seed % 8);
    const GraphModel model = seed % 3 == 0 ? GraphModel{ErdosRenyi{0.3}}
                             : seed % 3 == 1 ? GraphModel{BarabasiAlbert{2}}
                                             : GraphModel{StochasticBlock{}};
    const GraphInstance g = make_instance(0, generate_graph(model, n, seed));
    const std::size_t k = 2 + seed % 6;
    const KantorovichRatios r = kantorovich_ratios(g.spectrum, k);
    CHECK(r.r >= 1.0);
    CHECK(r.r_bl >= 1.0);
    CHECK(r.r_bl <= r.r);
    const std::vector<double> b = bound_B_table(g.spectrum);
    const std::vector<double> bk = bound_Bk_table(g.spectrum, k);
    for (std::size_t m = 1; m <= n; ++m) {
      const double md = static_cast<double>(m);
      CHECK(bk[m - 1] <= b[m - 1] * (1 + 1e-12));
      CHECK(b[m - 1] <= r.r * (static_cast<double>(n) / md + md - 1.0) * (1 + 1e-12));
    }
    const MoptResult mo = m_opt_search(g.spectrum, k);
    CHECK(mo.m_opt >= 1);
    CHECK(mo.m_opt <= n);
    for (double v : b) CHECK(mo.B_mopt <= v);
  }
}

TEST_CASE("m_opt range whenever the full-band condition holds") {
  std::size_t hits = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 40 + 10 * (seed % 10);
    const GraphInstance g = make_instance(0, generate_graph(ErdosRenyi{0.8}, n, seed));
    const MoptResult m = m_opt_search(g.spectrum, 5);
    if (!m.cond_fullband) continue;
    ++hits;
    const double nd = static_cast<double>(n);
    const double r = kantorovich_ratios(g.spectrum, 5).r;
    CHECK(m.m_opt >= static_cast<std::size_t>(std::floor(std::sqrt(nd))));
    CHECK(m.m_opt <= static_cast<std::size_t>(std::ceil(std::sqrt(r * nd))));
    CHECK(m.m_opt <= (n + 2) / 2);
  }
  CHECK(hits > 20);
}

TEST_CASE("Full-observation GLR sums match the dense operator") {
  const GraphInstance g = make_instance(0, random_weighted_graph(25, 0.3, 4));
  const SampleSet all(iota_vector(25), 25);
  for (double mu : {1e-3, 0.2, 5.0}) {
    for (NoiseKind kind : {NoiseKind::FullBand, NoiseKind::Bandlimited}) {
      const BiasVariance closed = glr_full_observation_xi(g.spectrum, 4, mu, kind);
      const BiasVariance dense = xi_pair(Method{LaplacianRegularized{mu}}, g.spectrum, g.laplacian, 4, all, kind);
      CHECK(std::abs(closed.xi1 - dense.xi1) < 1e-9);
      CHECK(std::abs(closed.xi2 - dense.xi2) < 1e-9);
    }
  }
  const BiasVariance limit = glr_full_observation_xi(g.spectrum, 4, 1e-14, NoiseKind::FullBand);
  CHECK(limit.xi1 == doctest::Approx(0.0).scale(1.0));
  CHECK(limit.xi2 == doctest::Approx(25.0));
  CHECK_THROWS(glr_full_observation_xi(g.spectrum, 4, 0.0, NoiseKind::FullBand));
}

TEST_CASE("GLR thresholds") {
  const GraphInstance g = p3();
  CHECK_FALSE(tau_glr(g.spectrum, 2, 0.01).applicable);
  const GlrThreshold bl = tau_glr_bl(g.spectrum, 2, 1e-12);
  CHECK_FALSE(bl.applicable);
  const double bk = m_opt_search(g.spectrum, 2).Bk_moptbl;
  CHECK(bl.tau == doctest::Approx((2.0 - bk) / (2.0 + bk)));
  const GlrThreshold strict = tau_glr_bl(g.spectrum, 2, 1e-12, BandlimitedTauVariant::Strict);
  CHECK(strict.tau == doctest::Approx((1.0 - bk) / (2.0 + bk)));

  // Constant nonzero spectrum, r = 1: tau_weak -> (sqrt(N) - 2) / (sqrt(N) + 2N/k).
  std::vector<double> ev(10000, 1.0);
  ev[0] = 0.0;
  const Spectrum flat = synthetic_spectrum(ev);
  const GlrThreshold weak = tau_glr_weak(flat, 1000, 1e-13);
  CHECK(weak.tau == doctest::Approx(49.0 / 60.0).epsilon(1e-9));
  CHECK(weak.applicable);
  const GlrThreshold at_ub = tau_glr_weak(flat, 1000, weak.mu_ub);
  CHECK(std::abs(at_ub.tau) < 1e-9);
  CHECK_FALSE(at_ub.applicable);

  std::vector<double> tiny(4, 1.0);
  tiny[0] = 0.0;
  CHECK_FALSE(tau_glr_weak(synthetic_spectrum(tiny), 2, 1e-6).applicable);  // 2 r sqrt(N) = N

  const GraphInstance er = make_instance(0, generate_graph(ErdosRenyi{0.8}, 100, 7));
  const GlrThreshold full = tau_glr(er.spectrum, 10, 1e-4);
  REQUIRE(m_opt_search(er.spectrum, 10).cond_fullband);
  CHECK(full.applicable);
  CHECK(full.tau > 0.0);
  CHECK_FALSE(tau_glr(er.spectrum, 10, 2.0 * full.mu_ub).applicable);
}

TEST_CASE("Threshold report for a large Erdos-Renyi graph") {
  const GraphInstance g = make_instance(0, generate_graph(ErdosRenyi{0.8}, 500, 11));
  const ThresholdReport rep = threshold_report(g.spectrum, 50, 1e-4);
  CHECK(rep.ratios.r > 1.0);
  CHECK(rep.ratios.r <= 1.01);
  CHECK(rep.mopt.m_opt >= 22);
  CHECK(rep.mopt.m_opt <= 23);
  CHECK(rep.mopt.cond_fullband);
  CHECK(rep.glr.tau > 0.0);
  CHECK(rep.glr.tau < 1.0);
  CHECK(rep.glr_bl.tau > 0.0);
  CHECK(rep.B.size() == 500);
}

TEST_CASE("GLR noise sensitivity stays below the Kantorovich bounds") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const GraphInstance g = make_instance(0, generate_graph(ErdosRenyi{0.4}, 30, seed));
    CounterRng rng(seed);
    const std::size_t m = 1 + seed % 30;
    const SampleSet s = uniform_random(30, m, rng);
    const double b = bound_B(g.spectrum, m);
    const double bk = bound_Bk(g.spectrum, 4, m);
    for (double mu : {1e-4, 1e-2, 1.0}) {
      const Method method = LaplacianRegularized{mu};
      CHECK(xi_pair(method, g.spectrum, g.laplacian, 4, s, NoiseKind::FullBand).xi2 <= b);
      CHECK(xi_pair(method, g.spectrum, g.laplacian, 4, s, NoiseKind::Bandlimited).xi2 <= 1.0 + bk);
      for (double sigma : {0.1, 1.0, 10.0}) {
        for (NoiseKind kind : {NoiseKind::FullBand, NoiseKind::Bandlimited}) {
          CHECK(xi_pair(method, g.spectrum, g.laplacian, 4, s, kind).mse(sigma) <=
                mse_upper_bound(g.spectrum, 4, m, sigma, kind));
        }
      }
    }
  }
}

TEST_CASE("Positive least-squares thresholds number exactly k") {
  const GraphInstance g = p3();
  for (const std::vector<std::size_t>& order :
       {std::vector<std::size_t>{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {1, 2, 0}}) {
    CHECK(count_positive_tau(g.spectrum, 2, order) == 2);
    CHECK(count_positive_tau(g.spectrum, 3, order) == 3);
  }
  CHECK_THROWS_AS(count_positive_tau(g.spectrum, 2, {0, 1}), std::invalid_argument);

  const GraphInstance er = make_instance(0, generate_graph(ErdosRenyi{0.5}, 30, 5));
  CounterRng rng(9);
  for (int i = 0; i < 20; ++i) {
    const std::vector<std::size_t> order = random_permutation(30, rng);
    CHECK(count_positive_tau(er.spectrum, 5, order) == 5);
    const std::vector<double> seq = tau_ls_sequence(er.spectrum, 5, order);
    for (std::size_t j = 1; j <= 30; j += 7) {
      const SampleSet prefix(std::vector<std::size_t>(order.begin(), order.begin() + static_cast<long>(j)), 30);
      CHECK(seq[j - 1] == doctest::Approx(tau_ls(er.spectrum, 5, prefix, order[j - 1], NoiseKind::FullBand)).scale(1.0));
    }
  }
}
