#include "gsp/sampling.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gsp/glr_incremental.hpp"
#include "gsp/numeric.hpp"

namespace gsp {

namespace {

constexpr int kBisectionSteps = 200;

// Smallest eigenvalue of [[P, b], [b^T, c]] given P = Q diag(d) Q^T and
// z = Q^T b. By interlacing it is at most min(c, d_0) and it is the smallest
// root of c - x - sum z_i^2 / (d_i - x).
double bordered_min_eigenvalue(const Eigen::VectorXd& d, const Eigen::VectorXd& z, double c) {
  double lo = 0.0;
  double hi = d.size() > 0 ? std::min(c, d(0)) : c;
  auto f = [&](double x) {
    double s = c - x;
    for (Eigen::Index i = 0; i < d.size(); ++i) s -= z(i) * z(i) / (d(i) - x);
    return s;
  };
  for (int it = 0; it < kBisectionSteps; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Smallest eigenvalue of P + u u^T given P = Q diag(d) Q^T and z = Q^T u.
// It lies in [d_0, min(d_1, d_0 + z_0^2)] and is the root of
// 1 + sum z_i^2 / (d_i - x) there.
double rank_one_min_eigenvalue(const Eigen::VectorXd& d, const Eigen::VectorXd& z) {
  const double z0 = z(0) * z(0);
  if (z0 == 0.0) return d(0);
  double lo = d(0);
  double hi = d(0) + z0;
  if (d.size() > 1) hi = std::min(hi, d(1));
  if (hi <= lo) return d(0);
  auto g = [&](double x) {
    double s = 1.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) s += z(i) * z(i) / (d(i) - x);
    return s;
  };
  for (int it = 0; it < kBisectionSteps; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

bool better_score(double candidate, double best) {
  return candidate < best - kScoreTieTol * std::max(1.0, std::abs(best));
}

// Factorised information matrix for the current sample.
struct Design {
  Eigen::MatrixXd p;
  Eigen::MatrixXd p_inv;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  double trace_inv = 0.0;
  double log_det = 0.0;

  void factor(Eigen::MatrixXd matrix) {
    p = std::move(matrix);
    if (p.size() == 0) {
      p_inv.resize(0, 0);
      eigenvalues.resize(0);
      eigenvectors.resize(0, 0);
      trace_inv = 0.0;
      log_det = 0.0;
      return;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
    eigenvalues = es.eigenvalues();
    eigenvectors = es.eigenvectors();
    p_inv = eigenvectors * eigenvalues.cwiseInverse().asDiagonal() * eigenvectors.transpose();
    CompensatedSum tr;
    CompensatedSum ld;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
      tr += 1.0 / eigenvalues(i);
      ld += std::log(eigenvalues(i));
    }
    trace_inv = tr.value();
    log_det = ld.value();
  }
};

}  // namespace

SampleSet greedy_optimal(const Spectrum& spectrum, std::size_t k, Criterion criterion,
                         std::size_t m) {
  const std::size_t n = spectrum.size();
  if (k == 0 || k > n) throw std::invalid_argument("greedy_optimal: need 1 <= k <= N");
  if (m > n) throw std::invalid_argument("greedy_optimal: m exceeds N");
  const auto kk = static_cast<Eigen::Index>(k);
  const Eigen::MatrixXd uk = spectrum.eigenvectors.leftCols(kk);
  std::vector<double> norms2(n);
  for (std::size_t v = 0; v < n; ++v) norms2[v] = uk.row(static_cast<Eigen::Index>(v)).squaredNorm();

  std::vector<std::size_t> order;
  std::vector<bool> taken(n, false);
  Eigen::MatrixXd rows(0, kk);  // U_SK
  Design design;
  design.factor(Eigen::MatrixXd(0, 0));

  for (std::size_t step = 0; step < m; ++step) {
    const bool bordered = order.size() < k;
    std::size_t best = n;
    bool best_raises = false;
    double best_value = std::numeric_limits<double>::infinity();

    for (std::size_t v = 0; v < n; ++v) {
      if (taken[v]) continue;
      const Eigen::VectorXd u = uk.row(static_cast<Eigen::Index>(v)).transpose();
      bool raises = false;
      double value = std::numeric_limits<double>::infinity();
      if (bordered) {
        const double c = norms2[v];
        const Eigen::VectorXd b = rows * u;
        const Eigen::VectorXd w = design.p_inv * b;
        const double schur = c - b.dot(w);
        raises = schur > kRankIncreaseTol * c;
        if (raises) {
          switch (criterion) {
            case Criterion::A:
              value = design.trace_inv + (1.0 + w.squaredNorm()) / schur;
              break;
            case Criterion::D:
              value = -(design.log_det + std::log(schur));
              break;
            case Criterion::E: {
              const Eigen::VectorXd z = design.eigenvectors.transpose() * b;
              value = -bordered_min_eigenvalue(design.eigenvalues, z, c);
              break;
            }
          }
        }
      } else {
        const Eigen::VectorXd a = design.p_inv * u;
        const double t = u.dot(a);
        switch (criterion) {
          case Criterion::A:
            value = design.trace_inv - a.squaredNorm() / (1.0 + t);
            break;
          case Criterion::D:
            value = -(design.log_det + std::log1p(t));
            break;
          case Criterion::E: {
            const Eigen::VectorXd z = design.eigenvectors.transpose() * u;
            value = -rank_one_min_eigenvalue(design.eigenvalues, z);
            break;
          }
        }
      }
      if (best == n || (raises && !best_raises) ||
          (raises == best_raises && better_score(value, best_value))) {
        best = v;
        best_raises = raises;
        best_value = value;
      }
    }

    if (bordered && !best_raises) {
      throw std::logic_error("greedy_optimal: no candidate raises the rank of U_SK");
    }
    order.push_back(best);
    taken[best] = true;
    rows.conservativeResize(rows.rows() + 1, Eigen::NoChange);
    rows.row(rows.rows() - 1) = uk.row(static_cast<Eigen::Index>(best));
    if (order.size() < k) {
      design.factor(rows * rows.transpose());
    } else {
      design.factor(rows.transpose() * rows);
    }
  }

  const char* tag = criterion == Criterion::A ? "a-optimal"
                    : criterion == Criterion::D ? "d-optimal"
                                                : "e-optimal";
  return SampleSet(std::move(order), n, tag);
}

SampleSet weighted_random(const Spectrum& spectrum, std::size_t k, std::size_t m,
                          CounterRng& rng) {
  const std::size_t n = spectrum.size();
  if (k == 0 || k > n) throw std::invalid_argument("weighted_random: need 1 <= k <= N");
  if (m > n) throw std::invalid_argument("weighted_random: m exceeds N");
  const auto kk = static_cast<Eigen::Index>(k);
  std::vector<double> weight(n);
  for (std::size_t v = 0; v < n; ++v) {
    weight[v] = spectrum.eigenvectors.row(static_cast<Eigen::Index>(v)).head(kk).squaredNorm();
  }
  const std::uint64_t seed = rng.key();
  std::vector<std::size_t> remaining(n);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  std::vector<std::size_t> order;
  order.reserve(m);
  for (std::size_t step = 0; step < m; ++step) {
    CompensatedSum total;
    for (std::size_t v : remaining) total += weight[v];
    std::size_t pick = remaining.size() - 1;
    if (total.value() > 0.0) {
      const double target = uniform01(rng) * total.value();
      double running = 0.0;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        running += weight[remaining[i]];
        if (target < running) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(uniform_below(rng, remaining.size()));
    }
    order.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return SampleSet(std::move(order), n, "weighted-random", seed);
}

SampleSet uniform_random(std::size_t n, std::size_t m, CounterRng& rng) {
  if (m > n) throw std::invalid_argument("uniform_random: m exceeds N");
  const std::uint64_t seed = rng.key();
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  return SampleSet(std::move(pool), n, "uniform-random", seed);
}

SampleSet greedy_mmse_glr(const Eigen::MatrixXd& laplacian, const Spectrum& spectrum,
                          std::size_t k, double mu, NoiseKind kind, double snr, std::size_t m) {
  const std::size_t n = spectrum.size();
  if (m > n) throw std::invalid_argument("greedy_mmse_glr: m exceeds N");
  const double sigma = sigma_from_snr(snr, kind, k, n);
  GlrIncremental engine(laplacian, spectrum, k, mu);
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t best = n;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < n; ++v) {
      if (engine.is_selected(v)) continue;
      const double value = engine.evaluate(v).mse(sigma, kind);
      if (best == n || better_score(value, best_value)) {
        best = v;
        best_value = value;
      }
    }
    engine.add(best);
  }
  return SampleSet(engine.selected(), n, "mmse");
}

SampleSet greedy_wmse_glr(const Spectrum& spectrum, std::size_t k, std::size_t m) {
  const SampleSet e = greedy_optimal(spectrum, k, Criterion::E, m);
  return SampleSet(e.order(), e.universe(), "wmse");
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::AOptimal: return "a-optimal";
    case Scheme::DOptimal: return "d-optimal";
    case Scheme::EOptimal: return "e-optimal";
    case Scheme::WeightedRandom: return "weighted-random";
    case Scheme::UniformRandom: return "uniform-random";
    case Scheme::Mmse: return "mmse";
    case Scheme::Wmse: return "wmse";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& text) {
  for (Scheme s : {Scheme::AOptimal, Scheme::DOptimal, Scheme::EOptimal, Scheme::WeightedRandom,
                   Scheme::UniformRandom, Scheme::Mmse, Scheme::Wmse}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown sampling scheme '" + text + "'");
}

bool scheme_uses_glr(Scheme scheme) {
  return scheme == Scheme::Mmse || scheme == Scheme::Wmse || scheme == Scheme::UniformRandom;
}

bool scheme_is_random(Scheme scheme) {
  return scheme == Scheme::WeightedRandom || scheme == Scheme::UniformRandom;
}

}  // namespace gsp
