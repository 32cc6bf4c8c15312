#include "gsp/theory.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gsp/kernels/kernels.hpp"
#include "gsp/numeric.hpp"

namespace gsp {

namespace {

void check_bandwidth(const Spectrum& spectrum, std::size_t k) {
  if (k == 0 || k > spectrum.size()) {
    throw std::invalid_argument("bandwidth must satisfy 1 <= k <= N");
  }
}

// Eigenvalue lambda_i with 1-based i.
double lam(const Spectrum& spectrum, std::size_t i) {
  return spectrum.eigenvalues(static_cast<Eigen::Index>(i - 1));
}

struct RankAndXi2 {
  std::size_t rank = 0;
  double xi2 = 0.0;
};

RankAndXi2 ls_rank_and_xi2(const Spectrum& spectrum, std::size_t k, const SampleSet& s) {
  if (s.empty()) return {};
  const Eigen::MatrixXd usk = sampled_band(spectrum, k, s);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(usk);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = kLsRankRtol * sv(0);
  RankAndXi2 out;
  CompensatedSum sum;
  // Singular values are descending, so reciprocals are summed smallest first;
  // walk backwards to add the largest terms first.
  for (Eigen::Index i = sv.size() - 1; i >= 0; --i) {
    if (sv(i) > cutoff) {
      ++out.rank;
      sum += 1.0 / (sv(i) * sv(i));
    }
  }
  out.xi2 = sum.value();
  return out;
}

}  // namespace

BiasVariance xi_pair(const ReconstructionOperator& op, const Spectrum& spectrum, std::size_t k,
                     NoiseKind kind) {
  check_bandwidth(spectrum, k);
  const Eigen::MatrixXd uk = spectrum.eigenvectors.leftCols(static_cast<Eigen::Index>(k));
  const Eigen::MatrixXd usk = sampled_band(spectrum, k, op.sample());
  const Eigen::MatrixXd ru = op.matrix() * usk;
  const auto len = static_cast<std::size_t>(uk.size());
  BiasVariance out;
  out.kind = kind;
  out.xi1 = kernels::squared_distance(uk.data(), ru.data(), len);
  if (kind == NoiseKind::FullBand) {
    out.xi2 = kernels::sum_squares(op.matrix().data(), static_cast<std::size_t>(op.matrix().size()));
  } else {
    out.xi2 = kernels::sum_squares(ru.data(), len);
  }
  return out;
}

BiasVariance xi_pair(const Method& method, const Spectrum& spectrum,
                     const Eigen::MatrixXd& laplacian, std::size_t k, const SampleSet& s,
                     NoiseKind kind) {
  if (s.empty()) return BiasVariance{static_cast<double>(k), 0.0, kind};
  return xi_pair(make_operator(method, spectrum, laplacian, s), spectrum, k, kind);
}

std::size_t ls_rank(const Spectrum& spectrum, std::size_t k, const SampleSet& s) {
  check_bandwidth(spectrum, k);
  if (s.empty()) return 0;
  return numerical_rank(sampled_band(spectrum, k, s), kLsRankRtol);
}

std::size_t xi1_ls_rank(const Spectrum& spectrum, std::size_t k, const SampleSet& s) {
  return k - ls_rank(spectrum, k, s);
}

double xi2_ls_closed(const Spectrum& spectrum, std::size_t k, const SampleSet& s) {
  check_bandwidth(spectrum, k);
  return ls_rank_and_xi2(spectrum, k, s).xi2;
}

DeltaPair delta_pair(const Method& method, const Spectrum& spectrum,
                     const Eigen::MatrixXd& laplacian, std::size_t k, const SampleSet& s,
                     const std::vector<std::size_t>& t, NoiseKind kind) {
  if (t.empty()) throw std::invalid_argument("delta_pair: T must be nonempty");
  for (std::size_t v : t) {
    if (!s.contains(v)) {
      throw std::invalid_argument("delta_pair: vertex " + std::to_string(v) + " of T is not in S");
    }
  }
  const BiasVariance full = xi_pair(method, spectrum, laplacian, k, s, kind);
  const BiasVariance reduced = xi_pair(method, spectrum, laplacian, k, s.without(t), kind);
  return DeltaPair{full.xi1 - reduced.xi1, full.xi2 - reduced.xi2};
}

bool Threshold::better_at(double snr) const {
  switch (kind) {
    case Kind::Below:
      return snr < value;
    case Kind::Above:
      return snr > value;
    case Kind::Always:
      return true;
    case Kind::Never:
      return false;
  }
  return false;
}

Threshold tau_general(const DeltaPair& d, double energy_ratio) {
  if (!(energy_ratio > 0.0)) throw std::invalid_argument("tau_general: energy ratio must be positive");
  if (std::abs(d.d1) <= kDeltaZeroTol) {
    return Threshold{d.d2 > 0.0 ? Threshold::Kind::Always : Threshold::Kind::Never, 0.0};
  }
  const double value = energy_ratio * d.d2 / (-d.d1);
  return Threshold{d.d1 < 0.0 ? Threshold::Kind::Below : Threshold::Kind::Above, value};
}

double tau_ls(const Spectrum& spectrum, std::size_t k, const SampleSet& s, std::size_t v,
              NoiseKind kind) {
  check_bandwidth(spectrum, k);
  if (!s.contains(v)) {
    throw std::invalid_argument("tau_ls: vertex " + std::to_string(v) + " is not in S");
  }
  if (kind == NoiseKind::Bandlimited) return 1.0;
  const RankAndXi2 with = ls_rank_and_xi2(spectrum, k, s);
  const RankAndXi2 without = ls_rank_and_xi2(spectrum, k, s.without({v}));
  const double tau =
      static_cast<double>(k) / static_cast<double>(spectrum.size()) * (with.xi2 - without.xi2);
  return with.rank == without.rank ? std::min(tau, 0.0) : tau;
}

std::vector<double> tau_ls_sequence(const Spectrum& spectrum, std::size_t k,
                                    const std::vector<std::size_t>& order) {
  check_bandwidth(spectrum, k);
  const SampleSet full(order, spectrum.size());
  const double scale = static_cast<double>(k) / static_cast<double>(spectrum.size());
  std::vector<double> taus;
  taus.reserve(order.size());
  RankAndXi2 previous;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    const RankAndXi2 current = ls_rank_and_xi2(spectrum, k, full.prefix(i));
    const double tau = scale * (current.xi2 - previous.xi2);
    taus.push_back(current.rank == previous.rank ? std::min(tau, 0.0) : tau);
    previous = current;
  }
  return taus;
}

std::size_t count_positive_tau(const Spectrum& spectrum, std::size_t k,
                               const std::vector<std::size_t>& order) {
  if (order.size() != spectrum.size()) {
    throw std::invalid_argument("count_positive_tau: order must be a permutation of all vertices");
  }
  const std::vector<double> taus = tau_ls_sequence(spectrum, k, order);
  return static_cast<std::size_t>(std::count_if(taus.begin(), taus.end(), [](double t) { return t > 0.0; }));
}

double omega(double x) {
  if (!(x >= 1.0)) throw std::invalid_argument("omega: argument must be at least 1");
  const double s = std::sqrt(x);
  const double t = s + 1.0 / s;
  return 0.25 * t * t;
}

KantorovichRatios kantorovich_ratios(const Spectrum& spectrum, std::size_t k) {
  const std::size_t n = spectrum.size();
  if (n < 2) throw std::invalid_argument("kantorovich_ratios: need at least two vertices");
  check_bandwidth(spectrum, k);
  if (k < 2) throw std::invalid_argument("kantorovich_ratios: bandwidth must be at least 2");
  const double top = lam(spectrum, n);
  if (!(lam(spectrum, 2) > 1e-9 * std::max(1.0, top))) {
    throw DisconnectedSpectrumError("algebraic connectivity is zero: graph is disconnected");
  }
  KantorovichRatios out;
  out.r = omega(top / lam(spectrum, 2));
  out.r_bl = omega(lam(spectrum, k) / lam(spectrum, 2));
  CompensatedSum trace;
  for (std::size_t i = n; i >= 1; --i) trace += lam(spectrum, i);
  out.lambda_bar = trace.value() / static_cast<double>(n);
  return out;
}

std::vector<double> bound_B_table(const Spectrum& spectrum) {
  const std::size_t n = spectrum.size();
  const KantorovichRatios ratios = kantorovich_ratios(spectrum, std::min<std::size_t>(2, n));
  std::vector<double> table(n);
  CompensatedSum tail;
  for (std::size_t m = 1; m <= n; ++m) {
    if (m >= 2) {
      const std::size_t i = m;
      tail += omega(std::max(1.0, lam(spectrum, n + 2 - i) / lam(spectrum, i)));
    }
    table[m - 1] = ratios.r * static_cast<double>(n) / static_cast<double>(m) + tail.value();
  }
  return table;
}

std::vector<double> bound_Bk_table(const Spectrum& spectrum, std::size_t k) {
  const std::size_t n = spectrum.size();
  const KantorovichRatios ratios = kantorovich_ratios(spectrum, k);
  std::vector<double> table(n);
  CompensatedSum tail;
  for (std::size_t m = 1; m <= n; ++m) {
    if (m >= 2) {
      const std::size_t i = m;
      // Paired index k + 2 - i; for i > k it falls below 2, the paired
      // eigenvalue is lambda_1 = 0 and the clamped ratio is 1.
      double term = 1.0;
      if (i <= k) term = omega(std::max(1.0, lam(spectrum, k + 2 - i) / lam(spectrum, i)));
      tail += term;
    }
    table[m - 1] = ratios.r_bl * static_cast<double>(n) / static_cast<double>(m) + tail.value();
  }
  return table;
}

double bound_B(const Spectrum& spectrum, std::size_t m) {
  if (m == 0 || m > spectrum.size()) throw std::out_of_range("bound_B: m must lie in [1, N]");
  return bound_B_table(spectrum)[m - 1];
}

double bound_Bk(const Spectrum& spectrum, std::size_t k, std::size_t m) {
  if (m == 0 || m > spectrum.size()) throw std::out_of_range("bound_Bk: m must lie in [1, N]");
  return bound_Bk_table(spectrum, k)[m - 1];
}

namespace {

std::size_t argmin_smallest(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best] - 1e-12 * std::abs(values[best])) best = i;
  }
  return best;
}

MoptResult m_opt_from_tables(const std::vector<double>& b, const std::vector<double>& bk,
                             const KantorovichRatios& ratios, std::size_t n, std::size_t k) {
  MoptResult out;
  const std::size_t i = argmin_smallest(b);
  const std::size_t j = argmin_smallest(bk);
  out.m_opt = i + 1;
  out.m_opt_bl = j + 1;
  out.B_mopt = b[i];
  out.Bk_moptbl = bk[j];
  const double nd = static_cast<double>(n);
  out.cond_fullband = out.B_mopt < nd;
  out.cond_bl = out.Bk_moptbl < static_cast<double>(k) - 1.0;
  out.cond_weak = 2.0 * ratios.r * std::sqrt(nd) < nd;
  return out;
}

double glr_shrink_sum(const Spectrum& spectrum, std::size_t upto, double mu) {
  CompensatedSum sum;
  for (std::size_t i = 1; i <= upto; ++i) {
    const double f = 1.0 / (1.0 + mu * lam(spectrum, i));
    sum += f * f;
  }
  return sum.value();
}

double glr_bias_sum(const Spectrum& spectrum, std::size_t k, double mu) {
  CompensatedSum sum;
  for (std::size_t i = k; i >= 1; --i) {
    const double g = 1.0 - 1.0 / (1.0 + mu * lam(spectrum, i));
    sum += g * g;
  }
  return sum.value();
}

void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive and finite");
}

}  // namespace

MoptResult m_opt_search(const Spectrum& spectrum, std::size_t k) {
  return m_opt_from_tables(bound_B_table(spectrum), bound_Bk_table(spectrum, k),
                           kantorovich_ratios(spectrum, k), spectrum.size(), k);
}

BiasVariance glr_full_observation_xi(const Spectrum& spectrum, std::size_t k, double mu,
                                     NoiseKind kind) {
  check_bandwidth(spectrum, k);
  check_mu(mu);
  BiasVariance out;
  out.kind = kind;
  out.xi1 = glr_bias_sum(spectrum, k, mu);
  out.xi2 = glr_shrink_sum(spectrum, kind == NoiseKind::FullBand ? spectrum.size() : k, mu);
  return out;
}

namespace {

struct Tables {
  KantorovichRatios ratios;
  std::vector<double> b;
  std::vector<double> bk;
  MoptResult mopt;
};

Tables make_tables(const Spectrum& spectrum, std::size_t k) {
  Tables t;
  t.ratios = kantorovich_ratios(spectrum, k);
  t.b = bound_B_table(spectrum);
  t.bk = bound_Bk_table(spectrum, k);
  t.mopt = m_opt_from_tables(t.b, t.bk, t.ratios, spectrum.size(), k);
  return t;
}

GlrThreshold glr_threshold(const Spectrum& spectrum, std::size_t k, double mu, const Tables& t) {
  const double n = static_cast<double>(spectrum.size());
  const double kd = static_cast<double>(k);
  GlrThreshold out;
  out.mu_ub = (std::sqrt(n / t.mopt.B_mopt) - 1.0) / t.ratios.lambda_bar;
  const double numerator = glr_shrink_sum(spectrum, spectrum.size(), mu) - t.mopt.B_mopt;
  const double denominator = kd + t.bk[t.mopt.m_opt - 1] - glr_bias_sum(spectrum, k, mu);
  out.tau = kd / n * numerator / denominator;
  out.applicable = t.mopt.cond_fullband && mu < out.mu_ub;
  return out;
}

GlrThreshold glr_threshold_weak(const Spectrum& spectrum, std::size_t k, double mu,
                                const Tables& t) {
  const double n = static_cast<double>(spectrum.size());
  const double root_n = std::sqrt(n);
  const double two_r = 2.0 * t.ratios.r;
  GlrThreshold out;
  out.mu_ub = (std::pow(n, 0.25) / std::sqrt(two_r) - 1.0) / t.ratios.lambda_bar;
  const double shrink = 1.0 / (1.0 + mu * t.ratios.lambda_bar);
  out.tau = (root_n * shrink * shrink - two_r) / (root_n + two_r * n / static_cast<double>(k));
  out.applicable = t.mopt.cond_weak && mu < out.mu_ub;
  return out;
}

GlrThreshold glr_threshold_bl(const Spectrum& spectrum, std::size_t k, double mu,
                              BandlimitedTauVariant variant, const Tables& t) {
  const double kd = static_cast<double>(k);
  const double bk = t.mopt.Bk_moptbl;
  GlrThreshold out;
  out.mu_ub = (std::sqrt(kd / (1.0 + bk)) - 1.0) / lam(spectrum, k);
  double numerator = glr_shrink_sum(spectrum, k, mu) - bk;
  if (variant == BandlimitedTauVariant::Strict) numerator -= 1.0;
  const double denominator = kd + bk - glr_bias_sum(spectrum, k, mu);
  out.tau = numerator / denominator;
  out.applicable = t.mopt.cond_bl && mu < out.mu_ub;
  return out;
}

}  // namespace

GlrThreshold tau_glr(const Spectrum& spectrum, std::size_t k, double mu) {
  check_mu(mu);
  return glr_threshold(spectrum, k, mu, make_tables(spectrum, k));
}

GlrThreshold tau_glr_weak(const Spectrum& spectrum, std::size_t k, double mu) {
  check_mu(mu);
  return glr_threshold_weak(spectrum, k, mu, make_tables(spectrum, k));
}

GlrThreshold tau_glr_bl(const Spectrum& spectrum, std::size_t k, double mu,
                        BandlimitedTauVariant variant) {
  check_mu(mu);
  return glr_threshold_bl(spectrum, k, mu, variant, make_tables(spectrum, k));
}

double mse_upper_bound(const Spectrum& spectrum, std::size_t k, std::size_t m, double sigma,
                       NoiseKind kind) {
  if (m == 0 || m > spectrum.size()) throw std::out_of_range("mse_upper_bound: m must lie in [1, N]");
  if (!(sigma >= 0.0)) throw std::invalid_argument("mse_upper_bound: sigma must be non-negative");
  const double kd = static_cast<double>(k);
  const double bk = bound_Bk_table(spectrum, k)[m - 1];
  const double s2 = sigma * sigma;
  if (kind == NoiseKind::FullBand) return (kd + bk) + s2 * bound_B_table(spectrum)[m - 1];
  return (kd - 1.0) + (1.0 + s2) * (1.0 + bk);
}

ThresholdReport threshold_report(const Spectrum& spectrum, std::size_t k, double mu,
                                 BandlimitedTauVariant variant) {
  check_mu(mu);
  Tables t = make_tables(spectrum, k);
  ThresholdReport out;
  out.n = spectrum.size();
  out.k = k;
  out.mu = mu;
  out.ratios = t.ratios;
  out.mopt = t.mopt;
  out.glr = glr_threshold(spectrum, k, mu, t);
  out.glr_bl = glr_threshold_bl(spectrum, k, mu, variant, t);
  out.glr_weak = glr_threshold_weak(spectrum, k, mu, t);
  out.B = std::move(t.b);
  out.Bk = std::move(t.bk);
  return out;
}

}  // namespace gsp
