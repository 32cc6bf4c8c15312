#include "gsp/signal.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace gsp {

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::FullBand ? "full-band" : "bandlimited";
}

NoiseKind parse_noise_kind(const std::string& text) {
  if (text == "full-band" || text == "fullband" || text == "full") return NoiseKind::FullBand;
  if (text == "bandlimited" || text == "bl") return NoiseKind::Bandlimited;
  throw std::invalid_argument("unknown noise kind '" + text + "'");
}

std::string to_string(NoiseDistribution dist) {
  return dist == NoiseDistribution::Gaussian ? "gaussian" : "rademacher";
}

NoiseDistribution parse_noise_distribution(const std::string& text) {
  if (text == "gaussian") return NoiseDistribution::Gaussian;
  if (text == "rademacher") return NoiseDistribution::Rademacher;
  throw std::invalid_argument("unknown noise distribution '" + text + "'");
}

double sigma_from_snr(double snr, NoiseKind kind, std::size_t k, std::size_t n) {
  if (!(snr > 0.0)) throw std::invalid_argument("snr must be positive");
  if (kind == NoiseKind::FullBand) {
    if (n == 0 || k == 0 || k > n) throw std::invalid_argument("sigma_from_snr: need 1 <= k <= n");
    return std::sqrt(static_cast<double>(k) / (static_cast<double>(n) * snr));
  }
  return std::sqrt(1.0 / snr);
}

NoiseSpec NoiseSpec::from_snr(double snr, NoiseKind kind, std::size_t k, std::size_t n) {
  return NoiseSpec{kind, snr, sigma_from_snr(snr, kind, k, n)};
}

Eigen::VectorXd standard_draws(std::size_t n, CounterRng& rng, NoiseDistribution dist) {
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  if (dist == NoiseDistribution::Gaussian) {
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  } else {
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = (rng() >> 63) != 0 ? 1.0 : -1.0;
  }
  return z;
}

Eigen::VectorXd draw_signal(const SignalSpec& spec, const Spectrum& spectrum, CounterRng& rng,
                            NoiseDistribution dist) {
  if (spec.k == 0 || spec.k > spectrum.size()) {
    throw std::invalid_argument("draw_signal: bandwidth must satisfy 1 <= k <= N");
  }
  const Eigen::VectorXd z = standard_draws(spec.k, rng, dist);
  return spectrum.eigenvectors.leftCols(static_cast<Eigen::Index>(spec.k)) * z;
}

Eigen::VectorXd draw_noise(NoiseKind kind, const Spectrum& spectrum, std::size_t k,
                           CounterRng& rng, NoiseDistribution dist) {
  if (kind == NoiseKind::FullBand) return standard_draws(spectrum.size(), rng, dist);
  return draw_signal(SignalSpec{k}, spectrum, rng, dist);
}

}  // namespace gsp
