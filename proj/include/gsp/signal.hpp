#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>

#include "gsp/graph.hpp"
#include "gsp/rng.hpp"

namespace gsp {

enum class NoiseKind { FullBand, Bandlimited };

/// Distribution of the standard draws underlying signals and noise. Gaussian
/// is the default; Rademacher (+-1 with equal probability) is a robustness
/// switch with the same first two moments.
enum class NoiseDistribution { Gaussian, Rademacher };

/// "full-band" / "bandlimited".
std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& text);
std::string to_string(NoiseDistribution dist);
NoiseDistribution parse_noise_distribution(const std::string& text);

/// Noise level for a target SNR: sqrt(k/(N*snr)) for full-band noise and
/// sqrt(1/snr) for bandlimited noise. Throws std::invalid_argument if snr <= 0.
double sigma_from_snr(double snr, NoiseKind kind, std::size_t k, std::size_t n);

struct SignalSpec {
  std::size_t k = 1;
};

struct NoiseSpec {
  NoiseKind kind = NoiseKind::FullBand;
  double snr = 1.0;
  double sigma = 1.0;

  static NoiseSpec from_snr(double snr, NoiseKind kind, std::size_t k, std::size_t n);
};

/// Vector of n i.i.d. standard draws.
Eigen::VectorXd standard_draws(std::size_t n, CounterRng& rng,
                               NoiseDistribution dist = NoiseDistribution::Gaussian);

/// x = U_K z with z a standard draw of length k, so Cov(x) is the bandlimited
/// projector.
Eigen::VectorXd draw_signal(const SignalSpec& spec, const Spectrum& spectrum, CounterRng& rng,
                            NoiseDistribution dist = NoiseDistribution::Gaussian);

/// Unscaled noise: i.i.d. standard for full-band, U_K z for bandlimited. The
/// caller multiplies by sigma.
Eigen::VectorXd draw_noise(NoiseKind kind, const Spectrum& spectrum, std::size_t k,
                           CounterRng& rng, NoiseDistribution dist = NoiseDistribution::Gaussian);

}  // namespace gsp
