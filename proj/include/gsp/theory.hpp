#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "gsp/graph.hpp"
#include "gsp/reconstruction.hpp"
#include "gsp/sample_set.hpp"
#include "gsp/signal.hpp"

namespace gsp {

/// Expected squared bias (xi1) and noise sensitivity (xi2) of a linear
/// reconstruction; the mean-squared error is xi1 + sigma^2 xi2.
struct BiasVariance {
  double xi1 = 0.0;
  double xi2 = 0.0;
  NoiseKind kind = NoiseKind::FullBand;

  double mse(double sigma) const { return xi1 + sigma * sigma * xi2; }
};

/// Dense evaluation: xi1 = ||U_K - R U_SK||_F^2, xi2 = ||R||_F^2 (full-band)
/// or ||R U_SK||_F^2 (bandlimited).
BiasVariance xi_pair(const ReconstructionOperator& op, const Spectrum& spectrum, std::size_t k,
                     NoiseKind kind);

/// Same as above but builds the operator; an empty S gives (k, 0).
BiasVariance xi_pair(const Method& method, const Spectrum& spectrum,
                     const Eigen::MatrixXd& laplacian, std::size_t k, const SampleSet& s,
                     NoiseKind kind);

/// rank(U_SK) under the least-squares cutoff rule.
std::size_t ls_rank(const Spectrum& spectrum, std::size_t k, const SampleSet& s);

/// k - rank(U_SK), the least-squares bias.
std::size_t xi1_ls_rank(const Spectrum& spectrum, std::size_t k, const SampleSet& s);

/// Sum of reciprocals of the nonzero eigenvalues of the principal submatrix
/// of the bandlimited projector on S; equals ||R_S||_F^2 under least squares.
double xi2_ls_closed(const Spectrum& spectrum, std::size_t k, const SampleSet& s);

struct DeltaPair {
  double d1 = 0.0;  // xi1(S) - xi1(S \ T)
  double d2 = 0.0;  // xi2(S) - xi2(S \ T)
};

/// Component-wise differences of xi_pair at S and S minus T. T must be a
/// nonempty subset of S.
DeltaPair delta_pair(const Method& method, const Spectrum& spectrum,
                     const Eigen::MatrixXd& laplacian, std::size_t k, const SampleSet& s,
                     const std::vector<std::size_t>& t, NoiseKind kind);

/// |d1| at or below this is treated as an exact zero bias change.
inline constexpr double kDeltaZeroTol = 1e-9;

/// When removing T from S lowers the MSE, as a function of SNR.
struct Threshold {
  enum class Kind {
    Below,   // better iff snr < value
    Above,   // better iff snr > value
    Always,  // better for every snr
    Never,   // never better
  };
  Kind kind = Kind::Never;
  double value = 0.0;

  bool better_at(double snr) const;
};

/// energy_ratio = E||x||^2 / E||eps||^2 (k/N for full-band, 1 for bandlimited).
Threshold tau_general(const DeltaPair& d, double energy_ratio);

/// Least-squares threshold for dropping v from S: (k/N) Delta_2(S, {v}) for
/// full-band noise, reported as a non-positive number whenever v does not
/// raise the rank; 1 for bandlimited noise.
double tau_ls(const Spectrum& spectrum, std::size_t k, const SampleSet& s, std::size_t v,
              NoiseKind kind);

/// Number of prefixes S_i of `order` whose last vertex has tau_ls > 0
/// (full-band). `order` must be a permutation of all vertices.
std::size_t count_positive_tau(const Spectrum& spectrum, std::size_t k,
                               const std::vector<std::size_t>& order);

/// tau_ls(S_i, v_i) for every prefix S_i of `order` (full-band).
std::vector<double> tau_ls_sequence(const Spectrum& spectrum, std::size_t k,
                                    const std::vector<std::size_t>& order);

/// omega(x) = (sqrt(x) + 1/sqrt(x))^2 / 4 for x >= 1.
double omega(double x);

struct KantorovichRatios {
  double r = 1.0;           // omega(lambda_N / lambda_2)
  double r_bl = 1.0;        // omega(lambda_k / lambda_2)
  double lambda_bar = 0.0;  // tr(L) / N
};

class DisconnectedSpectrumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requires lambda_2 > 0 and k >= 2.
KantorovichRatios kantorovich_ratios(const Spectrum& spectrum, std::size_t k);

/// B(m) for m = 1..N (entry m-1).
std::vector<double> bound_B_table(const Spectrum& spectrum);
/// B_k(m) for m = 1..N (entry m-1).
std::vector<double> bound_Bk_table(const Spectrum& spectrum, std::size_t k);
double bound_B(const Spectrum& spectrum, std::size_t m);
double bound_Bk(const Spectrum& spectrum, std::size_t k, std::size_t m);

struct MoptResult {
  std::size_t m_opt = 1;
  std::size_t m_opt_bl = 1;
  double B_mopt = 0.0;
  double Bk_moptbl = 0.0;
  bool cond_fullband = false;  // B(m_opt) < N
  bool cond_bl = false;        // B_k(m_opt_bl) < k - 1
  bool cond_weak = false;      // 2 r sqrt(N) < N
};

MoptResult m_opt_search(const Spectrum& spectrum, std::size_t k);

/// xi1 and xi2 of GLR with every vertex observed.
BiasVariance glr_full_observation_xi(const Spectrum& spectrum, std::size_t k, double mu,
                                     NoiseKind kind);

struct GlrThreshold {
  double mu_ub = 0.0;
  double tau = 0.0;
  bool applicable = false;
};

/// Numerator variant for the bandlimited GLR threshold: the printed form
/// subtracts B_k(m_opt_bl), the strict form subtracts 1 + B_k(m_opt_bl).
enum class BandlimitedTauVariant { Printed, Strict };

GlrThreshold tau_glr(const Spectrum& spectrum, std::size_t k, double mu);
GlrThreshold tau_glr_weak(const Spectrum& spectrum, std::size_t k, double mu);
GlrThreshold tau_glr_bl(const Spectrum& spectrum, std::size_t k, double mu,
                        BandlimitedTauVariant variant = BandlimitedTauVariant::Printed);

/// Upper bound on the GLR MSE with m samples: (k + B_k(m)) + sigma^2 B(m) for
/// full-band noise, (k - 1) + (1 + sigma^2)(1 + B_k(m)) for bandlimited.
double mse_upper_bound(const Spectrum& spectrum, std::size_t k, std::size_t m, double sigma,
                       NoiseKind kind);

/// Every derived quantity for one (spectrum, k, mu).
struct ThresholdReport {
  std::size_t n = 0;
  std::size_t k = 0;
  double mu = 0.0;
  KantorovichRatios ratios;
  std::vector<double> B;
  std::vector<double> Bk;
  MoptResult mopt;
  GlrThreshold glr;
  GlrThreshold glr_bl;
  GlrThreshold glr_weak;
};

ThresholdReport threshold_report(const Spectrum& spectrum, std::size_t k, double mu,
                                 BandlimitedTauVariant variant = BandlimitedTauVariant::Printed);

}  // namespace gsp
