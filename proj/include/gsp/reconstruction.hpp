#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>

#include "gsp/graph.hpp"
#include "gsp/sample_set.hpp"

namespace gsp {

/// Minimum-norm least squares inside the span of the first k eigenvectors.
struct LeastSquares {
  std::size_t k = 1;
};

/// Laplacian-regularised regression with smoothness weight mu > 0.
struct LaplacianRegularized {
  double mu = 1.0;
};

using Method = std::variant<LeastSquares, LaplacianRegularized>;

/// "LS(k=..)" / "GLR(mu=..)".
std::string describe(const Method& method);

class ReconstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense N x |S| linear map from samples on S to a full graph signal.
/// Column j corresponds to vertex sample[j].
class ReconstructionOperator {
 public:
  ReconstructionOperator(Eigen::MatrixXd matrix, Method method, SampleSet sample);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Method& method() const { return method_; }
  const SampleSet& sample() const { return sample_; }

 private:
  Eigen::MatrixXd matrix_;
  Method method_;
  SampleSet sample_;
};

/// Singular values at or below rtol * sigma_max count as zero. The default
/// rtol is max(rows, cols) * machine epsilon.
std::size_t numerical_rank(const Eigen::MatrixXd& a, double rtol = -1.0);
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a, double rtol = -1.0);

/// Rows of U_K at the vertices of S, in S's order (|S| x k).
Eigen::MatrixXd sampled_band(const Spectrum& spectrum, std::size_t k, const SampleSet& s);

/// Relative singular-value cutoff for rank(U_SK) and (U_SK)^+. Rows of an
/// eigenvector matrix carry rounding error of order 1e-13 relative, so exact
/// rank deficiencies surface as singular values near that level, while
/// genuine ones on the graphs exercised here stay above 1e-5.
inline constexpr double kLsRankRtol = 1e-10;

/// R_S = U_K (U_SK)^+ with the pseudo-inverse cutoff kLsRankRtol.
ReconstructionOperator ls_operator(const Spectrum& spectrum, std::size_t k, const SampleSet& s);

/// R_S = columns S of (Pi_S + mu L)^{-1}, via dense Cholesky.
ReconstructionOperator glr_operator(const Eigen::MatrixXd& laplacian, double mu,
                                    const SampleSet& s);

/// Dispatches on the method; `laplacian` is only read for GLR.
ReconstructionOperator make_operator(const Method& method, const Spectrum& spectrum,
                                     const Eigen::MatrixXd& laplacian, const SampleSet& s);

/// x_hat = R_S y_S.
Eigen::VectorXd reconstruct(const ReconstructionOperator& op, const Eigen::VectorXd& y_s);

/// Entries of x at the vertices of S, in S's order.
Eigen::VectorXd restrict_to(const Eigen::VectorXd& x, const SampleSet& s);

}  // namespace gsp
