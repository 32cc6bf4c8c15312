#include "gsp/reconstruction.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <limits>
#include <sstream>

#include "gsp/kernels/kernels.hpp"

namespace gsp {

std::string describe(const Method& method) {
  std::ostringstream os;
  if (const auto* ls = std::get_if<LeastSquares>(&method)) {
    os << "LS(k=" << ls->k << ")";
  } else {
    os << "GLR(mu=" << std::get<LaplacianRegularized>(method).mu << ")";
  }
  return os.str();
}

ReconstructionOperator::ReconstructionOperator(Eigen::MatrixXd matrix, Method method,
                                               SampleSet sample)
    : matrix_(std::move(matrix)), method_(method), sample_(std::move(sample)) {
  if (static_cast<std::size_t>(matrix_.cols()) != sample_.size()) {
    throw std::invalid_argument("operator column count does not match the sample set size");
  }
}

namespace {

double default_rtol(const Eigen::MatrixXd& a) {
  return static_cast<double>(std::max(a.rows(), a.cols())) *
         std::numeric_limits<double>::epsilon();
}

}  // namespace

std::size_t numerical_rank(const Eigen::MatrixXd& a, double rtol) {
  if (a.size() == 0) return 0;
  if (rtol < 0.0) rtol = default_rtol(a);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rtol * sv(0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a, double rtol) {
  if (a.size() == 0) return Eigen::MatrixXd::Zero(a.cols(), a.rows());
  if (rtol < 0.0) rtol = default_rtol(a);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rtol * sv(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd sampled_band(const Spectrum& spectrum, std::size_t k, const SampleSet& s) {
  if (k == 0 || k > spectrum.size()) throw std::invalid_argument("bandwidth must satisfy 1 <= k <= N");
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(s.size()), kk);
  for (std::size_t j = 0; j < s.size(); ++j) {
    rows.row(static_cast<Eigen::Index>(j)) =
        spectrum.eigenvectors.row(static_cast<Eigen::Index>(s[j])).head(kk);
  }
  return rows;
}

ReconstructionOperator ls_operator(const Spectrum& spectrum, std::size_t k, const SampleSet& s) {
  if (s.empty()) throw std::invalid_argument("ls_operator: sample set is empty");
  const Eigen::MatrixXd usk = sampled_band(spectrum, k, s);
  Eigen::MatrixXd r = spectrum.eigenvectors.leftCols(static_cast<Eigen::Index>(k)) *
                      pseudo_inverse(usk, kLsRankRtol);
  return ReconstructionOperator(std::move(r), LeastSquares{k}, s);
}

ReconstructionOperator glr_operator(const Eigen::MatrixXd& laplacian, double mu,
                                    const SampleSet& s) {
  if (!(mu > 0.0)) throw std::invalid_argument("glr_operator: mu must be positive");
  if (s.empty()) throw std::invalid_argument("glr_operator: sample set is empty");
  const Eigen::Index n = laplacian.rows();
  Eigen::MatrixXd a = mu * laplacian;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto v = static_cast<Eigen::Index>(s[j]);
    a(v, v) += 1.0;
    rhs(v, static_cast<Eigen::Index>(j)) = 1.0;
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    std::ostringstream os;
    os << "glr_operator: Cholesky factorisation failed (smallest pivot "
       << ldlt.vectorD().minCoeff() << ")";
    throw ReconstructionError(os.str());
  }
  // (Pi_S + mu L) is symmetric, so its columns at S solve A X = E_S.
  Eigen::MatrixXd r = llt.solve(rhs);
  return ReconstructionOperator(std::move(r), LaplacianRegularized{mu}, s);
}

ReconstructionOperator make_operator(const Method& method, const Spectrum& spectrum,
                                     const Eigen::MatrixXd& laplacian, const SampleSet& s) {
  if (const auto* ls = std::get_if<LeastSquares>(&method)) return ls_operator(spectrum, ls->k, s);
  return glr_operator(laplacian, std::get<LaplacianRegularized>(method).mu, s);
}

Eigen::VectorXd reconstruct(const ReconstructionOperator& op, const Eigen::VectorXd& y_s) {
  const Eigen::MatrixXd& r = op.matrix();
  if (y_s.size() != r.cols()) {
    throw std::invalid_argument("reconstruct: expected " + std::to_string(r.cols()) +
                                " samples, got " + std::to_string(y_s.size()));
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(r.rows());
  const auto n = static_cast<std::size_t>(r.rows());
  for (Eigen::Index j = 0; j < r.cols(); ++j) {
    kernels::axpy(y_s(j), r.col(j).data(), x.data(), n);
  }
  return x;
}

Eigen::VectorXd restrict_to(const Eigen::VectorXd& x, const SampleSet& s) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) {
    const std::size_t v = s[j];
    if (v >= static_cast<std::size_t>(x.size())) {
      throw std::invalid_argument("restrict_to: vertex outside the signal");
    }
    y(static_cast<Eigen::Index>(j)) = x(static_cast<Eigen::Index>(v));
  }
  return y;
}

}  // namespace gsp
