#include "gsp/glr_incremental.hpp"

#include <Eigen/Cholesky>
#include <stdexcept>

#include "gsp/kernels/kernels.hpp"

namespace gsp {

GlrIncremental::GlrIncremental(const Eigen::MatrixXd& laplacian, const Spectrum& spectrum,
                               std::size_t k, double mu, std::size_t refresh_interval)
    : laplacian_(laplacian),
      n_(spectrum.size()),
      k_(k),
      mu_(mu),
      refresh_interval_(refresh_interval == 0 ? 1 : refresh_interval),
      in_set_(spectrum.size(), false) {
  if (!(mu > 0.0)) throw std::invalid_argument("GlrIncremental: mu must be positive");
  if (k == 0 || k > n_) throw std::invalid_argument("GlrIncremental: need 1 <= k <= N");
  if (static_cast<std::size_t>(laplacian.rows()) != n_) {
    throw std::invalid_argument("GlrIncremental: Laplacian and spectrum sizes differ");
  }
  const auto kk = static_cast<Eigen::Index>(k);
  uk_ = spectrum.eigenvectors.leftCols(kk);
  w_ = uk_ * spectrum.eigenvalues.head(kk).asDiagonal();
  column_sums_ = uk_.colwise().sum();
}

void GlrIncremental::refresh_scalars() {
  m_norm2_ = m_.squaredNorm();
  trace_um_ = uk_.cwiseProduct(m_).sum();
}

void GlrIncremental::rebuild() {
  Eigen::MatrixXd a = mu_ * laplacian_;
  for (std::size_t v : selected_) {
    const auto i = static_cast<Eigen::Index>(v);
    a(i, i) += 1.0;
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("GlrIncremental: Cholesky factorisation failed");
  }
  g_ = llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
  g_ = 0.5 * (g_ + g_.transpose()).eval();
  g2_.noalias() = g_ * g_;
  m_.noalias() = g_ * w_;
  y_.noalias() = g_ * uk_;
  p_.noalias() = g2_ * w_;
  refresh_scalars();
  since_refresh_ = 0;
}

GlrIncremental::Score GlrIncremental::current() const {
  Score s;
  if (selected_.empty()) {
    s.xi1 = static_cast<double>(k_);
    return s;
  }
  s.xi1 = mu_ * mu_ * m_norm2_;
  s.xi2_bl = (uk_ - mu_ * Eigen::MatrixXd(m_)).squaredNorm();
  double full = 0.0;
  for (std::size_t v : selected_) {
    const auto i = static_cast<Eigen::Index>(v);
    full += g2_(i, i);
  }
  s.xi2_full = full;
  return s;
}

GlrIncremental::Score GlrIncremental::evaluate(std::size_t v) const {
  if (v >= n_ || in_set_[v]) throw std::invalid_argument("GlrIncremental: invalid candidate");
  const auto iv = static_cast<Eigen::Index>(v);
  const double nd = static_cast<double>(n_);
  const auto kk = static_cast<std::size_t>(k_);
  Score s;
  if (selected_.empty()) {
    // With one sample the reconstruction is the constant signal y_v.
    const double* u = uk_.data();
    double norm2 = 0.0;
    double cross = 0.0;
    for (std::size_t j = 0; j < kk; ++j) {
      const double uj = u[static_cast<std::size_t>(iv) + j * n_];
      norm2 += uj * uj;
      cross += column_sums_(static_cast<Eigen::Index>(j)) * uj;
    }
    s.xi1 = static_cast<double>(k_) - 2.0 * cross + nd * norm2;
    s.xi2_full = nd;
    s.xi2_bl = nd * norm2;
    return s;
  }

  const double c = 1.0 + g_(iv, iv);
  const double gg = g2_(iv, iv);
  const double* h = m_.row(iv).data();
  const double hh = kernels::sum_squares(h, kk);
  const double ph = kernels::dot(p_.row(iv).data(), h, kk);
  const double yh = kernels::dot(y_.row(iv).data(), h, kk);

  const double m_norm2 = m_norm2_ - 2.0 * ph / c + gg * hh / (c * c);
  const double trace = trace_um_ - yh / c;
  s.xi1 = mu_ * mu_ * m_norm2;
  s.xi2_bl = static_cast<double>(k_) - 2.0 * mu_ * trace + mu_ * mu_ * m_norm2;

  const double* g = g_.col(iv).data();
  const double* q = g2_.col(iv).data();
  auto diag_after = [&](std::size_t u) {
    const double gs = g[u];
    return g2_(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u)) - 2.0 * gs * q[u] / c +
           gs * gs * gg / (c * c);
  };
  double full = diag_after(v);
  for (std::size_t u : selected_) full += diag_after(u);
  s.xi2_full = full;
  return s;
}

void GlrIncremental::add(std::size_t v) {
  if (v >= n_ || in_set_[v]) throw std::invalid_argument("GlrIncremental: invalid vertex to add");
  const auto iv = static_cast<Eigen::Index>(v);
  const bool first = selected_.empty();
  selected_.push_back(v);
  in_set_[v] = true;
  if (first || ++since_refresh_ >= refresh_interval_) {
    rebuild();
    return;
  }

  const double c = 1.0 + g_(iv, iv);
  const double gg = g2_(iv, iv);
  const Eigen::VectorXd g = g_.col(iv);
  const Eigen::VectorXd q = g2_.col(iv);
  const Eigen::RowVectorXd h = m_.row(iv);
  const Eigen::RowVectorXd pv = p_.row(iv);
  const Eigen::RowVectorXd yv = y_.row(iv);

  g_.noalias() -= (g / c) * g.transpose();
  g2_.noalias() -= (q / c) * g.transpose();
  g2_.noalias() -= (g / c) * q.transpose();
  g2_.noalias() += (g * (gg / (c * c))) * g.transpose();
  p_.noalias() -= (q / c) * h;
  p_.noalias() -= (g / c) * pv;
  p_.noalias() += (g * (gg / (c * c))) * h;
  m_.noalias() -= (g / c) * h;
  y_.noalias() -= (g / c) * yv;
  refresh_scalars();
}

Eigen::MatrixXd GlrIncremental::operator_matrix() const {
  Eigen::MatrixXd r(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(selected_.size()));
  for (std::size_t j = 0; j < selected_.size(); ++j) {
    r.col(static_cast<Eigen::Index>(j)) = g_.col(static_cast<Eigen::Index>(selected_[j]));
  }
  return r;
}

}  // namespace gsp
