#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "gsp/graph.hpp"
#include "gsp/theory.hpp"

namespace gsp {

/// Tracks G = (Pi_S + mu L)^{-1} and a few products of it while vertices are
/// added to S one at a time (Sherman-Morrison updates), so the GLR bias and
/// noise sensitivity of S + {v} can be scored in O(N k + |S|) per candidate.
/// The state is rebuilt from a Cholesky factorisation every
/// `refresh_interval` additions to bound drift.
class GlrIncremental {
 public:
  GlrIncremental(const Eigen::MatrixXd& laplacian, const Spectrum& spectrum, std::size_t k,
                 double mu, std::size_t refresh_interval = 50);

  struct Score {
    double xi1 = 0.0;
    double xi2_full = 0.0;
    double xi2_bl = 0.0;

    double xi2(NoiseKind kind) const { return kind == NoiseKind::FullBand ? xi2_full : xi2_bl; }
    double mse(double sigma, NoiseKind kind) const { return xi1 + sigma * sigma * xi2(kind); }
  };

  /// Scores of the current S (k, 0, 0 when S is empty).
  Score current() const;
  /// Scores of S + {v}; v must not already be selected.
  Score evaluate(std::size_t v) const;
  void add(std::size_t v);

  const std::vector<std::size_t>& selected() const { return selected_; }
  bool is_selected(std::size_t v) const { return in_set_[v]; }
  std::size_t size() const { return selected_.size(); }

  /// Current G; columns at `selected()` form the reconstruction operator.
  /// Only meaningful once S is nonempty.
  const Eigen::MatrixXd& inverse() const { return g_; }
  /// N x |S| operator in selection order.
  Eigen::MatrixXd operator_matrix() const;

 private:
  void rebuild();

  const Eigen::MatrixXd& laplacian_;
  std::size_t n_;
  std::size_t k_;
  double mu_;
  std::size_t refresh_interval_;
  Eigen::MatrixXd uk_;     // U_K
  Eigen::MatrixXd w_;      // U_K Lambda_K
  Eigen::RowVectorXd column_sums_;  // 1^T U_K

  std::vector<std::size_t> selected_;
  std::vector<bool> in_set_;
  std::size_t since_refresh_ = 0;

  Eigen::MatrixXd g_;   // G
  Eigen::MatrixXd g2_;  // G^2
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMatrix m_;  // G W
  RowMatrix y_;  // G U_K
  RowMatrix p_;  // G^2 W
  double m_norm2_ = 0.0;
  double trace_um_ = 0.0;  // tr(U_K^T M)

  void refresh_scalars();
};

}  // namespace gsp
