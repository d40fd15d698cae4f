#pragma once

#include <Eigen/Dense>

namespace slog {

// Implicit representation of the lifted operator Z = Y^T V (Khatri-Rao) V,
// the NP x N matrix whose column i is vec(v_i ytilde_i^T). Z is never formed:
// mat-vec, adjoint mat-vec and diag(Z^T Z) all work from Ytilde = V^T Y.
// Z^T Z is exactly diagonal because the eigenvectors are orthonormal, with
// z_i = ||v_i^T Y||_2^2 -- the property every fast solve below relies on.
struct LiftedOperator {
  Eigen::MatrixXd v;        // N x N, orthonormal columns
  Eigen::MatrixXd y_tilde;  // N x P
  Eigen::VectorXd ztz_diag; // z, length N
  int n = 0;
  int p = 0;
};

LiftedOperator build_lifted(const Eigen::MatrixXd& v, const Eigen::MatrixXd& y);

// Z g~ = vec(V diag(g~) Ytilde), O(N^2 P).
Eigen::VectorXd lifted_matvec(const LiftedOperator& op, const Eigen::VectorXd& g_tilde);

// Z^T x, entries v_i^T unvec(x) ytilde_i, O(N^2 P).
Eigen::VectorXd lifted_adjoint(const LiftedOperator& op, const Eigen::VectorXd& x);

// Entrywise floor for near-zero entries of z = diag(Z^T Z) so the
// diagonal-plus-low-rank solves stay defined. Entries below
// eps * max(z) are raised to that floor; *floored reports whether any were.
// Only degenerate observations (e.g. Y with an empty spectral row) trigger it.
Eigen::VectorXd floor_ztz(const Eigen::VectorXd& z, double eps = 1e-12,
                          bool* floored = nullptr);

// Cached factorization of A = diag(z) + rho * M M^T with z > 0, M of size
// N x d. Applying A^{-1} costs O(N d) after O(N d^2 + d^3) setup; the d = 1
// case uses the scalar Sherman-Morrison path. rho = 0 degenerates to the
// plain diagonal solve.
class WoodburyFactor {
 public:
  WoodburyFactor() = default;
  WoodburyFactor(const Eigen::VectorXd& z, double rho, const Eigen::MatrixXd& m);

  Eigen::VectorXd apply(const Eigen::VectorXd& rhs) const;

  const Eigen::VectorXd& zinv() const { return zinv_; }

 private:
  Eigen::VectorXd zinv_;
  double rho_ = 0.0;
  Eigen::MatrixXd m_;
  // d = 1 path: zeta = 1/rho + sum_i m_i^2 / z_i.
  double zeta_ = 0.0;
  Eigen::VectorXd w_;  // m o zinv
  // d > 1 path: Mbar = I/rho + M^T diag(zinv) M.
  Eigen::LDLT<Eigen::MatrixXd> mbar_;
};

// One-shot (diag(z) + rho M M^T)^{-1} rhs.
Eigen::VectorXd woodbury_solve(const Eigen::VectorXd& z, double rho,
                               const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs);

// Elementwise sign(v) * max(|v| - t, 0); t must be nonnegative.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t);

}  // namespace slog
