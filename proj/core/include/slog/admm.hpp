#pragma once

#include <Eigen/Dense>
#include <vector>

#include "slog/lifted.hpp"

namespace slog {

struct AdmmConfig {
  double rho_lambda = 1.0;   // penalty on Z g~ = x
  double rho_mu = 1.0;       // penalty on 1^T g~ = c
  double scale_c = 1.0;
  int max_iters = 5000;
  double tol_primal = 1e-6;
  double tol_dual = 1e-6;
  bool record_history = true;

  void validate() const;
};

struct AdmmState {
  Eigen::VectorXd g_tilde;  // N
  Eigen::VectorXd x;        // NP
  Eigen::VectorXd lambda;   // NP
  double mu = 0.0;
  int iter = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  bool z_floored = false;   // diagnostic: diag(Z^T Z) needed regularization
};

struct AdmmHistory {
  std::vector<double> objective;        // ||x||_1 per iteration
  std::vector<double> primal_residual;
  std::vector<double> dual_residual;
};

struct AdmmResult {
  AdmmState state;
  AdmmHistory history;
};

// Solves  min ||x||_1  s.t.  Z g~ = x,  1^T g~ = c  by scaled-form ADMM:
//
//   g~  <- Gamma^{-1} [ Z^T (rho_l x - lambda) + (rho_m c - mu) 1 ],
//          Gamma = rho_l diag(z) + rho_m 1 1^T   (inverted once, reused)
//   x   <- S_{1/rho_l}( Z g~ + lambda / rho_l )
//   lambda <- lambda + rho_l (Z g~ - x)
//   mu     <- mu + rho_m (1^T g~ - c)
//
// starting from zero primal and dual variables. Stops when both the scaled
// primal residual ||Zg~ - x|| / max(||Zg~||, ||x||, 1) and the scaled dual
// residual rho_l ||x_k+1 - x_k|| / max(||lambda||, 1) drop below their
// tolerances, or at max_iters (converged = false, no exception).
AdmmResult admm_solve(const LiftedOperator& op, const AdmmConfig& cfg = {});

// unvec(Z g~): the source estimate implied by an inverse response.
Eigen::MatrixXd recover_sources(const LiftedOperator& op, const Eigen::VectorXd& g_tilde);

}  // namespace slog
