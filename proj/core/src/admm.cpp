#include "slog/admm.hpp"

#include <algorithm>
#include <cmath>

#include "slog/errors.hpp"

namespace slog {

void AdmmConfig::validate() const {
  if (rho_lambda <= 0.0 || rho_mu <= 0.0) {
    throw InvalidArgument("admm: penalties must be strictly positive");
  }
  if (scale_c == 0.0) throw InvalidArgument("admm: scale c must be nonzero");
  if (max_iters < 1) throw InvalidArgument("admm: max_iters must be positive");
  if (tol_primal <= 0.0 || tol_dual <= 0.0) {
    throw InvalidArgument("admm: tolerances must be positive");
  }
}

AdmmResult admm_solve(const LiftedOperator& op, const AdmmConfig& cfg) {
  cfg.validate();
  const int n = op.n;
  const Eigen::Index np = static_cast<Eigen::Index>(n) * op.p;

  AdmmResult result;
  AdmmState& st = result.state;
  st.g_tilde = Eigen::VectorXd::Zero(n);
  st.x = Eigen::VectorXd::Zero(np);
  st.lambda = Eigen::VectorXd::Zero(np);
  st.mu = 0.0;

  // Gamma = rho_l diag(z) + rho_m 1 1^T, factored once for the whole run.
  const Eigen::VectorXd z = floor_ztz(op.ztz_diag, 1e-12, &st.z_floored);
  const WoodburyFactor gamma(cfg.rho_lambda * z, cfg.rho_mu,
                             Eigen::MatrixXd::Ones(n, 1));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  if (cfg.record_history) {
    result.history.objective.reserve(cfg.max_iters);
    result.history.primal_residual.reserve(cfg.max_iters);
    result.history.dual_residual.reserve(cfg.max_iters);
  }

  for (int k = 0; k < cfg.max_iters; ++k) {
    st.g_tilde = gamma.apply(
        lifted_adjoint(op, cfg.rho_lambda * st.x - st.lambda) +
        (cfg.rho_mu * cfg.scale_c - st.mu) * ones);

    const Eigen::VectorXd zg = lifted_matvec(op, st.g_tilde);
    const Eigen::VectorXd x_new =
        soft_threshold(zg + st.lambda / cfg.rho_lambda, 1.0 / cfg.rho_lambda);

    st.lambda += cfg.rho_lambda * (zg - x_new);
    st.mu += cfg.rho_mu * (ones.dot(st.g_tilde) - cfg.scale_c);

    st.primal_residual =
        (zg - x_new).norm() / std::max({zg.norm(), x_new.norm(), 1.0});
    st.dual_residual = cfg.rho_lambda * (x_new - st.x).norm() /
                       std::max(st.lambda.norm(), 1.0);
    st.x = x_new;
    st.iter = k + 1;

    if (cfg.record_history) {
      result.history.objective.push_back(st.x.lpNorm<1>());
      result.history.primal_residual.push_back(st.primal_residual);
      result.history.dual_residual.push_back(st.dual_residual);
    }

    if (st.primal_residual <= cfg.tol_primal && st.dual_residual <= cfg.tol_dual) {
      st.converged = true;
      break;
    }
  }
  return result;
}

Eigen::MatrixXd recover_sources(const LiftedOperator& op, const Eigen::VectorXd& g_tilde) {
  const Eigen::VectorXd x = lifted_matvec(op, g_tilde);
  return Eigen::Map<const Eigen::MatrixXd>(x.data(), op.n, op.p);
}

}  // namespace slog
