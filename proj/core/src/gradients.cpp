#include "slog/gradients.hpp"

#include <cmath>

#include "slog/errors.hpp"

namespace slog {

double slog_loss(const Eigen::MatrixXd& x_hat, const Eigen::MatrixXd& x) {
  if (x_hat.rows() != x.rows() || x_hat.cols() != x.cols()) {
    throw DimensionError("loss: shape mismatch");
  }
  const double target_norm = x.norm();
  if (target_norm == 0.0) throw InvalidArgument("loss: target has zero norm");
  return std::min((x_hat - x).norm(), (x_hat + x).norm()) / target_norm;
}

namespace {

// d loss / d vec(X^). The "-" branch wins ties, matching slog_loss.
Eigen::VectorXd loss_gradient(const Eigen::VectorXd& x_hat_vec,
                              const Eigen::VectorXd& x_vec) {
  const double target_norm = x_vec.norm();
  if (target_norm == 0.0) throw InvalidArgument("loss: target has zero norm");
  Eigen::VectorXd diff = x_hat_vec - x_vec;
  double dist = diff.norm();
  const double dist_plus = (x_hat_vec + x_vec).norm();
  if (dist_plus < dist) {
    diff = x_hat_vec + x_vec;
    dist = dist_plus;
  }
  if (dist == 0.0) return Eigen::VectorXd::Zero(x_vec.size());
  return diff / (dist * target_norm);
}

}  // namespace

Eigen::VectorXd backward(const SlogModel& model, const ForwardTrace& trace,
                         const Eigen::MatrixXd& x_target) {
  if (trace.model_version != model.version) {
    throw StaleTrace("backward: trace was recorded for a different model version");
  }
  const int k_layers = model.k();
  if (static_cast<int>(trace.layers.size()) != k_layers) {
    throw StaleTrace("backward: trace depth does not match model depth");
  }
  const LiftedOperator& op = trace.op;
  const Eigen::Index np = static_cast<Eigen::Index>(op.n) * op.p;
  if (x_target.rows() != op.n || x_target.cols() != op.p) {
    throw DimensionError("backward: target shape mismatch");
  }

  SlogModel grads;  // same shapes, zero-filled, used as an accumulator
  grads.n = model.n;
  grads.d = model.d;
  grads.layers.resize(k_layers);
  for (auto& g : grads.layers) {
    g.constraint_mat = Eigen::MatrixXd::Zero(model.n, model.d);
    g.constraint_vec = Eigen::VectorXd::Zero(model.d);
  }

  const Eigen::Map<const Eigen::VectorXd> target_vec(x_target.data(), np);

  // Gradients flowing into the outputs of the layer being processed.
  Eigen::VectorXd xbar = Eigen::VectorXd::Zero(np);
  Eigen::VectorXd lambdabar = Eigen::VectorXd::Zero(np);
  Eigen::VectorXd mubar = Eigen::VectorXd::Zero(model.d);

  for (int k = k_layers - 1; k >= 0; --k) {
    const LayerParams& p = model.layers[k];
    LayerParams& gr = grads.layers[k];
    const LayerTrace& lt = trace.layers[k];
    const Eigen::VectorXd& x_prev = k > 0 ? trace.layers[k - 1].x : trace.init.x0;
    const Eigen::VectorXd& lambda_prev =
        k > 0 ? trace.layers[k - 1].lambda : trace.init.lambda0;
    const Eigen::VectorXd& mu_prev = k > 0 ? trace.layers[k - 1].mu : trace.init.mu0;
    (void)x_prev;  // the filter rhs is linear in x_prev; its value is not needed

    // Gradient w.r.t. Z g~ of this layer, accumulated across consumers.
    Eigen::VectorXd zgbar = Eigen::VectorXd::Zero(np);
    if (k == k_layers - 1) {
      // X^ = unvec(Z g~[K]).
      zgbar += loss_gradient(lt.zg, target_vec);
    }

    // Multipliers sub-layer: lambda' = beta1 lambda + beta2 Zg + beta3 x,
    //                        mu' = gamma mu + M^T g - m.
    gr.beta1 += lambdabar.dot(lambda_prev);
    gr.beta2 += lambdabar.dot(lt.zg);
    gr.beta3 += lambdabar.dot(lt.x);
    gr.gamma += mubar.dot(mu_prev);
    gr.constraint_mat += lt.g * mubar.transpose();
    gr.constraint_vec -= mubar;
    zgbar += p.beta2 * lambdabar;
    Eigen::VectorXd gbar = p.constraint_mat * mubar;
    Eigen::VectorXd xbar_total = xbar + p.beta3 * lambdabar;
    Eigen::VectorXd lambda_prev_bar = p.beta1 * lambdabar;
    Eigen::VectorXd mu_prev_bar = p.gamma * mubar;

    // Sources sub-layer: x = S_tau(alpha1 Zg + alpha2 lambda). Zero
    // subgradient on |pre| <= tau.
    Eigen::VectorXd ubar(np);
    for (Eigen::Index i = 0; i < np; ++i) {
      const bool active = std::abs(lt.pre(i)) > p.tau;
      ubar(i) = active ? xbar_total(i) : 0.0;
      if (active) gr.tau -= (lt.pre(i) > 0.0 ? 1.0 : -1.0) * xbar_total(i);
    }
    gr.alpha1 += ubar.dot(lt.zg);
    gr.alpha2 += ubar.dot(lambda_prev);
    zgbar += p.alpha1 * ubar;
    lambda_prev_bar += p.alpha2 * ubar;

    // Collapse all Zg consumers through one adjoint.
    gbar += lifted_adjoint(op, zgbar);

    // Filter sub-layer: g = A^{-1} r with A = diag(z) + rho2 M M^T and
    // r = Z^T (x - rho1 lambda) + M (rho2 m - rho1 mu). The solve adjoint is
    // sol = A^{-1} gbar; dA flows as -sol g^T (symmetrized onto M).
    const Eigen::VectorXd sol = lt.factor.apply(gbar);
    const Eigen::VectorXd zsol = lifted_matvec(op, sol);
    const Eigen::VectorXd msol = p.constraint_mat.transpose() * sol;  // d
    const Eigen::VectorXd mg = p.constraint_mat.transpose() * lt.g;   // d

    gr.rho1 += -zsol.dot(lambda_prev) - msol.dot(mu_prev);
    gr.rho2 += msol.dot(p.constraint_vec) - msol.dot(mg);
    gr.constraint_vec += p.rho2 * msol;
    gr.constraint_mat += sol * (p.rho2 * p.constraint_vec - p.rho1 * mu_prev).transpose() -
                         p.rho2 * (sol * mg.transpose() + lt.g * msol.transpose());

    xbar = zsol;
    lambdabar = lambda_prev_bar - p.rho1 * zsol;
    mubar = mu_prev_bar - p.rho1 * msol;
  }

  return grads.pack();
}

}  // namespace slog
