#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "slog/admm.hpp"
#include "slog/lifted.hpp"
#include "slog/rng.hpp"

namespace slog {

// Learnable parameters of one unrolled layer. Each layer is the composition
// of three sub-layers mirroring one ADMM iteration:
//
//   filter:      g~ = (diag(z) + rho2 M M^T)^{-1}
//                       [ Z^T (x - rho1 lambda) + M (rho2 m - rho1 mu) ]
//   sources:     x  = S_tau( alpha1 Z g~ + alpha2 lambda )
//   multipliers: lambda' = beta1 lambda + beta2 Z g~ + beta3 x
//                mu'     = gamma mu + M^T g~ - m
//
// rho1, rho2 and tau are constrained nonnegative (projected after every
// optimizer step). M (N x d) and m (d) generalize the all-ones scale
// constraint of the convex program; the mu update is the dual ascent step of
// the generalized constraint M^T g~ = m, so that the network specializes
// exactly to the ADMM iteration (see admm_specialization).
struct LayerParams {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double tau = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  double gamma = 0.0;
  Eigen::MatrixXd constraint_mat;  // M, N x d
  Eigen::VectorXd constraint_vec;  // m, d
};

// K layers of decoupled parameters over a fixed graph size N and constraint
// dimension d. Parameters flatten to a single vector in declared field order
// (rho1, rho2, alpha1, alpha2, tau, beta1, beta2, beta3, gamma, M
// column-major, m), layer by layer; the flat form is what the optimizer,
// the gradient checker and the checkpoint format operate on.
struct SlogModel {
  int n = 0;
  int d = 0;
  std::vector<LayerParams> layers;
  std::uint64_t version = 0;  // bumped on every parameter mutation

  int k() const { return static_cast<int>(layers.size()); }

  static constexpr Eigen::Index kScalarsPerLayer = 9;
  Eigen::Index params_per_layer() const {
    return kScalarsPerLayer + static_cast<Eigen::Index>(n) * d + d;
  }
  Eigen::Index param_count() const { return k() * params_per_layer(); }

  Eigen::VectorXd pack() const;
  void unpack(const Eigen::VectorXd& flat);

  // Flat index of a scalar field / matrix entry, for targeted tests.
  Eigen::Index flat_index(int layer, int field) const {
    return layer * params_per_layer() + field;
  }
};

// rho1, rho2, tau ~ Uniform[0,1]; all other parameters ~ Normal(0,1).
// Deterministic per seed.
SlogModel init_model(int n, int d, int k, std::uint64_t seed);

// Parameters that reproduce the ADMM iteration exactly: rho1 = rho2 =
// 1/rho_lambda, M = sqrt(rho_mu) 1_N, m = sqrt(rho_mu) c, alpha1 = 1,
// alpha2 = tau = 1/rho_lambda, beta1 = 1, beta2 = -beta3 = rho_lambda,
// gamma = 1. With zero initial states the layer-k states (g~, x, lambda)
// equal ADMM iterates exactly and the network mu equals the ADMM mu divided
// by sqrt(rho_mu).
SlogModel admm_specialization(int n, int k, const AdmmConfig& cfg);

// Initial (x[0], lambda[0], mu[0]) for a forward pass.
struct InitialState {
  Eigen::VectorXd x0;      // NP
  Eigen::VectorXd lambda0; // NP
  Eigen::VectorXd mu0;     // d

  static InitialState zeros(int n, int p, int d);
  static InitialState random(int n, int p, int d, std::uint64_t seed);
};

// Per-layer tensors cached by the forward pass for the backward pass.
struct LayerTrace {
  Eigen::VectorXd g;       // N
  Eigen::VectorXd zg;      // NP, Z g~
  Eigen::VectorXd pre;     // NP, pre-threshold activation
  Eigen::VectorXd x;       // NP
  Eigen::VectorXd lambda;  // NP
  Eigen::VectorXd mu;      // d
  WoodburyFactor factor;   // factor of diag(z) + rho2 M M^T
};

struct ForwardTrace {
  LiftedOperator op;
  Eigen::VectorXd z_floored;
  bool z_was_floored = false;
  InitialState init;
  std::vector<LayerTrace> layers;
  std::uint64_t model_version = 0;
};

struct ForwardResult {
  Eigen::MatrixXd x_hat;      // N x P, unvec(Z g~[K])
  Eigen::VectorXd g_tilde;    // g~[K]
  ForwardTrace trace;
};

// Individual sub-layers, exposed for testing against dense evaluations.
Eigen::VectorXd filter_sublayer(const LiftedOperator& op, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
                                const LayerParams& p);
Eigen::VectorXd sources_sublayer(const LiftedOperator& op, const Eigen::VectorXd& g_tilde,
                                 const Eigen::VectorXd& lambda, const LayerParams& p);
std::pair<Eigen::VectorXd, Eigen::VectorXd> multipliers_sublayer(
    const LiftedOperator& op, const Eigen::VectorXd& g_tilde, const Eigen::VectorXd& x,
    const Eigen::VectorXd& lambda_prev, const Eigen::VectorXd& mu_prev,
    const LayerParams& p);

// Runs the K layers over observations Y (builds the lifted operator from V
// and Y internally).
ForwardResult forward(const SlogModel& model, const Eigen::MatrixXd& v,
                      const Eigen::MatrixXd& y, const InitialState& init);
ForwardResult forward(const SlogModel& model, const Eigen::MatrixXd& v,
                      const Eigen::MatrixXd& y, std::uint64_t init_seed);

// Checkpoint: dir/model.json (format_version, n, d, k, metadata) plus
// dir/params.f64le (flat parameter vector, little-endian float64).
void save_model(const SlogModel& model, const std::string& dir,
                const std::string& config_json = "{}");
SlogModel load_model(const std::string& dir);

}  // namespace slog
