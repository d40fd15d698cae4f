#pragma once

#include <string>
#include <vector>

#include "slog/admm.hpp"
#include "slog/datagen.hpp"
#include "slog/spectral.hpp"

namespace fixtures {

// Zachary's karate club, 34 nodes / 78 edges, 0-indexed.
inline std::string karate_edge_list() {
  static const int edges[][2] = {
      {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},
      {0, 8},   {0, 10},  {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},
      {0, 21},  {0, 31},  {1, 2},   {1, 3},   {1, 7},   {1, 13},  {1, 17},
      {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},   {2, 9},
      {2, 13},  {2, 27},  {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},
      {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},  {6, 16},  {8, 30},
      {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33}, {15, 32},
      {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32},
      {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25},
      {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31},
      {28, 33}, {29, 32}, {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33},
      {32, 33}};
  std::string out = "# karate club\n";
  for (const auto& e : edges) {
    out += std::to_string(e[0]) + " " + std::to_string(e[1]) + "\n";
  }
  return out;
}

// A noiseless blind-deconvolution instance whose planted inverse response is
// normalized to sum 1 (the solver's constraint scale), in the regime where
// the convex relaxation recovers it exactly with high probability.
struct Planted {
  slog::SpectralGraph sg;
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  Eigen::VectorXd g0;  // 1^T g0 = 1
};

inline Planted make_planted(std::uint64_t seed, int n = 20, int p = 400,
                            double theta = 0.15, int order = 5, double phi = 1.0,
                            double eta = 0.0) {
  slog::GraphParams gp;
  gp.kind = slog::GraphKind::Er;
  gp.n = n;
  gp.p_edge = 0.3;
  Planted inst{slog::build_shift(slog::gen_graph(gp, slog::derive_seed(seed, 100))),
               {}, {}, {}};
  inst.x = slog::sample_sources({n, theta, slog::derive_seed(seed, 101)}, p);
  const Eigen::VectorXd h = slog::sample_filter({order, phi, slog::derive_seed(seed, 102)});
  Eigen::VectorXd h_tilde = slog::FilterSpec::from_coeffs(h).response_on(inst.sg);
  inst.g0 = slog::inverse_response(h_tilde);
  const double scale = inst.g0.sum();
  inst.g0 /= scale;
  h_tilde *= scale;
  inst.y = slog::synthesize(inst.sg, slog::FilterSpec::from_response(h_tilde, order),
                            inst.x, eta, slog::derive_seed(seed, 103));
  return inst;
}

// Penalties balanced to the data scale; the defaults target unit-scale data
// and these instances are not unit scale.
inline slog::AdmmConfig planted_admm_config(const slog::LiftedOperator& op) {
  slog::AdmmConfig cfg;
  cfg.rho_lambda = 1.0;
  cfg.rho_mu = op.ztz_diag.mean();
  return cfg;
}

}  // namespace fixtures
