#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "slog/graph.hpp"
#include "slog/rng.hpp"
#include "slog/spectral.hpp"

namespace slog {

enum class GraphKind { Er, Sbm, Ba, Rg, EdgeList };

GraphKind graph_kind_from_string(const std::string& s);
std::string to_string(GraphKind k);

// Parameters for the random-graph ensembles. Only the fields relevant to a
// kind are consulted.
struct GraphParams {
  GraphKind kind = GraphKind::Er;
  int n = 0;
  double p_edge = 0.0;       // er
  int n_blocks = 0;          // sbm
  double p_within = 0.0;     // sbm
  double p_between = 0.0;    // sbm
  int attach = 0;            // ba: edges added per new node
  double radius = 0.0;       // rg: connection distance in the unit square
  std::string edge_list_path;  // edge_list

  void validate() const;
};

// Draws a connected graph from the requested ensemble, resampling up to 100
// times (per-attempt child streams) before giving up with ConnectivityFailure.
// Deterministic per (params, seed).
Graph gen_graph(const GraphParams& params, std::uint64_t seed);

// Contiguous near-equal block assignment used by the SBM generator: node i
// belongs to block floor(i * n_blocks / n).
std::vector<int> sbm_blocks(int n, int n_blocks);

struct SourceModel {
  int n_nodes = 0;
  double sparsity = 0.0;  // theta in [0, 1]
  std::uint64_t seed = 0;
};

// Bernoulli-Gaussian sources X = Omega o R with Omega_ij ~ Bernoulli(theta)
// and R_ij ~ Normal(0,1), drawn column-major. One draw of each per entry so
// the stream is consumed identically for every theta.
Eigen::MatrixXd sample_sources(const SourceModel& model, int count);

struct FilterModel {
  int order = 1;          // L
  double impulsiveness = 0.0;  // phi
  std::uint64_t seed = 0;
};

// h = (e_1 + phi b) / ||e_1 + phi b||_1 with b ~ Normal(0, I_L).
// Resamples internally (up to 10 times) if the l1 norm degenerates.
Eigen::VectorXd sample_filter(const FilterModel& model);

// Y = V diag(Psi_L h) V^T X + eta U with U_ij ~ Uniform(-1, 1).
// eta = 0 returns the noiseless filter output bit-identically (the noise
// stream is not consumed).
Eigen::MatrixXd synthesize(const SpectralGraph& sg, const FilterSpec& h,
                           const Eigen::MatrixXd& x, double eta, std::uint64_t seed);

}  // namespace slog
