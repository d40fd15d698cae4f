#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "slog/graph.hpp"

namespace slog {

// Graph plus the spectral machinery of its shift operator: the
// degree-normalized adjacency S = D^{-1/2} A D^{-1/2}, its eigendecomposition
// S = V diag(lambda) V^T with eigenvalues ascending, and cached eigenvalue
// Vandermonde matrices Psi_L with Psi(i, j) = lambda_i^j.
//
// Eigenvector signs follow a fixed convention (largest-magnitude entry of
// each column made positive, ties broken by lowest index) so that V, Psi and
// everything downstream are reproducible across runs.
//
// Immutable after construction; concurrent reads are safe (the Vandermonde
// cache is guarded internally).
class SpectralGraph {
 public:
  explicit SpectralGraph(Graph g);

  const Graph& graph() const { return graph_; }
  int n_nodes() const { return graph_.n_nodes; }
  const Eigen::MatrixXd& shift() const { return shift_; }
  const Eigen::MatrixXd& eigvecs() const { return eigvecs_; }
  const Eigen::VectorXd& eigvals() const { return eigvals_; }

  // N x L matrix of eigenvalue powers, 1 <= L <= N. Cached per order.
  const Eigen::MatrixXd& vandermonde(int order) const;

  SpectralGraph(const SpectralGraph&) = delete;
  SpectralGraph& operator=(const SpectralGraph&) = delete;
  SpectralGraph(SpectralGraph&&) = default;
  SpectralGraph& operator=(SpectralGraph&&) = default;

 private:
  Graph graph_;
  Eigen::MatrixXd shift_;
  Eigen::MatrixXd eigvecs_;
  Eigen::VectorXd eigvals_;
  mutable std::unique_ptr<std::mutex> cache_mutex_;
  mutable std::map<int, std::unique_ptr<Eigen::MatrixXd>> psi_cache_;
};

SpectralGraph build_shift(Graph g);

// A polynomial graph filter, by its coefficients h (length L), its frequency
// response (length N), or both. When both are given they must agree:
// freq_response = Psi_L * coeffs.
struct FilterSpec {
  std::optional<Eigen::VectorXd> coeffs;
  std::optional<Eigen::VectorXd> freq_response;
  int order = 0;

  static FilterSpec from_coeffs(Eigen::VectorXd h);
  static FilterSpec from_response(Eigen::VectorXd h_tilde, int order);

  // Resolves the frequency response on the given graph.
  Eigen::VectorXd response_on(const SpectralGraph& sg) const;
};

// Applies V diag(Psi_L h) V^T to the columns of X.
Eigen::MatrixXd apply_filter(const SpectralGraph& sg, const FilterSpec& h,
                             const Eigen::MatrixXd& x);

// True iff min_i |h~_i| > tol * max_i |h~_i|.
bool check_invertibility(const Eigen::VectorXd& h_tilde, double tol = 1e-8);

// Entrywise reciprocal g~ with g~ o h~ = 1. Throws NonInvertibleFilter when
// check_invertibility fails at tol 1e-8.
Eigen::VectorXd inverse_response(const Eigen::VectorXd& h_tilde);

struct FilterRecovery {
  Eigen::VectorXd coeffs;
  double residual = 0.0;     // || Psi_L h - 1/g~ ||_2
  bool rank_deficient = false;
};

// Least-squares fit of filter coefficients from an inverse response:
// solves Psi_L h ~= 1 / g~ (minimum-norm solution when Psi_L is
// rank-deficient, e.g. with repeated eigenvalues).
FilterRecovery recover_filter_coeffs(const SpectralGraph& sg,
                                     const Eigen::VectorXd& g_tilde, int order);

// || (I - 11^T/N) g~ ||_2, the component of g~ orthogonal to span(1).
// Larger values mark harder recovery instances.
double projector_norm(const Eigen::VectorXd& g_tilde);

}  // namespace slog
