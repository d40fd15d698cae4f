#include "slog/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "slog/errors.hpp"

namespace slog {

SpectralGraph::SpectralGraph(Graph g)
    : graph_(std::move(g)), cache_mutex_(std::make_unique<std::mutex>()) {
  graph_.validate();
  const int n = graph_.n_nodes;

  const Eigen::VectorXd deg = graph_.degrees();
  const Eigen::VectorXd dinv_sqrt = deg.cwiseSqrt().cwiseInverse();
  shift_ = dinv_sqrt.asDiagonal() * graph_.adjacency * dinv_sqrt.asDiagonal();
  // Symmetrize away the last-bit asymmetry of the two diagonal scalings.
  shift_ = 0.5 * (shift_ + shift_.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shift_);
  if (es.info() != Eigen::Success) {
    throw Error("eigendecomposition of the shift operator failed");
  }
  eigvals_ = es.eigenvalues();  // ascending
  eigvecs_ = es.eigenvectors();

  // Deterministic sign convention: largest-magnitude entry of each
  // eigenvector made positive, ties broken by lowest index.
  for (int j = 0; j < n; ++j) {
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double mag = std::abs(eigvecs_(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (eigvecs_(arg, j) < 0.0) eigvecs_.col(j) = -eigvecs_.col(j);
  }
}

SpectralGraph build_shift(Graph g) { return SpectralGraph(std::move(g)); }

const Eigen::MatrixXd& SpectralGraph::vandermonde(int order) const {
  const int n = n_nodes();
  if (order < 1 || order > n) {
    throw InvalidArgument("vandermonde: order must be in [1, N], got " +
                          std::to_string(order));
  }
  std::lock_guard<std::mutex> lock(*cache_mutex_);
  auto it = psi_cache_.find(order);
  if (it != psi_cache_.end()) return *it->second;

  auto psi = std::make_unique<Eigen::MatrixXd>(n, order);
  psi->col(0).setOnes();
  for (int j = 1; j < order; ++j) {
    psi->col(j) = psi->col(j - 1).cwiseProduct(eigvals_);
  }
  return *psi_cache_.emplace(order, std::move(psi)).first->second;
}

FilterSpec FilterSpec::from_coeffs(Eigen::VectorXd h) {
  FilterSpec f;
  f.order = static_cast<int>(h.size());
  f.coeffs = std::move(h);
  return f;
}

FilterSpec FilterSpec::from_response(Eigen::VectorXd h_tilde, int order) {
  FilterSpec f;
  f.order = order;
  f.freq_response = std::move(h_tilde);
  return f;
}

Eigen::VectorXd FilterSpec::response_on(const SpectralGraph& sg) const {
  if (freq_response) {
    if (freq_response->size() != sg.n_nodes()) {
      throw DimensionError("filter response length does not match graph size");
    }
    return *freq_response;
  }
  if (!coeffs) throw InvalidArgument("filter has neither coeffs nor response");
  if (coeffs->size() > sg.n_nodes()) {
    throw DimensionError("filter order exceeds graph size");
  }
  return sg.vandermonde(static_cast<int>(coeffs->size())) * (*coeffs);
}

Eigen::MatrixXd apply_filter(const SpectralGraph& sg, const FilterSpec& h,
                             const Eigen::MatrixXd& x) {
  if (x.rows() != sg.n_nodes()) {
    throw DimensionError("apply_filter: signal has " + std::to_string(x.rows()) +
                         " rows, graph has " + std::to_string(sg.n_nodes()));
  }
  const Eigen::VectorXd response = h.response_on(sg);
  const Eigen::MatrixXd& v = sg.eigvecs();
  return v * (response.asDiagonal() * (v.transpose() * x));
}

bool check_invertibility(const Eigen::VectorXd& h_tilde, double tol) {
  if (tol <= 0.0) throw InvalidArgument("check_invertibility: tol must be positive");
  if (h_tilde.size() == 0) return false;
  const double lo = h_tilde.cwiseAbs().minCoeff();
  const double hi = h_tilde.cwiseAbs().maxCoeff();
  return lo > tol * hi;
}

Eigen::VectorXd inverse_response(const Eigen::VectorXd& h_tilde) {
  if (!check_invertibility(h_tilde, 1e-8)) {
    throw NonInvertibleFilter(
        "inverse_response: frequency response vanishes at some graph frequency");
  }
  return h_tilde.cwiseInverse();
}

FilterRecovery recover_filter_coeffs(const SpectralGraph& sg,
                                     const Eigen::VectorXd& g_tilde, int order) {
  if (g_tilde.size() != sg.n_nodes()) {
    throw DimensionError("recover_filter_coeffs: response length mismatch");
  }
  if ((g_tilde.array() == 0.0).any()) {
    throw InvalidArgument("recover_filter_coeffs: g~ must be entrywise nonzero");
  }
  const Eigen::MatrixXd& psi = sg.vandermonde(order);
  const Eigen::VectorXd target = g_tilde.cwiseInverse();

  // Complete orthogonal decomposition gives the minimum-norm least-squares
  // solution even when repeated eigenvalues make Psi_L rank-deficient.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(psi);
  FilterRecovery out;
  out.coeffs = cod.solve(target);
  out.residual = (psi * out.coeffs - target).norm();
  out.rank_deficient = cod.rank() < order;
  return out;
}

double projector_norm(const Eigen::VectorXd& g_tilde) {
  if (g_tilde.size() == 0) return 0.0;
  const double mean = g_tilde.mean();
  return (g_tilde.array() - mean).matrix().norm();
}

}  // namespace slog
