#pragma once

#include <Eigen/Dense>
#include <string>

namespace slog {

// Weighted undirected graph held as a dense symmetric adjacency matrix.
// Invariants (checked by validate / from_adjacency): symmetric to 1e-12,
// zero diagonal, nonnegative weights, no isolated nodes.
struct Graph {
  int n_nodes = 0;
  Eigen::MatrixXd adjacency;
  std::string name;

  static Graph from_adjacency(Eigen::MatrixXd a, std::string name = "");

  Eigen::VectorXd degrees() const { return adjacency * Eigen::VectorXd::Ones(n_nodes); }

  bool connected() const;

  // Throws InvalidArgument on any violated invariant.
  void validate() const;
};

// Edge-list text format: one `u v [w]` edge per line, 0-based indices,
// whitespace separated, weight defaults to 1.0, `#` starts a comment line.
// Duplicate edges (in either orientation) and self loops are errors.
Graph read_edge_list(const std::string& path, const std::string& name = "");
Graph parse_edge_list(std::istream& in, const std::string& name = "");
void write_edge_list(const Graph& g, const std::string& path);

}  // namespace slog
