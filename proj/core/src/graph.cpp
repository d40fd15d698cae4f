#include "slog/graph.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "slog/errors.hpp"
#include "slog/io.hpp"

namespace slog {

Graph Graph::from_adjacency(Eigen::MatrixXd a, std::string name) {
  Graph g;
  g.n_nodes = static_cast<int>(a.rows());
  g.adjacency = std::move(a);
  g.name = std::move(name);
  g.validate();
  return g;
}

void Graph::validate() const {
  if (n_nodes <= 0 || adjacency.rows() != n_nodes || adjacency.cols() != n_nodes) {
    throw InvalidArgument("graph: adjacency must be square and non-empty");
  }
  if (!((adjacency - adjacency.transpose()).cwiseAbs().maxCoeff() <= 1e-12)) {
    throw InvalidArgument("graph: adjacency is not symmetric (tolerance 1e-12)");
  }
  if (adjacency.diagonal().cwiseAbs().maxCoeff() != 0.0) {
    throw InvalidArgument("graph: adjacency diagonal must be zero (no self loops)");
  }
  if (adjacency.minCoeff() < 0.0) {
    throw InvalidArgument("graph: edge weights must be nonnegative");
  }
  const Eigen::VectorXd deg = degrees();
  for (int i = 0; i < n_nodes; ++i) {
    if (deg(i) <= 0.0) {
      throw InvalidArgument("graph: node " + std::to_string(i) +
                            " is isolated (zero degree)");
    }
  }
}

bool Graph::connected() const {
  if (n_nodes == 0) return false;
  std::vector<char> seen(n_nodes, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n_nodes; ++v) {
      if (!seen[v] && adjacency(u, v) > 0.0) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n_nodes;
}

Graph parse_edge_list(std::istream& in, const std::string& name) {
  struct Edge {
    int u, v;
    double w;
  };
  std::vector<Edge> edges;
  int max_node = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long u = -1, v = -1;
    double w = 1.0;
    if (!(ls >> u >> v)) {
      throw IoError("edge list: malformed line " + std::to_string(lineno));
    }
    ls >> w;  // optional weight
    std::string trailing;
    if (ls >> trailing) {
      throw IoError("edge list: trailing tokens on line " + std::to_string(lineno));
    }
    if (u < 0 || v < 0) {
      throw IoError("edge list: negative node index on line " + std::to_string(lineno));
    }
    if (u == v) {
      throw IoError("edge list: self loop on line " + std::to_string(lineno));
    }
    edges.push_back({static_cast<int>(u), static_cast<int>(v), w});
    max_node = std::max(max_node, static_cast<int>(std::max(u, v)));
  }
  if (edges.empty()) throw IoError("edge list: no edges");

  const int n = max_node + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    if (a(e.u, e.v) != 0.0) {
      throw IoError("edge list: duplicate edge " + std::to_string(e.u) + " " +
                    std::to_string(e.v));
    }
    a(e.u, e.v) = e.w;
    a(e.v, e.u) = e.w;
  }
  return Graph::from_adjacency(std::move(a), name);
}

Graph read_edge_list(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw IoError("edge list: cannot open " + path);
  return parse_edge_list(in, name.empty() ? path : name);
}

void write_edge_list(const Graph& g, const std::string& path) {
  std::ostringstream out;
  out << "# " << (g.name.empty() ? "graph" : g.name) << ", " << g.n_nodes
      << " nodes\n";
  for (int i = 0; i < g.n_nodes; ++i) {
    for (int j = i + 1; j < g.n_nodes; ++j) {
      if (g.adjacency(i, j) > 0.0) {
        out << i << " " << j;
        if (g.adjacency(i, j) != 1.0) out << " " << format_double(g.adjacency(i, j));
        out << "\n";
      }
    }
  }
  atomic_write_text(path, out.str());
}

}  // namespace slog
