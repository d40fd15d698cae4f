#include "slog/datagen.hpp"

#include <cmath>

#include "slog/errors.hpp"

namespace slog {

GraphKind graph_kind_from_string(const std::string& s) {
  if (s == "er") return GraphKind::Er;
  if (s == "sbm") return GraphKind::Sbm;
  if (s == "ba") return GraphKind::Ba;
  if (s == "rg") return GraphKind::Rg;
  if (s == "edge-list" || s == "edge_list") return GraphKind::EdgeList;
  throw InvalidArgument("unknown graph kind: " + s);
}

std::string to_string(GraphKind k) {
  switch (k) {
    case GraphKind::Er: return "er";
    case GraphKind::Sbm: return "sbm";
    case GraphKind::Ba: return "ba";
    case GraphKind::Rg: return "rg";
    case GraphKind::EdgeList: return "edge_list";
  }
  return "?";
}

void GraphParams::validate() const {
  switch (kind) {
    case GraphKind::Er:
      if (n < 2) throw InvalidArgument("er: need at least 2 nodes");
      if (p_edge <= 0.0 || p_edge > 1.0) throw InvalidArgument("er: p must be in (0, 1]");
      break;
    case GraphKind::Sbm:
      if (n < 2) throw InvalidArgument("sbm: need at least 2 nodes");
      if (n_blocks < 1 || n_blocks > n) throw InvalidArgument("sbm: bad block count");
      if (p_within <= 0.0 || p_within > 1.0 || p_between < 0.0 || p_between > 1.0) {
        throw InvalidArgument("sbm: probabilities out of range");
      }
      break;
    case GraphKind::Ba:
      if (attach < 1) throw InvalidArgument("ba: attachment must be >= 1");
      if (n <= attach) throw InvalidArgument("ba: need more nodes than attachments");
      break;
    case GraphKind::Rg:
      if (n < 2) throw InvalidArgument("rg: need at least 2 nodes");
      if (radius <= 0.0) throw InvalidArgument("rg: radius must be positive");
      break;
    case GraphKind::EdgeList:
      if (edge_list_path.empty()) throw InvalidArgument("edge_list: missing path");
      break;
  }
}

std::vector<int> sbm_blocks(int n, int n_blocks) {
  std::vector<int> blocks(n);
  for (int i = 0; i < n; ++i) {
    blocks[i] = static_cast<int>((static_cast<long>(i) * n_blocks) / n);
  }
  return blocks;
}

namespace {

Eigen::MatrixXd draw_adjacency(const GraphParams& p, Rng& rng) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p.n, p.n);
  switch (p.kind) {
    case GraphKind::Er: {
      for (int i = 0; i < p.n; ++i)
        for (int j = i + 1; j < p.n; ++j)
          if (rng.uniform() < p.p_edge) a(i, j) = a(j, i) = 1.0;
      break;
    }
    case GraphKind::Sbm: {
      const auto blocks = sbm_blocks(p.n, p.n_blocks);
      for (int i = 0; i < p.n; ++i)
        for (int j = i + 1; j < p.n; ++j) {
          const double prob = blocks[i] == blocks[j] ? p.p_within : p.p_between;
          if (rng.uniform() < prob) a(i, j) = a(j, i) = 1.0;
        }
      break;
    }
    case GraphKind::Ba: {
      // Preferential attachment over a repeated-endpoint list. The first
      // arrival links to all of the m seed nodes, so the graph is connected
      // by construction.
      std::vector<int> repeated;
      const int m = p.attach;
      for (int v = m; v < p.n; ++v) {
        std::vector<int> targets;
        if (v == m) {
          for (int t = 0; t < m; ++t) targets.push_back(t);
        } else {
          while (static_cast<int>(targets.size()) < m) {
            const int t = repeated[rng.below(repeated.size())];
            bool dup = false;
            for (int prev : targets) dup |= (prev == t);
            if (!dup) targets.push_back(t);
          }
        }
        for (int t : targets) {
          a(v, t) = a(t, v) = 1.0;
          repeated.push_back(t);
          repeated.push_back(v);
        }
      }
      break;
    }
    case GraphKind::Rg: {
      Eigen::MatrixXd pts(p.n, 2);
      for (int i = 0; i < p.n; ++i) {
        pts(i, 0) = rng.uniform();
        pts(i, 1) = rng.uniform();
      }
      const double r2 = p.radius * p.radius;
      for (int i = 0; i < p.n; ++i)
        for (int j = i + 1; j < p.n; ++j)
          if ((pts.row(i) - pts.row(j)).squaredNorm() <= r2) a(i, j) = a(j, i) = 1.0;
      break;
    }
    case GraphKind::EdgeList:
      break;  // handled by the caller
  }
  return a;
}

}  // namespace

Graph gen_graph(const GraphParams& params, std::uint64_t seed) {
  params.validate();
  if (params.kind == GraphKind::EdgeList) {
    return read_edge_list(params.edge_list_path);
  }
  constexpr int kMaxAttempts = 100;
  const Rng base(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng = base.child(attempt);
    Eigen::MatrixXd a = draw_adjacency(params, rng);
    // Reject draws with isolated nodes or disconnected components;
    // eigenvector-based recovery is degenerate on them.
    const Eigen::VectorXd deg = a.rowwise().sum();
    if (deg.minCoeff() <= 0.0) continue;
    Graph g = Graph::from_adjacency(std::move(a), to_string(params.kind));
    if (g.connected()) return g;
  }
  throw ConnectivityFailure("gen_graph: no connected " + to_string(params.kind) +
                            " draw in " + std::to_string(kMaxAttempts) + " attempts");
}

Eigen::MatrixXd sample_sources(const SourceModel& model, int count) {
  if (model.n_nodes < 1 || count < 1) {
    throw InvalidArgument("sample_sources: empty shape");
  }
  if (model.sparsity < 0.0 || model.sparsity > 1.0) {
    throw InvalidArgument("sample_sources: theta outside [0, 1]");
  }
  Rng rng(model.seed);
  Eigen::MatrixXd x(model.n_nodes, count);
  for (int j = 0; j < count; ++j) {
    for (int i = 0; i < model.n_nodes; ++i) {
      const bool active = rng.bernoulli(model.sparsity);
      const double r = rng.normal();
      x(i, j) = active ? r : 0.0;
    }
  }
  return x;
}

Eigen::VectorXd sample_filter(const FilterModel& model) {
  if (model.order < 1) throw InvalidArgument("sample_filter: order must be >= 1");
  Rng rng(model.seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    Eigen::VectorXd h(model.order);
    for (int l = 0; l < model.order; ++l) h(l) = model.impulsiveness * rng.normal();
    h(0) += 1.0;  // e_1 + phi b
    const double norm1 = h.lpNorm<1>();
    if (norm1 >= 1e-12) return h / norm1;
  }
  throw Error("sample_filter: degenerate draw, ||e_1 + phi b||_1 < 1e-12");
}

Eigen::MatrixXd synthesize(const SpectralGraph& sg, const FilterSpec& h,
                           const Eigen::MatrixXd& x, double eta, std::uint64_t seed) {
  if (eta < 0.0) throw InvalidArgument("synthesize: eta must be nonnegative");
  Eigen::MatrixXd y = apply_filter(sg, h, x);
  if (eta > 0.0) {
    Rng rng(seed);
    for (Eigen::Index j = 0; j < y.cols(); ++j)
      for (Eigen::Index i = 0; i < y.rows(); ++i)
        y(i, j) += eta * rng.uniform(-1.0, 1.0);
  }
  return y;
}

}  // namespace slog
