#include "slog/dataset.hpp"

#include <filesystem>

#include <json.hpp>

#include "slog/errors.hpp"
#include "slog/io.hpp"

namespace slog {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json graph_params_to_json(const GraphParams& g) {
  json j;
  j["kind"] = to_string(g.kind);
  j["n"] = g.n;
  switch (g.kind) {
    case GraphKind::Er:
      j["p_edge"] = g.p_edge;
      break;
    case GraphKind::Sbm:
      j["n_blocks"] = g.n_blocks;
      j["p_within"] = g.p_within;
      j["p_between"] = g.p_between;
      break;
    case GraphKind::Ba:
      j["attach"] = g.attach;
      break;
    case GraphKind::Rg:
      j["radius"] = g.radius;
      break;
    case GraphKind::EdgeList:
      j["edge_list_path"] = g.edge_list_path;
      break;
  }
  return j;
}

GraphParams graph_params_from_json(const json& j) {
  GraphParams g;
  g.kind = graph_kind_from_string(j.at("kind").get<std::string>());
  g.n = j.value("n", 0);
  g.p_edge = j.value("p_edge", 0.0);
  g.n_blocks = j.value("n_blocks", 0);
  g.p_within = j.value("p_within", 0.0);
  g.p_between = j.value("p_between", 0.0);
  g.attach = j.value("attach", 0);
  g.radius = j.value("radius", 0.0);
  g.edge_list_path = j.value("edge_list_path", std::string{});
  return g;
}

}  // namespace

std::string manifest_to_json(const DatasetManifest& m) {
  json j;
  j["format_version"] = m.format_version;
  j["n"] = m.n;
  j["t_total"] = m.t_total;
  j["p_batch"] = m.p_batch;
  j["q_batches"] = m.q_batches;
  j["theta"] = m.theta;
  j["filter_order"] = m.filter_order;
  j["phi"] = m.phi;
  j["eta"] = m.eta;
  j["graph"] = graph_params_to_json(m.graph);
  j["master_seed"] = m.master_seed;
  j["seeds"] = {
      {"graph", derive_seed(m.master_seed, streams::kGraph)},
      {"sources", derive_seed(m.master_seed, streams::kSources)},
      {"filters", derive_seed(m.master_seed, streams::kFilters)},
      {"noise", derive_seed(m.master_seed, streams::kNoise)},
      {"validation", derive_seed(m.master_seed, streams::kValidation)},
  };
  return j.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("manifest: invalid JSON: ") + e.what());
  }
  DatasetManifest m;
  m.format_version = j.value("format_version", -1);
  if (m.format_version != 1) {
    throw VersionMismatch("manifest: unsupported format_version " +
                          std::to_string(m.format_version));
  }
  m.n = j.at("n").get<int>();
  m.t_total = j.at("t_total").get<long>();
  m.p_batch = j.at("p_batch").get<int>();
  m.q_batches = j.at("q_batches").get<int>();
  m.theta = j.at("theta").get<double>();
  m.filter_order = j.at("filter_order").get<int>();
  m.phi = j.at("phi").get<double>();
  m.eta = j.at("eta").get<double>();
  m.graph = graph_params_from_json(j.at("graph"));
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  return m;
}

Dataset make_dataset(const DatasetManifest& manifest) {
  DatasetManifest m = manifest;
  if (m.p_batch < 1 || m.t_total < 1) throw InvalidArgument("dataset: empty shape");
  if (m.t_total % m.p_batch != 0) {
    throw InvalidArgument("dataset: batch size P must divide |T| (got |T|=" +
                          std::to_string(m.t_total) + ", P=" +
                          std::to_string(m.p_batch) + ")");
  }
  m.q_batches = static_cast<int>(m.t_total / m.p_batch);

  Dataset ds;
  ds.graph = gen_graph(m.graph, derive_seed(m.master_seed, streams::kGraph));
  m.n = ds.graph.n_nodes;
  ds.manifest = m;

  const SpectralGraph sg = build_shift(ds.graph);

  ds.x = sample_sources(
      {m.n, m.theta, derive_seed(m.master_seed, streams::kSources)},
      static_cast<int>(m.t_total));

  const std::uint64_t filter_seed = derive_seed(m.master_seed, streams::kFilters);
  const std::uint64_t noise_seed = derive_seed(m.master_seed, streams::kNoise);

  ds.h.resize(m.filter_order, m.q_batches);
  ds.y.resize(m.n, m.t_total);
  for (int q = 0; q < m.q_batches; ++q) {
    ds.h.col(q) = sample_filter({m.filter_order, m.phi, derive_seed(filter_seed, q)});
    ds.y.middleCols(static_cast<Eigen::Index>(q) * m.p_batch, m.p_batch) =
        synthesize(sg, FilterSpec::from_coeffs(ds.h.col(q)), ds.x_batch(q), m.eta,
                   derive_seed(noise_seed, q));
  }

  // Validation batch: same size and distribution, its own filter and stream.
  const std::uint64_t val_seed = derive_seed(m.master_seed, streams::kValidation);
  ds.x_val = sample_sources({m.n, m.theta, derive_seed(val_seed, 0)}, m.p_batch);
  ds.h_val = sample_filter({m.filter_order, m.phi, derive_seed(val_seed, 1)});
  ds.y_val = synthesize(sg, FilterSpec::from_coeffs(ds.h_val), ds.x_val, m.eta,
                        derive_seed(val_seed, 2));
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path base(dir);
  atomic_write_text((base / "manifest.json").string(), manifest_to_json(ds.manifest));
  write_f64le((base / "X.f64le").string(), ds.x);
  write_f64le((base / "Y.f64le").string(), ds.y);
  write_f64le((base / "H.f64le").string(), ds.h);
  write_f64le((base / "X_val.f64le").string(), ds.x_val);
  write_f64le((base / "Y_val.f64le").string(), ds.y_val);
  write_f64le((base / "H_val.f64le").string(), ds.h_val);
}

Dataset load_dataset(const std::string& dir) {
  const fs::path base(dir);
  Dataset ds;
  ds.manifest = manifest_from_json(read_text((base / "manifest.json").string()));
  const auto& m = ds.manifest;
  ds.graph = gen_graph(m.graph, derive_seed(m.master_seed, streams::kGraph));
  if (ds.graph.n_nodes != m.n) {
    throw CorruptPayload("dataset: regenerated graph size disagrees with manifest");
  }
  ds.x = read_f64le((base / "X.f64le").string(), m.n, m.t_total);
  ds.y = read_f64le((base / "Y.f64le").string(), m.n, m.t_total);
  ds.h = read_f64le((base / "H.f64le").string(), m.filter_order, m.q_batches);
  ds.x_val = read_f64le((base / "X_val.f64le").string(), m.n, m.p_batch);
  ds.y_val = read_f64le((base / "Y_val.f64le").string(), m.n, m.p_batch);
  ds.h_val = read_f64le((base / "H_val.f64le").string(), m.filter_order, 1);
  return ds;
}

}  // namespace slog
