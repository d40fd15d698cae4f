#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "slog/datagen.hpp"

namespace slog {

// Everything needed to regenerate a dataset bit-for-bit: graph descriptor,
// sampling parameters, and the master seed from which all child streams
// (graph, sources, per-batch filters, per-batch noise, validation) derive.
struct DatasetManifest {
  int format_version = 1;
  int n = 0;
  long t_total = 0;   // |T|
  int p_batch = 0;    // P
  int q_batches = 0;  // Q = |T| / P
  double theta = 0.0;
  int filter_order = 0;
  double phi = 0.0;
  double eta = 0.0;
  GraphParams graph;
  std::uint64_t master_seed = 0;
};

// A batched training set: X split column-contiguously into Q batches of P
// columns, one independently drawn filter per batch, Y_q = H_q X_q (+ noise),
// plus a validation batch of the same size with its own filter, following
// the training protocol.
struct Dataset {
  DatasetManifest manifest;
  Graph graph;
  Eigen::MatrixXd x;  // N x |T|
  Eigen::MatrixXd y;  // N x |T|
  Eigen::MatrixXd h;  // L x Q, column q is the batch-q filter
  Eigen::MatrixXd x_val;  // N x P
  Eigen::MatrixXd y_val;  // N x P
  Eigen::VectorXd h_val;  // L

  Eigen::Ref<const Eigen::MatrixXd> x_batch(int q) const {
    return x.middleCols(static_cast<Eigen::Index>(q) * manifest.p_batch, manifest.p_batch);
  }
  Eigen::Ref<const Eigen::MatrixXd> y_batch(int q) const {
    return y.middleCols(static_cast<Eigen::Index>(q) * manifest.p_batch, manifest.p_batch);
  }
};

// Generates the full dataset from a manifest. P must divide |T|.
Dataset make_dataset(const DatasetManifest& manifest);

// Directory layout: manifest.json plus little-endian float64 column-major
// payloads X.f64le, Y.f64le, H.f64le (and the validation triple). Round
// trips are bit-exact.
void save_dataset(const Dataset& ds, const std::string& dir);
Dataset load_dataset(const std::string& dir);

// Manifest (de)serialization, exposed for tools that only need metadata.
std::string manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const std::string& text);

}  // namespace slog
