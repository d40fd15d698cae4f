#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slog/admm.hpp"
#include "slog/dataset.hpp"
#include "slog/eval.hpp"
#include "slog/model.hpp"
#include "slog/spectral.hpp"

namespace slog {

struct BenchConfig {
  std::vector<double> eta_sweep{0.0};
  int trials = 10;
  double kappa = 0.1;
  int jobs = 1;
  std::uint64_t seed = 0;
  AdmmConfig admm;
};

// One freshly planted test instance: Bernoulli-Gaussian sources, a filter
// drawn from the training distribution, noisy observations, and the true
// inverse response.
struct TestInstance {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  Eigen::VectorXd h;
  Eigen::VectorXd g0;  // inverse frequency response of the planted filter
};

TestInstance make_test_instance(const SpectralGraph& sg, const DatasetManifest& m,
                                double eta, std::uint64_t seed);

// Runs ADMM and the trained network on identical test batches across the
// noise sweep, timing each method after Y is in memory (the ADMM timing
// includes its one-time factor construction; the network timing is a single
// forward pass). Emits one CSV row per (method, eta, trial).
//
// The network's scale is learned from data so its estimates are scored
// as-is; the ADMM estimate fixes 1^T g~ = c, an arbitrary scale relative to
// the planted truth, so its X^ is least-squares-rescaled onto X before
// re_x / acc are computed. re_g is scale-aligned for both methods.
std::vector<EvalRow> bench_compare(const SpectralGraph& sg, const DatasetManifest& m,
                                   const SlogModel& model, const BenchConfig& cfg);

// Aggregate mean/stddev per (method, eta) into a summary JSON document.
std::string summarize_rows(const std::vector<EvalRow>& rows);

// Parses "start:step:stop" (inclusive) into a sweep; a single number is a
// one-point sweep.
std::vector<double> parse_sweep(const std::string& text);

}  // namespace slog
