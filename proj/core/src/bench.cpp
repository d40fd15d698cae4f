#include "slog/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

#include <json.hpp>

#include "slog/errors.hpp"
#include "slog/train.hpp"

namespace slog {

using nlohmann::json;

TestInstance make_test_instance(const SpectralGraph& sg, const DatasetManifest& m,
                                double eta, std::uint64_t seed) {
  const std::uint64_t base = derive_seed(seed, streams::kTest);
  TestInstance t;
  t.x = sample_sources({sg.n_nodes(), m.theta, derive_seed(base, 0)}, m.p_batch);
  t.h = sample_filter({m.filter_order, m.phi, derive_seed(base, 1)});
  const FilterSpec spec = FilterSpec::from_coeffs(t.h);
  t.y = synthesize(sg, spec, t.x, eta, derive_seed(base, 2));
  t.g0 = inverse_response(spec.response_on(sg));
  return t;
}

namespace {

EvalRow base_row(const DatasetManifest& m, const SpectralGraph& sg, double eta,
                 std::uint64_t seed, double kappa) {
  EvalRow r;
  r.graph = to_string(m.graph.kind);
  r.n = sg.n_nodes();
  r.p = m.p_batch;
  r.theta = m.theta;
  r.filter_order = m.filter_order;
  r.phi = m.phi;
  r.eta = eta;
  r.seed = seed;
  r.kappa = kappa;
  return r;
}

}  // namespace

std::vector<EvalRow> bench_compare(const SpectralGraph& sg, const DatasetManifest& m,
                                   const SlogModel& model, const BenchConfig& cfg) {
  if (model.n != sg.n_nodes()) {
    throw DimensionError("bench: model and dataset graph sizes differ");
  }
  struct Task {
    double eta;
    int trial;
  };
  std::vector<Task> tasks;
  for (double eta : cfg.eta_sweep)
    for (int t = 0; t < cfg.trials; ++t) tasks.push_back({eta, t});

  std::vector<std::vector<EvalRow>> per_task(tasks.size());

  auto run_task = [&](std::size_t idx) {
    const Task& task = tasks[idx];
    const std::uint64_t trial_seed =
        derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(task.eta * 1e6)),
                    task.trial);
    const TestInstance inst = make_test_instance(sg, m, task.eta, trial_seed);

    // ADMM: timed from Y in memory, including the one-time factor setup.
    EvalRow admm_row = base_row(m, sg, task.eta, trial_seed, cfg.kappa);
    admm_row.method = "admm";
    {
      const auto t0 = std::chrono::steady_clock::now();
      const LiftedOperator op = build_lifted(sg.eigvecs(), inst.y);
      const AdmmResult res = admm_solve(op, cfg.admm);
      Eigen::MatrixXd x_hat = recover_sources(op, res.state.g_tilde);
      admm_row.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      admm_row.iters = res.state.iter;
      admm_row.re_g = relative_error_aligned(res.state.g_tilde, inst.g0);
      // The constraint 1^T g~ = c pins an arbitrary scale; rescale onto the
      // ground truth before scoring sources.
      const Eigen::Map<const Eigen::VectorXd> xh(x_hat.data(), x_hat.size());
      const Eigen::Map<const Eigen::VectorXd> xt(inst.x.data(), inst.x.size());
      x_hat *= ls_scale(xh, xt);
      admm_row.re_x = relative_error_signed(x_hat, inst.x);
      admm_row.acc = support_accuracy(x_hat, inst.x, cfg.kappa);
    }

    // Trained network: a single timed forward pass.
    EvalRow net_row = base_row(m, sg, task.eta, trial_seed, cfg.kappa);
    net_row.method = "slog-net";
    {
      const InferResult res = infer(model, sg, inst.y, derive_seed(trial_seed, 3));
      net_row.seconds = res.seconds;
      net_row.iters = model.k();
      net_row.re_x = relative_error_signed(res.x_hat, inst.x);
      net_row.acc = support_accuracy(res.x_hat, inst.x, cfg.kappa);
      net_row.re_g = relative_error_aligned(res.g_tilde, inst.g0);
    }
    per_task[idx] = {admm_row, net_row};
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
          run_task(i);
        }
      });
    }
    for (auto& th : workers) th.join();
  }

  // Deterministic row order regardless of scheduling.
  std::vector<EvalRow> rows;
  for (const auto& pair : per_task)
    for (const auto& r : pair) rows.push_back(r);
  return rows;
}

std::string summarize_rows(const std::vector<EvalRow>& rows) {
  struct Key {
    std::string method;
    double eta;
    bool operator<(const Key& o) const {
      return method != o.method ? method < o.method : eta < o.eta;
    }
  };
  struct Acc {
    std::vector<double> re_x, re_g, acc, seconds;
  };
  std::map<Key, Acc> groups;
  for (const auto& r : rows) {
    Acc& a = groups[{r.method, r.eta}];
    a.re_x.push_back(r.re_x);
    a.re_g.push_back(r.re_g);
    a.acc.push_back(r.acc);
    a.seconds.push_back(r.seconds);
  }

  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  auto stddev = [&](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
  };

  json out = json::array();
  for (const auto& [key, a] : groups) {
    json g;
    g["method"] = key.method;
    g["eta"] = key.eta;
    g["trials"] = a.re_x.size();
    g["re_x"] = {{"mean", mean(a.re_x)}, {"stddev", stddev(a.re_x)}};
    g["re_g"] = {{"mean", mean(a.re_g)}, {"stddev", stddev(a.re_g)}};
    g["acc"] = {{"mean", mean(a.acc)}, {"stddev", stddev(a.acc)}};
    g["seconds"] = {{"mean", mean(a.seconds)}, {"stddev", stddev(a.seconds)}};
    out.push_back(g);
  }
  json doc;
  doc["groups"] = out;
  return doc.dump(2) + "\n";
}

std::vector<double> parse_sweep(const std::string& text) {
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    return {std::strtod(text.c_str(), nullptr)};
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) {
    throw InvalidArgument("sweep: expected start:step:stop, got " + text);
  }
  const double start = std::strtod(text.substr(0, c1).c_str(), nullptr);
  const double step = std::strtod(text.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
  const double stop = std::strtod(text.substr(c2 + 1).c_str(), nullptr);
  if (step <= 0.0) throw InvalidArgument("sweep: step must be positive");
  std::vector<double> out;
  for (double v = start; v <= stop + 1e-12; v += step) out.push_back(v);
  return out;
}

}  // namespace slog
