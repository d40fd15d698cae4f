#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slog/admm.hpp"
#include "slog/bench.hpp"
#include "slog/dataset.hpp"
#include "slog/errors.hpp"
#include "slog/eval.hpp"
#include "slog/gradients.hpp"
#include "slog/io.hpp"
#include "slog/model.hpp"
#include "slog/train.hpp"

namespace slog::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Applies a JSON config file (keys mirror long flag names) as defaults:
// entries are appended only when the flag is absent, so explicit flags win.
void merge_config_file(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;

  json cfg;
  try {
    cfg = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw IoError("config file " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw IoError("config file " + path + ": expected a JSON object");

  auto has_flag = [&args](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (has_flag(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else {
      args.push_back(flag);
      args.push_back(value.dump());
    }
  }
}

int run(CLI::App& app, std::vector<std::string> args, const std::function<void()>& body) {
  try {
    merge_config_file(args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "slog: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "slog: " << e.what() << "\n";
    return 1;
  }
  try {
    body();
  } catch (const std::exception& e) {
    std::cerr << "slog: error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

struct GlobalFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool quiet = false;
};

void add_global_flags(CLI::App& app, GlobalFlags& g) {
  app.add_option("--config", g.config_path, "JSON config file; keys mirror flags");
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--jobs", g.jobs, "worker threads where supported");
  app.add_flag("--quiet", g.quiet, "suppress progress output");
}

json global_config_json(const GlobalFlags& g) {
  return json{{"seed", g.seed}, {"jobs", g.jobs}, {"quiet", g.quiet}};
}

void write_json_report(const std::string& path, const json& j) {
  atomic_write_text(path, j.dump(2) + "\n");
}

// True inverse response of a stored filter column on the dataset graph.
Eigen::VectorXd planted_inverse(const SpectralGraph& sg, const Eigen::VectorXd& h) {
  return inverse_response(FilterSpec::from_coeffs(h).response_on(sg));
}

}  // namespace

int cmd_gen_data(std::vector<std::string> args) {
  CLI::App app{"generate a synthetic diffusion dataset"};
  GlobalFlags g;
  add_global_flags(app, g);

  std::string graph_kind = "er";
  GraphParams gp;
  double theta = 0.15;
  int filter_order = 5;
  double phi = 1.0;
  long ntrain = 0;
  int batch = 400;
  double eta = 0.0;
  std::string out;

  app.add_option("--graph", graph_kind, "er | sbm | ba | rg | edge-list")
      ->check(CLI::IsMember({"er", "sbm", "ba", "rg", "edge-list"}));
  app.add_option("--n", gp.n, "number of nodes");
  app.add_option("--p-edge", gp.p_edge, "ER edge probability");
  app.add_option("--blocks", gp.n_blocks, "SBM block count");
  app.add_option("--p-within", gp.p_within, "SBM within-block edge probability");
  app.add_option("--p-between", gp.p_between, "SBM between-block edge probability");
  app.add_option("--attach", gp.attach, "BA attachments per node");
  app.add_option("--radius", gp.radius, "RG connection radius");
  app.add_option("--edge-list", gp.edge_list_path, "edge list file");
  app.add_option("--theta", theta, "source sparsity");
  app.add_option("--filter-order", filter_order, "filter order L");
  app.add_option("--phi", phi, "filter impulsiveness");
  app.add_option("--ntrain", ntrain, "training set size |T|")->required();
  app.add_option("--batch", batch, "mini-batch size P");
  app.add_option("--eta", eta, "observation noise level");
  app.add_option("--out", out, "output dataset directory")->required();

  return run(app, std::move(args), [&] {
    gp.kind = graph_kind_from_string(graph_kind == "edge-list" ? "edge_list" : graph_kind);
    DatasetManifest m;
    m.graph = gp;
    m.theta = theta;
    m.filter_order = filter_order;
    m.phi = phi;
    m.t_total = ntrain;
    m.p_batch = batch;
    m.eta = eta;
    m.master_seed = g.seed;
    const Dataset ds = make_dataset(m);
    save_dataset(ds, out);
    if (!g.quiet) {
      std::cerr << "wrote dataset: N=" << ds.manifest.n << " |T|=" << ds.manifest.t_total
                << " Q=" << ds.manifest.q_batches << " -> " << out << "\n";
    }
  });
}

int cmd_solve_admm(std::vector<std::string> args) {
  CLI::App app{"run the iterative solver on every batch of a dataset"};
  GlobalFlags g;
  add_global_flags(app, g);

  std::string data_dir, out;
  AdmmConfig cfg;
  double tol = 1e-6;
  double kappa = 0.1;
  app.add_option("--data", data_dir, "dataset directory")->required();
  app.add_option("--rho-lambda", cfg.rho_lambda, "penalty on Zg = x");
  app.add_option("--rho-mu", cfg.rho_mu, "penalty on the scale constraint");
  app.add_option("--c", cfg.scale_c, "constraint constant");
  app.add_option("--tol", tol, "primal and dual stopping tolerance");
  app.add_option("--max-iters", cfg.max_iters, "iteration cap");
  app.add_option("--kappa", kappa, "support threshold");
  app.add_option("--out", out, "report JSON path")->required();

  return run(app, std::move(args), [&] {
    cfg.tol_primal = cfg.tol_dual = tol;
    const Dataset ds = load_dataset(data_dir);
    const SpectralGraph sg = build_shift(ds.graph);

    json batches = json::array();
    double sum_rex = 0.0, sum_reg = 0.0, sum_acc = 0.0, sum_secs = 0.0;
    for (int q = 0; q < ds.manifest.q_batches; ++q) {
      const auto t0 = std::chrono::steady_clock::now();
      const LiftedOperator op = build_lifted(sg.eigvecs(), ds.y_batch(q));
      const AdmmResult res = admm_solve(op, cfg);
      Eigen::MatrixXd x_hat = recover_sources(op, res.state.g_tilde);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      const Eigen::MatrixXd x_true = ds.x_batch(q);
      const Eigen::Map<const Eigen::VectorXd> xh(x_hat.data(), x_hat.size());
      const Eigen::Map<const Eigen::VectorXd> xt(x_true.data(), x_true.size());
      const double re_x_raw = relative_error_signed(x_hat, x_true);
      x_hat *= ls_scale(xh, xt);
      const double re_x = relative_error_signed(x_hat, x_true);
      const double acc = support_accuracy(x_hat, x_true, kappa);

      const Eigen::VectorXd g0 = planted_inverse(sg, ds.h.col(q));
      const double re_g = relative_error_aligned(res.state.g_tilde, g0);
      // Unaligned comparison under the solver's own scale convention: the
      // truth rescaled to satisfy 1^T g = c.
      const Eigen::VectorXd g0_scaled = g0 * (cfg.scale_c / g0.sum());
      const double re_g_unaligned =
          (res.state.g_tilde - g0_scaled).norm() / g0_scaled.norm();

      json b;
      b["batch"] = q;
      b["iterations"] = res.state.iter;
      b["converged"] = res.state.converged;
      b["primal_residual"] = res.state.primal_residual;
      b["dual_residual"] = res.state.dual_residual;
      b["constraint_violation"] =
          std::abs(res.state.g_tilde.sum() - cfg.scale_c);
      b["re_x_aligned"] = re_x;
      b["re_x_raw"] = re_x_raw;
      b["re_g_aligned"] = re_g;
      b["re_g_unaligned"] = re_g_unaligned;
      b["acc"] = acc;
      b["seconds"] = secs;
      b["g_tilde"] = std::vector<double>(res.state.g_tilde.data(),
                                         res.state.g_tilde.data() + res.state.g_tilde.size());
      batches.push_back(std::move(b));
      sum_rex += re_x;
      sum_reg += re_g;
      sum_acc += acc;
      sum_secs += secs;
      if (!g.quiet) {
        std::cerr << "batch " << q << ": iters=" << res.state.iter << " re_x=" << re_x
                  << " acc=" << acc << "\n";
      }
    }
    const double nq = ds.manifest.q_batches;
    json report;
    report["format_version"] = 1;
    report["config"] = {
        {"data", data_dir},     {"rho_lambda", cfg.rho_lambda},
        {"rho_mu", cfg.rho_mu}, {"c", cfg.scale_c},
        {"tol", tol},           {"max_iters", cfg.max_iters},
        {"kappa", kappa},       {"global", global_config_json(g)},
    };
    report["batches"] = std::move(batches);
    report["aggregate"] = {{"re_x_aligned_mean", sum_rex / nq},
                           {"re_g_aligned_mean", sum_reg / nq},
                           {"acc_mean", sum_acc / nq},
                           {"seconds_mean", sum_secs / nq}};
    write_json_report(out, report);
  });
}

int cmd_train(std::vector<std::string> args) {
  CLI::App app{"train the unrolled network on a dataset"};
  GlobalFlags g;
  add_global_flags(app, g);

  std::string data_dir, out;
  int layers = 5;
  int d = 2;
  TrainConfig cfg;
  app.add_option("--data", data_dir, "dataset directory")->required();
  app.add_option("--layers", layers, "number of unrolled layers K");
  app.add_option("--d", d, "constraint dimension");
  app.add_option("--epochs", cfg.epochs, "training epochs");
  app.add_option("--lr", cfg.learning_rate, "Adam learning rate");
  app.add_option("--val-every", cfg.val_every_batches, "validate every this many batches");
  app.add_option("--out", out, "checkpoint directory")->required();

  return run(app, std::move(args), [&] {
    const Dataset ds = load_dataset(data_dir);
    const SpectralGraph sg = build_shift(ds.graph);
    cfg.seed = g.seed;
    cfg.quiet = g.quiet;

    SlogModel model = init_model(ds.manifest.n, d, layers, cfg.seed);
    const TrainResult result = train(std::move(model), sg, ds, cfg);

    const json resolved = {
        {"data", data_dir},
        {"layers", layers},
        {"d", d},
        {"epochs", cfg.epochs},
        {"lr", cfg.learning_rate},
        {"val_every", cfg.val_every_batches},
        {"best_step", result.log.best_step},
        {"best_val_loss", result.log.best_val_loss},
        {"global", global_config_json(g)},
    };
    save_model(result.best_model, out, resolved.dump());
    atomic_write_text((fs::path(out) / "training_log.json").string(),
                      train_log_to_json(result.log));
    if (!g.quiet) {
      std::cerr << "best validation loss " << result.log.best_val_loss << " at step "
                << result.log.best_step << " -> " << out << "\n";
    }
  });
}

int cmd_infer(std::vector<std::string> args) {
  CLI::App app{"run a trained model over every batch of a dataset"};
  GlobalFlags g;
  add_global_flags(app, g);

  std::string model_dir, data_dir, out, timing_out;
  double kappa = 0.1;
  app.add_option("--model", model_dir, "checkpoint directory")->required();
  app.add_option("--data", data_dir, "dataset directory")->required();
  app.add_option("--kappa", kappa, "support threshold");
  app.add_option("--out", out, "report JSON path")->required();
  app.add_option("--timing-out", timing_out,
                 "optional wall-clock JSON (kept out of the deterministic report)");

  return run(app, std::move(args), [&] {
    const SlogModel model = load_model(model_dir);
    const Dataset ds = load_dataset(data_dir);
    const SpectralGraph sg = build_shift(ds.graph);
    if (model.n != ds.manifest.n) {
      throw DimensionError("infer: model and dataset disagree on N");
    }

    json batches = json::array();
    std::vector<double> seconds;
    double sum_rex = 0.0, sum_reg = 0.0, sum_acc = 0.0;
    for (int q = 0; q < ds.manifest.q_batches; ++q) {
      const InferResult res = infer(model, sg, ds.y_batch(q), derive_seed(g.seed, q));
      const double re_x = relative_error_signed(res.x_hat, ds.x_batch(q));
      const double acc = support_accuracy(res.x_hat, ds.x_batch(q), kappa);
      const Eigen::VectorXd g0 = planted_inverse(sg, ds.h.col(q));
      const double re_g = relative_error_aligned(res.g_tilde, g0);
      json b;
      b["batch"] = q;
      b["re_x"] = re_x;
      b["re_g_aligned"] = re_g;
      b["acc"] = acc;
      b["g_tilde"] = std::vector<double>(res.g_tilde.data(),
                                         res.g_tilde.data() + res.g_tilde.size());
      batches.push_back(std::move(b));
      seconds.push_back(res.seconds);
      sum_rex += re_x;
      sum_reg += re_g;
      sum_acc += acc;
    }
    const double nq = ds.manifest.q_batches;
    json report;
    report["format_version"] = 1;
    report["config"] = {{"model", model_dir}, {"data", data_dir}, {"kappa", kappa},
                        {"global", global_config_json(g)}};
    report["batches"] = std::move(batches);
    report["aggregate"] = {{"re_x_mean", sum_rex / nq},
                           {"re_g_aligned_mean", sum_reg / nq},
                           {"acc_mean", sum_acc / nq}};
    write_json_report(out, report);

    double total = 0.0;
    for (double s : seconds) total += s;
    if (!timing_out.empty()) {
      write_json_report(timing_out,
                        json{{"seconds_per_batch", seconds}, {"seconds_mean", total / nq}});
    }
    if (!g.quiet) {
      std::cerr << "re_x_mean=" << sum_rex / nq << " acc_mean=" << sum_acc / nq
                << " mean_forward_seconds=" << total / nq << "\n";
    }
  });
}

int cmd_bench(std::vector<std::string> args) {
  CLI::App app{"compare solver and trained network across a noise sweep"};
  GlobalFlags g;
  add_global_flags(app, g);

  std::string data_dir, model_dir, out_dir, sweep = "0";
  BenchConfig cfg;
  double tol = 1e-6;
  app.add_option("--data", data_dir, "dataset directory (graph and sampling params)")
      ->required();
  app.add_option("--model", model_dir, "checkpoint directory")->required();
  app.add_option("--eta-sweep", sweep, "noise sweep start:step:stop (inclusive)");
  app.add_option("--trials", cfg.trials, "realizations per sweep point");
  app.add_option("--kappa", cfg.kappa, "support threshold");
  app.add_option("--rho-lambda", cfg.admm.rho_lambda, "solver penalty");
  app.add_option("--rho-mu", cfg.admm.rho_mu, "solver penalty");
  app.add_option("--tol", tol, "solver tolerance");
  app.add_option("--max-iters", cfg.admm.max_iters, "solver iteration cap");
  app.add_option("--out", out_dir, "results directory")->required();

  return run(app, std::move(args), [&] {
    cfg.admm.tol_primal = cfg.admm.tol_dual = tol;
    cfg.eta_sweep = parse_sweep(sweep);
    cfg.jobs = g.jobs;
    cfg.seed = g.seed;
    const Dataset ds = load_dataset(data_dir);
    const SpectralGraph sg = build_shift(ds.graph);
    const SlogModel model = load_model(model_dir);

    const std::vector<EvalRow> rows = bench_compare(sg, ds.manifest, model, cfg);
    fs::create_directories(out_dir);
    atomic_write_text((fs::path(out_dir) / "bench.csv").string(), eval_rows_to_csv(rows));
    const json resolved = {
        {"data", data_dir},   {"model", model_dir},       {"eta_sweep", cfg.eta_sweep},
        {"trials", cfg.trials}, {"kappa", cfg.kappa},
        {"rho_lambda", cfg.admm.rho_lambda}, {"rho_mu", cfg.admm.rho_mu},
        {"tol", tol},         {"max_iters", cfg.admm.max_iters},
        {"global", global_config_json(g)},
    };
    write_json_report((fs::path(out_dir) / "config.json").string(), resolved);
    if (!g.quiet) std::cerr << "wrote " << rows.size() << " rows -> " << out_dir << "\n";
  });
}

int cmd_report(std::vector<std::string> args) {
  CLI::App app{"aggregate benchmark CSVs into a summary JSON"};
  GlobalFlags g;
  add_global_flags(app, g);

  std::string in_dir, out;
  app.add_option("--in", in_dir, "directory of benchmark CSVs")->required();
  app.add_option("--out", out, "summary JSON path")->required();

  return run(app, std::move(args), [&] {
    std::vector<EvalRow> rows;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
      if (entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("report: no CSV files in " + in_dir);
    for (const auto& f : files) {
      const auto parsed = eval_rows_from_csv(read_text(f.string()));
      rows.insert(rows.end(), parsed.begin(), parsed.end());
    }
    atomic_write_text(out, summarize_rows(rows));
    if (!g.quiet) {
      std::cerr << "aggregated " << rows.size() << " rows from " << files.size()
                << " files -> " << out << "\n";
    }
  });
}

}  // namespace slog::cli
