#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "slog/dataset.hpp"
#include "slog/io.hpp"

using namespace slog;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path log =
      fs::temp_directory_path() / ("slog_cli_out_" + std::to_string(counter++) + ".log");
  const std::string cmd = std::string(SLOG_CLI_PATH) + " " + args + " > " +
                          log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CliResult res;
  res.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  res.output = read_text(log.string());
  fs::remove(log);
  return res;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kTinyGen =
    "--graph er --n 12 --p-edge 0.4 --theta 0.2 --filter-order 3 --phi 1 "
    "--ntrain 60 --batch 30 --eta 0 --seed 1";

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("gen-data smoke test") {
  const fs::path dir = fresh_dir("slog_cli_gen");
  const CliResult res = run_cli("gen-data " + kTinyGen + " --out " + dir.string());
  CHECK(res.code == 0);
  const Dataset ds = load_dataset(dir.string());
  CHECK(ds.manifest.n == 12);
  CHECK(ds.manifest.q_batches == 2);
}

TEST_CASE("usage errors exit with code 1") {
  SUBCASE("missing required flag") {
    const CliResult res = run_cli("gen-data --graph er --n 12 --ntrain 60");
    CHECK(res.code == 1);
    CHECK(res.output.find("--out") != std::string::npos);
  }
  SUBCASE("unknown flag") {
    const CliResult res = run_cli("gen-data --does-not-exist 3");
    CHECK(res.code == 1);
  }
  SUBCASE("unknown subcommand") {
    const CliResult res = run_cli("frobnicate");
    CHECK(res.code == 1);
  }
  SUBCASE("no arguments prints usage") {
    const CliResult res = run_cli("");
    CHECK(res.code == 1);
    CHECK(res.output.find("usage:") != std::string::npos);
  }
}

TEST_CASE("runtime failures exit with code 2") {
  const CliResult res =
      run_cli("solve-admm --data /nonexistent/dataset --out /tmp/never.json");
  CHECK(res.code == 2);
}

TEST_CASE("config file supplies defaults, flags override") {
  const fs::path dir = fresh_dir("slog_cli_cfg");
  const fs::path cfg = dir / "run.json";
  {
    std::ofstream out(cfg);
    out << R"({"graph": "er", "n": 12, "p-edge": 0.4, "theta": 0.35,
               "filter-order": 3, "phi": 1.0, "ntrain": 60, "batch": 30,
               "seed": 4})";
  }
  SUBCASE("values come from the file") {
    const fs::path data = dir / "a";
    const CliResult res =
        run_cli("gen-data --config " + cfg.string() + " --out " + data.string());
    REQUIRE(res.code == 0);
    CHECK(load_dataset(data.string()).manifest.theta == 0.35);
  }
  SUBCASE("explicit flags win") {
    const fs::path data = dir / "b";
    const CliResult res = run_cli("gen-data --config " + cfg.string() +
                                  " --theta 0.1 --out " + data.string());
    REQUIRE(res.code == 0);
    CHECK(load_dataset(data.string()).manifest.theta == 0.1);
  }
}

TEST_CASE("solve-admm, train, infer and report pipelines") {
  const fs::path dir = fresh_dir("slog_cli_pipe");
  const fs::path data = dir / "data";
  REQUIRE(run_cli("gen-data " + kTinyGen + " --out " + data.string()).code == 0);

  SUBCASE("solve-admm writes a parseable report") {
    const fs::path report = dir / "admm.json";
    const CliResult res = run_cli("solve-admm --data " + data.string() +
                                  " --max-iters 300 --quiet --out " + report.string());
    CHECK(res.code == 0);
    const std::string text = read_text(report.string());
    CHECK(text.find("\"aggregate\"") != std::string::npos);
    CHECK(text.find("\"g_tilde\"") != std::string::npos);
  }

  SUBCASE("train then infer, and infer is deterministic") {
    const fs::path ckpt = dir / "ckpt";
    const CliResult tr = run_cli("train --data " + data.string() +
                                 " --layers 2 --d 2 --epochs 2 --lr 1e-3 "
                                 "--val-every 2 --seed 7 --quiet --out " +
                                 ckpt.string());
    REQUIRE(tr.code == 0);
    CHECK(fs::exists(ckpt / "model.json"));
    CHECK(fs::exists(ckpt / "params.f64le"));
    CHECK(fs::exists(ckpt / "training_log.json"));

    const fs::path r1 = dir / "r1.json";
    const fs::path r2 = dir / "r2.json";
    REQUIRE(run_cli("infer --model " + ckpt.string() + " --data " + data.string() +
                    " --seed 7 --quiet --out " + r1.string())
                .code == 0);
    REQUIRE(run_cli("infer --model " + ckpt.string() + " --data " + data.string() +
                    " --seed 7 --quiet --out " + r2.string())
                .code == 0);
    CHECK(read_text(r1.string()) == read_text(r2.string()));
  }

  SUBCASE("bench then report") {
    const fs::path ckpt = dir / "ckpt2";
    REQUIRE(run_cli("train --data " + data.string() +
                    " --layers 2 --d 2 --epochs 1 --val-every 2 --seed 3 --quiet "
                    "--out " + ckpt.string())
                .code == 0);
    const fs::path results = dir / "results";
    const CliResult bench = run_cli(
        "bench --data " + data.string() + " --model " + ckpt.string() +
        " --eta-sweep 0:0.05:0.05 --trials 1 --max-iters 100 --seed 9 --quiet --out " +
        results.string());
    REQUIRE(bench.code == 0);
    CHECK(fs::exists(results / "bench.csv"));

    const fs::path summary = dir / "summary.json";
    const CliResult rep = run_cli("report --in " + results.string() + " --quiet --out " +
                                  summary.string());
    CHECK(rep.code == 0);
    CHECK(read_text(summary.string()).find("\"groups\"") != std::string::npos);
  }
}

TEST_SUITE_END();
