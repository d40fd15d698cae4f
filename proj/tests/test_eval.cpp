#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "slog/bench.hpp"
#include "slog/errors.hpp"
#include "slog/eval.hpp"

using namespace slog;

TEST_SUITE_BEGIN("eval");

TEST_CASE("relative_error_signed") {
  Rng rng(1);
  const Eigen::MatrixXd x = oracles::random_matrix(5, 4, rng);
  CHECK(relative_error_signed(x, x) == 0.0);
  CHECK(relative_error_signed(-x, x) == 0.0);

  SUBCASE("additive error of known size") {
    Eigen::MatrixXd e = oracles::random_matrix(5, 4, rng);
    e *= 0.1 * x.norm() / e.norm();
    CHECK(relative_error_signed(x + e, x) == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("sign invariance is exact") {
    const Eigen::MatrixXd xh = oracles::random_matrix(5, 4, rng);
    CHECK(relative_error_signed(xh, x) == relative_error_signed(-xh, x));
  }
  SUBCASE("zero target") {
    CHECK_THROWS_AS(relative_error_signed(x, Eigen::MatrixXd::Zero(5, 4)),
                    InvalidArgument);
  }
}

TEST_CASE("relative_error_aligned") {
  Rng rng(2);
  Eigen::VectorXd g0 = oracles::random_vector(10, rng);

  SUBCASE("exact after any rescale") {
    CHECK(relative_error_aligned(3.0 * g0, g0) <= 1e-14);
  }
  SUBCASE("orthogonal estimate carries the full residual") {
    Eigen::VectorXd ortho = oracles::random_vector(10, rng);
    ortho -= ortho.dot(g0) / g0.squaredNorm() * g0;
    CHECK(relative_error_aligned(ortho, g0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("orthogonal perturbation of relative size 0.2") {
    Eigen::VectorXd e = oracles::random_vector(10, rng);
    e -= e.dot(g0) / g0.squaredNorm() * g0;
    e *= 0.2 * g0.norm() / e.norm();
    CHECK(relative_error_aligned(g0 + e, g0) ==
          doctest::Approx(0.2 / std::sqrt(1.04)).epsilon(1e-10));
  }
  SUBCASE("scale invariance") {
    const Eigen::VectorXd ghat = oracles::random_vector(10, rng);
    const double base = relative_error_aligned(ghat, g0);
    // Powers of two rescale exactly in floating point.
    CHECK(relative_error_aligned(2.0 * ghat, g0) == base);
    CHECK(relative_error_aligned(-0.25 * ghat, g0) == base);
    CHECK(relative_error_aligned(3.0 * ghat, g0) == doctest::Approx(base).epsilon(1e-13));
  }
  SUBCASE("zero vectors rejected") {
    CHECK_THROWS_AS(relative_error_aligned(Eigen::VectorXd::Zero(10), g0),
                    InvalidArgument);
  }
}

TEST_CASE("support_accuracy") {
  Rng rng(3);
  const Eigen::MatrixXd x = sample_sources({20, 0.15, 5}, 200);
  const double kappa = 0.1;

  CHECK(support_accuracy(x, x, kappa) == 1.0);

  SUBCASE("the all-zero estimate scores one minus the support density") {
    const double density =
        static_cast<double>((x.cwiseAbs().array() >= kappa).count()) /
        static_cast<double>(x.size());
    CHECK(support_accuracy(Eigen::MatrixXd::Zero(20, 200), x, kappa) ==
          doctest::Approx(1.0 - density));
  }
  SUBCASE("global sign flips never change the score") {
    const Eigen::MatrixXd xh = oracles::random_matrix(20, 200, rng);
    CHECK(support_accuracy(xh, x, kappa) == support_accuracy(-xh, x, kappa));
  }
  SUBCASE("inflating magnitudes grows the estimated support monotonically") {
    const Eigen::MatrixXd xh = 0.5 * oracles::random_matrix(20, 200, rng);
    auto support_count = [&](const Eigen::MatrixXd& m) {
      return (m.cwiseAbs().array() >= kappa).count();
    };
    long prev = support_count(xh);
    for (double s : {1.5, 2.0, 4.0}) {
      const long cur = support_count(s * xh);
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("community_estimate") {
  const std::vector<int> blocks = sbm_blocks(6, 3);  // 0 0 1 1 2 2

  SUBCASE("basis vector picks its own block") {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(6);
    x(3) = -2.0;
    CHECK(community_estimate(x, blocks) == 1);
  }
  SUBCASE("ties go to the lowest node index") {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(6);
    x(1) = 1.0;
    x(4) = -1.0;
    CHECK(community_estimate(x, blocks) == 0);
  }
  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(community_estimate(Eigen::VectorXd::Zero(4), blocks),
                    DimensionError);
  }
}

TEST_CASE("csv report round trip is bit exact") {
  Rng rng(7);
  std::vector<EvalRow> rows;
  for (int i = 0; i < 8; ++i) {
    EvalRow r;
    r.method = i % 2 ? "admm" : "slog-net";
    r.graph = "er";
    r.n = 20;
    r.p = 400;
    r.theta = rng.uniform();
    r.filter_order = 5;
    r.phi = rng.normal();
    r.eta = rng.uniform() * 0.1;
    r.seed = rng.next_u64();
    r.re_x = rng.uniform();
    r.re_g = rng.uniform();
    r.acc = rng.uniform();
    r.kappa = 0.1;
    r.seconds = rng.uniform() * 1e-3;
    r.iters = static_cast<long>(rng.below(5000));
    rows.push_back(r);
  }
  const std::string csv = eval_rows_to_csv(rows);
  const std::vector<EvalRow> back = eval_rows_from_csv(csv);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].method == rows[i].method);
    CHECK(back[i].theta == rows[i].theta);
    CHECK(back[i].phi == rows[i].phi);
    CHECK(back[i].eta == rows[i].eta);
    CHECK(back[i].seed == rows[i].seed);
    CHECK(back[i].re_x == rows[i].re_x);
    CHECK(back[i].re_g == rows[i].re_g);
    CHECK(back[i].acc == rows[i].acc);
    CHECK(back[i].seconds == rows[i].seconds);
    CHECK(back[i].iters == rows[i].iters);
  }
}

TEST_CASE("parse_sweep") {
  const auto sweep = parse_sweep("0:0.02:0.1");
  REQUIRE(sweep.size() == 6);
  CHECK(sweep.front() == 0.0);
  CHECK(sweep.back() == doctest::Approx(0.1));
  CHECK(parse_sweep("0.05").size() == 1);
  CHECK_THROWS_AS(parse_sweep("0:-1:1"), InvalidArgument);
}

TEST_CASE("bench_compare plumbing on a tiny instance") {
  DatasetManifest m;
  m.graph.kind = GraphKind::Er;
  m.graph.n = 10;
  m.graph.p_edge = 0.4;
  m.theta = 0.2;
  m.filter_order = 3;
  m.phi = 1.0;
  m.t_total = 40;
  m.p_batch = 20;
  m.q_batches = 2;
  m.master_seed = 5;
  const SpectralGraph sg = build_shift(gen_graph(m.graph, derive_seed(5, streams::kGraph)));
  const SlogModel model = init_model(10, 2, 3, 6);

  BenchConfig cfg;
  cfg.eta_sweep = {0.0, 0.05};
  cfg.trials = 2;
  cfg.seed = 11;
  cfg.admm.max_iters = 200;

  const auto rows = bench_compare(sg, m, model, cfg);
  REQUIRE(rows.size() == 8);  // 2 methods x 2 etas x 2 trials
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    CHECK(rows[i].method == "admm");
    CHECK(rows[i + 1].method == "slog-net");
    CHECK(rows[i].seed == rows[i + 1].seed);  // identical test batches
  }

  SUBCASE("parallel execution yields identical rows") {
    BenchConfig par = cfg;
    par.jobs = 4;
    const auto rows2 = bench_compare(sg, m, model, par);
    REQUIRE(rows2.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows2[i].method == rows[i].method);
      CHECK(rows2[i].re_x == rows[i].re_x);
      CHECK(rows2[i].acc == rows[i].acc);
    }
  }
  SUBCASE("summary groups by method and eta") {
    const std::string summary = summarize_rows(rows);
    CHECK(summary.find("\"admm\"") != std::string::npos);
    CHECK(summary.find("\"slog-net\"") != std::string::npos);
  }
}

TEST_SUITE_END();
