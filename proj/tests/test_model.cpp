#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "slog/errors.hpp"
#include "slog/io.hpp"
#include "slog/model.hpp"

using namespace slog;
namespace fs = std::filesystem;

namespace {

// State after exactly `iters` solver iterations (the solver always starts
// from zero, so rerunning with a smaller cap replays the same trajectory).
AdmmState admm_iterates(const LiftedOperator& op, AdmmConfig cfg, int iters) {
  cfg.max_iters = iters;
  cfg.tol_primal = cfg.tol_dual = 1e-300;  // never stop early
  cfg.record_history = false;
  return admm_solve(op, cfg).state;
}

LiftedOperator small_operator(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::MatrixXd v = oracles::random_orthonormal(n, rng);
  const Eigen::MatrixXd y = oracles::random_matrix(n, p, rng);
  return build_lifted(v, y);
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("init_model") {
  const SlogModel a = init_model(20, 2, 5, 7);
  SUBCASE("deterministic per seed") {
    const SlogModel b = init_model(20, 2, 5, 7);
    CHECK((a.pack() - b.pack()).cwiseAbs().maxCoeff() == 0.0);
    const SlogModel c = init_model(20, 2, 5, 8);
    CHECK((a.pack() - c.pack()).cwiseAbs().maxCoeff() != 0.0);
  }
  SUBCASE("parameter count: K (9 scalars + N d + d)") {
    // Each layer carries 9 scalar fields (rho1, rho2, alpha1, alpha2, tau,
    // beta1, beta2, beta3, gamma) plus M and m.
    CHECK(a.param_count() == 5 * (9 + 20 * 2 + 2));
    CHECK(a.param_count() == 255);
  }
  SUBCASE("constrained parameters start inside [0, 1]") {
    for (const auto& p : a.layers) {
      for (double v : {p.rho1, p.rho2, p.tau}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  }
  SUBCASE("pack / unpack round trip") {
    SlogModel b = init_model(20, 2, 5, 99);
    b.unpack(a.pack());
    CHECK((b.pack() - a.pack()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("filter sub-layer") {
  const LiftedOperator op = small_operator(8, 3, 51);
  Rng rng(52);
  LayerParams p;
  p.constraint_mat = oracles::random_matrix(8, 2, rng);
  p.constraint_vec = oracles::random_vector(2, rng);
  const Eigen::VectorXd x = oracles::random_vector(24, rng);
  const Eigen::VectorXd lambda = oracles::random_vector(24, rng);
  const Eigen::VectorXd mu = oracles::random_vector(2, rng);

  SUBCASE("rho1 = rho2 = 0 reduces to the diagonal solve of Z^T x") {
    p.rho1 = p.rho2 = 0.0;
    const Eigen::VectorXd g = filter_sublayer(op, x, lambda, mu, p);
    const Eigen::VectorXd expect =
        lifted_adjoint(op, x).cwiseQuotient(floor_ztz(op.ztz_diag));
    CHECK((g - expect).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("constraint-only drive") {
    p.rho1 = 0.4;
    p.rho2 = 0.9;
    const Eigen::VectorXd zero_np = Eigen::VectorXd::Zero(24);
    const Eigen::VectorXd zero_d = Eigen::VectorXd::Zero(2);
    const Eigen::VectorXd g = filter_sublayer(op, zero_np, zero_np, zero_d, p);
    const Eigen::VectorXd expect = oracles::dense_woodbury(
        floor_ztz(op.ztz_diag), p.rho2, p.constraint_mat,
        p.rho2 * (p.constraint_mat * p.constraint_vec));
    CHECK((g - expect).norm() / expect.norm() <= 1e-10);
  }
  SUBCASE("random inputs match the dense evaluation") {
    p.rho1 = 0.7;
    p.rho2 = 1.3;
    const Eigen::VectorXd g = filter_sublayer(op, x, lambda, mu, p);
    const Eigen::MatrixXd z = oracles::explicit_lifted(op.v, op.v * op.y_tilde);
    const Eigen::VectorXd rhs =
        z.transpose() * (x - p.rho1 * lambda) +
        p.constraint_mat * (p.rho2 * p.constraint_vec - p.rho1 * mu);
    const Eigen::VectorXd dense = oracles::dense_woodbury(
        floor_ztz(op.ztz_diag), p.rho2, p.constraint_mat, rhs);
    CHECK((g - dense).norm() / dense.norm() <= 1e-10);
  }
}

TEST_CASE("sources sub-layer") {
  const LiftedOperator op = small_operator(8, 3, 61);
  Rng rng(62);
  const Eigen::VectorXd g = oracles::random_vector(8, rng);
  const Eigen::VectorXd lambda = oracles::random_vector(24, rng);
  LayerParams p;

  SUBCASE("identity combination with no threshold") {
    p.alpha1 = 1.0;
    p.alpha2 = 0.0;
    p.tau = 0.0;
    const Eigen::VectorXd x = sources_sublayer(op, g, lambda, p);
    CHECK((x - lifted_matvec(op, g)).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("large threshold kills everything") {
    p.alpha1 = 0.5;
    p.alpha2 = 0.25;
    p.tau = 1e6;
    CHECK(sources_sublayer(op, g, lambda, p).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("random parameters match the dense path") {
    p.alpha1 = rng.normal();
    p.alpha2 = rng.normal();
    p.tau = rng.uniform();
    const Eigen::MatrixXd z = oracles::explicit_lifted(op.v, op.v * op.y_tilde);
    const Eigen::VectorXd dense =
        soft_threshold(p.alpha1 * (z * g) + p.alpha2 * lambda, p.tau);
    CHECK((sources_sublayer(op, g, lambda, p) - dense).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("multipliers sub-layer") {
  const LiftedOperator op = small_operator(8, 3, 71);
  Rng rng(72);
  const Eigen::VectorXd g = oracles::random_vector(8, rng);
  const Eigen::VectorXd x = oracles::random_vector(24, rng);
  const Eigen::VectorXd lambda_prev = oracles::random_vector(24, rng);

  SUBCASE("specialization reproduces the solver's dual ascent") {
    // beta1 = 1, beta2 = rho_l, beta3 = -rho_l, gamma = 1, M = 1, m = c make
    // the sub-layer exactly the dual updates of the scale-constrained
    // program (the mu update is dual ascent for M^T g~ = m).
    const double rho_l = 1.7, c = 1.0;
    LayerParams p;
    p.beta1 = 1.0;
    p.beta2 = rho_l;
    p.beta3 = -rho_l;
    p.gamma = 1.0;
    p.constraint_mat = Eigen::MatrixXd::Ones(8, 1);
    p.constraint_vec = Eigen::VectorXd::Constant(1, c);
    const Eigen::VectorXd mu_prev = Eigen::VectorXd::Constant(1, 0.37);
    const auto [lambda, mu] = multipliers_sublayer(op, g, x, lambda_prev, mu_prev, p);

    const Eigen::VectorXd lambda_admm =
        lambda_prev + rho_l * (lifted_matvec(op, g) - x);
    CHECK((lambda - lambda_admm).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(mu(0) == doctest::Approx(mu_prev(0) + (g.sum() - c)).epsilon(1e-12));
  }
  SUBCASE("zero weights isolate the constraint read-out") {
    LayerParams p;
    p.constraint_mat = oracles::random_matrix(8, 2, rng);
    p.constraint_vec = Eigen::VectorXd::Zero(2);
    const auto [lambda, mu] = multipliers_sublayer(
        op, g, x, lambda_prev, Eigen::VectorXd::Zero(2), p);
    CHECK(lambda.cwiseAbs().maxCoeff() == 0.0);
    CHECK((mu - p.constraint_mat.transpose() * g).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("random parameters match the dense path") {
    LayerParams p;
    p.beta1 = rng.normal();
    p.beta2 = rng.normal();
    p.beta3 = rng.normal();
    p.gamma = rng.normal();
    p.constraint_mat = oracles::random_matrix(8, 2, rng);
    p.constraint_vec = oracles::random_vector(2, rng);
    const Eigen::VectorXd mu_prev = oracles::random_vector(2, rng);
    const auto [lambda, mu] = multipliers_sublayer(op, g, x, lambda_prev, mu_prev, p);
    const Eigen::MatrixXd z = oracles::explicit_lifted(op.v, op.v * op.y_tilde);
    const Eigen::VectorXd lambda_dense =
        p.beta1 * lambda_prev + p.beta2 * (z * g) + p.beta3 * x;
    const Eigen::VectorXd mu_dense =
        p.gamma * mu_prev + p.constraint_mat.transpose() * g - p.constraint_vec;
    CHECK((lambda - lambda_dense).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((mu - mu_dense).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("forward with specialized parameters replays the solver exactly") {
  const fixtures::Planted inst = fixtures::make_planted(81, 12, 20);
  const LiftedOperator op = build_lifted(inst.sg.eigvecs(), inst.y);
  const int k_layers = 6;

  SUBCASE("unit rho_mu: every state matches") {
    AdmmConfig cfg;
    cfg.rho_lambda = 1.4;
    cfg.rho_mu = 1.0;
    const SlogModel model = admm_specialization(12, k_layers, cfg);
    const ForwardResult fwd = forward(model, inst.sg.eigvecs(), inst.y,
                                      InitialState::zeros(12, 20, 1));
    for (int j = 1; j <= k_layers; ++j) {
      const AdmmState st = admm_iterates(op, cfg, j);
      const LayerTrace& lt = fwd.trace.layers[j - 1];
      CHECK((lt.g - st.g_tilde).norm() / std::max(st.g_tilde.norm(), 1e-30) <= 1e-10);
      CHECK((lt.x - st.x).norm() <= 1e-10 * std::max(1.0, st.x.norm()));
      CHECK((lt.lambda - st.lambda).norm() <= 1e-10 * std::max(1.0, st.lambda.norm()));
      CHECK(lt.mu(0) == doctest::Approx(st.mu).epsilon(1e-10));
    }
  }
  SUBCASE("general rho_mu: primal states match, mu scales by sqrt(rho_mu)") {
    AdmmConfig cfg;
    cfg.rho_lambda = 0.8;
    cfg.rho_mu = 2.5;
    const SlogModel model = admm_specialization(12, k_layers, cfg);
    const ForwardResult fwd = forward(model, inst.sg.eigvecs(), inst.y,
                                      InitialState::zeros(12, 20, 1));
    const double root = std::sqrt(cfg.rho_mu);
    for (int j = 1; j <= k_layers; ++j) {
      const AdmmState st = admm_iterates(op, cfg, j);
      const LayerTrace& lt = fwd.trace.layers[j - 1];
      CHECK((lt.g - st.g_tilde).norm() / std::max(st.g_tilde.norm(), 1e-30) <= 1e-10);
      CHECK((lt.x - st.x).norm() <= 1e-10 * std::max(1.0, st.x.norm()));
      CHECK((lt.lambda - st.lambda).norm() <= 1e-10 * std::max(1.0, st.lambda.norm()));
      CHECK(lt.mu(0) * root == doctest::Approx(st.mu).epsilon(1e-10));
    }
  }
}

TEST_CASE("forward basics") {
  const SlogModel model = init_model(8, 2, 3, 5);
  Rng rng(91);
  const Eigen::MatrixXd v = oracles::random_orthonormal(8, rng);

  SUBCASE("zero observations with zero init produce zero predictions") {
    const Eigen::MatrixXd y = Eigen::MatrixXd::Zero(8, 4);
    const ForwardResult fwd = forward(model, v, y, InitialState::zeros(8, 4, 2));
    CHECK(fwd.x_hat.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("fixed seed gives bit-identical predictions") {
    const Eigen::MatrixXd y = oracles::random_matrix(8, 4, rng);
    const ForwardResult a = forward(model, v, y, std::uint64_t{17});
    const ForwardResult b = forward(model, v, y, std::uint64_t{17});
    CHECK((a.x_hat - b.x_hat).cwiseAbs().maxCoeff() == 0.0);
    const ForwardResult c = forward(model, v, y, std::uint64_t{18});
    CHECK((a.x_hat - c.x_hat).cwiseAbs().maxCoeff() != 0.0);
  }
  SUBCASE("trace depth equals K and replay is exact") {
    const Eigen::MatrixXd y = oracles::random_matrix(8, 4, rng);
    const InitialState init = InitialState::random(8, 4, 2, 3);
    const ForwardResult a = forward(model, v, y, init);
    CHECK(a.trace.layers.size() == 3);
    const ForwardResult b = forward(model, v, y, init);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK((a.trace.layers[k].g - b.trace.layers[k].g).cwiseAbs().maxCoeff() == 0.0);
      CHECK((a.trace.layers[k].x - b.trace.layers[k].x).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("checkpoint round trip") {
  const auto dir = fs::temp_directory_path() / "slog_model_ckpt";
  fs::remove_all(dir);
  const SlogModel model = init_model(10, 2, 4, 13);
  save_model(model, dir.string(), R"({"note":"test"})");

  SUBCASE("bit-exact parameters") {
    const SlogModel loaded = load_model(dir.string());
    CHECK(loaded.n == 10);
    CHECK(loaded.d == 2);
    CHECK(loaded.k() == 4);
    CHECK((loaded.pack() - model.pack()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("version mismatch") {
    std::string text = read_text((dir / "model.json").string());
    const auto pos = text.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 19, "\"format_version\": 3");
    atomic_write_text((dir / "model.json").string(), text);
    CHECK_THROWS_AS(load_model(dir.string()), VersionMismatch);
  }
  SUBCASE("truncated parameter payload") {
    const auto path = dir / "params.f64le";
    fs::resize_file(path, fs::file_size(path) - 8);
    CHECK_THROWS_AS(load_model(dir.string()), CorruptPayload);
  }
}

TEST_SUITE_END();
