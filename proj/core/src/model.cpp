#include "slog/model.hpp"

#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "slog/errors.hpp"
#include "slog/io.hpp"

namespace slog {

namespace fs = std::filesystem;
using nlohmann::json;

Eigen::VectorXd SlogModel::pack() const {
  Eigen::VectorXd flat(param_count());
  Eigen::Index at = 0;
  for (const auto& p : layers) {
    flat(at++) = p.rho1;
    flat(at++) = p.rho2;
    flat(at++) = p.alpha1;
    flat(at++) = p.alpha2;
    flat(at++) = p.tau;
    flat(at++) = p.beta1;
    flat(at++) = p.beta2;
    flat(at++) = p.beta3;
    flat(at++) = p.gamma;
    flat.segment(at, static_cast<Eigen::Index>(n) * d) =
        Eigen::Map<const Eigen::VectorXd>(p.constraint_mat.data(),
                                          static_cast<Eigen::Index>(n) * d);
    at += static_cast<Eigen::Index>(n) * d;
    flat.segment(at, d) = p.constraint_vec;
    at += d;
  }
  return flat;
}

void SlogModel::unpack(const Eigen::VectorXd& flat) {
  if (flat.size() != param_count()) {
    throw DimensionError("model: flat parameter vector has wrong length");
  }
  Eigen::Index at = 0;
  for (auto& p : layers) {
    p.rho1 = flat(at++);
    p.rho2 = flat(at++);
    p.alpha1 = flat(at++);
    p.alpha2 = flat(at++);
    p.tau = flat(at++);
    p.beta1 = flat(at++);
    p.beta2 = flat(at++);
    p.beta3 = flat(at++);
    p.gamma = flat(at++);
    p.constraint_mat = Eigen::Map<const Eigen::MatrixXd>(flat.data() + at, n, d);
    at += static_cast<Eigen::Index>(n) * d;
    p.constraint_vec = flat.segment(at, d);
    at += d;
  }
  ++version;
}

SlogModel init_model(int n, int d, int k, std::uint64_t seed) {
  if (k < 1) throw InvalidArgument("init_model: need at least one layer");
  if (d < 1 || d > n) throw InvalidArgument("init_model: d must be in [1, N]");
  Rng rng(derive_seed(seed, streams::kModelInit));
  SlogModel model;
  model.n = n;
  model.d = d;
  model.layers.resize(k);
  for (auto& p : model.layers) {
    // Nonnegative-constrained parameters start uniform in [0, 1], the rest
    // standard normal.
    p.rho1 = rng.uniform();
    p.rho2 = rng.uniform();
    p.tau = rng.uniform();
    p.alpha1 = rng.normal();
    p.alpha2 = rng.normal();
    p.beta1 = rng.normal();
    p.beta2 = rng.normal();
    p.beta3 = rng.normal();
    p.gamma = rng.normal();
    p.constraint_mat.resize(n, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < n; ++i) p.constraint_mat(i, j) = rng.normal();
    p.constraint_vec.resize(d);
    for (int j = 0; j < d; ++j) p.constraint_vec(j) = rng.normal();
  }
  model.version = 1;
  return model;
}

SlogModel admm_specialization(int n, int k, const AdmmConfig& cfg) {
  cfg.validate();
  SlogModel model;
  model.n = n;
  model.d = 1;
  model.layers.resize(k);
  const double sqrt_rho_mu = std::sqrt(cfg.rho_mu);
  for (auto& p : model.layers) {
    p.rho1 = 1.0 / cfg.rho_lambda;
    p.rho2 = 1.0 / cfg.rho_lambda;
    p.alpha1 = 1.0;
    p.alpha2 = 1.0 / cfg.rho_lambda;
    p.tau = 1.0 / cfg.rho_lambda;
    p.beta1 = 1.0;
    p.beta2 = cfg.rho_lambda;
    p.beta3 = -cfg.rho_lambda;
    p.gamma = 1.0;
    p.constraint_mat = Eigen::MatrixXd::Constant(n, 1, sqrt_rho_mu);
    p.constraint_vec = Eigen::VectorXd::Constant(1, sqrt_rho_mu * cfg.scale_c);
  }
  model.version = 1;
  return model;
}

InitialState InitialState::zeros(int n, int p, int d) {
  InitialState s;
  s.x0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * p);
  s.lambda0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * p);
  s.mu0 = Eigen::VectorXd::Zero(d);
  return s;
}

InitialState InitialState::random(int n, int p, int d, std::uint64_t seed) {
  Rng rng(derive_seed(seed, streams::kForwardInit));
  InitialState s;
  const Eigen::Index np = static_cast<Eigen::Index>(n) * p;
  s.x0.resize(np);
  s.lambda0.resize(np);
  s.mu0.resize(d);
  for (Eigen::Index i = 0; i < np; ++i) s.x0(i) = rng.normal();
  for (Eigen::Index i = 0; i < np; ++i) s.lambda0(i) = rng.normal();
  for (int i = 0; i < d; ++i) s.mu0(i) = rng.normal();
  return s;
}

namespace {

void check_layer_shapes(const LiftedOperator& op, const LayerParams& p) {
  if (p.constraint_mat.rows() != op.n) {
    throw DimensionError("layer: constraint matrix row count mismatch");
  }
  if (p.constraint_vec.size() != p.constraint_mat.cols()) {
    throw DimensionError("layer: constraint vector length mismatch");
  }
}

Eigen::VectorXd filter_rhs(const LiftedOperator& op, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
                           const LayerParams& p) {
  return lifted_adjoint(op, x - p.rho1 * lambda) +
         p.constraint_mat * (p.rho2 * p.constraint_vec - p.rho1 * mu);
}

}  // namespace

Eigen::VectorXd filter_sublayer(const LiftedOperator& op, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
                                const LayerParams& p) {
  check_layer_shapes(op, p);
  const Eigen::VectorXd z = floor_ztz(op.ztz_diag);
  const WoodburyFactor factor(z, p.rho2, p.constraint_mat);
  return factor.apply(filter_rhs(op, x, lambda, mu, p));
}

Eigen::VectorXd sources_sublayer(const LiftedOperator& op, const Eigen::VectorXd& g_tilde,
                                 const Eigen::VectorXd& lambda, const LayerParams& p) {
  if (p.tau < 0.0) throw InvalidArgument("sources_sublayer: tau must be nonnegative");
  return soft_threshold(p.alpha1 * lifted_matvec(op, g_tilde) + p.alpha2 * lambda, p.tau);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> multipliers_sublayer(
    const LiftedOperator& op, const Eigen::VectorXd& g_tilde, const Eigen::VectorXd& x,
    const Eigen::VectorXd& lambda_prev, const Eigen::VectorXd& mu_prev,
    const LayerParams& p) {
  check_layer_shapes(op, p);
  Eigen::VectorXd lambda =
      p.beta1 * lambda_prev + p.beta2 * lifted_matvec(op, g_tilde) + p.beta3 * x;
  Eigen::VectorXd mu = p.gamma * mu_prev +
                       p.constraint_mat.transpose() * g_tilde - p.constraint_vec;
  return {std::move(lambda), std::move(mu)};
}

ForwardResult forward(const SlogModel& model, const Eigen::MatrixXd& v,
                      const Eigen::MatrixXd& y, const InitialState& init) {
  if (model.n != v.rows()) throw DimensionError("forward: model/graph size mismatch");
  if (y.rows() != model.n) throw DimensionError("forward: Y row count mismatch");

  ForwardResult out;
  ForwardTrace& tr = out.trace;
  tr.op = build_lifted(v, y);
  tr.z_floored = floor_ztz(tr.op.ztz_diag, 1e-12, &tr.z_was_floored);
  tr.init = init;
  tr.model_version = model.version;
  tr.layers.reserve(model.layers.size());

  const Eigen::Index np = static_cast<Eigen::Index>(tr.op.n) * tr.op.p;
  if (init.x0.size() != np || init.lambda0.size() != np ||
      init.mu0.size() != model.d) {
    throw DimensionError("forward: initial state shape mismatch");
  }

  const Eigen::VectorXd* x_prev = &init.x0;
  const Eigen::VectorXd* lambda_prev = &init.lambda0;
  const Eigen::VectorXd* mu_prev = &init.mu0;

  for (const auto& p : model.layers) {
    check_layer_shapes(tr.op, p);
    LayerTrace lt;
    lt.factor = WoodburyFactor(tr.z_floored, p.rho2, p.constraint_mat);
    lt.g = lt.factor.apply(filter_rhs(tr.op, *x_prev, *lambda_prev, *mu_prev, p));
    lt.zg = lifted_matvec(tr.op, lt.g);
    lt.pre = p.alpha1 * lt.zg + p.alpha2 * (*lambda_prev);
    lt.x = soft_threshold(lt.pre, p.tau);
    lt.lambda = p.beta1 * (*lambda_prev) + p.beta2 * lt.zg + p.beta3 * lt.x;
    lt.mu = p.gamma * (*mu_prev) + p.constraint_mat.transpose() * lt.g -
            p.constraint_vec;
    tr.layers.push_back(std::move(lt));
    x_prev = &tr.layers.back().x;
    lambda_prev = &tr.layers.back().lambda;
    mu_prev = &tr.layers.back().mu;
  }

  const LayerTrace& last = tr.layers.back();
  out.g_tilde = last.g;
  out.x_hat = Eigen::Map<const Eigen::MatrixXd>(last.zg.data(), tr.op.n, tr.op.p);
  return out;
}

ForwardResult forward(const SlogModel& model, const Eigen::MatrixXd& v,
                      const Eigen::MatrixXd& y, std::uint64_t init_seed) {
  return forward(model, v, y,
                 InitialState::random(model.n, static_cast<int>(y.cols()), model.d,
                                      init_seed));
}

void save_model(const SlogModel& model, const std::string& dir,
                const std::string& config_json) {
  fs::create_directories(dir);
  json j;
  j["format_version"] = 1;
  j["n"] = model.n;
  j["d"] = model.d;
  j["k"] = model.k();
  j["param_count"] = model.param_count();
  try {
    j["config"] = json::parse(config_json);
  } catch (const json::exception&) {
    j["config"] = json::object();
  }
  atomic_write_text((fs::path(dir) / "model.json").string(), j.dump(2) + "\n");
  write_f64le((fs::path(dir) / "params.f64le").string(), model.pack());
}

SlogModel load_model(const std::string& dir) {
  json j;
  try {
    j = json::parse(read_text((fs::path(dir) / "model.json").string()));
  } catch (const json::exception& e) {
    throw IoError(std::string("model.json: invalid JSON: ") + e.what());
  }
  if (j.value("format_version", -1) != 1) {
    throw VersionMismatch("model.json: unsupported format_version");
  }
  SlogModel model;
  model.n = j.at("n").get<int>();
  model.d = j.at("d").get<int>();
  const int k = j.at("k").get<int>();
  model.layers.resize(k);
  for (auto& p : model.layers) {
    p.constraint_mat.resize(model.n, model.d);
    p.constraint_vec.resize(model.d);
  }
  const Eigen::MatrixXd flat =
      read_f64le((fs::path(dir) / "params.f64le").string(), model.param_count(), 1);
  model.unpack(flat.col(0));
  model.version = 1;
  return model;
}

}  // namespace slog
