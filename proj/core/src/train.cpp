#include "slog/train.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "slog/errors.hpp"
#include "slog/io.hpp"

namespace slog {

using nlohmann::json;

void TrainConfig::validate() const {
  if (epochs < 1) throw InvalidArgument("train: epochs must be >= 1");
  if (learning_rate <= 0.0) throw InvalidArgument("train: learning rate must be positive");
  if (val_every_batches < 1) throw InvalidArgument("train: val_every must be >= 1");
}

AdamOptimizer::AdamOptimizer(const SlogModel& model, const TrainConfig& cfg)
    : cfg_(cfg),
      m_(Eigen::VectorXd::Zero(model.param_count())),
      v_(Eigen::VectorXd::Zero(model.param_count())) {}

void AdamOptimizer::step(SlogModel& model, const Eigen::VectorXd& grads) {
  if (grads.size() != m_.size()) throw DimensionError("adam: gradient length mismatch");
  ++step_count_;
  m_ = cfg_.adam_beta1 * m_ + (1.0 - cfg_.adam_beta1) * grads;
  v_ = cfg_.adam_beta2 * v_ + (1.0 - cfg_.adam_beta2) * grads.cwiseProduct(grads);
  const double m_corr = 1.0 - std::pow(cfg_.adam_beta1, step_count_);
  const double v_corr = 1.0 - std::pow(cfg_.adam_beta2, step_count_);

  Eigen::VectorXd flat = model.pack();
  flat -= cfg_.learning_rate * (m_ / m_corr).array()
              .cwiseQuotient((v_ / v_corr).array().sqrt() + cfg_.adam_eps)
              .matrix();

  // Project the nonnegative-constrained parameters (rho1, rho2, tau).
  const Eigen::Index stride = model.params_per_layer();
  for (int k = 0; k < model.k(); ++k) {
    const Eigen::Index base = k * stride;
    flat(base + 0) = std::max(flat(base + 0), 0.0);  // rho1
    flat(base + 1) = std::max(flat(base + 1), 0.0);  // rho2
    flat(base + 4) = std::max(flat(base + 4), 0.0);  // tau
  }
  model.unpack(flat);
}

namespace {

// Fisher-Yates over the batch order, seeded per epoch.
std::vector<int> shuffled_batches(int q, Rng& rng) {
  std::vector<int> order(q);
  for (int i = 0; i < q; ++i) order[i] = i;
  for (int i = q - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

}  // namespace

TrainResult train(SlogModel model, const SpectralGraph& sg, const Dataset& data,
                  const TrainConfig& cfg) {
  cfg.validate();
  if (data.manifest.n != model.n) {
    throw DimensionError("train: dataset and model disagree on N");
  }
  const int q_batches = data.manifest.q_batches;
  const Eigen::MatrixXd& v = sg.eigvecs();

  TrainResult result;
  result.log.best_val_loss = std::numeric_limits<double>::infinity();

  // One fixed initial-state seed for every validation forward keeps model
  // selection comparable across snapshots.
  const std::uint64_t val_init_seed = derive_seed(cfg.seed, streams::kValidation);
  const std::uint64_t shuffle_seed = derive_seed(cfg.seed, streams::kShuffle);

  AdamOptimizer opt(model, cfg);
  long step = 0;
  const long total_steps = static_cast<long>(cfg.epochs) * q_batches;

  auto validate_now = [&](long at_step) {
    const ForwardResult fwd = forward(model, v, data.y_val, val_init_seed);
    const double vloss = slog_loss(fwd.x_hat, data.x_val);
    result.log.validation.push_back({at_step, vloss, model.pack()});
    if (vloss < result.log.best_val_loss) {
      result.log.best_val_loss = vloss;
      result.log.best_step = at_step;
    }
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(shuffle_seed, epoch));
    const std::vector<int> order = shuffled_batches(q_batches, shuffle_rng);
    const auto epoch_start = std::chrono::steady_clock::now();
    for (int idx = 0; idx < q_batches; ++idx) {
      const int q = order[idx];
      ++step;
      const ForwardResult fwd =
          forward(model, v, data.y_batch(q),
                  derive_seed(derive_seed(cfg.seed, streams::kForwardInit), step));
      const double loss = slog_loss(fwd.x_hat, data.x_batch(q));
      if (!std::isfinite(loss)) {
        throw DivergenceError("train: non-finite loss at step " + std::to_string(step));
      }
      result.log.train_loss.push_back(loss);
      const Eigen::VectorXd grads = backward(model, fwd.trace, data.x_batch(q));
      opt.step(model, grads);
      if (step % cfg.val_every_batches == 0 || step == total_steps) {
        validate_now(step);
      }
    }
    if (!cfg.quiet) {
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - epoch_start)
                              .count();
      std::cerr << "epoch " << (epoch + 1) << "/" << cfg.epochs
                << "  train_loss=" << result.log.train_loss.back()
                << "  best_val=" << result.log.best_val_loss << "  (" << secs
                << " s)\n";
    }
  }

  result.final_model = model;
  result.best_model = model;
  for (const auto& snap : result.log.validation) {
    if (snap.step == result.log.best_step) {
      result.best_model.unpack(snap.params);
      break;
    }
  }
  return result;
}

InferResult infer(const SlogModel& model, const SpectralGraph& sg,
                  const Eigen::MatrixXd& y, std::uint64_t seed) {
  InferResult out;
  const auto t0 = std::chrono::steady_clock::now();
  const ForwardResult fwd = forward(model, sg.eigvecs(), y, seed);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.x_hat = fwd.x_hat;
  out.g_tilde = fwd.g_tilde;
  return out;
}

std::string train_log_to_json(const TrainLog& log) {
  json j;
  j["train_loss"] = log.train_loss;
  json vals = json::array();
  for (const auto& snap : log.validation) {
    vals.push_back({{"step", snap.step}, {"loss", snap.loss}});
  }
  j["validation"] = vals;
  j["best_step"] = log.best_step;
  j["best_val_loss"] = log.best_val_loss;
  return j.dump(2) + "\n";
}

}  // namespace slog
