#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "slog/dataset.hpp"
#include "slog/gradients.hpp"
#include "slog/model.hpp"
#include "slog/spectral.hpp"

namespace slog {

struct TrainConfig {
  int epochs = 30;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int val_every_batches = 20;
  std::uint64_t seed = 0;
  bool quiet = true;  // epoch progress to stderr when false

  void validate() const;
};

// Adam with bias correction over the flat parameter vector, followed by
// projection of rho1, rho2 and tau onto [0, inf).
class AdamOptimizer {
 public:
  AdamOptimizer(const SlogModel& model, const TrainConfig& cfg);

  void step(SlogModel& model, const Eigen::VectorXd& grads);

  long step_count() const { return step_count_; }

 private:
  TrainConfig cfg_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  long step_count_ = 0;
};

struct ValidationSnapshot {
  long step = 0;
  double loss = 0.0;
  Eigen::VectorXd params;
};

struct TrainLog {
  std::vector<double> train_loss;             // one entry per optimizer step
  std::vector<ValidationSnapshot> validation;
  long best_step = -1;
  double best_val_loss = 0.0;
};

struct TrainResult {
  SlogModel best_model;   // parameters with minimum validation loss
  SlogModel final_model;  // parameters after the last step
  TrainLog log;
};

// epochs x Q optimizer steps over the dataset's batches, shuffled per epoch
// from the training seed. Every val_every_batches steps (and after the final
// step) the validation loss is computed and the parameters are snapshotted;
// the returned best_model is the snapshot with minimum validation loss.
// Throws DivergenceError if a training loss turns non-finite.
TrainResult train(SlogModel model, const SpectralGraph& sg, const Dataset& data,
                  const TrainConfig& cfg);

struct InferResult {
  Eigen::MatrixXd x_hat;
  Eigen::VectorXd g_tilde;
  double seconds = 0.0;  // wall clock around the forward pass only
};

// One timed forward pass of a trained model.
InferResult infer(const SlogModel& model, const SpectralGraph& sg,
                  const Eigen::MatrixXd& y, std::uint64_t seed);

std::string train_log_to_json(const TrainLog& log);

}  // namespace slog
