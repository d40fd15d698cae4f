#pragma once

#include <Eigen/Dense>

#include "slog/model.hpp"

namespace slog {

// Sign-invariant relative loss min(||X^ - X||_F, ||X^ + X||_F) / ||X||_F.
// Throws InvalidArgument when ||X||_F = 0. Ties differentiate the "-" branch.
double slog_loss(const Eigen::MatrixXd& x_hat, const Eigen::MatrixXd& x);

// Exact reverse-mode gradient of slog_loss(forward(model, .), x_target) with
// respect to every model parameter, returned in the flat layout of
// SlogModel::pack(). Reuses the forward trace: the per-layer Woodbury factor
// supplies the linear-solve adjoint A^{-1} (A symmetric), the soft threshold
// backpropagates the 0 subgradient at its kinks, and the loss differentiates
// its achieving sign branch.
//
// Throws StaleTrace if the trace was recorded for a different parameter
// version of the model.
Eigen::VectorXd backward(const SlogModel& model, const ForwardTrace& trace,
                         const Eigen::MatrixXd& x_target);

}  // namespace slog
