#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace slog {

// min over s in {+1, -1} of ||s X^ - X||_F / ||X||_F. Recovery is only
// identifiable up to a global sign, so both orientations count as exact.
double relative_error_signed(const Eigen::MatrixXd& x_hat, const Eigen::MatrixXd& x);

// The winning sign of relative_error_signed (+1 on ties).
double winning_sign(const Eigen::MatrixXd& x_hat, const Eigen::MatrixXd& x);

// Least-squares scale alignment: s* = <g^, g0> / ||g^||^2, returns
// ||s* g^ - g0||_2 / ||g0||_2. Invariant to rescaling g^ by any nonzero
// constant; needed because the learned scale of g^ is arbitrary.
double relative_error_aligned(const Eigen::VectorXd& g_hat, const Eigen::VectorXd& g0);

// The aligning scalar s* itself (used to put estimates on a target's scale).
double ls_scale(const Eigen::VectorXd& est, const Eigen::VectorXd& target);

// Elementwise support classification accuracy after magnitude thresholding
// at kappa: (|I^ and I| + |I^c and Ic|) / (N P), with the estimate
// sign-aligned by the winning sign first.
double support_accuracy(const Eigen::MatrixXd& x_hat, const Eigen::MatrixXd& x,
                        double kappa);

// Block containing the largest-magnitude entry of a recovered source column;
// ties break toward the lowest node index.
int community_estimate(const Eigen::VectorXd& x_hat, const std::vector<int>& communities);

// One row of a benchmark report.
struct EvalRow {
  std::string method;
  std::string graph;
  int n = 0;
  int p = 0;
  double theta = 0.0;
  int filter_order = 0;
  double phi = 0.0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  double re_x = 0.0;
  double re_g = 0.0;
  double acc = 0.0;
  double kappa = 0.0;
  double seconds = 0.0;
  long iters = 0;
};

// CSV with the fixed header
// method,graph,N,P,theta,L,phi,eta,seed,re_x,re_g,acc,kappa,seconds,iters.
// Floats print with up to 17 significant digits so parsing them back is
// bit-exact.
std::string eval_rows_to_csv(const std::vector<EvalRow>& rows);
std::vector<EvalRow> eval_rows_from_csv(const std::string& text);

}  // namespace slog
