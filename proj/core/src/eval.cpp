#include "slog/eval.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "slog/errors.hpp"
#include "slog/io.hpp"

namespace slog {

double relative_error_signed(const Eigen::MatrixXd& x_hat, const Eigen::MatrixXd& x) {
  if (x_hat.rows() != x.rows() || x_hat.cols() != x.cols()) {
    throw DimensionError("relative_error_signed: shape mismatch");
  }
  const double target_norm = x.norm();
  if (target_norm == 0.0) {
    throw InvalidArgument("relative_error_signed: target has zero norm");
  }
  return std::min((x_hat - x).norm(), (x_hat + x).norm()) / target_norm;
}

double winning_sign(const Eigen::MatrixXd& x_hat, const Eigen::MatrixXd& x) {
  return (x_hat - x).norm() <= (x_hat + x).norm() ? 1.0 : -1.0;
}

double ls_scale(const Eigen::VectorXd& est, const Eigen::VectorXd& target) {
  const double nrm2 = est.squaredNorm();
  if (nrm2 == 0.0) throw InvalidArgument("ls_scale: estimate has zero norm");
  return est.dot(target) / nrm2;
}

double relative_error_aligned(const Eigen::VectorXd& g_hat, const Eigen::VectorXd& g0) {
  if (g_hat.size() != g0.size()) {
    throw DimensionError("relative_error_aligned: length mismatch");
  }
  const double g0_norm = g0.norm();
  if (g0_norm == 0.0 || g_hat.norm() == 0.0) {
    throw InvalidArgument("relative_error_aligned: zero vector");
  }
  const double s = ls_scale(g_hat, g0);
  return (s * g_hat - g0).norm() / g0_norm;
}

double support_accuracy(const Eigen::MatrixXd& x_hat, const Eigen::MatrixXd& x,
                        double kappa) {
  if (kappa <= 0.0) throw InvalidArgument("support_accuracy: kappa must be positive");
  if (x_hat.rows() != x.rows() || x_hat.cols() != x.cols()) {
    throw DimensionError("support_accuracy: shape mismatch");
  }
  const double sign = winning_sign(x_hat, x);
  long correct = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const bool est = std::abs(sign * x_hat(i, j)) >= kappa;
      const bool truth = std::abs(x(i, j)) >= kappa;
      correct += (est == truth);
    }
  }
  return static_cast<double>(correct) / static_cast<double>(x.size());
}

int community_estimate(const Eigen::VectorXd& x_hat, const std::vector<int>& communities) {
  if (static_cast<Eigen::Index>(communities.size()) != x_hat.size()) {
    throw DimensionError("community_estimate: community map size mismatch");
  }
  int arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < x_hat.size(); ++i) {
    const double mag = std::abs(x_hat(i));
    if (mag > best) {  // strict: ties keep the lowest index
      best = mag;
      arg = static_cast<int>(i);
    }
  }
  return communities[arg];
}

std::string eval_rows_to_csv(const std::vector<EvalRow>& rows) {
  std::ostringstream out;
  out << "method,graph,N,P,theta,L,phi,eta,seed,re_x,re_g,acc,kappa,seconds,iters\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.graph << ',' << r.n << ',' << r.p << ','
        << format_double(r.theta) << ',' << r.filter_order << ','
        << format_double(r.phi) << ',' << format_double(r.eta) << ',' << r.seed << ','
        << format_double(r.re_x) << ',' << format_double(r.re_g) << ','
        << format_double(r.acc) << ',' << format_double(r.kappa) << ','
        << format_double(r.seconds) << ',' << r.iters << '\n';
  }
  return out.str();
}

std::vector<EvalRow> eval_rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("csv: empty report");
  if (line.rfind("method,graph,N,P,theta,L,phi,eta,seed", 0) != 0) {
    throw IoError("csv: unexpected header: " + line);
  }
  std::vector<EvalRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 15) throw IoError("csv: malformed row: " + line);
    EvalRow r;
    r.method = fields[0];
    r.graph = fields[1];
    r.n = std::atoi(fields[2].c_str());
    r.p = std::atoi(fields[3].c_str());
    r.theta = std::strtod(fields[4].c_str(), nullptr);
    r.filter_order = std::atoi(fields[5].c_str());
    r.phi = std::strtod(fields[6].c_str(), nullptr);
    r.eta = std::strtod(fields[7].c_str(), nullptr);
    r.seed = std::strtoull(fields[8].c_str(), nullptr, 10);
    r.re_x = std::strtod(fields[9].c_str(), nullptr);
    r.re_g = std::strtod(fields[10].c_str(), nullptr);
    r.acc = std::strtod(fields[11].c_str(), nullptr);
    r.kappa = std::strtod(fields[12].c_str(), nullptr);
    r.seconds = std::strtod(fields[13].c_str(), nullptr);
    r.iters = std::atol(fields[14].c_str());
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace slog
