#include "slog/lifted.hpp"

#include <cmath>

#include "slog/errors.hpp"

namespace slog {

LiftedOperator build_lifted(const Eigen::MatrixXd& v, const Eigen::MatrixXd& y) {
  if (v.rows() != v.cols()) throw DimensionError("build_lifted: V must be square");
  if (y.rows() != v.rows()) {
    throw DimensionError("build_lifted: Y has " + std::to_string(y.rows()) +
                         " rows, V is " + std::to_string(v.rows()) + "x" +
                         std::to_string(v.cols()));
  }
  LiftedOperator op;
  op.n = static_cast<int>(v.rows());
  op.p = static_cast<int>(y.cols());
  op.v = v;
  op.y_tilde = v.transpose() * y;
  op.ztz_diag = op.y_tilde.rowwise().squaredNorm();
  return op;
}

Eigen::VectorXd lifted_matvec(const LiftedOperator& op, const Eigen::VectorXd& g_tilde) {
  if (g_tilde.size() != op.n) throw DimensionError("lifted_matvec: g~ length mismatch");
  const Eigen::MatrixXd x = op.v * (g_tilde.asDiagonal() * op.y_tilde);
  return Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
}

Eigen::VectorXd lifted_adjoint(const LiftedOperator& op, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(op.n) * op.p) {
    throw DimensionError("lifted_adjoint: x length mismatch");
  }
  const Eigen::Map<const Eigen::MatrixXd> xm(x.data(), op.n, op.p);
  // (V^T X o Ytilde) 1, i.e. diag(V^T X Ytilde^T).
  return (op.v.transpose() * xm).cwiseProduct(op.y_tilde).rowwise().sum();
}

Eigen::VectorXd floor_ztz(const Eigen::VectorXd& z, double eps, bool* floored) {
  const double zmax = z.size() ? z.maxCoeff() : 0.0;
  // For an all-zero z (Y = 0) there is no scale to be relative to; fall back
  // to the absolute eps so solves stay defined and map 0 to 0.
  const double floor = eps * (zmax > 0.0 ? zmax : 1.0);
  bool any = false;
  Eigen::VectorXd out = z;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out(i) < floor) {
      out(i) = floor;
      any = true;
    }
  }
  if (floored) *floored = any;
  return out;
}

WoodburyFactor::WoodburyFactor(const Eigen::VectorXd& z, double rho,
                               const Eigen::MatrixXd& m)
    : rho_(rho), m_(m) {
  if (rho < 0.0) throw InvalidArgument("woodbury: rho must be nonnegative");
  if ((z.array() <= 0.0).any()) {
    throw InvalidArgument("woodbury: z must be strictly positive (apply floor_ztz)");
  }
  if (rho_ > 0.0 && m_.rows() != z.size()) {
    throw DimensionError("woodbury: M row count must match z");
  }
  zinv_ = z.cwiseInverse();
  if (rho_ == 0.0) return;

  const Eigen::Index d = m_.cols();
  if (d < 1) throw InvalidArgument("woodbury: M must have at least one column");
  if (d == 1) {
    w_ = m_.col(0).cwiseProduct(zinv_);
    zeta_ = 1.0 / rho_ + m_.col(0).dot(w_);
    if (zeta_ == 0.0 || !std::isfinite(zeta_)) {
      throw Error("woodbury: singular rank-one correction");
    }
  } else {
    Eigen::MatrixXd mbar = m_.transpose() * (zinv_.asDiagonal() * m_);
    mbar.diagonal().array() += 1.0 / rho_;
    mbar_.compute(mbar);
    if (mbar_.info() != Eigen::Success) {
      throw Error("woodbury: singular correction matrix");
    }
  }
}

Eigen::VectorXd WoodburyFactor::apply(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != zinv_.size()) throw DimensionError("woodbury: rhs length mismatch");
  Eigen::VectorXd u = zinv_.cwiseProduct(rhs);
  if (rho_ == 0.0) return u;
  if (m_.cols() == 1) {
    return u - w_ * (w_.dot(rhs) / zeta_);
  }
  const Eigen::VectorXd t = mbar_.solve(m_.transpose() * u);
  return u - zinv_.cwiseProduct(m_ * t);
}

Eigen::VectorXd woodbury_solve(const Eigen::VectorXd& z, double rho,
                               const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  return WoodburyFactor(z, rho, m).apply(rhs);
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t) {
  if (t < 0.0) throw InvalidArgument("soft_threshold: threshold must be nonnegative");
  return v.unaryExpr([t](double x) {
    const double shrunk = std::abs(x) - t;
    return shrunk > 0.0 ? (x > 0.0 ? shrunk : -shrunk) : 0.0;
  });
}

}  // namespace slog
