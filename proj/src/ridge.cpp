#include "namecraft/ridge.hpp"

#include <cmath>

#include "namecraft/error.hpp"

namespace namecraft {

double RidgeModel::predict(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(weights.size())) {
    throw Error("feature dimension mismatch in ridge prediction");
  }
  double s = intercept;
  for (std::size_t j = 0; j < x.size(); ++j) s += weights[j] * x[j];
  return s;
}

Eigen::VectorXd RidgeModel::predict(const Eigen::MatrixXd& X) const {
  return (X * weights).array() + intercept;
}

RidgeMoments RidgeMoments::of(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size()) throw Error("rows(X) != len(y)");
  RidgeMoments m;
  const auto p = X.cols();
  m.gram = Eigen::MatrixXd::Zero(p, p);
  m.gram.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
  m.gram = m.gram.selfadjointView<Eigen::Lower>();
  m.col_sums = X.colwise().sum().transpose();
  m.xty = X.transpose() * y;
  m.y_sum = y.sum();
  m.n = static_cast<std::size_t>(X.rows());
  return m;
}

RidgeMoments RidgeMoments::of_rows(const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& y,
                                   std::span<const std::size_t> rows) {
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), X.cols());
  Eigen::VectorXd suby(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sub.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
    suby[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
  }
  return of(sub, suby);
}

RidgeMoments& RidgeMoments::operator-=(const RidgeMoments& other) {
  gram -= other.gram;
  col_sums -= other.col_sums;
  xty -= other.xty;
  y_sum -= other.y_sum;
  n -= other.n;
  return *this;
}

RidgeModel fit_ridge(const RidgeMoments& m, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error("lambda must be a finite value >= 0");
  }
  if (m.n == 0) throw Error("ridge regression needs at least one row");
  const auto p = m.gram.rows();
  Eigen::MatrixXd a(p + 1, p + 1);
  a.topLeftCorner(p, p) = m.gram;
  a.topLeftCorner(p, p).diagonal().array() += lambda;
  a.topRightCorner(p, 1) = m.col_sums;
  a.bottomLeftCorner(1, p) = m.col_sums.transpose();
  a(p, p) = static_cast<double>(m.n);
  Eigen::VectorXd rhs(p + 1);
  rhs.head(p) = m.xty;
  rhs[p] = m.y_sum;

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  const double scale = std::max(pivots.maxCoeff(), 1.0);
  if (ldlt.info() != Eigen::Success || pivots.minCoeff() <= 1e-12 * scale) {
    throw Error(lambda == 0.0
                    ? "singular normal equations at lambda = 0; use lambda > 0"
                    : "singular normal equations");
  }
  const Eigen::VectorXd sol = ldlt.solve(rhs);
  RidgeModel model;
  model.weights = sol.head(p);
  model.intercept = sol[p];
  model.lambda = lambda;
  return model;
}

RidgeModel fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     double lambda) {
  if (X.rows() != y.size() || X.rows() < 1) {
    throw Error("ridge regression needs rows(X) = len(y) >= 1");
  }
  return fit_ridge(RidgeMoments::of(X, y), lambda);
}

double ridge_optimality_residual(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y,
                                 const RidgeModel& model) {
  const Eigen::VectorXd r = model.predict(X) - y;
  const Eigen::VectorXd g = X.transpose() * r + model.lambda * model.weights;
  return std::max(g.cwiseAbs().maxCoeff(), std::abs(r.sum()));
}

}  // namespace namecraft
