#pragma once

#include <Eigen/Dense>
#include <span>

namespace namecraft {

inline constexpr double kDefaultLambda = 0.003;

// Ridge fit with an unpenalized intercept:
//   min_w,b  Σ_i (y_i - w·x_i - b)^2 + λ‖w‖²
struct RidgeModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  double lambda = kDefaultLambda;

  double predict(std::span<const double> x) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
};

// Normal equations of the augmented system [X 1], solved by LDLT. Throws when
// the system is singular (only possible at λ = 0).
RidgeModel fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     double lambda = kDefaultLambda);

// Sufficient statistics of a design: XᵀX, Xᵀ1, Xᵀy, Σy and n. Lets callers fit
// many row subsets by subtracting held-out rows instead of rebuilding XᵀX.
struct RidgeMoments {
  Eigen::MatrixXd gram;
  Eigen::VectorXd col_sums;
  Eigen::VectorXd xty;
  double y_sum = 0.0;
  std::size_t n = 0;

  static RidgeMoments of(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
  // Moments of the selected rows.
  static RidgeMoments of_rows(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              std::span<const std::size_t> rows);
  RidgeMoments& operator-=(const RidgeMoments& other);
};

RidgeModel fit_ridge(const RidgeMoments& moments, double lambda = kDefaultLambda);

// ‖Xᵀ(Xw + b - y) + λw‖∞, the first-order optimality residual in w (the
// intercept condition Σ(Xw + b - y) = 0 is folded in as an extra entry).
double ridge_optimality_residual(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y,
                                 const RidgeModel& model);

}  // namespace namecraft
