#pragma once

#include <Eigen/Core>

#include "tenrec/tensor.hpp"

namespace tenrec {

/// Per-slice shrinkage weights: an r x n3 matrix (r = min(n1, n2)) of
/// nonnegative values, nondecreasing down each column. The ordering is a
/// hypothesis of the weighted-shrinkage optimality result, so violations are
/// rejected at construction rather than silently reordered.
class WeightTensor {
 public:
  explicit WeightTensor(Eigen::MatrixXd w);

  static WeightTensor uniform(Index r, Index n3, double value);

  /// Column i = log_weights(tubal_sv column i, theta). Columns of tubal_sv
  /// must be sorted nonincreasing.
  static WeightTensor from_singular_values(const Eigen::MatrixXd& tubal_sv,
                                           double theta);

  const Eigen::MatrixXd& values() const { return w_; }
  Index rows() const { return w_.rows(); }
  Index cols() const { return w_.cols(); }

 private:
  Eigen::MatrixXd w_;
};

/// 0 if |x| <= tau, else sign(x) * (|x| - tau).
double soft_threshold(double x, double tau);

/// Elementwise soft threshold.
Tensor3 soft_threshold_tensor(const Tensor3& a, double tau);

/// w_j = theta / (theta * sigma_j + 1). For sigma sorted nonincreasing the
/// output is nondecreasing and bounded by theta. Throws InvalidTheta unless
/// theta > 0.
Eigen::VectorXd log_weights(const Eigen::VectorXd& sigma, double theta);

/// Tensor singular value thresholding: subtract tau from every Fourier-domain
/// singular value, clamp at zero, reassemble. Minimizes
/// tau*||X||_T + 0.5*||X - Y||_F^2.
Tensor3 t_svt(const Tensor3& y, double tau);

/// Weighted variant: singular value j of Fourier slice i shrinks by
/// tau * w(j, i). Minimizes the weighted per-slice sum plus the proximal term.
Tensor3 t_wsvt(const Tensor3& y, const WeightTensor& w, double tau);

/// Shrinkage output together with its tubal singular values, which are a
/// byproduct of the computation: column i holds (sigma - tau*w)+ for slice i,
/// still sorted nonincreasing. Saves the caller a second decomposition.
struct ShrinkResult {
  Tensor3 x;
  Eigen::MatrixXd tubal_sv;
};

ShrinkResult t_svt_with_values(const Tensor3& y, double tau);
ShrinkResult t_wsvt_with_values(const Tensor3& y, const WeightTensor& w,
                                double tau);

}  // namespace tenrec
