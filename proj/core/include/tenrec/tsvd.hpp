#pragma once

#include <Eigen/Core>

#include "tenrec/fourier.hpp"
#include "tenrec/tensor.hpp"

namespace tenrec {

/// Factors of the tensor singular value decomposition a = u * s * v^T
/// (t-products). s is f-diagonal: every Fourier slice of s is a real,
/// nonnegative, nonincreasing diagonal.
struct TSvdFactors {
  Tensor3 u;  // n1 x n1 x n3
  Tensor3 s;  // n1 x n2 x n3
  Tensor3 v;  // n2 x n2 x n3
};

/// t-product: per-slice matrix products in the Fourier domain.
/// a is n1 x n2 x n3, b is n2 x l x n3, result is n1 x l x n3.
Tensor3 t_product(const Tensor3& a, const Tensor3& b);

/// Three-factor convenience form a * b * c.
Tensor3 t_product(const Tensor3& a, const Tensor3& b, const Tensor3& c);

/// Transpose each frontal slice and reverse the order of slices 2..n3,
/// so that fft3(result) is the per-slice conjugate transpose of fft3(a).
Tensor3 t_transpose(const Tensor3& a);

/// Per-slice SVD of fft3(a) on slices 1..floor(n3/2)+1; conjugate symmetry
/// fills the rest.
TSvdFactors t_svd(const Tensor3& a);

/// r x n3 matrix (r = min(n1, n2)); column i holds the nonincreasing
/// singular values of Fourier slice i.
Eigen::MatrixXd tubal_singular_values(const Tensor3& a);

/// Tensor nuclear norm: (1/n3) * sum of all tubal singular values.
double tnn(const Tensor3& a);

/// Logarithmic tensor norm: (1/n3) * sum of log(theta * sigma + 1) over all
/// tubal singular values. Throws InvalidTheta unless theta > 0.
double taln(const Tensor3& a, double theta);

}  // namespace tenrec
