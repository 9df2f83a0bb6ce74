#pragma once

#include <Eigen/Dense>

namespace tenrec::detail {

struct SliceSvd {
  Eigen::MatrixXcd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXcd v;
};

/// SVD of one Fourier slice, thin or full. Self-paired slices (frequency 0
/// and, for even n3, frequency n3/2) of a real tensor's transform are real
/// up to roundoff; they are decomposed by a real SVD so the factor stacks
/// keep exact conjugate symmetry and invert to real tensors.
/// Singular values below 1e-12 * sigma_max are clamped to zero.
SliceSvd svd_slice(const Eigen::MatrixXcd& m, bool self_paired, bool full);

Eigen::VectorXd singular_values_slice(const Eigen::MatrixXcd& m,
                                      bool self_paired);

}  // namespace tenrec::detail
