#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "tenrec/tensor.hpp"

namespace tenrec {

/// Frontal slices of a tensor after the mode-3 DFT (unnormalized forward,
/// 1/n3 on the inverse). Slices produced from a real tensor satisfy
/// slice[i] = conj(slice[n3-i]) for i = 1..n3-1.
struct FourierStack {
  Index n1 = 0, n2 = 0, n3 = 0;
  std::vector<Eigen::MatrixXcd> slices;

  static FourierStack zeros(Index n1, Index n2, Index n3);

  /// Throws ShapeMismatch unless slice count and per-slice dims agree.
  void validate() const;

  double fro_norm() const;
};

/// DFT along every mode-3 fiber. Exact length n3, any n3 >= 1.
FourierStack fft3(const Tensor3& a);

/// Inverse of fft3. Imaginary residue up to 1e-9 * ||f||_F is discarded;
/// anything larger throws NonRealResult (a symmetry bug upstream).
Tensor3 ifft3(const FourierStack& f);

/// Block-circulant matricization: block (r, c) is frontal slice
/// (r - c) mod n3. O((n*n3)^2) memory, intended for small oracles.
Eigen::MatrixXd bcirc(const Tensor3& a);

/// Block-diagonal arrangement of the slices in order.
Eigen::MatrixXcd bdiag(const FourierStack& f);

}  // namespace tenrec
