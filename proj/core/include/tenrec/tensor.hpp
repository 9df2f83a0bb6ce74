#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "tenrec/errors.hpp"

namespace tenrec {

using Index = std::int64_t;

/// Dense real 3-way array with frontal-slice access.
///
/// Storage is slice-major with the first index fastest: entry (i, j, k)
/// lives at offset i + j*n1 + k*n1*n2. Each frontal slice is therefore a
/// contiguous column-major n1 x n2 matrix, mappable by Eigen without copy.
class Tensor3 {
 public:
  Tensor3() = default;

  /// Zero-initialized tensor. Dims must be strictly positive.
  Tensor3(Index n1, Index n2, Index n3);

  /// Takes ownership of `values` (size n1*n2*n3, (i fastest, j, k) order)
  /// and validates that every entry is finite.
  static Tensor3 from_values(Index n1, Index n2, Index n3,
                             std::vector<double> values);

  static Tensor3 zeros(Index n1, Index n2, Index n3) {
    return Tensor3(n1, n2, n3);
  }

  /// Identity tensor: I on the first frontal slice, zeros elsewhere.
  /// Acts as the unit of the t-product.
  static Tensor3 identity(Index n, Index n3);

  Index n1() const { return n1_; }
  Index n2() const { return n2_; }
  Index n3() const { return n3_; }
  Index size() const { return n1_ * n2_ * n3_; }
  bool empty() const { return data_.empty(); }

  double operator()(Index i, Index j, Index k) const {
    return data_[static_cast<std::size_t>(i + j * n1_ + k * n1_ * n2_)];
  }
  double& operator()(Index i, Index j, Index k) {
    return data_[static_cast<std::size_t>(i + j * n1_ + k * n1_ * n2_)];
  }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }
  const std::vector<double>& values() const { return data_; }

  /// Frontal slice k as a column-major Eigen view (no copy).
  Eigen::Map<const Eigen::MatrixXd> slice(Index k) const {
    return {data_.data() + k * n1_ * n2_, n1_, n2_};
  }
  Eigen::Map<Eigen::MatrixXd> slice(Index k) {
    return {data_.data() + k * n1_ * n2_, n1_, n2_};
  }

  bool same_dims(const Tensor3& other) const {
    return n1_ == other.n1_ && n2_ == other.n2_ && n3_ == other.n3_;
  }

  /// Throws ShapeMismatch with a dimension dump unless dims match.
  void require_same_dims(const Tensor3& other, const char* op) const;

  Tensor3& operator+=(const Tensor3& rhs);
  Tensor3& operator-=(const Tensor3& rhs);
  Tensor3& operator*=(double s);

  friend Tensor3 operator+(Tensor3 lhs, const Tensor3& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend Tensor3 operator-(Tensor3 lhs, const Tensor3& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend Tensor3 operator*(Tensor3 lhs, double s) {
    lhs *= s;
    return lhs;
  }
  friend Tensor3 operator*(double s, Tensor3 rhs) {
    rhs *= s;
    return rhs;
  }

 private:
  Index n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<double> data_;
};

/// Sum of absolute values over all entries.
double l1_norm(const Tensor3& a);

/// Largest absolute entry (0 for the empty tensor).
double linf_norm(const Tensor3& a);

/// Square root of the sum of squared entries.
double fro_norm(const Tensor3& a);

}  // namespace tenrec
