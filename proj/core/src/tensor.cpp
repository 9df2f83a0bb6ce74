#include "tenrec/tensor.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace tenrec {

namespace {

void check_dims(Index n1, Index n2, Index n3) {
  if (n1 <= 0 || n2 <= 0 || n3 <= 0) {
    std::ostringstream msg;
    msg << "tensor dims must be positive, got (" << n1 << ", " << n2 << ", "
        << n3 << ")";
    throw ShapeMismatch(msg.str());
  }
}

}  // namespace

Tensor3::Tensor3(Index n1, Index n2, Index n3) : n1_(n1), n2_(n2), n3_(n3) {
  check_dims(n1, n2, n3);
  data_.assign(static_cast<std::size_t>(n1 * n2 * n3), 0.0);
}

Tensor3 Tensor3::from_values(Index n1, Index n2, Index n3,
                             std::vector<double> values) {
  check_dims(n1, n2, n3);
  const auto expected = static_cast<std::size_t>(n1 * n2 * n3);
  if (values.size() != expected) {
    std::ostringstream msg;
    msg << "value buffer has " << values.size() << " entries, dims ("
        << n1 << ", " << n2 << ", " << n3 << ") need " << expected;
    throw ShapeMismatch(msg.str());
  }
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    if (!std::isfinite(values[idx])) {
      std::ostringstream msg;
      msg << "non-finite entry " << values[idx] << " at flat offset " << idx;
      throw NumericalFailure(msg.str());
    }
  }
  Tensor3 t;
  t.n1_ = n1;
  t.n2_ = n2;
  t.n3_ = n3;
  t.data_ = std::move(values);
  return t;
}

Tensor3 Tensor3::identity(Index n, Index n3) {
  Tensor3 t(n, n, n3);
  for (Index i = 0; i < n; ++i) t(i, i, 0) = 1.0;
  return t;
}

void Tensor3::require_same_dims(const Tensor3& other, const char* op) const {
  if (!same_dims(other)) {
    std::ostringstream msg;
    msg << op << ": dims (" << n1_ << ", " << n2_ << ", " << n3_
        << ") vs (" << other.n1_ << ", " << other.n2_ << ", " << other.n3_
        << ")";
    throw ShapeMismatch(msg.str());
  }
}

Tensor3& Tensor3::operator+=(const Tensor3& rhs) {
  require_same_dims(rhs, "tensor add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& rhs) {
  require_same_dims(rhs, "tensor subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Tensor3& Tensor3::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double l1_norm(const Tensor3& a) {
  double acc = 0.0;
  for (double v : a.values()) acc += std::abs(v);
  return acc;
}

double linf_norm(const Tensor3& a) {
  double acc = 0.0;
  for (double v : a.values()) acc = std::max(acc, std::abs(v));
  return acc;
}

double fro_norm(const Tensor3& a) {
  double acc = 0.0;
  for (double v : a.values()) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace tenrec
