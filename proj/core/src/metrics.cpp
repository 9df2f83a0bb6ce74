#include "tenrec/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tenrec {

namespace {

constexpr Index kWindow = 8;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

// Summed-area table with a top/left zero border: s(i+1, j+1) holds the sum
// of the slice rectangle [0..i, 0..j].
Eigen::MatrixXd integral(const Eigen::Map<const Eigen::MatrixXd>& slice,
                         bool squared, const Eigen::MatrixXd* other) {
  const Eigen::Index n1 = slice.rows(), n2 = slice.cols();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n1 + 1, n2 + 1);
  for (Eigen::Index j = 0; j < n2; ++j) {
    double row_acc = 0.0;
    for (Eigen::Index i = 0; i < n1; ++i) {
      double v = slice(i, j);
      if (other != nullptr) {
        v *= (*other)(i, j);
      } else if (squared) {
        v *= v;
      }
      row_acc += v;
      s(i + 1, j + 1) = s(i + 1, j) + row_acc;
    }
  }
  return s;
}

double window_sum(const Eigen::MatrixXd& s, Index i, Index j, Index w) {
  return s(i + w, j + w) - s(i, j + w) - s(i + w, j) + s(i, j);
}

}  // namespace

double psnr(const Tensor3& reference, const Tensor3& estimate, double peak) {
  reference.require_same_dims(estimate, "psnr");
  if (!(peak > 0.0)) {
    std::ostringstream msg;
    msg << "peak must be positive, got " << peak;
    throw InvalidConfig(msg.str());
  }
  double mse = 0.0;
  const auto& a = reference.values();
  const auto& b = estimate.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Tensor3& reference, const Tensor3& estimate) {
  reference.require_same_dims(estimate, "ssim");
  const Index n1 = reference.n1(), n2 = reference.n2(), n3 = reference.n3();
  if (n1 < kWindow || n2 < kWindow) {
    std::ostringstream msg;
    msg << "spatial dims " << n1 << "x" << n2 << " smaller than the "
        << kWindow << "x" << kWindow << " window";
    throw TooSmall(msg.str());
  }
  const double inv_area = 1.0 / static_cast<double>(kWindow * kWindow);
  double total = 0.0;
  std::size_t windows = 0;
  for (Index k = 0; k < n3; ++k) {
    const auto x = reference.slice(k);
    const auto y = estimate.slice(k);
    const Eigen::MatrixXd ym = y;
    const Eigen::MatrixXd sx = integral(x, false, nullptr);
    const Eigen::MatrixXd sy = integral(y, false, nullptr);
    const Eigen::MatrixXd sxx = integral(x, true, nullptr);
    const Eigen::MatrixXd syy = integral(y, true, nullptr);
    const Eigen::MatrixXd sxy = integral(x, false, &ym);
    for (Index j = 0; j + kWindow <= n2; ++j) {
      for (Index i = 0; i + kWindow <= n1; ++i) {
        const double mx = window_sum(sx, i, j, kWindow) * inv_area;
        const double my = window_sum(sy, i, j, kWindow) * inv_area;
        const double vx = window_sum(sxx, i, j, kWindow) * inv_area - mx * mx;
        const double vy = window_sum(syy, i, j, kWindow) * inv_area - my * my;
        const double cxy =
            window_sum(sxy, i, j, kWindow) * inv_area - mx * my;
        const double num = (2.0 * mx * my + kC1) * (2.0 * cxy + kC2);
        const double den = (mx * mx + my * my + kC1) * (vx + vy + kC2);
        total += num / den;
        ++windows;
      }
    }
  }
  return total / static_cast<double>(windows);
}

std::string format_metric(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(10);
  out << value;
  return out.str();
}

}  // namespace tenrec
