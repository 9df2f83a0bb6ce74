#include "tenrec/shrinkage.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "slice_svd.hpp"
#include "tenrec/fourier.hpp"

namespace tenrec {

namespace {

bool is_self_paired(Index k, Index n3) {
  return k == 0 || (n3 % 2 == 0 && k == n3 / 2);
}

void check_column_order(const Eigen::MatrixXd& w) {
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      if (!(w(r, c) >= 0.0)) {
        std::ostringstream msg;
        msg << "weight (" << r << ", " << c << ") = " << w(r, c)
            << " is not nonnegative";
        throw WeightOrderViolation(msg.str());
      }
      if (r > 0 && w(r, c) < w(r - 1, c)) {
        std::ostringstream msg;
        msg << "weight column " << c << " decreases at row " << r << " ("
            << w(r - 1, c) << " -> " << w(r, c) << ")";
        throw WeightOrderViolation(msg.str());
      }
    }
  }
}

// Shrinks one Fourier slice, writing the surviving singular values into sv.
Eigen::MatrixXcd shrink_slice(const Eigen::MatrixXcd& slice, bool self_paired,
                              const Eigen::VectorXd& tau_w,
                              Eigen::Ref<Eigen::VectorXd> sv) {
  detail::SliceSvd svd = detail::svd_slice(slice, self_paired, false);
  Eigen::MatrixXcd scaled_u = svd.u;
  for (Eigen::Index j = 0; j < svd.sigma.size(); ++j) {
    sv(j) = std::max(svd.sigma(j) - tau_w(j), 0.0);
    scaled_u.col(j) *= sv(j);
  }
  return scaled_u * svd.v.adjoint();
}

ShrinkResult shrink(const Tensor3& y, const Eigen::MatrixXd& w, double tau) {
  const Index n1 = y.n1(), n2 = y.n2(), n3 = y.n3();
  const Index r = std::min(n1, n2);
  if (w.rows() != r || w.cols() != n3) {
    std::ostringstream msg;
    msg << "weight tensor is " << w.rows() << "x" << w.cols() << ", tensor ("
        << n1 << ", " << n2 << ", " << n3 << ") needs " << r << "x" << n3;
    throw ShapeMismatch(msg.str());
  }
  if (!(tau > 0.0)) {
    std::ostringstream msg;
    msg << "shrinkage threshold must be positive, got " << tau;
    throw InvalidConfig(msg.str());
  }

  // The half-slice shortcut needs the thresholds themselves to respect the
  // conjugate pairing. Asymmetric weights are legal input; each slice is
  // then shrunk independently and realness is checked by the inverse
  // transform.
  bool symmetric = true;
  for (Index k = 1; symmetric && k < n3 - k; ++k) {
    symmetric = (w.col(k).array() == w.col(n3 - k).array()).all();
  }

  const FourierStack fy = fft3(y);
  FourierStack fx = FourierStack::zeros(n1, n2, n3);
  ShrinkResult out;
  out.tubal_sv = Eigen::MatrixXd::Zero(r, n3);

  const Index last = symmetric ? (n3 / 2 + 1) : n3;
  for (Index k = 0; k < last; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    fx.slices[idx] =
        shrink_slice(fy.slices[idx], is_self_paired(k, n3), tau * w.col(k),
                     out.tubal_sv.col(k));
  }
  if (symmetric) {
    for (Index k = n3 / 2 + 1; k < n3; ++k) {
      fx.slices[static_cast<std::size_t>(k)] =
          fx.slices[static_cast<std::size_t>(n3 - k)].conjugate();
      out.tubal_sv.col(k) = out.tubal_sv.col(n3 - k);
    }
  }
  out.x = ifft3(fx);
  return out;
}

}  // namespace

WeightTensor::WeightTensor(Eigen::MatrixXd w) : w_(std::move(w)) {
  check_column_order(w_);
}

WeightTensor WeightTensor::uniform(Index r, Index n3, double value) {
  if (!(value >= 0.0)) {
    std::ostringstream msg;
    msg << "uniform weight must be nonnegative, got " << value;
    throw WeightOrderViolation(msg.str());
  }
  return WeightTensor(Eigen::MatrixXd::Constant(r, n3, value));
}

WeightTensor WeightTensor::from_singular_values(
    const Eigen::MatrixXd& tubal_sv, double theta) {
  Eigen::MatrixXd w(tubal_sv.rows(), tubal_sv.cols());
  for (Eigen::Index c = 0; c < tubal_sv.cols(); ++c) {
    w.col(c) = log_weights(tubal_sv.col(c), theta);
  }
  return WeightTensor(std::move(w));
}

double soft_threshold(double x, double tau) {
  if (x > tau) return x - tau;
  if (x < -tau) return x + tau;
  return 0.0;
}

Tensor3 soft_threshold_tensor(const Tensor3& a, double tau) {
  if (!(tau >= 0.0)) {
    std::ostringstream msg;
    msg << "soft threshold must be nonnegative, got " << tau;
    throw InvalidConfig(msg.str());
  }
  Tensor3 out = a;
  for (Index k = 0; k < a.n3(); ++k) {
    auto s = out.slice(k);
    s = s.unaryExpr([tau](double x) { return soft_threshold(x, tau); });
  }
  return out;
}

Eigen::VectorXd log_weights(const Eigen::VectorXd& sigma, double theta) {
  if (!(theta > 0.0)) {
    std::ostringstream msg;
    msg << "theta must be positive, got " << theta;
    throw InvalidTheta(msg.str());
  }
  Eigen::VectorXd w(sigma.size());
  for (Eigen::Index j = 0; j < sigma.size(); ++j) {
    w(j) = theta / (theta * sigma(j) + 1.0);
  }
  return w;
}

Tensor3 t_svt(const Tensor3& y, double tau) {
  return t_svt_with_values(y, tau).x;
}

Tensor3 t_wsvt(const Tensor3& y, const WeightTensor& w, double tau) {
  return t_wsvt_with_values(y, w, tau).x;
}

ShrinkResult t_svt_with_values(const Tensor3& y, double tau) {
  const Index r = std::min(y.n1(), y.n2());
  return shrink(y, Eigen::MatrixXd::Ones(r, y.n3()), tau);
}

ShrinkResult t_wsvt_with_values(const Tensor3& y, const WeightTensor& w,
                                double tau) {
  return shrink(y, w.values(), tau);
}

}  // namespace tenrec
