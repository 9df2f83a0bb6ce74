#include "tenrec/tsvd.hpp"

#include <cmath>
#include <sstream>

#include "slice_svd.hpp"

namespace tenrec {

namespace {

// Number of Fourier slices that must be computed explicitly for a real
// tensor; slices beyond it are conjugates of earlier ones.
Index unique_slices(Index n3) { return n3 / 2 + 1; }

bool is_self_paired(Index k, Index n3) {
  return k == 0 || (n3 % 2 == 0 && k == n3 / 2);
}

}  // namespace

Tensor3 t_product(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    std::ostringstream msg;
    msg << "t_product: (" << a.n1() << ", " << a.n2() << ", " << a.n3()
        << ") * (" << b.n1() << ", " << b.n2() << ", " << b.n3() << ")";
    throw ShapeMismatch(msg.str());
  }
  const Index n3 = a.n3();
  const FourierStack fa = fft3(a);
  const FourierStack fb = fft3(b);
  FourierStack fc = FourierStack::zeros(a.n1(), b.n2(), n3);
  const Index half = unique_slices(n3);
  for (Index k = 0; k < half; ++k) {
    fc.slices[static_cast<std::size_t>(k)] =
        fa.slices[static_cast<std::size_t>(k)] *
        fb.slices[static_cast<std::size_t>(k)];
  }
  for (Index k = half; k < n3; ++k) {
    fc.slices[static_cast<std::size_t>(k)] =
        fc.slices[static_cast<std::size_t>(n3 - k)].conjugate();
  }
  return ifft3(fc);
}

Tensor3 t_product(const Tensor3& a, const Tensor3& b, const Tensor3& c) {
  return t_product(t_product(a, b), c);
}

Tensor3 t_transpose(const Tensor3& a) {
  Tensor3 out(a.n2(), a.n1(), a.n3());
  out.slice(0) = a.slice(0).transpose();
  const Index n3 = a.n3();
  for (Index k = 1; k < n3; ++k) {
    out.slice(k) = a.slice(n3 - k).transpose();
  }
  return out;
}

TSvdFactors t_svd(const Tensor3& a) {
  const Index n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  const FourierStack fa = fft3(a);
  FourierStack fu = FourierStack::zeros(n1, n1, n3);
  FourierStack fs = FourierStack::zeros(n1, n2, n3);
  FourierStack fv = FourierStack::zeros(n2, n2, n3);
  const Index half = unique_slices(n3);
  for (Index k = 0; k < half; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    detail::SliceSvd svd = detail::svd_slice(fa.slices[idx],
                                             is_self_paired(k, n3), true);
    fu.slices[idx] = svd.u;
    for (Eigen::Index j = 0; j < svd.sigma.size(); ++j) {
      fs.slices[idx](j, j) = svd.sigma(j);
    }
    fv.slices[idx] = svd.v;
  }
  for (Index k = half; k < n3; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const auto pair = static_cast<std::size_t>(n3 - k);
    fu.slices[idx] = fu.slices[pair].conjugate();
    fs.slices[idx] = fs.slices[pair];
    fv.slices[idx] = fv.slices[pair].conjugate();
  }
  TSvdFactors out;
  out.u = ifft3(fu);
  out.s = ifft3(fs);
  out.v = ifft3(fv);
  return out;
}

Eigen::MatrixXd tubal_singular_values(const Tensor3& a) {
  const Index n3 = a.n3();
  const Index r = std::min(a.n1(), a.n2());
  const FourierStack fa = fft3(a);
  Eigen::MatrixXd sv = Eigen::MatrixXd::Zero(r, n3);
  const Index half = unique_slices(n3);
  for (Index k = 0; k < half; ++k) {
    sv.col(k) = detail::singular_values_slice(
        fa.slices[static_cast<std::size_t>(k)], is_self_paired(k, n3));
  }
  for (Index k = half; k < n3; ++k) {
    sv.col(k) = sv.col(n3 - k);
  }
  return sv;
}

double tnn(const Tensor3& a) {
  return tubal_singular_values(a).sum() / static_cast<double>(a.n3());
}

double taln(const Tensor3& a, double theta) {
  if (!(theta > 0.0)) {
    std::ostringstream msg;
    msg << "theta must be positive, got " << theta;
    throw InvalidTheta(msg.str());
  }
  const Eigen::MatrixXd sv = tubal_singular_values(a);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < sv.cols(); ++j) {
    for (Eigen::Index i = 0; i < sv.rows(); ++i) {
      acc += std::log(theta * sv(i, j) + 1.0);
    }
  }
  return acc / static_cast<double>(a.n3());
}

}  // namespace tenrec
