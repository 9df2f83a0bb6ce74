#include "slice_svd.hpp"

#include <Eigen/SVD>

#include "tenrec/errors.hpp"

namespace tenrec::detail {

namespace {

constexpr double kRankClamp = 1e-12;
constexpr int kBdcMinDim = 32;

void clamp_small(Eigen::VectorXd& sigma) {
  if (sigma.size() == 0) return;
  if (!sigma.allFinite()) {
    throw NumericalFailure("slice svd produced non-finite singular values");
  }
  const double cutoff = kRankClamp * sigma(0);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) < cutoff) sigma(i) = 0.0;
  }
}

template <typename Matrix>
SliceSvd run_svd(const Matrix& m, bool full) {
  const unsigned options =
      full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
           : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  SliceSvd out;
  if (std::min(m.rows(), m.cols()) >= kBdcMinDim) {
    Eigen::BDCSVD<Matrix> svd(m, options);
    if (svd.info() != Eigen::Success) {
      throw NumericalFailure("slice svd did not converge");
    }
    out.u = svd.matrixU().template cast<std::complex<double>>();
    out.sigma = svd.singularValues();
    out.v = svd.matrixV().template cast<std::complex<double>>();
  } else {
    Eigen::JacobiSVD<Matrix> svd(m, options);
    if (svd.info() != Eigen::Success) {
      throw NumericalFailure("slice svd did not converge");
    }
    out.u = svd.matrixU().template cast<std::complex<double>>();
    out.sigma = svd.singularValues();
    out.v = svd.matrixV().template cast<std::complex<double>>();
  }
  clamp_small(out.sigma);
  return out;
}

template <typename Matrix>
Eigen::VectorXd run_values(const Matrix& m) {
  Eigen::VectorXd sigma;
  if (std::min(m.rows(), m.cols()) >= kBdcMinDim) {
    Eigen::BDCSVD<Matrix> svd(m);
    if (svd.info() != Eigen::Success) {
      throw NumericalFailure("slice svd did not converge");
    }
    sigma = svd.singularValues();
  } else {
    Eigen::JacobiSVD<Matrix> svd(m);
    if (svd.info() != Eigen::Success) {
      throw NumericalFailure("slice svd did not converge");
    }
    sigma = svd.singularValues();
  }
  clamp_small(sigma);
  return sigma;
}

}  // namespace

SliceSvd svd_slice(const Eigen::MatrixXcd& m, bool self_paired, bool full) {
  if (!m.allFinite()) {
    throw NumericalFailure("slice svd input has non-finite entries");
  }
  if (self_paired) {
    const Eigen::MatrixXd real = m.real();
    return run_svd(real, full);
  }
  return run_svd(m, full);
}

Eigen::VectorXd singular_values_slice(const Eigen::MatrixXcd& m,
                                      bool self_paired) {
  if (!m.allFinite()) {
    throw NumericalFailure("slice svd input has non-finite entries");
  }
  if (self_paired) {
    const Eigen::MatrixXd real = m.real();
    return run_values(real);
  }
  return run_values(m);
}

}  // namespace tenrec::detail
