#pragma once

// Independent reference implementations used as oracles. Everything here is
// deliberately naive (direct summation, dense matricization, per-window
// recomputation) so no code path is shared with the library.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <tenrec/fourier.hpp>
#include <tenrec/tensor.hpp>

namespace oracle {

using tenrec::FourierStack;
using tenrec::Index;
using tenrec::Tensor3;

inline Tensor3 random_tensor(Index n1, Index n2, Index n3,
                             std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  std::vector<double> v(static_cast<std::size_t>(n1 * n2 * n3));
  for (double& e : v) e = dist(rng);
  return Tensor3::from_values(n1, n2, n3, std::move(v));
}

// Direct O(n3^2) DFT along every mode-3 fiber.
inline FourierStack dft3(const Tensor3& a) {
  const Index n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  FourierStack f = FourierStack::zeros(n1, n2, n3);
  const double base = -2.0 * M_PI / static_cast<double>(n3);
  for (Index k = 0; k < n3; ++k) {
    auto& s = f.slices[static_cast<std::size_t>(k)];
    for (Index t = 0; t < n3; ++t) {
      const std::complex<double> tw(std::cos(base * k * t),
                                    std::sin(base * k * t));
      for (Index j = 0; j < n2; ++j) {
        for (Index i = 0; i < n1; ++i) {
          s(i, j) += tw * a(i, j, t);
        }
      }
    }
  }
  return f;
}

// Direct inverse DFT; returns the real part, imaginary part is the caller's
// problem to assert on.
inline Tensor3 idft3_real(const FourierStack& f) {
  const Index n1 = f.n1, n2 = f.n2, n3 = f.n3;
  Tensor3 out(n1, n2, n3);
  const double base = 2.0 * M_PI / static_cast<double>(n3);
  for (Index t = 0; t < n3; ++t) {
    for (Index k = 0; k < n3; ++k) {
      const std::complex<double> tw(std::cos(base * k * t),
                                    std::sin(base * k * t));
      const auto& s = f.slices[static_cast<std::size_t>(k)];
      for (Index j = 0; j < n2; ++j) {
        for (Index i = 0; i < n1; ++i) {
          out(i, j, t) += (tw * s(i, j)).real() / static_cast<double>(n3);
        }
      }
    }
  }
  return out;
}

// Definition-layout block circulant, indexed from scratch.
inline Eigen::MatrixXd bcirc_of(const Tensor3& a) {
  const Index n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  Eigen::MatrixXd m(n1 * n3, n2 * n3);
  for (Index br = 0; br < n3; ++br) {
    for (Index bc = 0; bc < n3; ++bc) {
      Index k = br - bc;
      if (k < 0) k += n3;
      for (Index j = 0; j < n2; ++j) {
        for (Index i = 0; i < n1; ++i) {
          m(br * n1 + i, bc * n2 + j) = a(i, j, k);
        }
      }
    }
  }
  return m;
}

inline Eigen::MatrixXd unfold(const Tensor3& b) {
  Eigen::MatrixXd m(b.n1() * b.n3(), b.n2());
  for (Index k = 0; k < b.n3(); ++k) {
    for (Index j = 0; j < b.n2(); ++j) {
      for (Index i = 0; i < b.n1(); ++i) {
        m(k * b.n1() + i, j) = b(i, j, k);
      }
    }
  }
  return m;
}

inline Tensor3 fold(const Eigen::MatrixXd& m, Index n1, Index n2, Index n3) {
  Tensor3 t(n1, n2, n3);
  for (Index k = 0; k < n3; ++k) {
    for (Index j = 0; j < n2; ++j) {
      for (Index i = 0; i < n1; ++i) {
        t(i, j, k) = m(k * n1 + i, j);
      }
    }
  }
  return t;
}

// fold(bcirc(a) * unfold(b)), the definitional t-product.
inline Tensor3 bcirc_product(const Tensor3& a, const Tensor3& b) {
  const Eigen::MatrixXd prod = bcirc_of(a) * unfold(b);
  return fold(prod, a.n1(), b.n2(), a.n3());
}

// Unnormalized DFT matrix F(j, k) = exp(-2*pi*i*j*k/n).
inline Eigen::MatrixXcd dft_matrix(Index n) {
  Eigen::MatrixXcd f(n, n);
  const double base = -2.0 * M_PI / static_cast<double>(n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      f(j, k) = {std::cos(base * j * k), std::sin(base * j * k)};
    }
  }
  return f;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Weighted shrinkage of one complex matrix: full SVD, per-value threshold,
// reassemble.
inline Eigen::MatrixXcd wsvt_matrix(const Eigen::MatrixXcd& y,
                                    const Eigen::VectorXd& w, double tau) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    s(j) = std::max(s(j) - tau * w(j), 0.0);
  }
  return svd.matrixU() * s.cast<std::complex<double>>().asDiagonal() *
         svd.matrixV().adjoint();
}

// Uniform-threshold shrinkage of one complex matrix.
inline Eigen::MatrixXcd svt_matrix(const Eigen::MatrixXcd& y, double tau) {
  return wsvt_matrix(
      y, Eigen::VectorXd::Ones(std::min(y.rows(), y.cols())), tau);
}

// Full t-WSVT chain through the naive DFT: shrink every slice independently.
inline Tensor3 wsvt_tensor(const Tensor3& y, const Eigen::MatrixXd& w,
                           double tau) {
  FourierStack f = dft3(y);
  for (Index k = 0; k < y.n3(); ++k) {
    f.slices[static_cast<std::size_t>(k)] =
        wsvt_matrix(f.slices[static_cast<std::size_t>(k)], w.col(k), tau);
  }
  return idft3_real(f);
}

// Per-window brute-force SSIM matching the documented parameterization.
inline double ssim_naive(const Tensor3& ref, const Tensor3& est) {
  constexpr Index w = 8;
  constexpr double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  constexpr double c2 = (0.03 * 255.0) * (0.03 * 255.0);
  double total = 0.0;
  long windows = 0;
  for (Index k = 0; k < ref.n3(); ++k) {
    for (Index j = 0; j + w <= ref.n2(); ++j) {
      for (Index i = 0; i + w <= ref.n1(); ++i) {
        double mx = 0, my = 0;
        for (Index c = 0; c < w; ++c) {
          for (Index r = 0; r < w; ++r) {
            mx += ref(i + r, j + c, k);
            my += est(i + r, j + c, k);
          }
        }
        mx /= w * w;
        my /= w * w;
        double vx = 0, vy = 0, cxy = 0;
        for (Index c = 0; c < w; ++c) {
          for (Index r = 0; r < w; ++r) {
            const double dx = ref(i + r, j + c, k) - mx;
            const double dy = est(i + r, j + c, k) - my;
            vx += dx * dx;
            vy += dy * dy;
            cxy += dx * dy;
          }
        }
        vx /= w * w;
        vy /= w * w;
        cxy /= w * w;
        total += ((2 * mx * my + c1) * (2 * cxy + c2)) /
                 ((mx * mx + my * my + c1) * (vx + vy + c2));
        ++windows;
      }
    }
  }
  return total / static_cast<double>(windows);
}

inline double rel_fro_error(const Tensor3& got, const Tensor3& want) {
  return fro_norm(got - want) / fro_norm(want);
}

}  // namespace oracle
