#include "tenrec/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace tenrec {

namespace {

// FFTW's planner is not thread-safe; plan creation and cache lookups are
// serialized. Executing a cached plan on new arrays is safe concurrently.
// Buffers always come from fftw_malloc and are laid out fiber-major
// (stride 1, dist n3), so one plan per (n3, fiber count, direction) serves
// every call.
std::mutex planner_mutex;
std::map<std::tuple<int, int, int>, fftw_plan>& plan_cache() {
  static auto* cache = new std::map<std::tuple<int, int, int>, fftw_plan>();
  return *cache;
}

fftw_plan plan_for(int n3, int howmany, int sign, fftw_complex* buf) {
  std::lock_guard<std::mutex> lock(planner_mutex);
  auto key = std::make_tuple(n3, howmany, sign);
  auto it = plan_cache().find(key);
  if (it != plan_cache().end()) return it->second;
  fftw_plan plan =
      fftw_plan_many_dft(1, &n3, howmany, buf, nullptr, 1, n3, buf, nullptr,
                         1, n3, sign, FFTW_ESTIMATE);
  if (plan == nullptr) throw NumericalFailure("fft plan creation failed");
  plan_cache().emplace(key, plan);
  return plan;
}

struct FftwBuffer {
  fftw_complex* ptr = nullptr;
  explicit FftwBuffer(std::size_t n) {
    ptr = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (ptr == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

void check_fft_extent(Index n3, Index fibers) {
  if (n3 > std::numeric_limits<int>::max() ||
      fibers > std::numeric_limits<int>::max()) {
    throw ShapeMismatch("tensor too large for fft");
  }
}

}  // namespace

FourierStack FourierStack::zeros(Index n1, Index n2, Index n3) {
  if (n1 <= 0 || n2 <= 0 || n3 <= 0) {
    throw ShapeMismatch("fourier stack dims must be positive");
  }
  FourierStack f;
  f.n1 = n1;
  f.n2 = n2;
  f.n3 = n3;
  f.slices.assign(static_cast<std::size_t>(n3),
                  Eigen::MatrixXcd::Zero(n1, n2));
  return f;
}

void FourierStack::validate() const {
  if (n1 <= 0 || n2 <= 0 || n3 <= 0) {
    throw ShapeMismatch("fourier stack dims must be positive");
  }
  if (slices.size() != static_cast<std::size_t>(n3)) {
    std::ostringstream msg;
    msg << "fourier stack has " << slices.size() << " slices, expected " << n3;
    throw ShapeMismatch(msg.str());
  }
  for (const auto& s : slices) {
    if (s.rows() != n1 || s.cols() != n2) {
      std::ostringstream msg;
      msg << "fourier slice is " << s.rows() << "x" << s.cols()
          << ", expected " << n1 << "x" << n2;
      throw ShapeMismatch(msg.str());
    }
  }
}

double FourierStack::fro_norm() const {
  double acc = 0.0;
  for (const auto& s : slices) acc += s.squaredNorm();
  return std::sqrt(acc);
}

FourierStack fft3(const Tensor3& a) {
  const Index n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  const Index fibers = n1 * n2;
  check_fft_extent(n3, fibers);

  FourierStack out = FourierStack::zeros(n1, n2, n3);
  if (n3 == 1) {
    out.slices[0] = a.slice(0).cast<std::complex<double>>();
    return out;
  }

  FftwBuffer buf(static_cast<std::size_t>(fibers * n3));
  for (Index k = 0; k < n3; ++k) {
    const double* src = a.data() + k * fibers;
    for (Index f = 0; f < fibers; ++f) {
      buf.ptr[f * n3 + k][0] = src[f];
      buf.ptr[f * n3 + k][1] = 0.0;
    }
  }
  fftw_plan plan = plan_for(static_cast<int>(n3), static_cast<int>(fibers),
                            FFTW_FORWARD, buf.ptr);
  fftw_execute_dft(plan, buf.ptr, buf.ptr);
  for (Index k = 0; k < n3; ++k) {
    auto& s = out.slices[static_cast<std::size_t>(k)];
    for (Index j = 0; j < n2; ++j) {
      for (Index i = 0; i < n1; ++i) {
        const Index f = i + j * n1;
        s(i, j) = {buf.ptr[f * n3 + k][0], buf.ptr[f * n3 + k][1]};
      }
    }
  }
  return out;
}

Tensor3 ifft3(const FourierStack& f) {
  f.validate();
  const Index n1 = f.n1, n2 = f.n2, n3 = f.n3;
  const Index fibers = n1 * n2;
  check_fft_extent(n3, fibers);

  const double stack_norm = f.fro_norm();
  const double imag_tol = 1e-9 * stack_norm;

  Tensor3 out(n1, n2, n3);
  double imag_sq = 0.0;
  if (n3 == 1) {
    const auto& s = f.slices[0];
    for (Index j = 0; j < n2; ++j) {
      for (Index i = 0; i < n1; ++i) {
        out(i, j, 0) = s(i, j).real();
        imag_sq += s(i, j).imag() * s(i, j).imag();
      }
    }
  } else {
    FftwBuffer buf(static_cast<std::size_t>(fibers * n3));
    for (Index k = 0; k < n3; ++k) {
      const auto& s = f.slices[static_cast<std::size_t>(k)];
      for (Index j = 0; j < n2; ++j) {
        for (Index i = 0; i < n1; ++i) {
          const Index fb = i + j * n1;
          buf.ptr[fb * n3 + k][0] = s(i, j).real();
          buf.ptr[fb * n3 + k][1] = s(i, j).imag();
        }
      }
    }
    fftw_plan plan = plan_for(static_cast<int>(n3), static_cast<int>(fibers),
                              FFTW_BACKWARD, buf.ptr);
    fftw_execute_dft(plan, buf.ptr, buf.ptr);
    const double inv = 1.0 / static_cast<double>(n3);
    for (Index k = 0; k < n3; ++k) {
      double* dst = out.data() + k * fibers;
      for (Index fb = 0; fb < fibers; ++fb) {
        dst[fb] = buf.ptr[fb * n3 + k][0] * inv;
        const double im = buf.ptr[fb * n3 + k][1] * inv;
        imag_sq += im * im;
      }
    }
  }

  const double imag_norm = std::sqrt(imag_sq);
  if (imag_norm > imag_tol) {
    std::ostringstream msg;
    msg << "inverse fft produced imaginary residue " << imag_norm
        << " exceeding " << imag_tol;
    throw NonRealResult(msg.str());
  }
  return out;
}

Eigen::MatrixXd bcirc(const Tensor3& a) {
  const Index n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n1 * n3, n2 * n3);
  for (Index r = 0; r < n3; ++r) {
    for (Index c = 0; c < n3; ++c) {
      const Index k = (r - c + n3) % n3;
      m.block(r * n1, c * n2, n1, n2) = a.slice(k);
    }
  }
  return m;
}

Eigen::MatrixXcd bdiag(const FourierStack& f) {
  f.validate();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(f.n1 * f.n3, f.n2 * f.n3);
  for (Index k = 0; k < f.n3; ++k) {
    m.block(k * f.n1, k * f.n2, f.n1, f.n2) =
        f.slices[static_cast<std::size_t>(k)];
  }
  return m;
}

}  // namespace tenrec
