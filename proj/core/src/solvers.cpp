#include "tenrec/solvers.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <utility>

#include "slice_svd.hpp"
#include "tenrec/fourier.hpp"
#include "tenrec/shrinkage.hpp"

namespace tenrec {

namespace {

enum class Penalty { Uniform, Log };

double objective_from_values(const Eigen::MatrixXd& sv, Penalty penalty,
                             double theta, Index n3) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < sv.cols(); ++j) {
    for (Eigen::Index i = 0; i < sv.rows(); ++i) {
      acc += penalty == Penalty::Log ? std::log(theta * sv(i, j) + 1.0)
                                     : sv(i, j);
    }
  }
  return acc / static_cast<double>(n3);
}

Decomposition admm(const Tensor3& x, const SolverConfig& cfg, Penalty penalty,
                   const IterationObserver& observer) {
  cfg.validate();
  const double lambda = cfg.effective_lambda(x);
  const Index r = std::min(x.n1(), x.n2());
  const Index n3 = x.n3();

  Tensor3 l = Tensor3::zeros(x.n1(), x.n2(), n3);
  Tensor3 e = l;
  Tensor3 p = l;
  Eigen::MatrixXd sv = Eigen::MatrixXd::Zero(r, n3);
  double mu = cfg.mu0;

  Decomposition out;
  out.report.objective_trace.reserve(
      static_cast<std::size_t>(cfg.max_iters));

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const Tensor3 q = x - e - (1.0 / mu) * p;
    ShrinkResult shrunk;
    Eigen::MatrixXd weights;
    if (penalty == Penalty::Log) {
      WeightTensor w = WeightTensor::from_singular_values(sv, cfg.theta);
      if (observer) weights = w.values();
      shrunk = t_wsvt_with_values(q, w, 1.0 / mu);
    } else {
      shrunk = t_svt_with_values(q, 1.0 / mu);
    }
    Tensor3 l_next = std::move(shrunk.x);
    sv = std::move(shrunk.tubal_sv);

    const Tensor3 h = x - l_next - (1.0 / mu) * p;
    Tensor3 e_next = soft_threshold_tensor(h, lambda / mu);

    Tensor3 primal = l_next + e_next - x;
    p += mu * primal;

    const double res_l = linf_norm(l_next - l);
    const double res_e = linf_norm(e_next - e);
    const double res_primal = linf_norm(primal);

    out.report.objective_trace.push_back(
        objective_from_values(sv, penalty, cfg.theta, n3) + lambda * l1_norm(e_next));

    if (observer) {
      IterationStats stats;
      stats.iteration = iter;
      stats.weights = std::move(weights);
      stats.residual_L = res_l;
      stats.residual_E = res_e;
      stats.residual_primal = res_primal;
      stats.mu = mu;
      observer(stats);
    }

    l = std::move(l_next);
    e = std::move(e_next);
    out.report.iterations = iter;
    out.report.residual_L = res_l;
    out.report.residual_E = res_e;
    out.report.residual_primal = res_primal;

    if (res_l <= cfg.epsilon && res_e <= cfg.epsilon &&
        res_primal <= cfg.epsilon) {
      out.report.converged = true;
      break;
    }
    mu = std::min(cfg.rho * mu, cfg.mu_max);
  }

  out.report.kkt_feasibility = linf_norm(l + e - x);
  out.low_rank = std::move(l);
  out.sparse = std::move(e);
  return out;
}

}  // namespace

double SolverConfig::effective_lambda(const Tensor3& x) const {
  if (lambda) return *lambda;
  return 1.0 / std::sqrt(static_cast<double>(std::max(x.n1(), x.n2()) *
                                             x.n3()));
}

void SolverConfig::validate() const {
  std::ostringstream msg;
  if (lambda && !(*lambda > 0.0)) {
    msg << "lambda must be positive, got " << *lambda;
  } else if (!(mu0 > 0.0)) {
    msg << "mu0 must be positive, got " << mu0;
  } else if (!(mu0 <= mu_max)) {
    msg << "mu0 " << mu0 << " exceeds mu_max " << mu_max;
  } else if (!(rho > 1.0)) {
    msg << "rho must exceed 1, got " << rho;
  } else if (!(epsilon > 0.0)) {
    msg << "epsilon must be positive, got " << epsilon;
  } else if (!(theta > 0.0)) {
    msg << "theta must be positive, got " << theta;
  } else if (max_iters < 1) {
    msg << "max_iters must be at least 1, got " << max_iters;
  } else {
    return;
  }
  throw InvalidConfig(msg.str());
}

std::string to_json_string(const SolverReport& report) {
  nlohmann::json j;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["residual_L"] = report.residual_L;
  j["residual_E"] = report.residual_E;
  j["residual_primal"] = report.residual_primal;
  j["kkt_feasibility"] = report.kkt_feasibility;
  j["objective_trace"] = report.objective_trace;
  return j.dump(2);
}

Decomposition tnn_trpca(const Tensor3& x, const SolverConfig& cfg,
                        const IterationObserver& observer) {
  return admm(x, cfg, Penalty::Uniform, observer);
}

Decomposition n_trpca(const Tensor3& x, const SolverConfig& cfg,
                      const IterationObserver& observer) {
  return admm(x, cfg, Penalty::Log, observer);
}

KktResiduals kkt_residuals(const Tensor3& x, const Tensor3& l,
                           const Tensor3& e, const Tensor3& p, double theta,
                           double lambda) {
  x.require_same_dims(l, "kkt_residuals");
  x.require_same_dims(e, "kkt_residuals");
  x.require_same_dims(p, "kkt_residuals");
  if (!(theta > 0.0)) {
    std::ostringstream msg;
    msg << "theta must be positive, got " << theta;
    throw InvalidTheta(msg.str());
  }

  KktResiduals out;
  out.feasibility = linf_norm(l + e - x);

  // -P must lie in lambda * subgradient of ||E||_1: equal to
  // -lambda*sign(e) where e != 0, within [-lambda, lambda] where e = 0.
  double r3 = 0.0;
  for (Index k = 0; k < x.n3(); ++k) {
    for (Index j = 0; j < x.n2(); ++j) {
      for (Index i = 0; i < x.n1(); ++i) {
        const double ev = e(i, j, k);
        const double pv = p(i, j, k);
        const double viol = ev == 0.0
                                ? std::max(std::abs(pv) - lambda, 0.0)
                                : std::abs(pv + lambda * (ev > 0 ? 1.0 : -1.0));
        r3 = std::max(r3, viol);
      }
    }
  }
  out.sparse_optimality = r3;

  // Stationarity: per Fourier slice, -P must equal U diag(w(sigma)) V^H on
  // the positive singular directions of L (w = theta/(theta*sigma+1)), with
  // the null-space block free up to spectral norm theta. The residual is
  // what remains of -P after subtracting the nearest such subgradient,
  // brought back to the spatial domain.
  const Index n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  const FourierStack fl = fft3(l);
  const FourierStack fp = fft3(p);
  FourierStack res = FourierStack::zeros(n1, n2, n3);
  const Index half = n3 / 2 + 1;
  for (Index k = 0; k < half; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const bool self = k == 0 || (n3 % 2 == 0 && k == n3 / 2);
    detail::SliceSvd svd = detail::svd_slice(fl.slices[idx], self, true);
    const Eigen::MatrixXcd m =
        svd.u.adjoint() * (-fp.slices[idx]) * svd.v;
    Eigen::MatrixXcd resid = m;
    Index pos = 0;
    while (pos < svd.sigma.size() && svd.sigma(pos) > 0.0) ++pos;
    for (Index j = 0; j < pos; ++j) {
      resid(j, j) -= theta / (theta * svd.sigma(j) + 1.0);
    }
    const Index zr = n1 - pos, zc = n2 - pos;
    if (zr > 0 && zc > 0) {
      const Eigen::MatrixXcd d = m.block(pos, pos, zr, zc);
      detail::SliceSvd dsvd = detail::svd_slice(d, false, false);
      Eigen::MatrixXcd clamped_u = dsvd.u;
      for (Eigen::Index j = 0; j < dsvd.sigma.size(); ++j) {
        clamped_u.col(j) *= std::min(dsvd.sigma(j), theta);
      }
      resid.block(pos, pos, zr, zc) = d - clamped_u * dsvd.v.adjoint();
    }
    res.slices[idx] = svd.u * resid * svd.v.adjoint();
  }
  for (Index k = half; k < n3; ++k) {
    res.slices[static_cast<std::size_t>(k)] =
        res.slices[static_cast<std::size_t>(n3 - k)].conjugate();
  }
  out.stationarity = linf_norm(ifft3(res));
  return out;
}

}  // namespace tenrec
