#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tenrec/tensor.hpp"

namespace tenrec {

struct SolverConfig {
  /// Sparsity weight. Unset means 1/sqrt(max(n1,n2) * n3) of the tensor
  /// being decomposed.
  std::optional<double> lambda;
  double mu0 = 1e-3;
  double mu_max = 1e10;
  double rho = 1.1;
  double epsilon = 1e-5;
  double theta = 2.0;
  int max_iters = 500;

  double effective_lambda(const Tensor3& x) const;

  /// Throws InvalidConfig unless mu0 > 0, mu0 <= mu_max, rho > 1,
  /// epsilon > 0, theta > 0, max_iters >= 1, lambda (if set) > 0.
  void validate() const;
};

struct SolverReport {
  int iterations = 0;
  bool converged = false;
  double residual_L = 0.0;       // ||L_{k+1} - L_k||_inf at the last step
  double residual_E = 0.0;       // ||E_{k+1} - E_k||_inf
  double residual_primal = 0.0;  // ||L + E - X||_inf
  double kkt_feasibility = 0.0;  // ||L + E - X||_inf of the returned pair
  std::vector<double> objective_trace;
};

/// JSON object with the report fields, for the CLI's --report output.
std::string to_json_string(const SolverReport& report);

struct Decomposition {
  Tensor3 low_rank;
  Tensor3 sparse;
  SolverReport report;
};

/// Snapshot of one ADMM iteration, for instrumentation tests and tracing.
/// weights has 0 columns for the uniform-threshold solver.
struct IterationStats {
  int iteration = 0;  // 1-based
  Eigen::MatrixXd weights;
  double residual_L = 0.0;
  double residual_E = 0.0;
  double residual_primal = 0.0;
  double mu = 0.0;
};
using IterationObserver = std::function<void(const IterationStats&)>;

/// Convex baseline: min ||L||_T + lambda*||E||_1 s.t. L + E = X, by ADMM
/// with uniform singular value thresholding. Hitting max_iters is not an
/// error; the last iterate is returned with converged=false.
Decomposition tnn_trpca(const Tensor3& x, const SolverConfig& cfg,
                        const IterationObserver& observer = nullptr);

/// Nonconvex variant: the L-update is weighted thresholding with
/// log-derivative weights theta/(theta*sigma + 1) recomputed each iteration
/// from the previous L's tubal singular values. With L_0 = 0 the first
/// iteration's weights are exactly theta.
Decomposition n_trpca(const Tensor3& x, const SolverConfig& cfg,
                      const IterationObserver& observer = nullptr);

/// Violations of the first-order optimality system for the decomposition
/// min TALN(L) + lambda*||E||_1 s.t. L + E = X with multiplier P.
struct KktResiduals {
  double stationarity = 0.0;      // distance of -P from the log-norm
                                  // subgradient at L, inf-norm
  double feasibility = 0.0;       // ||L + E - X||_inf
  double sparse_optimality = 0.0; // violation of -P in lambda*d||E||_1
};

KktResiduals kkt_residuals(const Tensor3& x, const Tensor3& l,
                           const Tensor3& e, const Tensor3& p, double theta,
                           double lambda);

}  // namespace tenrec
