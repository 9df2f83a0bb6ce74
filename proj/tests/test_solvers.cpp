#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tenrec/errors.hpp"
#include "tenrec/fourier.hpp"
#include "tenrec/solvers.hpp"
#include "tenrec/tensor.hpp"
#include "tenrec/tsvd.hpp"

using namespace tenrec;

namespace {

Tensor3 random_tubal_rank(Index n1, Index n2, Index n3, Index rank,
                          unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Tensor3 a(n1, rank, n3), b(rank, n2, n3);
  for (Index t = 0; t < a.size(); ++t) {
    a.data()[t] = dist(rng) / std::sqrt(static_cast<double>(n1));
  }
  for (Index t = 0; t < b.size(); ++t) {
    b.data()[t] = dist(rng) / std::sqrt(static_cast<double>(n2));
  }
  return t_product(a, b);
}

// Flips round(rate * n1 * n2 * n3) distinct entries to +-1.
Tensor3 random_sign_sparse(Index n1, Index n2, Index n3, double rate,
                           unsigned seed) {
  std::mt19937 rng(seed);
  const Index total = n1 * n2 * n3;
  std::vector<Index> idx(static_cast<std::size_t>(total));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto count = static_cast<std::size_t>(
      std::llround(rate * static_cast<double>(total)));
  std::bernoulli_distribution coin(0.5);
  Tensor3 s(n1, n2, n3);
  for (std::size_t t = 0; t < count; ++t) {
    const Index flat = idx[t];
    const Index k = flat / (n1 * n2);
    const Index j = (flat % (n1 * n2)) / n1;
    const Index i = flat % n1;
    s(i, j, k) = coin(rng) ? 1.0 : -1.0;
  }
  return s;
}

Eigen::MatrixXd random_orthogonal(Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = dist(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

}  // namespace

TEST_CASE("solver config validation and default lambda") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  Tensor3 x(20, 30, 4);
  CHECK(cfg.effective_lambda(x) ==
        doctest::Approx(1.0 / std::sqrt(30.0 * 4.0)).epsilon(1e-15));
  cfg.lambda = 0.7;
  CHECK(cfg.effective_lambda(x) == 0.7);

  auto broken = [](auto mutate) {
    SolverConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), InvalidConfig);
  };
  broken([](SolverConfig& c) { c.lambda = 0.0; });
  broken([](SolverConfig& c) { c.lambda = -1.0; });
  broken([](SolverConfig& c) { c.mu0 = 0.0; });
  broken([](SolverConfig& c) { c.mu0 = 1e11; });  // above mu_max
  broken([](SolverConfig& c) { c.rho = 1.0; });
  broken([](SolverConfig& c) { c.epsilon = 0.0; });
  broken([](SolverConfig& c) { c.theta = 0.0; });
  broken([](SolverConfig& c) { c.theta = -2.0; });
  broken([](SolverConfig& c) { c.max_iters = 0; });
}

TEST_CASE("zero input decomposes to zero immediately") {
  const Tensor3 x = Tensor3::zeros(5, 4, 3);
  SolverConfig cfg;
  for (auto solve : {tnn_trpca, n_trpca}) {
    Decomposition d = solve(x, cfg, nullptr);
    CHECK(d.report.converged);
    CHECK(d.report.iterations == 1);
    CHECK(linf_norm(d.low_rank) == 0.0);
    CHECK(linf_norm(d.sparse) == 0.0);
    CHECK(d.report.residual_primal == 0.0);
    CHECK(d.report.kkt_feasibility == 0.0);
  }
}

TEST_CASE("exact recovery of a low tubal rank tensor from sparse sign corruption") {
  const Index n1 = 20, n2 = 20, n3 = 3;
  const Tensor3 l0 = random_tubal_rank(n1, n2, n3, 2, 41);
  const Tensor3 s0 = random_sign_sparse(n1, n2, n3, 0.05, 42);
  const Tensor3 x = l0 + s0;
  SolverConfig cfg;

  SUBCASE("uniform thresholding baseline") {
    Decomposition d = tnn_trpca(x, cfg, nullptr);
    CHECK(d.report.converged);
    CHECK(oracle::rel_fro_error(d.low_rank, l0) <= 1e-3);
    CHECK(oracle::rel_fro_error(d.sparse, s0) <= 2e-2);
    CHECK(d.report.residual_primal <= cfg.epsilon);
    CHECK(d.report.kkt_feasibility == d.report.residual_primal);
    CHECK(d.report.objective_trace.size() ==
          static_cast<std::size_t>(d.report.iterations));
  }

  SUBCASE("log-weighted variant") {
    Decomposition d = n_trpca(x, cfg, nullptr);
    CHECK(d.report.converged);
    CHECK(oracle::rel_fro_error(d.low_rank, l0) <= 1e-3);
    CHECK(oracle::rel_fro_error(d.sparse, s0) <= 2e-2);
    CHECK(d.report.residual_L <= cfg.epsilon);
    CHECK(d.report.residual_E <= cfg.epsilon);
    CHECK(d.report.residual_primal <= cfg.epsilon);
  }
}

TEST_CASE("observer sees the documented iteration schedule") {
  const Tensor3 l0 = random_tubal_rank(12, 10, 4, 2, 43);
  const Tensor3 s0 = random_sign_sparse(12, 10, 4, 0.05, 44);
  const Tensor3 x = l0 + s0;

  SUBCASE("weights start at exactly theta and shrink once sigma grows") {
    for (double theta : {2.0, 0.7}) {
      SolverConfig cfg;
      cfg.theta = theta;
      std::vector<Eigen::MatrixXd> weight_log;
      Decomposition d = n_trpca(x, cfg, [&](const IterationStats& s) {
        weight_log.push_back(s.weights);
      });
      REQUIRE(weight_log.size() >= 2);
      CHECK(weight_log.front().rows() == 10);
      CHECK(weight_log.front().cols() == 4);
      CHECK((weight_log.front().array() == theta).all());
      // by the last iteration the recovered part has positive singular
      // values, so the matching weights sit strictly below theta
      CHECK((weight_log.back().array() <= theta).all());
      CHECK(weight_log.back().minCoeff() < theta);
      CHECK(d.report.iterations == static_cast<int>(weight_log.size()));
    }
  }

  SUBCASE("uniform solver reports no weights") {
    SolverConfig cfg;
    cfg.max_iters = 3;
    cfg.epsilon = 1e-14;
    tnn_trpca(x, cfg, [](const IterationStats& s) {
      CHECK(s.weights.size() == 0);
    });
  }

  SUBCASE("mu follows min(rho * mu, mu_max) and iterations count from 1") {
    SolverConfig cfg;
    cfg.mu0 = 1e-3;
    cfg.mu_max = 2e-3;
    cfg.rho = 1.5;
    cfg.epsilon = 1e-14;
    cfg.max_iters = 6;
    std::vector<IterationStats> log;
    Decomposition d = n_trpca(x, cfg, [&](const IterationStats& s) {
      log.push_back(s);
    });
    CHECK_FALSE(d.report.converged);
    CHECK(d.report.iterations == 6);
    REQUIRE(log.size() == 6);
    double expected = cfg.mu0;
    for (std::size_t t = 0; t < log.size(); ++t) {
      CHECK(log[t].iteration == static_cast<int>(t) + 1);
      CHECK(log[t].mu == expected);
      expected = std::min(cfg.rho * expected, cfg.mu_max);
    }
    const IterationStats& last = log.back();
    CHECK(last.residual_L == d.report.residual_L);
    CHECK(last.residual_E == d.report.residual_E);
    CHECK(last.residual_primal == d.report.residual_primal);
  }
}

TEST_CASE("hitting max_iters returns the last iterate without converged") {
  std::mt19937_64 rng(45);
  const Tensor3 x = oracle::random_tensor(8, 8, 3, rng);
  SolverConfig cfg;
  cfg.max_iters = 2;
  Decomposition d = n_trpca(x, cfg, nullptr);
  CHECK_FALSE(d.report.converged);
  CHECK(d.report.iterations == 2);
  CHECK(d.report.objective_trace.size() == 2);
  CHECK(std::isfinite(d.report.kkt_feasibility));
}

TEST_CASE("repeated solves are bitwise identical") {
  const Tensor3 l0 = random_tubal_rank(10, 14, 3, 2, 46);
  const Tensor3 s0 = random_sign_sparse(10, 14, 3, 0.05, 47);
  const Tensor3 x = l0 + s0;
  SolverConfig cfg;
  Decomposition a = n_trpca(x, cfg, nullptr);
  Decomposition b = n_trpca(x, cfg, nullptr);
  CHECK(a.report.iterations == b.report.iterations);
  CHECK(a.low_rank.values() == b.low_rank.values());
  CHECK(a.sparse.values() == b.sparse.values());
}

TEST_CASE("report serializes to parseable json") {
  SolverReport r;
  r.iterations = 7;
  r.converged = true;
  r.residual_L = 1e-6;
  r.residual_E = 2e-6;
  r.residual_primal = 3e-6;
  r.kkt_feasibility = 4e-6;
  r.objective_trace = {3.0, 2.5, 2.25};
  const nlohmann::json j = nlohmann::json::parse(to_json_string(r));
  CHECK(j["iterations"] == 7);
  CHECK(j["converged"] == true);
  CHECK(j["residual_L"] == 1e-6);
  CHECK(j["residual_E"] == 2e-6);
  CHECK(j["residual_primal"] == 3e-6);
  CHECK(j["kkt_feasibility"] == 4e-6);
  CHECK(j["objective_trace"].size() == 3);
  CHECK(j["objective_trace"][2] == 2.25);
}

TEST_CASE("kkt residuals vanish on the all-zero system") {
  const Tensor3 z = Tensor3::zeros(4, 5, 3);
  KktResiduals r = kkt_residuals(z, z, z, z, 2.0, 0.1);
  CHECK(r.stationarity == 0.0);
  CHECK(r.feasibility == 0.0);
  CHECK(r.sparse_optimality == 0.0);
}

TEST_CASE("kkt residuals validate their arguments") {
  const Tensor3 z = Tensor3::zeros(4, 5, 3);
  const Tensor3 w = Tensor3::zeros(4, 5, 2);
  CHECK_THROWS_AS(kkt_residuals(z, w, z, z, 2.0, 0.1), ShapeMismatch);
  CHECK_THROWS_AS(kkt_residuals(z, z, w, z, 2.0, 0.1), ShapeMismatch);
  CHECK_THROWS_AS(kkt_residuals(z, z, z, w, 2.0, 0.1), ShapeMismatch);
  CHECK_THROWS_AS(kkt_residuals(z, z, z, z, 0.0, 0.1), InvalidTheta);
}

TEST_CASE("sparse optimality has closed forms") {
  const double lambda = 0.25;
  Tensor3 e(2, 2, 1), p(2, 2, 1), x(2, 2, 1);

  SUBCASE("multiplier aligned with the sign pattern is optimal") {
    e(0, 0, 0) = 3.0;
    e(1, 1, 0) = -0.5;
    p(0, 0, 0) = -lambda;
    p(1, 1, 0) = lambda;
    p(0, 1, 0) = 0.2;  // |p| <= lambda on the zero set
    KktResiduals r = kkt_residuals(x, Tensor3::zeros(2, 2, 1), e, p, 2.0, lambda);
    CHECK(r.sparse_optimality == 0.0);
  }

  SUBCASE("sign-flipped multiplier violates by 3 lambda") {
    e(0, 0, 0) = 3.0;
    p(0, 0, 0) = 2.0 * lambda;
    KktResiduals r = kkt_residuals(x, Tensor3::zeros(2, 2, 1), e, p, 2.0, lambda);
    CHECK(r.sparse_optimality == doctest::Approx(3.0 * lambda).epsilon(1e-15));
  }

  SUBCASE("excess magnitude on the zero set is the violation") {
    p(1, 0, 0) = 0.4;
    KktResiduals r = kkt_residuals(x, Tensor3::zeros(2, 2, 1),
                                   Tensor3::zeros(2, 2, 1), p, 2.0, lambda);
    CHECK(r.sparse_optimality == doctest::Approx(0.4 - lambda).epsilon(1e-15));
  }
}

TEST_CASE("stationarity accepts exact subgradients and measures excess") {
  const double theta = 2.0;
  const Index n = 3;
  const Eigen::MatrixXd u = random_orthogonal(n, 48);
  const Eigen::MatrixXd v = random_orthogonal(n, 49);
  const Eigen::Vector3d sigma(2.0, 0.5, 0.0);

  Tensor3 l(n, n, 1), x(n, n, 1);
  l.slice(0) = u * sigma.asDiagonal() * v.transpose();
  x.slice(0) = l.slice(0);
  const Tensor3 e = Tensor3::zeros(n, n, 1);

  auto weight = [&](double s) { return theta / (theta * s + 1.0); };
  Eigen::MatrixXd grad = weight(sigma(0)) * u.col(0) * v.col(0).transpose() +
                         weight(sigma(1)) * u.col(1) * v.col(1).transpose();

  SUBCASE("null-space component inside the spectral ball is free") {
    Tensor3 p(n, n, 1);
    p.slice(0) = -(grad + 0.6 * theta * u.col(2) * v.col(2).transpose());
    KktResiduals r = kkt_residuals(x, l, e, p, theta, 1e3);
    CHECK(r.stationarity <= 1e-10);
    CHECK(r.feasibility == 0.0);
    CHECK(r.sparse_optimality == 0.0);
  }

  SUBCASE("null-space excess beyond theta is reported exactly") {
    Tensor3 p(n, n, 1);
    p.slice(0) = -(grad + 2.0 * theta * u.col(2) * v.col(2).transpose());
    KktResiduals r = kkt_residuals(x, l, e, p, theta, 1e3);
    const double expected = theta * u.col(2).cwiseAbs().maxCoeff() *
                            v.col(2).cwiseAbs().maxCoeff();
    CHECK(r.stationarity == doctest::Approx(expected).epsilon(1e-8));
  }

  SUBCASE("wrong weight on a positive direction is detected") {
    Tensor3 p(n, n, 1);
    p.slice(0) = -(2.0 * weight(sigma(0)) * u.col(0) * v.col(0).transpose() +
                   weight(sigma(1)) * u.col(1) * v.col(1).transpose());
    KktResiduals r = kkt_residuals(x, l, e, p, theta, 1e3);
    CHECK(r.stationarity > 1e-3);
  }
}

TEST_CASE("stationarity holds slice-wise through the transform") {
  const double theta = 1.5;
  const Index n = 3, n3 = 2;
  auto weight = [&](double s) { return theta / (theta * s + 1.0); };

  // both transform slices of an n3 = 2 tensor are real, so a real
  // construction per slice inverts to a real spatial pair
  FourierStack fl = FourierStack::zeros(n, n, n3);
  FourierStack fp = FourierStack::zeros(n, n, n3);
  const Eigen::Matrix<double, 3, 2> sig{{3.0, 2.4}, {1.2, 0.7}, {0.0, 0.0}};
  for (Index k = 0; k < n3; ++k) {
    const Eigen::MatrixXd uk = random_orthogonal(n, 50 + 2 * static_cast<unsigned>(k));
    const Eigen::MatrixXd vk = random_orthogonal(n, 51 + 2 * static_cast<unsigned>(k));
    Eigen::MatrixXd lk = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd gk = Eigen::MatrixXd::Zero(n, n);
    for (Index j = 0; j < 2; ++j) {
      lk += sig(j, k) * uk.col(j) * vk.col(j).transpose();
      gk += weight(sig(j, k)) * uk.col(j) * vk.col(j).transpose();
    }
    gk += 0.4 * theta * uk.col(2) * vk.col(2).transpose();
    fl.slices[static_cast<std::size_t>(k)] = lk.cast<std::complex<double>>();
    fp.slices[static_cast<std::size_t>(k)] = (-gk).cast<std::complex<double>>();
  }
  const Tensor3 l = ifft3(fl);
  const Tensor3 p = ifft3(fp);
  const Tensor3 e = Tensor3::zeros(n, n, n3);
  KktResiduals r = kkt_residuals(l, l, e, p, theta, 1e3);
  CHECK(r.stationarity <= 1e-10);
  CHECK(r.feasibility == 0.0);
}

TEST_CASE("converged solves satisfy the feasibility diagnostic") {
  const Tensor3 l0 = random_tubal_rank(16, 16, 3, 2, 52);
  const Tensor3 s0 = random_sign_sparse(16, 16, 3, 0.05, 53);
  const Tensor3 x = l0 + s0;
  SolverConfig cfg;
  Decomposition d = n_trpca(x, cfg, nullptr);
  REQUIRE(d.report.converged);
  CHECK(d.report.kkt_feasibility <= 10.0 * cfg.epsilon);
  CHECK(linf_norm(d.low_rank + d.sparse - x) == d.report.kkt_feasibility);
}
