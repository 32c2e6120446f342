#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fnorm/bidiag.hpp"
#include "fnorm/eig.hpp"
#include "fnorm/errors.hpp"
#include "fnorm/generators.hpp"
#include "fnorm/relax.hpp"
#include "oracle.hpp"

using namespace fnorm;

TEST(NextTolerance, FixedBranchForFirstSteps) {
  const PreviousStep prev{3.0, 0.5, 1e-6};
  EXPECT_DOUBLE_EQ(next_tolerance(1, prev, 1e-4, 100), 1e-6);
  EXPECT_DOUBLE_EQ(next_tolerance(2, prev, 1e-4, 100), 1e-6);
  EXPECT_DOUBLE_EQ(next_tolerance(5, std::nullopt, 1e-4, 100), 1e-6);
}

TEST(NextTolerance, FullRelaxationWhenQuotientIsOne) {
  const std::size_t m_max = 50;
  const double r = 3e-5;
  const PreviousStep prev{1.0, 2.0 * m_max * r, r};
  EXPECT_DOUBLE_EQ(next_tolerance(4, prev, 1e-7, m_max), 1e-7);
}

TEST(NextTolerance, QuotientCapAndZeroResidual) {
  EXPECT_DOUBLE_EQ(next_tolerance(3, PreviousStep{1.0, 10.0, 1e-12}, 1e-7, 50), 1e-7);
  EXPECT_DOUBLE_EQ(next_tolerance(3, PreviousStep{1.0, 10.0, 0.0}, 1e-7, 50), 1e-7);
  // intermediate quotient: delta / (2 m r) = 0.25
  EXPECT_DOUBLE_EQ(next_tolerance(3, PreviousStep{1.0, 0.25, 0.01}, 1e-2, 50), 0.25e-2);
}

TEST(NextTolerance, NeverBelowFixedFloor) {
  std::mt19937 gen(4);
  std::uniform_real_distribution<double> u(-12, 2);
  for (int i = 0; i < 2000; ++i) {
    const PreviousStep prev{1.0, std::pow(10.0, u(gen)), std::pow(10.0, u(gen))};
    const double eps = std::pow(10.0, u(gen) / 2 - 3);
    const double e = next_tolerance(3 + i % 10, prev, eps, 100);
    EXPECT_GE(e, eps / 100);
    EXPECT_LE(e, eps);
    EXPECT_GT(e, 0.0);
  }
}

TEST(SpectralGap, Basics) {
  const std::vector<Complex> v{{3, 0}, {-3, 0}, {2.5, 0.1}, {1, 0}};
  EXPECT_NEAR(spectral_gap(v, 0), std::abs(Complex(0.5, -0.1)), 1e-15);
  EXPECT_EQ(spectral_gap(std::vector<Complex>{{1, 0}}, 0), std::numeric_limits<double>::infinity());
}

namespace {

struct FinishedRun {
  BidiagState state;
  DenseMatrix khat;
};

FinishedRun small_run(std::string_view matrix, FunctionId id, double eps_out) {
  const LinearOperator a = build_operator(parse_matrix_spec(matrix));
  RunOptions o;
  o.eps_out = eps_out;
  o.m_max = 200;
  o.fixed_eps_inner = 1e-12;
  o.keep_state = true;
  const RunReport rep = run(a, ScalarFunction(id), o);
  EXPECT_TRUE(rep.converged);
  return {*rep.state, assemble_khat(*rep.state)};
}

// leading eigenpair of the k-step projected matrix, unit q
std::pair<Complex, CVector> leading_pair(const BidiagState& s, std::size_t k) {
  const auto e = dense::eig_dense(assemble_khat(s, k));
  std::size_t best = 0;
  for (std::size_t i = 0; i < e.values.size(); ++i)
    if (e.values[i].real() > 0 && std::abs(e.values[i]) > std::abs(e.values[best])) best = i;
  CVector q(e.vectors.col(best).begin(), e.vectors.col(best).end());
  scale(1.0 / norm2(q), q);
  return {e.values[best], q};
}

}  // namespace

TEST(VerifyTau, SelfComparisonAtFullSize) {
  const FinishedRun r = small_run("A2:n=100", FunctionId::sqrt, 1e-6);
  const std::size_t m = r.state.steps();
  const auto [theta, q] = leading_pair(r.state, m);
  const TauDiagnostics d = verify_tau(r.khat, m, theta, q);
  EXPECT_LE(d.r_norm, 1e-12);
  EXPECT_TRUE(d.condition_ok);
  EXPECT_LE(d.tail_norm, 1e-15);
  EXPECT_LE(d.theta_shift, 1e-10);
  EXPECT_TRUE(d.tail_ok);
  EXPECT_TRUE(d.shift_ok);
}

TEST(VerifyTau, ConvergedRunOneStepEarlier) {
  const FinishedRun r = small_run("A2:n=200", FunctionId::sqrt, 1e-6);
  const std::size_t m = r.state.steps();
  ASSERT_GE(m, 2u);
  const auto [theta, q] = leading_pair(r.state, m - 1);
  const TauDiagnostics d = verify_tau(r.khat, m - 1, theta, q);
  EXPECT_TRUE(d.condition_ok);
  EXPECT_TRUE(d.tail_ok) << d.tail_norm << " vs tau " << d.tau_bound;
  EXPECT_TRUE(d.shift_ok) << d.theta_shift << " vs " << d.s_norm * d.tau_bound;
  EXPECT_GE(d.s_norm, 0.0);
  EXPECT_GT(d.delta_true, 0.0);
}

TEST(VerifyTau, PerturbedOffDiagonalBlocks) {
  const FinishedRun r = small_run("A5:n=100", FunctionId::invsqrt, 1e-6);
  const std::size_t m = r.state.steps();
  std::mt19937 gen(3);
  std::normal_distribution<double> nd;
  int checked = 0;
  for (int trial = 0; trial < 5; ++trial) {
    BidiagState s = r.state;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i <= j; ++i) s.m(i, j) += 1e-3 * nd(gen);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i <= std::min(j + 1, m - 1); ++i) s.t(i, j) += 1e-3 * nd(gen);
    const DenseMatrix khat = assemble_khat(s);
    for (std::size_t k : {m - 1, m - 2}) {
      const auto [theta, q] = leading_pair(s, k);
      const TauDiagnostics d = verify_tau(khat, k, theta, q);
      if (!d.condition_ok) continue;
      ++checked;
      EXPECT_TRUE(d.tail_ok);
      EXPECT_TRUE(d.shift_ok);
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(VerifyTau, RejectsBadShapes) {
  const DenseMatrix k = DenseMatrix::identity(4);
  const CVector q{1.0, 0.0};
  EXPECT_THROW(verify_tau(DenseMatrix::identity(3), 1, 1.0, q), DimensionError);
  EXPECT_THROW(verify_tau(k, 3, 1.0, q), DimensionError);
  EXPECT_THROW(verify_tau(k, 1, 1.0, CVector{1.0}), DimensionError);
}
