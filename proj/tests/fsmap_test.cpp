#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fsm/certify.hpp"
#include "fsm/error.hpp"
#include "fsm/fsmap.hpp"
#include "instances.hpp"
#include "properties.hpp"

namespace fsm {
namespace {

constexpr double kEps = 0.1;
constexpr double kLam1 = 0.99009804864072150;  // (3 - sqrt(1.04))/2

la::SymMatrix diag12() {
  const double d[] = {1.0, 2.0};
  return la::SymMatrix::diagonal(d);
}

la::SymMatrix offdiag(double e) {
  const double v[] = {0.0, e, e, 0.0};
  return la::SymMatrix::from_rows(2, v);
}

PerturbationProblem two_by_two(double e = kEps) { return PerturbationProblem::from_index(diag12(), offdiag(e), 0); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

FixedPointOptions radius(double r) {
  FixedPointOptions o;
  o.trust_radius = r;
  return o;
}

TEST(Problem, TwoByTwoFields) {
  const auto p = two_by_two();
  EXPECT_EQ(p.dim(), 2u);
  EXPECT_EQ(p.m(), 1u);
  EXPECT_DOUBLE_EQ(p.lam0(), 1.0);
  EXPECT_DOUBLE_EQ(p.gam0(), 1.0);
  EXPECT_DOUBLE_EQ(p.lam_star(), 2.0);
  EXPECT_TRUE(p.is_lowest());
  EXPECT_DOUBLE_EQ(p.pwp()(0, 0), 0.0);
  EXPECT_NEAR(std::abs(p.coupling()(0, 0)), kEps, 1e-15);
}

TEST(Problem, ClustersAndSelection) {
  const double d[] = {1.0, 1.0 + 1e-12, 3.0, 3.0, 5.0};
  const auto h0 = la::SymMatrix::diagonal(d);
  const la::SymMatrix w(5);
  const auto p0 = PerturbationProblem::from_index(h0, w, 0);
  EXPECT_EQ(p0.m(), 2u);
  EXPECT_NEAR(p0.gam0(), 2.0, 1e-11);
  const auto p1 = PerturbationProblem::from_index(h0, w, 1);
  EXPECT_EQ(p1.m(), 2u);
  EXPECT_FALSE(p1.is_lowest());
  EXPECT_NEAR(p1.gam0(), 2.0, 1e-11);
  const auto p2 = PerturbationProblem::from_value(h0, w, 5.0);
  EXPECT_EQ(p2.m(), 1u);
  EXPECT_DOUBLE_EQ(p2.lam0(), 5.0);
  EXPECT_EQ(code_of([&] { PerturbationProblem::from_index(h0, w, 3); }), ErrorCode::InvalidProblem);
  EXPECT_EQ(code_of([&] { PerturbationProblem::from_value(h0, w, 2.0); }), ErrorCode::InvalidProblem);
}

TEST(Problem, Errors) {
  const double neg[] = {-1.0, 2.0};
  EXPECT_EQ(code_of([&] { PerturbationProblem::from_index(la::SymMatrix::diagonal(neg), la::SymMatrix(2), 0); }),
            ErrorCode::NotPositiveDefinite);
  EXPECT_EQ(code_of([&] { PerturbationProblem::from_index(diag12(), la::SymMatrix(3), 0); }),
            ErrorCode::InvalidProblem);
  const double one[] = {1.0, 1.0};
  EXPECT_EQ(code_of([&] { PerturbationProblem::from_index(la::SymMatrix::diagonal(one), la::SymMatrix(2), 0); }),
            ErrorCode::InvalidProblem);
}

TEST(FeshbachMap, TwoByTwoSchurComplement) {
  const auto p = two_by_two();
  for (double lam : {0.5, 0.9, 1.0, 1.05, 1.5}) {
    const auto f = feshbach_map(p, lam);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_NEAR(f(0, 0), (1.0 - lam) - kEps * kEps / (2.0 - lam), 1e-15);
  }
  EXPECT_NEAR(feshbach_map(p, kLam1)(0, 0), 0.0, 1e-12);
}

TEST(FeshbachMap, Unperturbed) {
  const auto p = two_by_two(0.0);
  for (double lam : {0.7, 1.0, 1.3}) EXPECT_NEAR(feshbach_map(p, lam)(0, 0), 1.0 - lam, 1e-15);
}

TEST(FeshbachMap, ResolventSingular) {
  const auto p = two_by_two();
  EXPECT_EQ(code_of([&] { feshbach_map(p, 2.0); }), ErrorCode::ResolventSingular);
  EXPECT_EQ(code_of([&] { effective_interaction(p, 2.0 + 1e-12); }), ErrorCode::ResolventSingular);
}

TEST(EffectiveInteraction, Examples) {
  EXPECT_NEAR(effective_interaction(two_by_two(), 1.0)(0, 0), -0.01, 1e-15);
  EXPECT_EQ(effective_interaction(two_by_two(0.0), 1.0)(0, 0), 0.0);
  EXPECT_NEAR(effective_hamiltonian(two_by_two(), 1.0)(0, 0), 0.99, 1e-15);
  EXPECT_EQ(effective_hamiltonian(two_by_two(0.0), 1.3)(0, 0), 1.0);
  EXPECT_NEAR(branch_eigenvalues(two_by_two(), 1.0)[0], 0.99, 1e-15);
}

TEST(EffectiveInteraction, UnperturbedCluster) {
  const double d[] = {2.0, 2.0, 2.0, 3.0};
  const auto p = PerturbationProblem::from_index(la::SymMatrix::diagonal(d), la::SymMatrix(4), 0);
  const auto nu = branch_eigenvalues(p, 2.05);
  ASSERT_EQ(nu.size(), 3u);
  for (double v : nu) EXPECT_EQ(v, 2.0);
}

TEST(EffectiveInteraction, BoundedByKPhiAndBranchRange) {
  std::mt19937_64 rng(101);
  const CertifyParams params;
  for (int t = 0; t < 20; ++t) {
    const auto inst = testing::random_instance(rng, {.n_max = 12});
    const auto p = inst.problem();
    const auto cert = check_conditions(p, params);
    ASSERT_TRUE(cert.valid());
    for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      const double lam = p.lam0() + s * params.a * p.gam0();
      EXPECT_LE(la::op_norm(effective_interaction(p, lam)), cert.k * cert.phi * (1.0 + 1e-9) + 1e-15);
      for (double nu : branch_eigenvalues(p, lam)) EXPECT_LE(std::abs(nu - p.lam0()), cert.delta * (1.0 + 1e-12));
    }
  }
}

TEST(FixedPoint, TwoByTwo) {
  const auto sol = solve_fixed_point(two_by_two(), 1, radius(0.5));
  EXPECT_NEAR(sol.lam, kLam1, 1e-12);
  EXPECT_EQ(sol.index, 1u);
  EXPECT_FALSE(sol.used_bisection);
  EXPECT_LE(sol.residual, 1e-12);
  ASSERT_EQ(sol.eigenvector.size(), 2u);
  EXPECT_NEAR(la::norm2(sol.eigenvector), 1.0, 1e-15);
  EXPECT_NEAR(sol.eigenvector[1] / sol.eigenvector[0], -kEps / (2.0 - kLam1), 1e-12);
}

TEST(FixedPoint, UnperturbedOneIteration) {
  const auto sol = solve_fixed_point(two_by_two(0.0), 1, radius(0.1));
  EXPECT_EQ(sol.lam, 1.0);
  EXPECT_EQ(sol.iterations, 1);
}

TEST(FixedPoint, MatchesBruteForce) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    auto inst = testing::random_instance(rng, {.n_min = 8, .n_max = 8, .m_max = 3});
    const auto p = inst.problem();
    const auto cert = check_conditions(p, CertifyParams{});
    const auto oracle = testing::oracle_eig(p.h());
    for (std::size_t i = 1; i <= p.m(); ++i) {
      const auto sol = solve_fixed_point(p, i, fixed_point_options(cert));
      EXPECT_NEAR(sol.lam, oracle.values[i - 1], 1e-10);
      auto r = p.h().dense() * sol.eigenvector;
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= sol.lam * sol.eigenvector[k];
      EXPECT_LE(la::norm2(r), 1e-9 * p.h_norm());
    }
  }
}

TEST(FixedPoint, Errors) {
  const auto p = two_by_two();
  EXPECT_EQ(code_of([&] { solve_fixed_point(p, 1, radius(1e-4)); }), ErrorCode::LeftTrustRegion);
  FixedPointOptions capped = radius(0.5);
  capped.max_iter = 1;
  capped.bisection = false;
  EXPECT_EQ(code_of([&] { solve_fixed_point(p, 1, capped); }), ErrorCode::NoConvergence);
  EXPECT_EQ(code_of([&] { solve_fixed_point(p, 2, radius(0.5)); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { solve_fixed_point(p, 1, FixedPointOptions{}); }), ErrorCode::InvalidArgument);
}

TEST(FixedPoint, BisectionFallback) {
  FixedPointOptions o = radius(0.5);
  o.max_iter = 2;
  const auto sol = solve_fixed_point(two_by_two(), 1, o);
  EXPECT_TRUE(sol.used_bisection);
  EXPECT_NEAR(sol.lam, kLam1, 1e-11);
}

TEST(QOperator, Examples) {
  const double phi[] = {1.0};
  const auto psi = q_operator_apply(two_by_two(), kLam1, phi);
  EXPECT_NEAR(psi[0], 1.0, 1e-15);
  EXPECT_NEAR(psi[1], -kEps / (2.0 - kLam1), 1e-12);
  const auto psi0 = q_operator_apply(two_by_two(0.0), 1.1, phi);
  EXPECT_EQ(psi0[0], 1.0);
  EXPECT_EQ(psi0[1], 0.0);
}

TEST(Isospectrality, RandomLowest) {
  std::mt19937_64 rng(202);
  for (int t = 0; t < 10; ++t) {
    const auto inst = testing::random_instance(rng, {.n_max = 16});
    const auto v = testing::check_isospectrality(inst, CertifyParams{});
    EXPECT_TRUE(v.ok()) << v.summary();
  }
}

TEST(Isospectrality, RandomInterior) {
  std::mt19937_64 rng(203);
  for (int t = 0; t < 10; ++t) {
    const auto inst = testing::random_instance(rng, {.n_max = 16, .lowest = false});
    const auto v = testing::check_isospectrality(inst, CertifyParams{});
    EXPECT_TRUE(v.ok()) << v.summary();
  }
}

TEST(Isospectrality, MultiplicityOnDoubledSpectra) {
  std::mt19937_64 rng(204);
  for (int t = 0; t < 5; ++t) {
    const auto inst = testing::doubled_instance(rng, {.n_max = 16});
    const auto v = testing::check_multiplicity(inst, CertifyParams{});
    EXPECT_TRUE(v.ok()) << v.summary();
  }
}

TEST(EffectiveInteraction, IndefiniteForInteriorClusters) {
  // U(λ) ⪯ 0 needs the cluster at the bottom of σ(H0): with levels below λ0
  // the coupling pushes branches up.
  const double d[] = {1.0, 2.0, 3.0};
  const double w[] = {0.0, 0.05, 0.0, 0.05, 0.0, 0.0, 0.0, 0.0, 0.0};
  const auto p = PerturbationProblem::from_index(la::SymMatrix::diagonal(d), la::SymMatrix::from_rows(3, w), 1);
  EXPECT_GT(effective_interaction(p, 2.0)(0, 0), 0.0);
}

}  // namespace
}  // namespace fsm
