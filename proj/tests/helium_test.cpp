#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fsm/helium.hpp"
#include "fsm/hydrogen.hpp"
#include "instances.hpp"

namespace fsm::helium {
namespace {

// Closed-form 1s/2s/2p Slater integrals (radial multipole reduction).
constexpr double kC1 = 5.0 / 8.0;
constexpr double kC2 = 2.0 / 3.0;
constexpr double kM00 = 137.0 / 729.0;
constexpr double kM11 = 1481.0 / 6561.0;

const FullResult& index3() {
  static const FullResult r = compute_all(quad::build_grid(quad::table2_spec(3, "product")), 4);
  return r;
}

TEST(Constants, Values) {
  EXPECT_EQ(kGam0Sym, 0.375);
  EXPECT_NEAR(kGam0As, hydrogen::energy(3) - hydrogen::energy(2), 1e-16);
  EXPECT_NEAR(kK, 1.0 / (1.0 - kA - kB), 1e-12);
  const auto p = rounded_constants();
  EXPECT_EQ(p.w1, 0.6);
  EXPECT_EQ(p.w2, 0.3);
  EXPECT_EQ(p.w1_as, 0.2);
  EXPECT_EQ(p.w2_as, 0.01);
}

TEST(Bounds, RoundedConstants) {
  const auto e10 = energy_bounds(10, Symmetry::sym, {}, Rounding::paper);
  EXPECT_NEAR(e10.upper, -94.0, 1e-12);
  EXPECT_NEAR(e10.lower, -102.0, 1e-12);
  EXPECT_EQ(e10.z_min, 31.25);
  EXPECT_FALSE(e10.z_valid);
  EXPECT_NEAR(energy_bounds(20, Symmetry::sym, {}, Rounding::paper).upper, -388.0, 1e-12);
  EXPECT_TRUE(energy_bounds(40, Symmetry::sym, {}, Rounding::paper).z_valid);
  const auto as = energy_bounds(10, Symmetry::antisym, {}, Rounding::paper);
  EXPECT_NEAR(as.upper, -62.5 + 2.0, 1e-12);
  EXPECT_NEAR(as.upper - as.lower, 10.0 * 0.01 / (5.0 / 72.0), 1e-12);
}

TEST(Bounds, FullRoundingUsesComputedConstants) {
  HeliumConstants c{0.625, 0.27, 0.19, 0.014, "test"};
  const auto e = energy_bounds(10, Symmetry::sym, c, Rounding::full);
  EXPECT_NEAR(e.upper, -100.0 + 6.25, 1e-12);
  EXPECT_NEAR(e.lower, e.upper - 10.0 * 0.27 / 0.375, 1e-12);
}

TEST(Bounds, SmallZShape) {
  const auto p = rounded_constants();
  for (double z : {0.7, 1.0, 2.0}) EXPECT_LT(energy_bounds(z, Symmetry::sym, p, Rounding::paper).upper, 0.0);
  EXPECT_GT(energy_bounds(0.5, Symmetry::sym, p, Rounding::paper).upper, 0.0);
}

TEST(Thresholds, Values) {
  const auto t = thresholds({0.6, 0.27, 0.2, 0.01, "test"});
  EXPECT_EQ(t.z_min_sym, 31.25);
  EXPECT_NEAR(t.z_min_as, 170.0, 0.5);
  EXPECT_NEAR(t.z_star, 12.0, 1e-12);
  EXPECT_GT(t.crossover, 2.5);
  EXPECT_LT(t.crossover, 2.8);
  EXPECT_NEAR(t.crossover_160, 8.0 / 3.0, 1e-12);
  const double z = t.crossover;
  EXPECT_NEAR((1.0 - kCAs) * z * z - (0.6 - 0.2) * z - 144.0 * 0.01, 0.0, 1e-12);
}

TEST(Table1, RoundedConstantsColumns) {
  const auto rows = table1({}, Rounding::paper);
  ASSERT_EQ(rows.size(), 5u);
  const double main[] = {94, 388, 882, 1576, 2470};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(-rows[i].e_lead, main[i], 1e-9);
    EXPECT_NEAR(rows[i].upper, rows[i].e_lead, 1e-12);
  }
  EXPECT_NEAR(rows[0].delta_pct, 8.51, 0.005);
  EXPECT_NEAR(rows[1].delta_pct, 2.06, 0.005);
  EXPECT_NEAR(rows[2].err_pct, 0.068, 0.0005);
}

TEST(Table1, CsvFormat) {
  std::ostringstream os;
  write_table1_csv(os, table1({}, Rounding::paper));
  const auto s = os.str();
  EXPECT_EQ(s.rfind("z,E_exact,E_lead,delta_pct,err_pct,lower,upper,in_interval\n10,", 0), 0u) << s;
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 6);
  std::ostringstream conv;
  write_convergence_csv(conv, {{1, 200, {0.6, 0.2, 0.1, 0.01, "x"}}});
  EXPECT_EQ(conv.str().rfind("index,w1,w2,w1_as,w2_as\n1,0.6,", 0), 0u) << conv.str();
}

TEST(PairMatrices, StructureAtIndexThree) {
  const auto& pm = index3().pairs;
  const la::SymMatrix* all[] = {&pm.A, &pm.B, &pm.C, &pm.D, &pm.M, &pm.N, &pm.Q};
  for (const auto* m : all) {
    ASSERT_EQ(m->size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        if (i == j) continue;
        EXPECT_NEAR((*m)(i, j), 0.0, 5e-3) << i << j;
      }
  }
  // The three p channels are equivalent by rotation symmetry.
  for (std::size_t i = 2; i < 4; ++i) EXPECT_NEAR(pm.M(i, i), pm.M(1, 1), 2e-3);
  const auto mm = la::SymMatrix::symmetrized(pm.M.dense() * pm.M.dense());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(pm.Q(i, j), pm.N(i, j) - mm(i, j), 1e-14);
  const auto [w1_as, w2_as] = compute_w_as(pm);
  const auto em = testing::oracle_eig(pm.M);
  const auto eq = testing::oracle_eig(pm.Q);
  EXPECT_NEAR(w1_as, em.values.front(), 1e-13);
  EXPECT_NEAR(w2_as, eq.values.back(), 1e-13);
  EXPECT_NEAR(pm.M(0, 0), kM00, 1e-2);
  EXPECT_NEAR(pm.M(1, 1), kM11, 1e-2);
}

TEST(W1W2, ConsistentAtIndexThree) {
  const auto& r = index3();
  EXPECT_NEAR(r.sym.w1, r.sym.c1, 0.0);
  EXPECT_NEAR(r.sym.w2, r.sym.c2 - r.sym.c1 * r.sym.c1, 1e-15);
  EXPECT_NEAR(r.sym.c1, kC1, 1e-2);
  EXPECT_NEAR(r.sym.c2, kC2, 5e-2);
  EXPECT_EQ(r.constants.w1, r.sym.w1);
  const auto standalone = compute_w1_w2(quad::build_grid(quad::table2_spec(3, "product")), 2);
  EXPECT_EQ(standalone.w1, r.sym.w1);
  EXPECT_EQ(standalone.w2, r.sym.w2);
}

TEST(DirectOrdering, GroundOrderingOverestimatesChannels) {
  const auto grid = quad::build_grid(quad::table2_spec(1, "product"));
  const auto shell = compute_pair_matrices(grid, 4, DirectOrdering::convolve_shell);
  const auto ground = compute_pair_matrices(grid, 4, DirectOrdering::convolve_ground);
  // Exchange parts are identical; only the direct integrals differ.
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(shell.B(i, i), ground.B(i, i));
  EXPECT_LT(std::abs(shell.M(0, 0) - kM00), std::abs(ground.M(0, 0) - kM00));
}

}  // namespace
}  // namespace fsm::helium
