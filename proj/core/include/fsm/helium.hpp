#pragma once

// Ground-state energy enclosures for two-electron ions with nuclear charge z,
// in units of E_ref (one Hartree) after rescaling x -> x/z.
//
// Symmetric (spin 0) sector: P projects onto ψ_100 ⊗ ψ_100. Antisymmetric
// (spin 1) sector: P projects onto the four pair functions built from ψ_100
// and the n = 2 shell.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "fsm/densela.hpp"
#include "fsm/quadrature.hpp"

namespace fsm::helium {

inline constexpr double kGam0Sym = 3.0 / 8.0;   // e_2 - e_1
inline constexpr double kGam0As = 5.0 / 72.0;   // e_3 - e_2
inline constexpr double kCSym = 1.0;
inline constexpr double kCAs = 5.0 / 8.0;
inline constexpr double kA = 0.1;
inline constexpr double kB = 0.8;
inline constexpr double kK = 10.0;              // 1/(1 - a - b)

struct HeliumConstants {
  double w1 = 0.0;
  double w2 = 0.0;
  double w1_as = 0.0;
  double w2_as = 0.0;
  std::string source;
};

/// Rounded values used for the published reference table.
HeliumConstants rounded_constants();

struct PairMatrices {
  la::SymMatrix A, B, C, D, M, N, Q;
};

struct W1W2 {
  double w1 = 0.0;
  double w2 = 0.0;
  double c1 = 0.0;  ///< ⟨1/|x-y|⟩ over ψ_100 ⊗ ψ_100
  double c2 = 0.0;  ///< ⟨1/|x-y|²⟩
};

/// w1 = C1, w2 = C2 - C1².
W1W2 compute_w1_w2(const quad::Grid& grid, int threads = 1);

/// Which density of a direct integral ∫∫ ρ_a(x) ρ_b(y) K(x - y) is convolved.
enum class DirectOrdering {
  /// Convolve the n = 2 products ψ_2a ψ_2b; the outer sum runs against |ψ_100|².
  /// The broad density meets the kernel singularity, which the log grid
  /// resolves near its origin.
  convolve_shell,
  /// Convolve |ψ_100|² and sum against ψ_2a ψ_2b. The narrow 1s peak is then
  /// sampled where the radial spacing is coarse, and convergence is slow.
  convolve_ground,
};

/// Direct (A, C) and exchange (B, D) integrals over the n = 2 shell, order
/// (0,0), (1,-1), (1,0), (1,1); M = A - B, N = C - D, Q = N - M².
PairMatrices compute_pair_matrices(const quad::Grid& grid, int threads = 1,
                                   DirectOrdering ordering = DirectOrdering::convolve_shell);

/// (min eig M, max eig Q).
std::pair<double, double> compute_w_as(const PairMatrices& pm);

struct FullResult {
  W1W2 sym;
  PairMatrices pairs;
  HeliumConstants constants;
};

/// Everything above from a single convolution pass.
FullResult compute_all(const quad::Grid& grid, int threads = 1,
                       DirectOrdering ordering = DirectOrdering::convolve_shell);

enum class Symmetry { sym, antisym };
enum class Rounding { paper, full };

std::string_view to_string(Symmetry s) noexcept;
std::string_view to_string(Rounding r) noexcept;

struct EnergyEnclosure {
  double z = 0.0;
  Symmetry symmetry = Symmetry::sym;
  double c = 0.0, gam0 = 0.0, w1 = 0.0, w2 = 0.0, k = kK;
  double lower = 0.0;
  double upper = 0.0;
  double z_min = 0.0;       ///< smallest z for which the conditions hold
  bool z_valid = false;     ///< z ≥ z_min
};

/// upper = -c z² + w1 z, lower = upper - k w2/γ0. `rounding == paper`
/// ignores `computed` and uses rounded_constants().
EnergyEnclosure energy_bounds(double z, Symmetry symmetry, const HeliumConstants& computed, Rounding rounding);

struct Thresholds {
  double z_min_sym = 0.0;
  double z_min_as = 0.0;
  double z_star = 0.0;
  /// Positive root of (1 - c_as) z² - (w1 - w1_as) z - coef·w2_as = 0 with
  /// coef = k/γ0_as = 144.
  double crossover = 0.0;
  /// Same with coef = 160.
  double crossover_160 = 0.0;
};

Thresholds thresholds(const HeliumConstants& constants);

struct Table1Row {
  int z = 0;
  double e_exact = 0.0;
  double e_lead = 0.0;   ///< -z² + w1 z
  double delta_pct = 0.0;
  double err_pct = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool in_interval = false;
};

/// Reference (non-rigorous) ground-state energies, z = 10, 20, 30, 40, 50.
inline constexpr std::array<std::pair<int, double>, 5> kReferenceEnergies{
    {{10, -93.9}, {20, -387.7}, {30, -881.4}, {40, -1575.2}, {50, -2468.9}}};

std::vector<Table1Row> table1(const HeliumConstants& computed, Rounding rounding);

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows);
void write_table1_text(std::ostream& out, const std::vector<Table1Row>& rows);

struct ConvergenceRow {
  int index = 0;
  std::size_t points = 0;
  HeliumConstants constants;
};

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

}  // namespace fsm::helium
