#pragma once

// Hydrogen-like bound states with unit nuclear charge. Angular parts use real
// spherical harmonics without the Condon-Shortley phase: for ℓ = 1 the
// orders k = -1, 0, 1 are proportional to y, z, x.

#include <array>

namespace fsm::hydrogen {

using Point3 = std::array<double, 3>;

struct Orbital {
  int n = 1;
  int ell = 0;
  int k = 0;
};

/// Throws InvalidQuantumNumber unless n ≥ 1, 0 ≤ ℓ < n, |k| ≤ ℓ.
void validate(const Orbital& orb);

/// -1/(2n²).
double energy(int n);

/// Generalized Laguerre polynomial L_q^α(ρ) with L_0 = 1, L_1 = 1 + α - ρ.
double laguerre(int q, double alpha, double rho);

/// Orthonormal real spherical harmonic of degree ℓ and order k.
double real_sph_harm(int ell, int k, double theta, double phi);
/// Same, evaluated at a unit vector.
double real_sph_harm(int ell, int k, const Point3& unit);

/// Radial factor R_nℓ(r), normalized so that ∫ R² r² dr = 1.
double radial(int n, int ell, double r);
/// dR_nℓ/dr.
double radial_derivative(int n, int ell, double r);

/// ψ_nℓk(x) = R_nℓ(|x|) Y_ℓk(x/|x|).
double psi(const Orbital& orb, const Point3& x);

/// (ψ_100(x1)ψ_2ℓk(x2) - ψ_2ℓk(x1)ψ_100(x2))/√2. Throws InvalidOrbital unless orb2.n == 2.
double pair_antisym(const Orbital& orb2, const Point3& x1, const Point3& x2);

/// The four n = 2 orbitals in the order (0,0), (1,-1), (1,0), (1,1).
inline constexpr std::array<Orbital, 4> kShellTwo{{{2, 0, 0}, {2, 1, -1}, {2, 1, 0}, {2, 1, 1}}};

/// Closed forms of ψ_100 and the four n = 2 orbitals at one point, in the
/// order ψ_100, then kShellTwo.
std::array<double, 5> shell_values(const Point3& x);

}  // namespace fsm::hydrogen
