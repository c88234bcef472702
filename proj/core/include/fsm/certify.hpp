#pragma once

// Perturbation certificates: smallness conditions on W relative to the gap
// of H0, and the eigenvalue/eigenvector enclosures they imply.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fsm/densela.hpp"
#include "fsm/fsmap.hpp"

namespace fsm {

struct CertifyParams {
  double a = 0.1;
  double b = 0.8;

  /// Throws InvalidArgument unless 0 < b < 1 and 0 < a < 1 - b.
  static CertifyParams make(double a, double b);
  double k() const noexcept { return 1.0 / (1.0 - a - b); }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

struct Certificate {
  double a = 0.0, b = 0.0, k = 0.0;
  double lam0 = 0.0, gam0 = 0.0, lam_star = 0.0;
  std::size_t m = 0;

  double form_norm_wperp = 0.0;  ///< ‖P⊥WP⊥‖_{H0}
  double form_norm_coupling = 0.0;  ///< ‖P⊥WP‖_{H0}
  double pwp_norm = 0.0;
  double phi = 0.0;
  double phi_upper = 0.0;
  double r = 0.0;
  double delta = 0.0;  ///< ‖PWP‖ + kΦ
  bool cond1 = false, cond2 = false, cond3 = false;

  Interval eig_interval;
  double vec_bound = 0.0;
  /// m = 1 only: centre λ0 + ⟨W⟩, half-width kΦ.
  std::optional<Interval> second_order;
  double mean_w = 0.0;
  /// m > 1 and λ0 = min σ(H0) only: [λ0 + μ_min - kΦ, λ0 + μ_min].
  std::optional<Interval> lowest;
  double mu_min = 0.0;

  bool valid() const noexcept { return cond1 && cond2 && cond3; }
};

/// ‖H0^{-1/2} W H0^{-1/2}‖. Throws NotPositiveDefinite.
double form_norm(const la::SymMatrix& w, const la::SymMatrix& h0);

/// ‖H0^{-1/2} A H0^{-1/2}‖ for a general (not necessarily symmetric) A.
double form_norm(const la::Matrix& a, const la::SymMatrix& h0);

/// Φ(W) = (λ0 λ*/γ0) ‖P⊥WP‖²_{H0}.
double phi(const PerturbationProblem& prob);

/// ‖PWP⊥WP‖/γ0. Dominates Φ when λ0 is the lowest eigenvalue of H0.
double phi_upper(const PerturbationProblem& prob);

/// Evaluates all three conditions and fills every field.
Certificate check_conditions(const PerturbationProblem& prob, const CertifyParams& params);

enum class EnclosureKind { first_order, second_order, lowest };

struct Enclosure {
  EnclosureKind kind;
  Interval interval;
};

std::string_view to_string(EnclosureKind kind) noexcept;

/// Throws InvalidCertificate if !cert.valid() and !force.
std::vector<Enclosure> eigenvalue_enclosures(const Certificate& cert, bool force = false);

/// k·√(Φ/γ0). Throws InvalidCertificate if !cert.valid() and !force.
double eigenvector_bound(const Certificate& cert, bool force = false);

/// Trust interval for the fixed-point solver: rγ0 for a valid certificate,
/// aγ0 when forced. Throws InvalidCertificate otherwise.
FixedPointOptions fixed_point_options(const Certificate& cert, bool force = false);

/// key=value lines, fixed key order.
void write_certificate(std::ostream& out, const Certificate& cert);

}  // namespace fsm
