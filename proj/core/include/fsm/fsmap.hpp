#pragma once

// Feshbach-Schur reduction of H = H0 + W onto the eigenspace of a chosen
// eigenvalue cluster of H0.
//
// All operators restricted to Ran P are returned as m x m matrices in the
// orthonormal basis formed by the H0 eigenvectors of the cluster. The
// complement is handled in the basis of the remaining H0 eigenvectors.

#include <cstddef>
#include <limits>

#include "fsm/densela.hpp"

namespace fsm {

class PerturbationProblem {
 public:
  /// `distinct_index` counts distinct eigenvalues of H0 in ascending order,
  /// starting at 0. Eigenvalues within cluster_tol * ‖H0‖ of each other
  /// belong to the same cluster.
  static PerturbationProblem from_index(la::SymMatrix h0, la::SymMatrix w, std::size_t distinct_index,
                                        double cluster_tol = 1e-9);
  /// The cluster of H0 eigenvalues within cluster_tol * ‖H0‖ of `value`.
  static PerturbationProblem from_value(la::SymMatrix h0, la::SymMatrix w, double value,
                                        double cluster_tol = 1e-9);

  std::size_t dim() const noexcept { return h0_.size(); }
  std::size_t m() const noexcept { return m_; }
  double lam0() const noexcept { return lam0_; }
  double gam0() const noexcept { return gam0_; }
  double lam_star() const noexcept { return lam0_ + gam0_; }
  /// True if no eigenvalue of H0 lies below the cluster.
  bool is_lowest() const noexcept { return first_ == 0; }

  const la::SymMatrix& h0() const noexcept { return h0_; }
  const la::SymMatrix& w() const noexcept { return w_; }
  const la::SymMatrix& h() const noexcept { return h_; }
  double h_norm() const noexcept { return h_norm_; }

  const la::EigDecomp& h0_eig() const noexcept { return h0_eig_; }
  const la::OrthProjector& p() const noexcept { return p_; }
  const la::OrthProjector& pperp() const noexcept { return pperp_; }

  /// PHP in the P-basis.
  const la::SymMatrix& php() const noexcept { return php_; }
  /// PWP in the P-basis.
  const la::SymMatrix& pwp() const noexcept { return pwp_; }
  /// P⊥HP as an (n-m) x m matrix, rows in the P⊥-basis.
  const la::Matrix& coupling() const noexcept { return coupling_; }
  /// H⊥ = P⊥HP⊥ in the P⊥-basis.
  const la::SymMatrix& hperp() const noexcept { return hperp_; }
  const la::EigDecomp& hperp_eig() const noexcept { return hperp_eig_; }

 private:
  PerturbationProblem(la::SymMatrix h0, la::SymMatrix w, la::EigDecomp eig, std::size_t first, std::size_t count);

  la::SymMatrix h0_, w_, h_;
  la::EigDecomp h0_eig_;
  std::size_t first_ = 0;
  std::size_t m_ = 0;
  double lam0_ = 0.0;
  double gam0_ = 0.0;
  double h_norm_ = 0.0;
  la::OrthProjector p_, pperp_;
  la::SymMatrix php_, pwp_, hperp_;
  la::Matrix coupling_;
  la::Matrix coupling_eig_;  // hperp eigenvectorsᵀ · coupling
  la::EigDecomp hperp_eig_;

  friend la::SymMatrix effective_interaction(const PerturbationProblem&, double);
  friend la::Vector q_operator_apply(const PerturbationProblem&, double, std::span<const double>);
};

/// F_P(H - λ) = P(H - λ - (H - λ)R⊥(λ)(H - λ))P, m x m.
/// Throws ResolventSingular if λ is within 1e-10·‖H‖ of σ(H⊥).
la::SymMatrix feshbach_map(const PerturbationProblem& prob, double lam);

/// U(λ) = -PHP⊥(H⊥ - λ)^{-1}P⊥HP.
la::SymMatrix effective_interaction(const PerturbationProblem& prob, double lam);

/// H(λ) = PHP + U(λ).
la::SymMatrix effective_hamiltonian(const PerturbationProblem& prob, double lam);

/// Eigenvalues ν_1(λ) ≤ ... ≤ ν_m(λ) of H(λ).
la::Vector branch_eigenvalues(const PerturbationProblem& prob, double lam);

/// Q_P(λ)φ = φ - P⊥(H⊥ - λ)^{-1}P⊥HPφ, with φ given in the P-basis and the
/// result in the ambient basis.
la::Vector q_operator_apply(const PerturbationProblem& prob, double lam, std::span<const double> phi);

struct FixedPointOptions {
  /// Half-width of the trust interval around λ0. Required.
  double trust_radius = std::numeric_limits<double>::quiet_NaN();
  /// Residual tolerance; NaN selects 1e-12·max(1, |λ0|).
  double tol = std::numeric_limits<double>::quiet_NaN();
  /// Cap on Picard steps.
  int max_iter = 200;
  /// Bisection on ν_i(λ) - λ over the trust interval after Picard fails.
  bool bisection = true;
};

struct BranchSolution {
  std::size_t index = 0;  ///< 1-based branch label
  double lam = 0.0;
  int iterations = 0;  ///< number of ν_i evaluations
  double residual = 0.0;
  bool used_bisection = false;
  la::Vector eigenvector;  ///< unit norm, ambient basis
};

/// Solves ν_i(λ) = λ by Picard iteration from λ0. `branch` is 1-based.
/// Throws LeftTrustRegion, NoConvergence, or ResolventSingular.
BranchSolution solve_fixed_point(const PerturbationProblem& prob, std::size_t branch, const FixedPointOptions& opts);

}  // namespace fsm
