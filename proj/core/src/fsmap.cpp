#include "fsm/fsmap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fsm/error.hpp"

namespace fsm {

namespace {

struct Cluster {
  std::size_t first;
  std::size_t count;
};

// Groups ascending eigenvalues into chains whose neighbours differ by at most tol.
std::vector<Cluster> clusters(const la::Vector& values, double tol) {
  std::vector<Cluster> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!out.empty() && values[i] - values[i - 1] <= tol) {
      ++out.back().count;
    } else {
      out.push_back({i, 1});
    }
  }
  return out;
}

la::EigDecomp checked_h0_eig(const la::SymMatrix& h0, const la::SymMatrix& w) {
  if (h0.size() == 0) throw Error(ErrorCode::InvalidProblem, "H0 is empty");
  if (w.size() != h0.size()) throw Error(ErrorCode::InvalidProblem, "H0 and W differ in dimension");
  la::EigDecomp eig = la::sym_eig(h0);
  if (!(eig.values.front() > 0.0)) {
    std::ostringstream msg;
    msg << "H0 has smallest eigenvalue " << eig.values.front();
    throw Error(ErrorCode::NotPositiveDefinite, msg.str());
  }
  return eig;
}

double cluster_abs_tol(const la::EigDecomp& eig, double rel_tol) {
  if (!(rel_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "cluster tolerance must be non-negative");
  return rel_tol * std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

void check_resolvent(const PerturbationProblem& prob, double lam) {
  if (!std::isfinite(lam)) throw Error(ErrorCode::InvalidArgument, "spectral parameter is not finite");
  double dist = std::numeric_limits<double>::infinity();
  for (double mu : prob.hperp_eig().values) dist = std::min(dist, std::abs(mu - lam));
  if (dist <= 1e-10 * prob.h_norm()) {
    std::ostringstream msg;
    msg << "lambda = " << lam << " is within " << dist << " of the spectrum of H_perp";
    throw Error(ErrorCode::ResolventSingular, msg.str());
  }
}

}  // namespace

PerturbationProblem PerturbationProblem::from_index(la::SymMatrix h0, la::SymMatrix w, std::size_t distinct_index,
                                                    double cluster_tol) {
  la::EigDecomp eig = checked_h0_eig(h0, w);
  const auto groups = clusters(eig.values, cluster_abs_tol(eig, cluster_tol));
  if (distinct_index >= groups.size()) {
    std::ostringstream msg;
    msg << "H0 has " << groups.size() << " distinct eigenvalues, index " << distinct_index << " requested";
    throw Error(ErrorCode::InvalidProblem, msg.str());
  }
  const Cluster c = groups[distinct_index];
  return PerturbationProblem(std::move(h0), std::move(w), std::move(eig), c.first, c.count);
}

PerturbationProblem PerturbationProblem::from_value(la::SymMatrix h0, la::SymMatrix w, double value,
                                                    double cluster_tol) {
  la::EigDecomp eig = checked_h0_eig(h0, w);
  const double tol = cluster_abs_tol(eig, cluster_tol);
  std::size_t first = eig.values.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    if (std::abs(eig.values[i] - value) <= tol) {
      if (count == 0) first = i;
      ++count;
    }
  }
  if (count == 0) {
    std::ostringstream msg;
    msg << "no eigenvalue of H0 within " << tol << " of " << value;
    throw Error(ErrorCode::InvalidProblem, msg.str());
  }
  return PerturbationProblem(std::move(h0), std::move(w), std::move(eig), first, count);
}

PerturbationProblem::PerturbationProblem(la::SymMatrix h0, la::SymMatrix w, la::EigDecomp eig, std::size_t first,
                                         std::size_t count)
    : h0_(std::move(h0)), w_(std::move(w)), h0_eig_(std::move(eig)), first_(first), m_(count) {
  const std::size_t n = h0_.size();
  if (m_ == n) throw Error(ErrorCode::InvalidProblem, "the cluster exhausts the spectrum of H0; no gap");

  h_ = h0_ + w_;
  h_norm_ = la::op_norm(h_);

  double sum = 0.0;
  for (std::size_t i = first_; i < first_ + m_; ++i) sum += h0_eig_.values[i];
  lam0_ = sum / static_cast<double>(m_);

  gam0_ = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> perp_cols;
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= first_ && i < first_ + m_) continue;
    perp_cols.push_back(i);
    gam0_ = std::min(gam0_, std::abs(h0_eig_.values[i] - lam0_));
  }

  la::Matrix vp = h0_eig_.vectors.columns(first_, m_);
  la::Matrix vperp = h0_eig_.vectors.columns(perp_cols);

  php_ = la::congruence(vp, h_);
  pwp_ = la::congruence(vp, w_);
  hperp_ = la::congruence(vperp, h_);
  coupling_ = vperp.transpose() * (h_.dense() * vp);
  hperp_eig_ = la::sym_eig(hperp_);
  coupling_eig_ = hperp_eig_.vectors.transpose() * coupling_;

  p_ = la::OrthProjector(std::move(vp));
  pperp_ = la::OrthProjector(std::move(vperp));
}

la::SymMatrix effective_interaction(const PerturbationProblem& prob, double lam) {
  check_resolvent(prob, lam);
  const std::size_t m = prob.m();
  const la::Matrix& g = prob.coupling_eig_;
  const la::Vector& mu = prob.hperp_eig_.values;
  la::SymMatrix u(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < mu.size(); ++k) s += g(k, a) * g(k, b) / (mu[k] - lam);
      u.set(a, b, -s);
    }
  }
  return u;
}

la::SymMatrix effective_hamiltonian(const PerturbationProblem& prob, double lam) {
  return prob.php() + effective_interaction(prob, lam);
}

la::SymMatrix feshbach_map(const PerturbationProblem& prob, double lam) {
  la::SymMatrix hl = effective_hamiltonian(prob, lam);
  for (std::size_t i = 0; i < hl.size(); ++i) hl.set(i, i, hl(i, i) - lam);
  return hl;
}

la::Vector branch_eigenvalues(const PerturbationProblem& prob, double lam) {
  // Shifted by λ0 so eigensolver error tracks the branch spread, not λ0.
  la::SymMatrix shifted = effective_hamiltonian(prob, lam);
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted.set(i, i, shifted(i, i) - prob.lam0());
  la::Vector nu = la::sym_eig(shifted).values;
  for (double& x : nu) x += prob.lam0();
  return nu;
}

la::Vector q_operator_apply(const PerturbationProblem& prob, double lam, std::span<const double> phi) {
  if (phi.size() != prob.m()) throw Error(ErrorCode::InvalidArgument, "phi must have length m");
  check_resolvent(prob, lam);
  // (H⊥ - λ)^{-1} P⊥HP φ, expanded in the eigenbasis of H⊥.
  la::Vector t = prob.coupling_eig_ * phi;
  const la::Vector& mu = prob.hperp_eig_.values;
  for (std::size_t k = 0; k < t.size(); ++k) t[k] /= (mu[k] - lam);
  const la::Vector perp_coeffs = prob.hperp_eig_.vectors * t;

  la::Vector psi = prob.p().basis() * phi;
  const la::Vector correction = prob.pperp().basis() * perp_coeffs;
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] -= correction[i];
  return psi;
}

BranchSolution solve_fixed_point(const PerturbationProblem& prob, std::size_t branch, const FixedPointOptions& opts) {
  if (branch < 1 || branch > prob.m()) {
    throw Error(ErrorCode::InvalidArgument, "branch index must lie in 1..m");
  }
  if (!(opts.trust_radius >= 0.0) || !std::isfinite(opts.trust_radius)) {
    throw Error(ErrorCode::InvalidArgument, "trust radius must be finite and non-negative");
  }
  if (opts.max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be positive");

  const double lam0 = prob.lam0();
  const double scale = std::max(1.0, std::abs(lam0));
  const double tol = std::isnan(opts.tol) ? 1e-12 * scale : opts.tol;
  const double radius = opts.trust_radius;
  const double slack = 1e-12 * scale;
  const std::size_t i = branch - 1;

  BranchSolution sol;
  sol.index = branch;
  auto nu = [&](double lam) {
    ++sol.iterations;
    return branch_eigenvalues(prob, lam)[i];
  };

  bool converged = false;
  double lam = lam0;
  for (int it = 0; it < opts.max_iter; ++it) {
    const double next = nu(lam);
    if (std::abs(next - lam) <= tol) {
      sol.lam = lam;
      sol.residual = std::abs(next - lam);
      converged = true;
      break;
    }
    if (std::abs(next - lam0) > radius + slack) {
      std::ostringstream msg;
      msg << "iterate " << next << " left [" << lam0 - radius << ", " << lam0 + radius << "]";
      throw Error(ErrorCode::LeftTrustRegion, msg.str());
    }
    lam = next;
  }

  if (!converged && opts.bisection) {
    // g(λ) = ν_i(λ) - λ is decreasing; the root is bracketed by the trust interval.
    double lo = lam0 - radius;
    double hi = lam0 + radius;
    double glo = nu(lo) - lo;
    double ghi = nu(hi) - hi;
    if (glo >= 0.0 && ghi <= 0.0) {
      // Halving a double interval bottoms out well before 200 steps.
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gmid = nu(mid) - mid;
        if (std::abs(gmid) <= tol || hi - lo <= tol) {
          sol.lam = mid;
          sol.residual = std::abs(gmid);
          sol.used_bisection = true;
          converged = std::abs(gmid) <= tol;
          break;
        }
        if (gmid > 0.0) {
          lo = mid;
          glo = gmid;
        } else {
          hi = mid;
          ghi = gmid;
        }
      }
    }
  }

  if (!converged) {
    std::ostringstream msg;
    msg << "branch " << branch << " did not converge after " << sol.iterations << " evaluations";
    throw Error(ErrorCode::NoConvergence, msg.str());
  }

  const la::EigDecomp heig = la::sym_eig(effective_hamiltonian(prob, sol.lam));
  const la::Vector chi = heig.vectors.col(i);
  sol.eigenvector = q_operator_apply(prob, sol.lam, chi);
  const double nrm = la::norm2(sol.eigenvector);
  for (double& x : sol.eigenvector) x /= nrm;
  return sol;
}

}  // namespace fsm
