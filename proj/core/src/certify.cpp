#include "fsm/certify.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "fsm/error.hpp"

namespace fsm {

CertifyParams CertifyParams::make(double a, double b) {
  if (!(b > 0.0 && b < 1.0)) throw Error(ErrorCode::InvalidArgument, "b must lie in (0, 1)");
  if (!(a > 0.0 && a < 1.0 - b)) throw Error(ErrorCode::InvalidArgument, "a must lie in (0, 1 - b)");
  return CertifyParams{a, b};
}

double form_norm(const la::SymMatrix& w, const la::SymMatrix& h0) {
  const la::SymMatrix s = la::inverse_sqrt(h0);
  return la::op_norm(la::congruence(s.dense(), w));
}

double form_norm(const la::Matrix& a, const la::SymMatrix& h0) {
  if (a.rows() != h0.size() || a.cols() != h0.size()) {
    throw Error(ErrorCode::InvalidArgument, "form_norm: shape mismatch");
  }
  const la::SymMatrix s = la::inverse_sqrt(h0);
  return la::op_norm(s.dense() * (a * s.dense()));
}

namespace {

la::Matrix perp_w_p(const PerturbationProblem& prob) {
  return prob.pperp().materialize() * (prob.w().dense() * prob.p().materialize());
}

}  // namespace

double phi(const PerturbationProblem& prob) {
  const double fn = form_norm(perp_w_p(prob), prob.h0());
  return prob.lam0() * prob.lam_star() / prob.gam0() * fn * fn;
}

double phi_upper(const PerturbationProblem& prob) {
  // PWP⊥WP in the P-basis is GᵀG with G = (P⊥-basis)ᵀ W (P-basis).
  const la::Matrix& vp = prob.p().basis();
  const la::Matrix& vq = prob.pperp().basis();
  const la::Matrix g = vq.transpose() * (prob.w().dense() * vp);
  const la::SymMatrix gram = la::SymMatrix::symmetrized(g.transpose() * g);
  return la::op_norm(gram) / prob.gam0();
}

Certificate check_conditions(const PerturbationProblem& prob, const CertifyParams& params) {
  Certificate c;
  c.a = params.a;
  c.b = params.b;
  c.k = params.k();
  c.lam0 = prob.lam0();
  c.gam0 = prob.gam0();
  c.lam_star = prob.lam_star();
  c.m = prob.m();

  const la::Matrix pperp = prob.pperp().materialize();
  const la::SymMatrix wperp = la::SymMatrix::symmetrized(pperp * (prob.w().dense() * pperp));
  c.form_norm_wperp = form_norm(wperp, prob.h0());
  c.form_norm_coupling = form_norm(perp_w_p(prob), prob.h0());
  c.phi = c.lam0 * c.lam_star / c.gam0 * c.form_norm_coupling * c.form_norm_coupling;
  c.phi_upper = phi_upper(prob);

  const la::EigDecomp pwp_eig = la::sym_eig(prob.pwp());
  c.pwp_norm = std::max(std::abs(pwp_eig.values.front()), std::abs(pwp_eig.values.back()));
  c.mu_min = pwp_eig.values.front();

  c.delta = c.pwp_norm + c.k * c.phi;
  c.r = c.delta / c.gam0;
  c.cond1 = c.form_norm_wperp <= c.b * c.gam0 / c.lam_star;
  c.cond2 = c.pwp_norm + c.k * c.phi < c.a * c.gam0;
  c.cond3 = c.k * c.phi < 0.5 * (c.a * c.gam0 - c.pwp_norm);

  c.eig_interval = {c.lam0 - c.delta, c.lam0 + c.delta};
  c.vec_bound = c.k * std::sqrt(c.phi / c.gam0);
  if (c.m == 1) {
    c.mean_w = prob.pwp()(0, 0);
    c.second_order = Interval{c.lam0 + c.mean_w - c.k * c.phi, c.lam0 + c.mean_w + c.k * c.phi};
  } else if (prob.is_lowest()) {
    c.lowest = Interval{c.lam0 + c.mu_min - c.k * c.phi, c.lam0 + c.mu_min};
  }
  return c;
}

std::string_view to_string(EnclosureKind kind) noexcept {
  switch (kind) {
    case EnclosureKind::first_order: return "first_order";
    case EnclosureKind::second_order: return "second_order";
    case EnclosureKind::lowest: return "lowest";
  }
  return "unknown";
}

namespace {

void require_valid(const Certificate& cert, bool force) {
  if (cert.valid() || force) return;
  std::ostringstream msg;
  msg << "conditions not satisfied (cond1=" << cert.cond1 << ", cond2=" << cert.cond2 << ", cond3=" << cert.cond3
      << ")";
  throw Error(ErrorCode::InvalidCertificate, msg.str());
}

}  // namespace

std::vector<Enclosure> eigenvalue_enclosures(const Certificate& cert, bool force) {
  require_valid(cert, force);
  std::vector<Enclosure> out{{EnclosureKind::first_order, cert.eig_interval}};
  if (cert.second_order) out.push_back({EnclosureKind::second_order, *cert.second_order});
  if (cert.lowest) out.push_back({EnclosureKind::lowest, *cert.lowest});
  return out;
}

double eigenvector_bound(const Certificate& cert, bool force) {
  require_valid(cert, force);
  return cert.vec_bound;
}

FixedPointOptions fixed_point_options(const Certificate& cert, bool force) {
  require_valid(cert, force);
  FixedPointOptions opts;
  opts.trust_radius = cert.valid() ? cert.r * cert.gam0 : cert.a * cert.gam0;
  return opts;
}

void write_certificate(std::ostream& out, const Certificate& c) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  auto flag = [](bool v) { return v ? "true" : "false"; };
  out << "cond1=" << flag(c.cond1) << '\n'
      << "cond2=" << flag(c.cond2) << '\n'
      << "cond3=" << flag(c.cond3) << '\n'
      << "a=" << c.a << '\n'
      << "b=" << c.b << '\n'
      << "k=" << c.k << '\n'
      << "r=" << c.r << '\n'
      << "phi=" << c.phi << '\n'
      << "pwp_norm=" << c.pwp_norm << '\n'
      << "delta=" << c.delta << '\n'
      << "vec_bound=" << c.vec_bound << '\n'
      << "valid=" << flag(c.valid()) << '\n'
      << "lam0=" << c.lam0 << '\n'
      << "m=" << c.m << '\n'
      << "gam0=" << c.gam0 << '\n'
      << "lam_star=" << c.lam_star << '\n'
      << "form_norm_wperp=" << c.form_norm_wperp << '\n'
      << "phi_upper=" << c.phi_upper << '\n'
      << "eig_low=" << c.eig_interval.lo << '\n'
      << "eig_high=" << c.eig_interval.hi << '\n';
  if (c.second_order) {
    out << "mean_w=" << c.mean_w << '\n'
        << "second_order_low=" << c.second_order->lo << '\n'
        << "second_order_high=" << c.second_order->hi << '\n';
  }
  if (c.lowest) {
    out << "mu_min=" << c.mu_min << '\n'
        << "lowest_low=" << c.lowest->lo << '\n'
        << "lowest_high=" << c.lowest->hi << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

}  // namespace fsm
