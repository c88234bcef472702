#include "fsm/hydrogen.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fsm/error.hpp"

namespace fsm::hydrogen {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Normalized associated Legendre function
// sqrt((2ℓ+1)/(4π) (ℓ-m)!/(ℓ+m)!) P_ℓ^m(x), no Condon-Shortley phase, m ≥ 0.
double norm_legendre(int ell, int m, double x) {
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int i = 1; i <= m; ++i) pmm *= std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * s;
  if (ell == m) return pmm;
  double pm1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
  if (ell == m + 1) return pm1;
  double p2 = pmm;
  double p1 = pm1;
  for (int l = m + 2; l <= ell; ++l) {
    const double l2 = static_cast<double>(l) * l;
    const double m2 = static_cast<double>(m) * m;
    const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
    const double b = std::sqrt(((l - 1.0) * (l - 1.0) - m2) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
    const double p = a * (x * p1 - b * p2);
    p2 = p1;
    p1 = p;
  }
  return p1;
}

double radial_norm(int n, int ell) {
  const double c = 2.0 / n;
  return std::sqrt(c * c * c * factorial(n - ell - 1) / (2.0 * n * factorial(n + ell)));
}

void check_degree_order(int ell, int k) {
  if (ell < 0) throw Error(ErrorCode::InvalidDegree, "negative harmonic degree");
  if (k < -ell || k > ell) {
    std::ostringstream msg;
    msg << "order " << k << " out of range for degree " << ell;
    throw Error(ErrorCode::InvalidOrder, msg.str());
  }
}

}  // namespace

void validate(const Orbital& orb) {
  if (orb.n < 1 || orb.ell < 0 || orb.ell >= orb.n || orb.k < -orb.ell || orb.k > orb.ell) {
    std::ostringstream msg;
    msg << "invalid quantum numbers (n=" << orb.n << ", l=" << orb.ell << ", k=" << orb.k << ")";
    throw Error(ErrorCode::InvalidQuantumNumber, msg.str());
  }
}

double energy(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidQuantumNumber, "n must be at least 1");
  return -1.0 / (2.0 * n * n);
}

double laguerre(int q, double alpha, double rho) {
  if (q < 0) throw Error(ErrorCode::InvalidDegree, "Laguerre degree must be non-negative");
  double prev = 1.0;
  if (q == 0) return prev;
  double cur = 1.0 + alpha - rho;
  for (int j = 1; j < q; ++j) {
    const double next = ((2.0 * j + 1.0 + alpha - rho) * cur - (j + alpha) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double real_sph_harm(int ell, int k, double theta, double phi) {
  check_degree_order(ell, k);
  const int m = std::abs(k);
  const double p = norm_legendre(ell, m, std::cos(theta));
  if (k == 0) return p;
  const double ang = k > 0 ? std::cos(m * phi) : std::sin(m * phi);
  return std::numbers::sqrt2 * p * ang;
}

double real_sph_harm(int ell, int k, const Point3& u) {
  const double rho = std::hypot(u[0], u[1]);
  const double theta = std::atan2(rho, u[2]);
  const double phi = rho > 0.0 ? std::atan2(u[1], u[0]) : 0.0;
  return real_sph_harm(ell, k, theta, phi);
}

double radial(int n, int ell, double r) {
  validate({n, ell, 0});
  const double rho = 2.0 * r / n;
  return radial_norm(n, ell) * std::exp(-rho / 2.0) * std::pow(rho, ell) * laguerre(n - ell - 1, 2.0 * ell + 1.0, rho);
}

double radial_derivative(int n, int ell, double r) {
  validate({n, ell, 0});
  const double rho = 2.0 * r / n;
  const int q = n - ell - 1;
  const double alpha = 2.0 * ell + 1.0;
  const double lag = laguerre(q, alpha, rho);
  // d/dρ L_q^α = -L_{q-1}^{α+1}.
  const double dlag = q > 0 ? -laguerre(q - 1, alpha + 1.0, rho) : 0.0;
  const double pw = std::pow(rho, ell);
  const double dpw = ell > 0 ? ell * std::pow(rho, ell - 1) : 0.0;
  const double d_rho = std::exp(-rho / 2.0) * (-0.5 * pw * lag + dpw * lag + pw * dlag);
  return radial_norm(n, ell) * d_rho * (2.0 / n);
}

double psi(const Orbital& orb, const Point3& x) {
  validate(orb);
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  const Point3 u = r > 0.0 ? Point3{x[0] / r, x[1] / r, x[2] / r} : Point3{0.0, 0.0, 1.0};
  return radial(orb.n, orb.ell, r) * real_sph_harm(orb.ell, orb.k, u);
}

double pair_antisym(const Orbital& orb2, const Point3& x1, const Point3& x2) {
  if (orb2.n != 2) throw Error(ErrorCode::InvalidOrbital, "pair functions use an n = 2 orbital");
  validate(orb2);
  const Orbital ground{1, 0, 0};
  const double a = psi(ground, x1) * psi(orb2, x2);
  const double b = psi(orb2, x1) * psi(ground, x2);
  return (a - b) / std::numbers::sqrt2;
}

std::array<double, 5> shell_values(const Point3& x) {
  static const double c1 = 1.0 / std::sqrt(std::numbers::pi);
  static const double c2 = 1.0 / std::sqrt(32.0 * std::numbers::pi);
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  const double e2 = c2 * std::exp(-0.5 * r);
  return {c1 * std::exp(-r), e2 * (2.0 - r), e2 * x[1], e2 * x[2], e2 * x[0]};
}

}  // namespace fsm::hydrogen
