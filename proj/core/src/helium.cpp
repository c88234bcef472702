#include "fsm/helium.hpp"

#include <cmath>
#include <utility>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "fsm/hydrogen.hpp"

namespace fsm::helium {

HeliumConstants rounded_constants() { return {0.6, 0.3, 0.20, 0.01, "rounded"}; }

std::string_view to_string(Symmetry s) noexcept { return s == Symmetry::sym ? "sym" : "antisym"; }
std::string_view to_string(Rounding r) noexcept { return r == Rounding::paper ? "paper" : "full"; }

namespace {

using hydrogen::shell_values;

W1W2 finish_w1_w2(const quad::Grid& grid, const std::vector<double>& dens, const std::vector<double>& phi1,
                  const std::vector<double>& phi2) {
  std::vector<double> f1(grid.size()), f2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f1[i] = dens[i] * phi1[i];
    f2[i] = dens[i] * phi2[i];
  }
  W1W2 r;
  r.c1 = quad::integrate_values(f1, grid);
  r.c2 = quad::integrate_values(f2, grid);
  r.w1 = r.c1;
  r.w2 = r.c2 - r.c1 * r.c1;
  return r;
}

}  // namespace

W1W2 compute_w1_w2(const quad::Grid& grid, int threads) {
  auto g = [](const quad::Point3& p) {
    const double v = shell_values(p)[0];
    return std::array<double, 1>{v * v};
  };
  const auto conv = quad::convolve<1>(g, grid, threads);
  std::vector<double> dens(grid.size()), phi1(grid.size()), phi2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = shell_values(grid.points[i])[0];
    dens[i] = v * v;
    phi1[i] = conv.alpha1[i][0];
    phi2[i] = conv.alpha2[i][0];
  }
  return finish_w1_w2(grid, dens, phi1, phi2);
}

namespace {

// Index of ψ_2a ψ_2b (a ≤ b) among the ten shell products.
constexpr std::size_t pair_slot(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return a * 4 - a * (a - 1) / 2 + (b - a);
}

template <std::size_t K, class G>
FullResult assemble(const quad::Grid& grid, int threads, const G& integrands, DirectOrdering ordering) {
  const auto conv = quad::convolve<K>(integrands, grid, threads);
  const std::size_t n = grid.size();
  std::vector<std::array<double, 5>> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = shell_values(grid.points[i]);

  FullResult out;
  {
    std::vector<double> dens(n), phi1(n), phi2(n);
    for (std::size_t i = 0; i < n; ++i) {
      dens[i] = vals[i][0] * vals[i][0];
      phi1[i] = conv.alpha1[i][0];
      phi2[i] = conv.alpha2[i][0];
    }
    out.sym = finish_w1_w2(grid, dens, phi1, phi2);
  }

  la::Matrix a(4, 4), b(4, 4), c(4, 4), d(4, 4);
  std::vector<double> f(n);
  auto contract = [&](auto&& integrand) {
    for (std::size_t i = 0; i < n; ++i) f[i] = integrand(i);
    return quad::integrate_values(f, grid);
  };
  for (std::size_t p = 0; p < 4; ++p) {
    for (std::size_t q = 0; q < 4; ++q) {
      if (ordering == DirectOrdering::convolve_ground) {
        a(p, q) = contract([&](std::size_t i) { return vals[i][p + 1] * vals[i][q + 1] * conv.alpha1[i][0]; });
        c(p, q) = contract([&](std::size_t i) { return vals[i][p + 1] * vals[i][q + 1] * conv.alpha2[i][0]; });
      } else {
        const std::size_t slot = 5 + pair_slot(p, q);
        a(p, q) = contract([&](std::size_t i) { return vals[i][0] * vals[i][0] * conv.alpha1[i][slot]; });
        c(p, q) = contract([&](std::size_t i) { return vals[i][0] * vals[i][0] * conv.alpha2[i][slot]; });
      }
      b(p, q) = contract([&](std::size_t i) { return vals[i][0] * vals[i][p + 1] * conv.alpha1[i][q + 1]; });
      d(p, q) = contract([&](std::size_t i) { return vals[i][0] * vals[i][p + 1] * conv.alpha2[i][q + 1]; });
    }
  }
  PairMatrices& pm = out.pairs;
  pm.A = la::SymMatrix::symmetrized(a);
  pm.B = la::SymMatrix::symmetrized(b);
  pm.C = la::SymMatrix::symmetrized(c);
  pm.D = la::SymMatrix::symmetrized(d);
  pm.M = pm.A - pm.B;
  pm.N = pm.C - pm.D;
  pm.Q = pm.N - la::SymMatrix::symmetrized(pm.M.dense() * pm.M.dense());

  const auto [w1_as, w2_as] = compute_w_as(pm);
  out.constants = {out.sym.w1, out.sym.w2, w1_as, w2_as, "quadrature"};
  return out;
}

}  // namespace

FullResult compute_all(const quad::Grid& grid, int threads, DirectOrdering ordering) {
  // Slot 0: |ψ1|²; slots 1-4: ψ1 ψ_2a; slots 5-14 (shell ordering only): ψ_2a ψ_2b, a ≤ b.
  if (ordering == DirectOrdering::convolve_ground) {
    auto g = [](const quad::Point3& p) {
      const auto s = shell_values(p);
      return std::array<double, 5>{s[0] * s[0], s[0] * s[1], s[0] * s[2], s[0] * s[3], s[0] * s[4]};
    };
    return assemble<5>(grid, threads, g, ordering);
  }
  auto g = [](const quad::Point3& p) {
    const auto s = shell_values(p);
    std::array<double, 15> v{s[0] * s[0], s[0] * s[1], s[0] * s[2], s[0] * s[3], s[0] * s[4]};
    std::size_t k = 5;
    for (std::size_t a = 1; a <= 4; ++a)
      for (std::size_t b = a; b <= 4; ++b) v[k++] = s[a] * s[b];
    return v;
  };
  return assemble<15>(grid, threads, g, ordering);
}

PairMatrices compute_pair_matrices(const quad::Grid& grid, int threads, DirectOrdering ordering) {
  return compute_all(grid, threads, ordering).pairs;
}

std::pair<double, double> compute_w_as(const PairMatrices& pm) {
  const la::EigDecomp em = la::sym_eig(pm.M);
  const la::EigDecomp eq = la::sym_eig(pm.Q);
  return {em.values.front(), eq.values.back()};
}

EnergyEnclosure energy_bounds(double z, Symmetry symmetry, const HeliumConstants& computed, Rounding rounding) {
  const HeliumConstants k = rounding == Rounding::paper ? rounded_constants() : computed;
  const Thresholds th = thresholds(k);
  EnergyEnclosure e;
  e.z = z;
  e.symmetry = symmetry;
  if (symmetry == Symmetry::sym) {
    e.c = kCSym;
    e.gam0 = kGam0Sym;
    e.w1 = k.w1;
    e.w2 = k.w2;
    e.z_min = th.z_min_sym;
  } else {
    e.c = kCAs;
    e.gam0 = kGam0As;
    e.w1 = k.w1_as;
    e.w2 = k.w2_as;
    e.z_min = th.z_min_as;
  }
  e.upper = -e.c * z * z + e.w1 * z;
  e.lower = e.upper - e.k * e.w2 / e.gam0;
  e.z_valid = z >= e.z_min;
  return e;
}

Thresholds thresholds(const HeliumConstants& k) {
  Thresholds t;
  t.z_min_sym = (9.0 + kGam0Sym) / kGam0Sym / kB;
  t.z_min_as = (9.0 + kGam0Sym + kGam0As) / (kB * kGam0As);
  t.z_star = kK * k.w2 / (k.w1 * kGam0Sym);
  const double qa = kCSym - kCAs;
  const double qb = k.w1 - k.w1_as;
  auto root = [&](double coef) {
    const double qc = coef * k.w2_as;
    return (qb + std::sqrt(qb * qb + 4.0 * qa * qc)) / (2.0 * qa);
  };
  t.crossover = root(kK / kGam0As);
  t.crossover_160 = root(160.0);
  return t;
}

std::vector<Table1Row> table1(const HeliumConstants& computed, Rounding rounding) {
  std::vector<Table1Row> rows;
  for (const auto& [z, e_exact] : kReferenceEnergies) {
    const EnergyEnclosure e = energy_bounds(z, Symmetry::sym, computed, rounding);
    Table1Row r;
    r.z = z;
    r.e_exact = e_exact;
    r.e_lead = e.upper;
    r.delta_pct = 100.0 * e.k * e.w2 / (-e.upper * e.gam0);
    r.err_pct = 100.0 * std::abs(e_exact - e.upper) / (-e.upper);
    r.lower = e.lower;
    r.upper = e.upper;
    r.in_interval = e.lower <= e_exact && e_exact <= e.upper;
    rows.push_back(r);
  }
  return rows;
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << "z,E_exact,E_lead,delta_pct,err_pct,lower,upper,in_interval\n" << std::setprecision(10);
  for (const auto& r : rows) {
    out << r.z << ',' << r.e_exact << ',' << r.e_lead << ',' << r.delta_pct << ',' << r.err_pct << ',' << r.lower
        << ',' << r.upper << ',' << (r.in_interval ? "true" : "false") << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

void write_table1_text(std::ostream& out, const std::vector<Table1Row>& rows) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::left << std::setw(6) << "z" << std::setw(11) << "-E_exact" << std::setw(11) << "main part"
      << std::setw(10) << "delta %" << std::setw(10) << "err %" << std::setw(22) << "interval"
      << "E_exact inside\n";
  out << std::fixed;
  for (const auto& r : rows) {
    std::ostringstream interval;
    interval << std::fixed << std::setprecision(1) << '[' << r.lower << ", " << r.upper << ']';
    out << std::setw(6) << r.z << std::setw(11) << std::setprecision(1) << -r.e_exact << std::setw(11)
        << std::setprecision(1) << -r.e_lead << std::setw(10) << std::setprecision(2) << r.delta_pct << std::setw(10)
        << std::setprecision(3) << r.err_pct << std::setw(22) << interval.str() << (r.in_interval ? "yes" : "no")
        << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << "index,w1,w2,w1_as,w2_as\n" << std::setprecision(12);
  for (const auto& r : rows) {
    out << r.index << ',' << r.constants.w1 << ',' << r.constants.w2 << ',' << r.constants.w1_as << ','
        << r.constants.w2_as << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

}  // namespace fsm::helium
