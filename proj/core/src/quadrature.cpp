#include "fsm/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>

namespace fsm::quad {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

}  // namespace

SphereRule product_rule(int L) {
  if (L < 1) throw Error(ErrorCode::InvalidSphereRule, "product rule order must be at least 1");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(L)), &gsl_integration_glfixed_table_free);
  if (!table) throw Error(ErrorCode::InvalidSphereRule, "cannot allocate Gauss-Legendre table");

  SphereRule rule;
  rule.exactness_degree = 2 * L - 1;
  rule.label = "product:" + std::to_string(L);
  const int nphi = 2 * L;
  const double dphi = 2.0 * std::numbers::pi / nphi;
  for (int i = 0; i < L; ++i) {
    double ct = 0.0;
    double wt = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &ct, &wt, table.get());
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < nphi; ++j) {
      const double ph = j * dphi;
      rule.points.push_back({st * std::cos(ph), st * std::sin(ph), ct});
      rule.weights.push_back(wt * dphi);
    }
  }
  return rule;
}

int lebedev_degree(std::size_t npoints) {
  static const std::map<std::size_t, int> degrees{
      {6, 3},     {14, 5},    {26, 7},    {38, 9},    {50, 11},   {74, 13},   {86, 15},   {110, 17},
      {146, 19},  {170, 21},  {194, 23},  {230, 25},  {266, 27},  {302, 29},  {350, 31},  {434, 35},
      {590, 41},  {770, 47},  {974, 53},  {1202, 59}, {1454, 65}, {1730, 71}, {2030, 77}, {2354, 83},
      {2702, 89}, {3074, 95}, {3470, 101}, {3890, 107}, {4334, 113}, {4802, 119}, {5294, 125}, {5810, 131}};
  const auto it = degrees.find(npoints);
  return it == degrees.end() ? 0 : it->second;
}

SphereRule load_lebedev(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  SphereRule rule;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    double x = 0, y = 0, z = 0, w = 0;
    std::string extra;
    if (!(row >> x >> y >> z >> w) || (row >> extra)) {
      throw Error(ErrorCode::InvalidSphereRule, path + ":" + std::to_string(lineno) + ": expected `x y z w`");
    }
    const double nrm = std::sqrt(x * x + y * y + z * z);
    if (std::abs(nrm - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidSphereRule, path + ":" + std::to_string(lineno) + ": point is not on the unit sphere");
    }
    if (!std::isfinite(w)) {
      throw Error(ErrorCode::InvalidSphereRule, path + ":" + std::to_string(lineno) + ": weight is not finite");
    }
    rule.points.push_back({x, y, z});
    rule.weights.push_back(w);
  }
  if (rule.points.empty()) throw Error(ErrorCode::InvalidSphereRule, path + ": no points");
  CompensatedSum total;
  for (double w : rule.weights) total.add(w);
  if (std::abs(total.value() - kFourPi) > 1e-9) {
    std::ostringstream msg;
    msg << path << ": weights sum to " << total.value() << ", expected 4π";
    throw Error(ErrorCode::InvalidSphereRule, msg.str());
  }
  rule.exactness_degree = lebedev_degree(rule.size());
  rule.label = "lebedev:" + std::to_string(rule.size());
  return rule;
}

std::string lebedev_path(const std::string& dir, int n_leb) {
  char name[32];
  std::snprintf(name, sizeof name, "lebedev_%04d.txt", n_leb);
  return dir.empty() ? std::string(name) : dir + "/" + name;
}

SphereRule parse_sphere_rule(std::string_view spec, const std::string& lebedev_dir, int n_leb) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (kind == "product") {
    if (arg.empty()) {
      if (n_leb <= 0) throw Error(ErrorCode::InvalidSphereRule, "product rule needs an order");
      return product_rule(product_order_for(n_leb));
    }
    std::size_t used = 0;
    int L = 0;
    try {
      L = std::stoi(std::string(arg), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size()) throw Error(ErrorCode::InvalidSphereRule, "bad product order '" + std::string(arg) + "'");
    return product_rule(L);
  }
  if (kind == "lebedev") {
    if (!arg.empty()) return load_lebedev(std::string(arg));
    if (n_leb <= 0) throw Error(ErrorCode::InvalidSphereRule, "lebedev rule needs a path or a point count");
    return load_lebedev(lebedev_path(lebedev_dir, n_leb));
  }
  throw Error(ErrorCode::InvalidSphereRule, "unknown sphere rule '" + std::string(spec) + "'");
}

SphereRule rotated(const SphereRule& rule, const std::array<double, 9>& rot) {
  SphereRule out = rule;
  for (auto& p : out.points) {
    const Point3 q = p;
    for (int r = 0; r < 3; ++r) p[r] = rot[3 * r] * q[0] + rot[3 * r + 1] * q[1] + rot[3 * r + 2] * q[2];
  }
  return out;
}

const std::array<Table2Row, 12>& table2() {
  static const std::array<Table2Row, 12> rows{{{1, 16, 10, 194},
                                               {2, 18, 12, 266},
                                               {3, 20, 14, 350},
                                               {4, 22, 16, 590},
                                               {5, 24, 18, 974},
                                               {6, 26, 20, 1454},
                                               {7, 28, 22, 2030},
                                               {8, 30, 24, 2702},
                                               {9, 32, 26, 3470},
                                               {10, 34, 28, 4334},
                                               {11, 34, 30, 5294},
                                               {12, 34, 32, 5810}}};
  return rows;
}

Table2Row table2_row(int index) {
  if (index < 1 || index > 12) {
    throw Error(ErrorCode::InvalidArgument, "quadrature index must lie in 1..12, got " + std::to_string(index));
  }
  return table2()[static_cast<std::size_t>(index - 1)];
}

int product_order_for(int n_leb) {
  return std::max(1, static_cast<int>(std::lround(std::sqrt(n_leb / 2.0))));
}

GridSpec table2_spec(int index, std::string_view sphere_spec, const std::string& lebedev_dir) {
  const Table2Row row = table2_row(index);
  return GridSpec{row.n_r, row.r_max, parse_sphere_rule(sphere_spec, lebedev_dir, row.n_leb)};
}

Grid build_grid(const GridSpec& spec) {
  if (spec.n_r < 2) throw Error(ErrorCode::InvalidArgument, "N_r must be at least 2");
  if (!(spec.r_max > 1.0) || !std::isfinite(spec.r_max)) throw Error(ErrorCode::InvalidArgument, "R_max must exceed 1");
  if (spec.sphere.size() == 0) throw Error(ErrorCode::InvalidSphereRule, "empty sphere rule");

  Grid g;
  const double log_r = std::log(spec.r_max);
  g.h = 2.0 * log_r / (spec.n_r - 1);
  g.n_sphere = spec.sphere.size();
  g.radii.resize(static_cast<std::size_t>(spec.n_r));
  for (int i = 0; i < spec.n_r; ++i) g.radii[static_cast<std::size_t>(i)] = std::exp(-log_r + i * g.h);
  g.radii.back() = spec.r_max;

  const std::size_t total = g.radii.size() * g.n_sphere;
  g.points.reserve(total);
  g.weights.reserve(total);
  g.inv_r.reserve(total);
  for (double r : g.radii) {
    const double radial_w = g.h * r * r * r;
    for (std::size_t n = 0; n < g.n_sphere; ++n) {
      const Point3& s = spec.sphere.points[n];
      g.points.push_back({r * s[0], r * s[1], r * s[2]});
      g.weights.push_back(radial_w * spec.sphere.weights[n]);
      g.inv_r.push_back(1.0 / r);
    }
  }
  return g;
}

double integrate_values(const std::vector<double>& values, const Grid& grid) {
  if (values.size() != grid.size()) throw Error(ErrorCode::InvalidArgument, "value count does not match grid");
  CompensatedSum s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      const Point3& x = grid.points[i];
      std::ostringstream msg;
      msg << "integrand is " << values[i] << " at (" << x[0] << ", " << x[1] << ", " << x[2] << ")";
      throw Error(ErrorCode::NonFiniteIntegrand, msg.str());
    }
    s.add(grid.weights[i] * values[i]);
  }
  return s.value();
}

double integrate(const std::function<double(const Point3&)>& f, const Grid& grid) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid.points[i]);
  return integrate_values(values, grid);
}

std::vector<double> kernel_convolve(const std::function<double(const Point3&)>& g, int alpha, const Grid& grid,
                                    int threads) {
  if (alpha != 1 && alpha != 2) throw Error(ErrorCode::InvalidArgument, "alpha must be 1 or 2");
  const auto res = convolve<1>([&](const Point3& p) { return std::array<double, 1>{g(p)}; }, grid, threads);
  const auto& src = alpha == 1 ? res.alpha1 : res.alpha2;
  std::vector<double> out(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) out[i] = src[i][0];
  return out;
}

}  // namespace fsm::quad
