#pragma once

// Product grids (logarithmic radial nodes × a sphere rule) for integrals over
// R³, and shifted-kernel convolutions Σ_j ω_j g(x - x_j)/|x_j|^α on them.

#include <array>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fsm/error.hpp"

namespace fsm::quad {

using Point3 = std::array<double, 3>;

struct SphereRule {
  std::vector<Point3> points;
  std::vector<double> weights;  ///< steradians, Σ = 4π; the 266-point Lebedev rule has negative entries
  int exactness_degree = 0;
  std::string label;

  std::size_t size() const noexcept { return points.size(); }
};

/// Gauss-Legendre in cos θ (L nodes) × 2L equispaced φ; exact to degree 2L-1.
SphereRule product_rule(int L);

/// `x y z w` per line, '#' comments. Throws IoError or InvalidSphereRule.
SphereRule load_lebedev(const std::string& path);

/// Exactness degree of the Lebedev rule with `npoints` points, 0 if unknown.
int lebedev_degree(std::size_t npoints);

/// "product:L", "lebedev:PATH", or "lebedev" (resolved against `lebedev_dir`
/// with the point count `n_leb`).
SphereRule parse_sphere_rule(std::string_view spec, const std::string& lebedev_dir = {}, int n_leb = 0);

/// Path of the bundled rule with `n_leb` points inside `dir`.
std::string lebedev_path(const std::string& dir, int n_leb);

/// Applies the orthogonal 3x3 matrix `rot` (row-major) to every point.
SphereRule rotated(const SphereRule& rule, const std::array<double, 9>& rot);

struct Table2Row {
  int index;
  double r_max;
  int n_r;
  int n_leb;
};

/// Rows 1..12 of the reference parameter table.
const std::array<Table2Row, 12>& table2();
/// Throws InvalidArgument outside 1..12.
Table2Row table2_row(int index);
/// round(sqrt(n_leb/2)): the product rule with about as many points.
int product_order_for(int n_leb);

struct GridSpec {
  int n_r = 0;
  double r_max = 0.0;
  SphereRule sphere;
};

struct Grid {
  std::vector<Point3> points;  ///< radial-major: index i * n_sphere + n
  std::vector<double> weights;
  std::vector<double> radii;   ///< r_i, length n_r
  std::vector<double> inv_r;   ///< 1/|x| per point
  std::size_t n_sphere = 0;
  double h = 0.0;

  std::size_t size() const noexcept { return points.size(); }
};

/// Table row `index` with the sphere rule chosen by `sphere_spec` (see
/// parse_sphere_rule; a bare "product" or "lebedev" follows the row's N_leb).
GridSpec table2_spec(int index, std::string_view sphere_spec, const std::string& lebedev_dir = {});

/// r_i = exp(-ln R_max + (i-1)h), h = 2 ln(R_max)/(N_r - 1), ω_{i,n} = h r_i³ ω_n.
Grid build_grid(const GridSpec& spec);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

/// Σ ω_i f(x_i) in grid order. Throws NonFiniteIntegrand.
double integrate(const std::function<double(const Point3&)>& f, const Grid& grid);

/// Σ ω_i f_i for precomputed values.
double integrate_values(const std::vector<double>& values, const Grid& grid);

template <std::size_t K>
struct ConvolveResult {
  std::vector<std::array<double, K>> alpha1;  ///< Σ_j ω_j g(x - x_j)/|x_j|
  std::vector<std::array<double, K>> alpha2;  ///< Σ_j ω_j g(x - x_j)/|x_j|²
};

/// Evaluates both kernels for K integrands at every grid point. `g` maps a
/// point to std::array<double, K>. Cost is O(size²); the inner sum streams.
/// Each output element is summed in fixed order, so results do not depend on
/// `threads`.
template <std::size_t K, class G>
ConvolveResult<K> convolve(const G& g, const Grid& grid, int threads = 1) {
  const std::size_t n = grid.size();
  ConvolveResult<K> out;
  out.alpha1.assign(n, {});
  out.alpha2.assign(n, {});

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Point3& x = grid.points[i];
      std::array<CompensatedSum, K> s1{};
      std::array<CompensatedSum, K> s2{};
      for (std::size_t j = 0; j < n; ++j) {
        const Point3& z = grid.points[j];
        const std::array<double, K> v = g(Point3{x[0] - z[0], x[1] - z[1], x[2] - z[2]});
        const double w1 = grid.weights[j] * grid.inv_r[j];
        const double w2 = w1 * grid.inv_r[j];
        for (std::size_t c = 0; c < K; ++c) {
          s1[c].add(w1 * v[c]);
          s2[c].add(w2 * v[c]);
        }
      }
      for (std::size_t c = 0; c < K; ++c) {
        out.alpha1[i][c] = s1[c].value();
        out.alpha2[i][c] = s2[c].value();
        if (!std::isfinite(out.alpha1[i][c]) || !std::isfinite(out.alpha2[i][c])) {
          std::ostringstream msg;
          msg << "non-finite convolution value at (" << x[0] << ", " << x[1] << ", " << x[2] << ")";
          throw Error(ErrorCode::NonFiniteIntegrand, msg.str());
        }
      }
    }
  };

  const std::size_t t = threads < 1 ? 1 : static_cast<std::size_t>(threads);
  if (t == 1 || n < 2 * t) {
    work(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (n + t - 1) / t;
  for (std::size_t b = 0; b < n; b += chunk) {
    const std::size_t e = std::min(n, b + chunk);
    pool.emplace_back([&, b, e] {
      try {
        work(b, e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Single-integrand convenience form. alpha ∈ {1, 2}.
std::vector<double> kernel_convolve(const std::function<double(const Point3&)>& g, int alpha, const Grid& grid,
                                    int threads = 1);

}  // namespace fsm::quad
