#include "fsm/densela.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "fsm/error.hpp"

namespace fsm::la {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kJacobiTol = 1e-14;
constexpr int kJacobiMaxSweeps = 100;

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::InvalidArgument, std::string("shape mismatch in ") + op);
  }
}

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

// ---------------------------------------------------------------- Matrix

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector Matrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw Error(ErrorCode::InvalidArgument, "column range out of bounds");
  Matrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  return out;
}

Matrix Matrix::columns(std::span<const std::size_t> which) const {
  Matrix out(rows_, which.size());
  for (std::size_t j = 0; j < which.size(); ++j) {
    if (which[j] >= cols_) throw Error(ErrorCode::InvalidArgument, "column index out of bounds");
    for (std::size_t i = 0; i < rows_; ++i) out(i, j) = (*this)(i, which[j]);
  }
  return out;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::InvalidArgument, "shape mismatch in product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "sum");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "difference");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::InvalidArgument, "shape mismatch in mat-vec");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Vector transpose_times(const Matrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw Error(ErrorCode::InvalidArgument, "shape mismatch in Aᵀx");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * x[i];
  return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

// ------------------------------------------------------------- SymMatrix

SymMatrix::SymMatrix(Matrix a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidMatrix, "matrix is not square");
  if (!all_finite(a.data())) throw Error(ErrorCode::InvalidMatrix, "matrix has non-finite entries");
  const double tol = kSymmetryTol * std::max(1.0, a.max_abs());
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol) {
        std::ostringstream msg;
        msg << "asymmetric entries at (" << i << "," << j << "): " << a(i, j) << " vs " << a(j, i);
        throw Error(ErrorCode::InvalidMatrix, msg.str());
      }
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  }
  m_ = std::move(a);
}

SymMatrix SymMatrix::identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return SymMatrix(std::move(m));
}

SymMatrix SymMatrix::from_rows(std::size_t n, std::span<const double> row_major) {
  if (row_major.size() != n * n) throw Error(ErrorCode::InvalidMatrix, "expected n*n entries");
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = row_major[i * n + j];
  return SymMatrix(std::move(m));
}

SymMatrix SymMatrix::symmetrized(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidMatrix, "matrix is not square");
  if (!all_finite(a.data())) throw Error(ErrorCode::InvalidMatrix, "matrix has non-finite entries");
  SymMatrix s(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    s.m_(i, i) = a(i, i);
    for (std::size_t j = i + 1; j < a.rows(); ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      s.m_(i, j) = avg;
      s.m_(j, i) = avg;
    }
  }
  return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidMatrix, "non-finite entry");
  m_(i, j) = v;
  m_(j, i) = v;
}

double SymMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < size(); ++i) t += m_(i, i);
  return t;
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) { return SymMatrix::symmetrized(a.m_ + b.m_); }
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return SymMatrix::symmetrized(a.m_ - b.m_); }
SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix::symmetrized(s * a.m_); }

SymMatrix congruence(const Matrix& q, const SymMatrix& a) {
  return SymMatrix::symmetrized(q.transpose() * (a.dense() * q));
}

// ----------------------------------------------------------- eigensolver

EigDecomp sym_eig(const SymMatrix& sym) {
  const std::size_t n = sym.size();
  Matrix a = sym.dense();
  Matrix v = Matrix::identity(n);
  if (!all_finite(a.data())) throw Error(ErrorCode::InvalidMatrix, "matrix has non-finite entries");

  double frob2 = 0.0;
  for (double x : a.data()) frob2 += x * x;
  const double threshold = kJacobiTol * std::sqrt(frob2);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep <= kJacobiMaxSweeps; ++sweep) {
    if (off_norm() <= threshold) break;
    if (sweep == kJacobiMaxSweeps) {
      throw Error(ErrorCode::NoConvergence, "Jacobi did not converge in 100 sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigDecomp out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.values[c] = a(src, src);
    std::size_t big = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (std::abs(v(k, src)) > std::abs(v(big, src))) big = k;
    const double sign = v(big, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, c) = sign * v(k, src);
  }
  return out;
}

double op_norm(const SymMatrix& a) {
  if (a.size() == 0) return 0.0;
  const EigDecomp e = sym_eig(a);
  return std::max(std::abs(e.values.front()), std::abs(e.values.back()));
}

double op_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const Matrix at = a.transpose();
  const SymMatrix gram = a.cols() <= a.rows() ? SymMatrix::symmetrized(at * a) : SymMatrix::symmetrized(a * at);
  const EigDecomp e = sym_eig(gram);
  return std::sqrt(std::max(0.0, e.values.back()));
}

SymMatrix spectral_apply(const SymMatrix& a, const std::function<double(double)>& f, SpectralDomain domain) {
  const EigDecomp e = sym_eig(a);
  const std::size_t n = a.size();
  Vector fv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (domain == SpectralDomain::positive && !(e.values[i] > 0.0)) {
      std::ostringstream msg;
      msg << "eigenvalue " << e.values[i] << " is not positive";
      throw Error(ErrorCode::NotPositiveDefinite, msg.str());
    }
    fv[i] = f(e.values[i]);
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += e.vectors(i, k) * fv[k] * e.vectors(j, k);
      out(i, j) = s;
      out(j, i) = s;
    }
  return SymMatrix::symmetrized(out);
}

SymMatrix inverse_sqrt(const SymMatrix& a) {
  return spectral_apply(a, [](double x) { return 1.0 / std::sqrt(x); }, SpectralDomain::positive);
}

Vector solve_shifted(const SymMatrix& a, double shift, std::span<const double> b) {
  return solve_shifted(a, sym_eig(a), shift, b);
}

Vector solve_shifted(const SymMatrix& a, const EigDecomp& eig, double shift, std::span<const double> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw Error(ErrorCode::InvalidArgument, "right-hand side has wrong length");
  if (n == 0) return {};
  const double scale = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
  double dist = std::numeric_limits<double>::infinity();
  for (double lam : eig.values) dist = std::min(dist, std::abs(lam - shift));
  if (dist <= 1e-12 * scale || dist == 0.0) {
    std::ostringstream msg;
    msg << "shift " << shift << " is within " << dist << " of an eigenvalue";
    throw Error(ErrorCode::SingularShift, msg.str());
  }

  auto apply_inverse = [&](std::span<const double> rhs) {
    Vector coeff = transpose_times(eig.vectors, rhs);
    for (std::size_t k = 0; k < n; ++k) coeff[k] /= (eig.values[k] - shift);
    return eig.vectors * coeff;
  };

  Vector x = apply_inverse(b);
  // One step of iterative refinement against the original matrix.
  Vector r(b.begin(), b.end());
  const Vector ax = a.dense() * x;
  for (std::size_t i = 0; i < n; ++i) r[i] -= ax[i] - shift * x[i];
  const Vector dx = apply_inverse(r);
  for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
  return x;
}

// ---------------------------------------------------------- OrthProjector

OrthProjector::OrthProjector(Matrix basis) : basis_(std::move(basis)) {
  const Matrix gram = basis_.transpose() * basis_;
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < gram.cols(); ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(gram(i, j) - expected) > 1e-10) {
        throw Error(ErrorCode::InvalidArgument, "projector basis is not orthonormal");
      }
    }
}

Vector OrthProjector::apply(std::span<const double> x) const {
  return basis_ * transpose_times(basis_, x);
}

Matrix OrthProjector::materialize() const { return basis_ * basis_.transpose(); }

// ------------------------------------------------------------------- I/O

SymMatrix read_matrix(std::istream& in) {
  std::string line;
  long long n = -1;
  // Skip blank lines before the dimension.
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream head(line);
    if (!(head >> n) || n <= 0) throw Error(ErrorCode::InvalidMatrix, "first line must be a positive dimension");
    break;
  }
  if (n <= 0) throw Error(ErrorCode::InvalidMatrix, "missing dimension line");
  const auto dim = static_cast<std::size_t>(n);
  std::vector<double> values;
  values.reserve(dim * dim);
  std::size_t rows_read = 0;
  while (rows_read < dim && std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::size_t count = 0;
    std::string token;
    while (row >> token) {
      try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        values.push_back(v);
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidMatrix, "unparseable entry '" + token + "' in row " + std::to_string(rows_read + 1));
      }
      ++count;
    }
    if (count != dim) {
      throw Error(ErrorCode::InvalidMatrix, "row " + std::to_string(rows_read + 1) + " has " + std::to_string(count) +
                                                " entries, expected " + std::to_string(dim));
    }
    ++rows_read;
  }
  if (rows_read != dim) throw Error(ErrorCode::InvalidMatrix, "expected " + std::to_string(dim) + " rows");
  return SymMatrix::from_rows(dim, values);
}

SymMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const SymMatrix& a) {
  const auto old_flags = out.flags();
  const auto old_prec = out.precision();
  out << a.size() << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j) out << ' ';
      out << a(i, j);
    }
    out << '\n';
  }
  out.flags(old_flags);
  out.precision(old_prec);
}

}  // namespace fsm::la
