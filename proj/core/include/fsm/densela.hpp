#pragma once

// Dense real linear algebra for the small symmetric problems this library
// works with (n up to a few hundred). Row-major storage throughout.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fsm::la {

using Vector = std::vector<double>;

/// Rectangular row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector col(std::size_t j) const;
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  /// Columns [first, first + count) as a rows() x count matrix.
  Matrix columns(std::size_t first, std::size_t count) const;
  Matrix columns(std::span<const std::size_t> which) const;

  double max_abs() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Aᵀ·x without forming Aᵀ.
Vector transpose_times(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

/// Real symmetric matrix. Construction validates symmetry to
/// 1e-12 * max(1, max|a_ij|) and finiteness; the stored matrix is exactly
/// symmetric (the two triangles are averaged).
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : m_(n, n) {}
  /// Throws InvalidMatrix if `a` is not square, not finite, or not symmetric.
  explicit SymMatrix(Matrix a);

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);
  static SymMatrix from_rows(std::size_t n, std::span<const double> row_major);
  /// Averages the triangles without a tolerance check (for computed products
  /// that are symmetric in exact arithmetic). Still rejects non-finite input.
  static SymMatrix symmetrized(const Matrix& a);

  std::size_t size() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v);

  const Matrix& dense() const noexcept { return m_; }
  double max_abs() const noexcept { return m_.max_abs(); }
  double trace() const noexcept;

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator*(double s, const SymMatrix& a);

 private:
  Matrix m_;
};

/// Qᵀ A Q restricted to the columns of Q (Q is n x k), symmetrized.
SymMatrix congruence(const Matrix& q, const SymMatrix& a);

struct EigDecomp {
  Vector values;   ///< ascending
  Matrix vectors;  ///< column i is the eigenvector for values[i]
};

/// Cyclic Jacobi eigensolver. Eigenvectors are sign-normalized so that the
/// entry of largest magnitude in each column is positive, which makes the
/// output a deterministic function of the input.
EigDecomp sym_eig(const SymMatrix& a);

/// max_i |λ_i(A)|.
double op_norm(const SymMatrix& a);

/// Spectral 2-norm of a rectangular matrix, sqrt(λ_max(AᵀA)).
double op_norm(const Matrix& a);

enum class SpectralDomain { any, positive };

/// Q f(Λ) Qᵀ. With SpectralDomain::positive every eigenvalue must be > 0,
/// otherwise NotPositiveDefinite is thrown.
SymMatrix spectral_apply(const SymMatrix& a, const std::function<double(double)>& f,
                         SpectralDomain domain = SpectralDomain::any);

/// A^{-1/2} for positive definite A.
SymMatrix inverse_sqrt(const SymMatrix& a);

/// Solves (A - shift·I) x = b. Throws SingularShift if shift lies within
/// 1e-12·‖A‖ of an eigenvalue of A.
Vector solve_shifted(const SymMatrix& a, double shift, std::span<const double> b);
/// Same, reusing a precomputed decomposition of A.
Vector solve_shifted(const SymMatrix& a, const EigDecomp& eig, double shift,
                     std::span<const double> b);

/// Orthogonal projector represented by an orthonormal basis of its range.
class OrthProjector {
 public:
  OrthProjector() = default;
  /// `basis` is n x m with orthonormal columns (checked to 1e-10).
  explicit OrthProjector(Matrix basis);

  std::size_t ambient_dim() const noexcept { return basis_.rows(); }
  std::size_t rank() const noexcept { return basis_.cols(); }
  const Matrix& basis() const noexcept { return basis_; }

  Vector apply(std::span<const double> x) const;
  Matrix materialize() const;

 private:
  Matrix basis_;
};

// Matrix text format: first line `n`, then n lines of n numbers.
SymMatrix read_matrix(std::istream& in);
SymMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const SymMatrix& a);

}  // namespace fsm::la
