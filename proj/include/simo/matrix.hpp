// simo/matrix.hpp
//
// Dense complex linear-algebra substrate: Kronecker products, the
// diagonal-stacking operator, 1-based index-set submatrix extraction,
// determinants, tolerance-based numerical rank, and square solves.
// Dense storage throughout; every dimension in this project is desk-scale.

#ifndef SIMO_MATRIX_HPP
#define SIMO_MATRIX_HPP

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace simo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Relative singular-value threshold used by numerical_rank by default.
inline constexpr double kDefaultRankTol = 1e-10;

/// Condition numbers beyond this are treated as singular by solve_square;
/// a draw that lands here is reported, never silently regularized.
inline constexpr double kConditionLimit = 1e12;

/// Thrown when a square solve meets a singular or hopelessly
/// ill-conditioned system (a measure-zero or near-measure-zero draw).
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sorted collection of 1-based indices into a dimension of size bound().
/// All index arithmetic at module boundaries is 1-based; conversion to
/// 0-based offsets happens inside the operations.
class IndexSet {
 public:
  /// Indices must be strictly increasing and within [1, bound].
  IndexSet(std::vector<int> indices, int bound);

  /// The full set {1, ..., bound}.
  static IndexSet all(int bound);

  /// The contiguous range {first, ..., last} inside [1, bound].
  static IndexSet range(int first, int last, int bound);

  int size() const { return static_cast<int>(indices_.size()); }
  int bound() const { return bound_; }
  bool empty() const { return indices_.empty(); }

  /// k-th element (0-based position), returned as a 1-based index.
  int operator[](int k) const { return indices_[static_cast<size_t>(k)]; }

  const std::vector<int>& indices() const { return indices_; }
  bool contains(int index) const;

  /// {1, ..., bound} minus this set.
  IndexSet complement() const;

  friend bool operator==(const IndexSet& a, const IndexSet& b) = default;

 private:
  std::vector<int> indices_;
  int bound_;
};

std::ostream& operator<<(std::ostream& out, const IndexSet& set);

/// Kronecker product a (x) b; block (i,j) of the result is a(i,j)*b.
/// Convention note: an ordinary matrix product always binds before the
/// Kronecker product, so A*B (x) C means (A*B) (x) C at call sites.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Diagonal-stacking operator: for an M x N input, returns the NM x M
/// matrix whose n-th M x M block is diag(column n). Converts elementwise
/// products into matrix form: block n of dstack(a)*v equals diag(a.col(n))*v.
ComplexMatrix dstack(const ComplexMatrix& a);

/// Submatrix a[rows, cols]; "all rows"/"all columns" is IndexSet::all.
ComplexMatrix submatrix(const ComplexMatrix& a, const IndexSet& rows,
                        const IndexSet& cols);

/// Components v[rows] of a vector.
ComplexVector subvector(const ComplexVector& v, const IndexSet& rows);

/// Determinant via pivoted elimination. det of the empty 0x0 matrix is 1,
/// so products over empty index ranges fall out naturally.
Complex determinant(const ComplexMatrix& a);

/// Count of singular values exceeding tol * (largest singular value).
int numerical_rank(const ComplexMatrix& a, double tol = kDefaultRankTol);

/// Two-norm condition number; +infinity when the smallest singular value
/// is exactly zero.
double condition_number(const ComplexMatrix& a);

/// Solve a*x = b for square a. Throws SingularSystemError when the system
/// is singular or its condition number exceeds kConditionLimit. When
/// condition_out is non-null it receives the condition number of a.
ComplexVector solve_square(const ComplexMatrix& a, const ComplexVector& b,
                           double* condition_out = nullptr);

bool all_finite(const ComplexMatrix& a);

// Matrix text format: first line "rows cols", then rows*cols lines
// "re im" in row-major order. Parse errors carry "<name>:<line>:".
ComplexMatrix read_matrix(std::istream& in,
                          const std::string& name = "<stream>");
ComplexMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const ComplexMatrix& a);

}  // namespace simo

#endif  // SIMO_MATRIX_HPP
