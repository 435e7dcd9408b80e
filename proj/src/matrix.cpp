// simo/matrix.cpp

#include "simo/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace simo {

IndexSet::IndexSet(std::vector<int> indices, int bound)
    : indices_(std::move(indices)), bound_(bound) {
  if (bound_ < 0) throw std::invalid_argument("IndexSet: negative bound");
  int prev = 0;
  for (int i : indices_) {
    if (i <= prev)
      throw std::invalid_argument(
          "IndexSet: indices must be strictly increasing and >= 1");
    if (i > bound_)
      throw std::invalid_argument("IndexSet: index " + std::to_string(i) +
                                  " exceeds bound " + std::to_string(bound_));
    prev = i;
  }
}

IndexSet IndexSet::all(int bound) {
  std::vector<int> idx(static_cast<size_t>(std::max(bound, 0)));
  for (int i = 0; i < bound; ++i) idx[static_cast<size_t>(i)] = i + 1;
  return IndexSet(std::move(idx), bound);
}

IndexSet IndexSet::range(int first, int last, int bound) {
  std::vector<int> idx;
  for (int i = first; i <= last; ++i) idx.push_back(i);
  return IndexSet(std::move(idx), bound);
}

bool IndexSet::contains(int index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

IndexSet IndexSet::complement() const {
  std::vector<int> rest;
  rest.reserve(static_cast<size_t>(bound_ - size()));
  size_t k = 0;
  for (int i = 1; i <= bound_; ++i) {
    if (k < indices_.size() && indices_[k] == i)
      ++k;
    else
      rest.push_back(i);
  }
  return IndexSet(std::move(rest), bound_);
}

std::ostream& operator<<(std::ostream& out, const IndexSet& set) {
  for (int k = 0; k < set.size(); ++k) {
    if (k > 0) out << ',';
    out << set[k];
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix dstack(const ComplexMatrix& a) {
  const Eigen::Index m = a.rows(), n = a.cols();
  ComplexMatrix out = ComplexMatrix::Zero(n * m, m);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < m; ++i) out(j * m + i, i) = a(i, j);
  return out;
}

ComplexMatrix submatrix(const ComplexMatrix& a, const IndexSet& rows,
                        const IndexSet& cols) {
  if (rows.bound() != a.rows() || cols.bound() != a.cols())
    throw std::invalid_argument("submatrix: index-set bounds do not match");
  ComplexMatrix out(rows.size(), cols.size());
  for (int p = 0; p < rows.size(); ++p)
    for (int q = 0; q < cols.size(); ++q)
      out(p, q) = a(rows[p] - 1, cols[q] - 1);
  return out;
}

ComplexVector subvector(const ComplexVector& v, const IndexSet& rows) {
  if (rows.bound() != v.size())
    throw std::invalid_argument("subvector: index-set bound does not match");
  ComplexVector out(rows.size());
  for (int p = 0; p < rows.size(); ++p) out(p) = v(rows[p] - 1);
  return out;
}

Complex determinant(const ComplexMatrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("determinant: matrix must be square");
  if (a.rows() == 0) return Complex(1.0, 0.0);
  return a.fullPivLu().determinant();
}

int numerical_rank(const ComplexMatrix& a, double tol) {
  if (tol < 0.0) throw std::invalid_argument("numerical_rank: tol < 0");
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& sv = svd.singularValues();
  const double threshold = tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  return rank;
}

double condition_number(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 1.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

ComplexVector solve_square(const ComplexMatrix& a, const ComplexVector& b,
                           double* condition_out) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("solve_square: matrix must be square");
  if (b.size() != a.rows())
    throw std::invalid_argument("solve_square: right-hand side length");
  const double cond = condition_number(a);
  if (condition_out) *condition_out = cond;
  if (!(cond <= kConditionLimit)) {
    std::ostringstream msg;
    msg << "singular system: condition number " << cond;
    throw SingularSystemError(msg.str());
  }
  return a.partialPivLu().solve(b);
}

bool all_finite(const ComplexMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
        return false;
  return true;
}

namespace {

[[noreturn]] void parse_fail(const std::string& name, int line,
                             const std::string& what) {
  throw std::invalid_argument(name + ":" + std::to_string(line) + ": " + what);
}

// Next nonempty line, tracking the 1-based line number.
bool next_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

ComplexMatrix read_matrix(std::istream& in, const std::string& name) {
  std::string line;
  int lineno = 0;
  if (!next_line(in, line, lineno))
    parse_fail(name, lineno + 1, "missing header line \"rows cols\"");
  long rows = 0, cols = 0;
  {
    std::istringstream hdr(line);
    std::string extra;
    if (!(hdr >> rows >> cols) || (hdr >> extra))
      parse_fail(name, lineno, "expected header \"rows cols\"");
  }
  if (rows < 1 || cols < 1)
    parse_fail(name, lineno, "dimensions must be positive");
  if (rows > 4096 || cols > 4096)
    parse_fail(name, lineno, "dimensions too large");
  ComplexMatrix a(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      if (!next_line(in, line, lineno))
        parse_fail(name, lineno + 1, "unexpected end of file; expected entry (" +
                                         std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) + ")");
      std::istringstream entry(line);
      double re = 0.0, im = 0.0;
      std::string extra;
      if (!(entry >> re >> im) || (entry >> extra))
        parse_fail(name, lineno, "expected entry line \"re im\"");
      if (!std::isfinite(re) || !std::isfinite(im))
        parse_fail(name, lineno, "entries must be finite");
      a(i, j) = Complex(re, im);
    }
  }
  return a;
}

ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot open file");
  return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const ComplexMatrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  const auto prec = out.precision(17);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out << a(i, j).real() << ' ' << a(i, j).imag() << '\n';
  out.precision(prec);
}

}  // namespace simo
