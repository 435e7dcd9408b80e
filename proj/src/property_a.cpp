// simo/property_a.cpp

#include "simo/property_a.hpp"

#include <string>

namespace simo {

namespace {

// Visits k-subsets of {1..n} in lexicographic order until fn returns true;
// reports whether any visit did.
template <class Fn>
bool any_subset(int n, int k, Fn&& fn) {
  if (k > n || k < 0) return false;
  std::vector<int> pick(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<size_t>(i)] = i + 1;
  for (;;) {
    if (fn(pick)) return true;
    // advance to the next combination
    int p = k - 1;
    while (p >= 0 && pick[static_cast<size_t>(p)] == n - (k - 1 - p)) --p;
    if (p < 0) return false;
    ++pick[static_cast<size_t>(p)];
    for (int q = p + 1; q < k; ++q)
      pick[static_cast<size_t>(q)] = pick[static_cast<size_t>(q - 1)] + 1;
  }
}

}  // namespace

PropertyAReport satisfies_property_a(const ComplexMatrix& a_sub, double tol) {
  const int q = static_cast<int>(a_sub.cols());
  if (q < 1 || a_sub.rows() != q + 1)
    throw std::invalid_argument(
        "satisfies_property_a: matrix must be (Q+1) x Q");
  PropertyAReport report;
  report.tolerance = tol;
  report.satisfied = true;
  const IndexSet all_cols = IndexSet::all(q);
  any_subset(q + 1, q, [&](const std::vector<int>& rows) {
    const IndexSet row_set(rows, q + 1);
    if (numerical_rank(submatrix(a_sub, row_set, all_cols), tol) < q) {
      report.satisfied = false;
      report.failing_row_subset = row_set;
      return true;
    }
    return false;
  });
  return report;
}

std::optional<IndexSet> find_admissible_subset(const ComplexMatrix& a,
                                               double tol) {
  const int t = static_cast<int>(a.rows());
  const int q = static_cast<int>(a.cols());
  if (q < 1 || q + 1 > t) return std::nullopt;
  const IndexSet all_cols = IndexSet::all(q);
  std::optional<IndexSet> found;
  any_subset(t, q + 1, [&](const std::vector<int>& rows) {
    const IndexSet row_set(rows, t);
    const ComplexMatrix slice = submatrix(a, row_set, all_cols);
    if (satisfies_property_a(slice, tol).satisfied) {
      found = row_set;
      return true;
    }
    return false;
  });
  return found;
}

std::optional<IndexSet> find_admissible_subset(const CovarianceFactor& a,
                                               double tol) {
  return find_admissible_subset(a.matrix(), tol);
}

std::optional<int> row_spark(const ComplexMatrix& a, double tol) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  if (rows < 1) throw std::invalid_argument("row_spark: matrix has no rows");
  if (rows > kSparkRowLimit)
    throw std::invalid_argument("row_spark: enumeration capped at " +
                                std::to_string(kSparkRowLimit) + " rows");
  const IndexSet all_cols = IndexSet::all(cols);
  for (int k = 1; k <= rows; ++k) {
    // any k rows with k > cols are dependent; no enumeration needed
    if (k > cols) return k;
    bool dependent = any_subset(rows, k, [&](const std::vector<int>& pick) {
      const IndexSet row_set(pick, rows);
      return numerical_rank(submatrix(a, row_set, all_cols), tol) < k;
    });
    if (dependent) return k;
  }
  return std::nullopt;
}

}  // namespace simo
