// simo/property_a.hpp
//
// Row-independence certification of covariance factors. A (Q+1) x Q factor
// slice is admissible when every Q of its rows are linearly independent;
// equivalently its smallest linearly dependent row set has size Q+1.

#ifndef SIMO_PROPERTY_A_HPP
#define SIMO_PROPERTY_A_HPP

#include <optional>

#include "simo/channel.hpp"
#include "simo/matrix.hpp"

namespace simo {

/// row_spark enumerates subsets exhaustively; beyond this many rows it
/// refuses rather than run a 2^rows search.
inline constexpr int kSparkRowLimit = 24;

struct PropertyAReport {
  bool satisfied = false;
  /// A row subset of size Q with rank < Q; present exactly when the
  /// verdict is negative (the lexicographically smallest such subset).
  std::optional<IndexSet> failing_row_subset;
  /// The check is a numeric proxy for an exact-arithmetic notion, so the
  /// verdict always carries the tolerance it was made at.
  double tolerance = kDefaultRankTol;
};

/// a_sub must be (Q+1) x Q. Satisfied iff all Q+1 leave-one-out row
/// subsets have numerical rank Q at tolerance tol.
PropertyAReport satisfies_property_a(const ComplexMatrix& a_sub,
                                     double tol = kDefaultRankTol);

/// Lexicographically smallest (Q+1)-row subset of the factor whose slice
/// satisfies the row-independence property; {1,...,Q+1} is therefore
/// preferred whenever it qualifies. Empty when no subset qualifies (in
/// particular for any matrix of rank < Q).
std::optional<IndexSet> find_admissible_subset(const ComplexMatrix& a,
                                               double tol = kDefaultRankTol);
std::optional<IndexSet> find_admissible_subset(const CovarianceFactor& a,
                                               double tol = kDefaultRankTol);

/// Cardinality of the smallest linearly dependent row subset at tolerance
/// tol, by exhaustive enumeration in increasing cardinality. Empty result
/// means no dependent subset exists (full row rank with rows <= cols).
std::optional<int> row_spark(const ComplexMatrix& a,
                             double tol = kDefaultRankTol);

}  // namespace simo

#endif  // SIMO_PROPERTY_A_HPP
