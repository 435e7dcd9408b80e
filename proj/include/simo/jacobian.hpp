// simo/jacobian.hpp
//
// Jacobian of the kept noiseless outputs with respect to (fading, data
// symbols), its determinant, and the closed-form factorization of that
// determinant into boundary sums and five small structured matrices.
// The full-rank certificate for the factor-only matrix lives here too.

#ifndef SIMO_JACOBIAN_HPP
#define SIMO_JACOBIAN_HPP

#include "simo/channel.hpp"
#include "simo/matrix.hpp"

namespace simo {

/// The factorization needs every leading symbol nonzero and an invertible
/// fading matrix; violations are reported, not patched.
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JacobianFactorization {
  /// Product over the trailing block rows of |sum_q S(1,q) A(j,q)|;
  /// empty (value 1) when block_length == cov_rank + 1.
  double boundary_product = 1.0;
  Complex det_m1{};  // I_R (x) leading symbol diagonal
  Complex det_m2{};  // S (x) I_{Q+1}
  Complex det_m3{};  // [I_Q (x) A_tilde | dstack(A_tilde) cols 2..Q+1]
  Complex det_m4{};  // blockdiag(S^-1 (x) I_Q, I_Q)
  Complex det_m5{};  // blockdiag(I_{Q^2}, inverse trailing symbol diagonal)
  double abs_det_factored = 0.0;  // boundary_product * prod |det_mk|
  double abs_det_direct = 0.0;    // |det| of the assembled Jacobian
};

/// [ rows J of I_R (x) diag(x)*A | rows J, cols 2..T of (S (x) I_T)*dstack(A) ].
/// Square of side block_length - 1 + cov_rank^2; requires as many antennas
/// as the covariance rank.
ComplexMatrix build_jacobian(const CovarianceFactor& a, const ComplexVector& x,
                             const ComplexMatrix& s_matrix,
                             const IndexSet& j_set);

/// Evaluates the determinant both directly and through the factorization
/// for one draw (x, S); the two absolute values agree up to conditioning.
JacobianFactorization factored_abs_det(const CovarianceFactor& a,
                                       const ComplexVector& x,
                                       const ComplexMatrix& s_matrix);

/// [ I_N (x) a_tilde | dstack(a_tilde) cols 2..N+1 ] for an (N+1) x N
/// input; square of side N(N+1).
ComplexMatrix build_mhat(const ComplexMatrix& a_tilde);

struct Lemma3Report {
  bool hypothesis_holds = false;  // every N-row subset independent
  bool mhat_full_rank = false;
};

/// Checks the row-independence hypothesis and the full-rank conclusion
/// separately; when the hypothesis fails no claim is made about the rank.
Lemma3Report lemma3_check(const ComplexMatrix& a_tilde,
                          double tol = kDefaultRankTol);

}  // namespace simo

#endif  // SIMO_JACOBIAN_HPP
