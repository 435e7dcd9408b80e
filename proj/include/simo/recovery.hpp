// simo/recovery.hpp
//
// Pilot-anchored blind recovery from noise-free observations. Fixing the
// first symbol and substituting reciprocals for the remaining ones turns
// the bilinear observation map into a square linear system in the fading
// coefficients and the reciprocal symbols; solving it recovers both.

#ifndef SIMO_RECOVERY_HPP
#define SIMO_RECOVERY_HPP

#include <optional>

#include "simo/channel.hpp"
#include "simo/matrix.hpp"

namespace simo {

/// A recovered symbol solved to exactly zero (or overflowed on
/// reciprocal): the draw violated the almost-everywhere conditions.
class ZeroSymbolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The square linear system whose solution carries the stacked fading
/// coefficients followed by the reciprocal data symbols. Side is
/// block_length - 1 + cov_rank^2; the theorem path requires the antenna
/// count to equal the covariance rank.
struct RecoverySystem {
  ComplexMatrix g;
  ComplexVector rhs;
  Complex pilot{};
  IndexSet j_set{{}, 0};
  int block_length = 0;
  int cov_rank = 0;
};

struct RecoveryResult {
  ComplexVector s_hat;  // stacked fading estimates, length cov_rank^2
  ComplexVector x_hat;  // symbol estimates; x_hat(0) is the pilot itself
  double condition = 0.0;
};

/// Per-draw status of the almost-everywhere conditions under which the
/// observation map is one-to-one.
struct ConstraintReport {
  bool symbols_in_range = false;     // every |x_i| in (tol, 1/tol)
  bool fading_invertible = false;    // |det S| > tol
  bool boundary_sums_nonzero = false;// first-antenna row sums past rank+1
  bool all() const {
    return symbols_in_range && fading_invertible && boundary_sums_nonzero;
  }
};

/// Builds the system from receiver knowledge only: the covariance factor,
/// the noise-free observation restricted to the recovery index set, and
/// the pilot value. y_tilde_j is ordered like index_set_J(block_length,
/// cov_rank, cov_rank). Throws on pilot == 0.
RecoverySystem build_recovery_system(const CovarianceFactor& a,
                                     const ComplexVector& y_tilde_j,
                                     Complex pilot, int block_length,
                                     int cov_rank);

/// Solves the system; symbols come back through reciprocals, so a zero
/// component raises ZeroSymbolError and a singular system raises
/// SingularSystemError.
RecoveryResult solve_recovery(const RecoverySystem& sys);

/// Evaluates the three almost-everywhere conditions for a candidate draw
/// (true symbols and fading, receiver-side factor).
ConstraintReport check_appendix_a_constraints(const ComplexVector& x,
                                              const ComplexMatrix& s_matrix,
                                              const CovarianceFactor& a,
                                              double tol);

/// Demonstration-only path for noisy observations: rescales y_j by
/// 1/sqrt(snr), builds the same system, and solves it in the least-squares
/// sense. The recovery guarantee covers only noise-free inputs; this exists
/// so the CLI can show graceful degradation at finite SNR.
RecoveryResult recover_noisy_demo(const CovarianceFactor& a,
                                  const ComplexVector& y_j, Complex pilot,
                                  int block_length, int cov_rank, double snr);

/// Draws violating the almost-everywhere conditions are rejected and
/// resampled at this tolerance; rejection counts are reported upstream.
inline constexpr double kAdmissibilityTol = 1e-12;

struct AdmissibleDraw {
  ComplexVector x;
  ComplexMatrix s;  // cov_rank x cov_rank fading matrix
  int redraws = 0;
};

/// Samples (x, S) i.i.d. CN(0,1) until the almost-everywhere conditions
/// hold. When frozen_pilot is set, x(0) is pinned to it instead of drawn.
AdmissibleDraw draw_admissible(const CovarianceFactor& a, Rng& rng,
                               std::optional<Complex> frozen_pilot = {},
                               double tol = kAdmissibilityTol);

}  // namespace simo

#endif  // SIMO_RECOVERY_HPP
