// simo/prelog.hpp
//
// Monte Carlo evaluation of the capacity lower bound and its log-SNR
// slope: the conditional-entropy term, the Jacobian log-determinant
// expectation (direct and term-by-term), per-SNR bound values, and the
// sweep with a least-squares slope fit. Logarithms are base 2 throughout;
// bounds are bits per symbol.

#ifndef SIMO_PRELOG_HPP
#define SIMO_PRELOG_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "simo/channel.hpp"
#include "simo/parallel.hpp"
#include "simo/rng.hpp"

namespace simo {

struct BoundPoint {
  double snr = 0.0;        // linear
  double bound_bits = 0.0; // bits per symbol
  double std_err = 0.0;
};

struct SnrInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct BoundCurve {
  std::vector<BoundPoint> points;  // sorted by snr
  double fitted_slope = 0.0;       // bits per bit of log2 snr
  SnrInterval fit_range;
  std::int64_t mc_samples = 0;
};

/// h(y|x) in bits: n_rx*T*log2(pi e) + E_x log2 det(I + snr * F F^H) with
/// F = I_R (x) diag(x) A, averaged over x ~ CN(0, I).
MeanEstimate conditional_entropy_estimate(const ComplexMatrix& a, int n_rx,
                                          double snr, std::int64_t n_samples,
                                          const Rng& rng, int threads = 1);

double conditional_entropy_term(const ComplexMatrix& a, int n_rx, double snr,
                                std::int64_t n_samples, const Rng& rng,
                                int threads = 1);

struct JacobianLogdetEstimate {
  double direct = 0.0;      // MC mean of log2 |det J| over admissible draws
  double decomposed = 0.0;  // sum of the six factored terms, independent draws
  double std_err = 0.0;     // combined std error of (direct - decomposed)
  double direct_std_err = 0.0;
  double decomposed_std_err = 0.0;
  // term order: boundary sums, then the five factor determinants
  std::array<double, 6> terms{};
  std::array<double, 6> term_std_errs{};
  std::int64_t rejected = 0;  // resampled draws across both estimators
};

/// Estimates E log2 |det J| twice: directly, and through the factored
/// terms on an independent substream, so the two values cross-check each
/// other. The pilot symbol is sampled CN(0,1) per draw unless
/// frozen_pilot pins it. Requires the leading rows of the factor to pass
/// the row-independence property (otherwise the expectation need not be
/// finite).
JacobianLogdetEstimate jacobian_logdet_expectation(
    const CovarianceFactor& a, std::int64_t n_samples, const Rng& rng,
    int threads = 1, std::optional<Complex> frozen_pilot = std::nullopt);

/// Lower bound on capacity at one SNR, in bits per symbol:
///   ( |J| log2 snr + (RQ + T - 1) log2(pi e) + E log2|det J|
///     + |N| log2(pi e) - h(y|x) ) / T
/// with |N| the number of dropped output components.
BoundPoint capacity_lower_bound(
    const CovarianceFactor& a, double snr, std::int64_t n_samples,
    const Rng& rng, int threads = 1,
    std::optional<Complex> frozen_pilot = std::nullopt);

/// Evaluates the bound on an SNR grid (>= 3 points spanning >= 3 decades)
/// and fits the slope against log2 snr by least squares over the top two
/// decades (at least the top three points).
BoundCurve prelog_sweep(const CovarianceFactor& a,
                        std::vector<double> snr_grid, std::int64_t n_samples,
                        const Rng& rng, int threads = 1,
                        std::optional<Complex> frozen_pilot = std::nullopt);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares_line(std::span<const double> xs,
                           std::span<const double> ys);

/// Slope the bound should approach: 1 - 1/T.
double target_slope(int block_length);

/// Single-antenna reference: 1 - Q/T.
double siso_reference_slope(int block_length, int cov_rank);

}  // namespace simo

#endif  // SIMO_PRELOG_HPP
