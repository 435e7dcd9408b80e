// simo/channel.hpp
//
// Correlated block-fading SIMO channel: configuration, covariance factors
// (including DFT column selections), per-block sampling, the stacked I/O
// relation, its noiseless version, and the output index set on which blind
// recovery operates.

#ifndef SIMO_CHANNEL_HPP
#define SIMO_CHANNEL_HPP

#include "simo/matrix.hpp"
#include "simo/rng.hpp"

namespace simo {

struct ChannelConfig {
  int block_length = 0;  // symbols per fading block
  int cov_rank = 0;      // rank of the within-block fading covariance
  int n_rx = 1;          // receive antennas
  double snr = 1.0;      // linear SNR

  /// Requires 1 <= cov_rank < block_length, n_rx >= 1, snr > 0.
  void validate() const;
};

/// Tall factor of the fading covariance in whitened form: block_length x
/// cov_rank with full column rank, so per-antenna fading is factor * CN(0,I).
class CovarianceFactor {
 public:
  static CovarianceFactor from_matrix(ComplexMatrix a,
                                      double tol = kDefaultRankTol);

  const ComplexMatrix& matrix() const { return a_; }
  int block_length() const { return static_cast<int>(a_.rows()); }
  int rank() const { return static_cast<int>(a_.cols()); }

 private:
  explicit CovarianceFactor(ComplexMatrix a) : a_(std::move(a)) {}
  ComplexMatrix a_;
};

/// Columns keep_cols of the unitary DFT matrix of size block_length, entry
/// (j,k) = exp(-2*pi*i*(j-1)(k-1)/block_length)/sqrt(block_length). The
/// column count becomes the covariance rank and must stay below
/// block_length.
CovarianceFactor dft_covariance_factor(int block_length,
                                       const IndexSet& keep_cols);

/// One fading block. The stacked fading vector concatenates the
/// per-antenna coefficient vectors; s_matrix holds the same numbers with
/// one antenna per row.
struct BlockSample {
  ComplexVector x;         // input symbols, length block_length
  ComplexVector s_stacked; // fading, length n_rx * cov_rank
  ComplexMatrix s_matrix;  // n_rx x cov_rank, row m = antenna m
  ComplexVector w;         // noise, length n_rx * block_length
  ComplexVector y;         // output, length n_rx * block_length
};

/// Reshape stacked fading into the n_rx x cov_rank antenna-by-row matrix.
ComplexMatrix fading_matrix(const ComplexVector& s_stacked, int n_rx);

/// Inverse reshape: concatenate the rows of the fading matrix.
ComplexVector fading_stack(const ComplexMatrix& s_matrix);

/// y = sqrt(snr) * (I_R (x) diag(x)*A) * s + w.
ComplexVector apply_channel(const CovarianceFactor& a, const ComplexVector& x,
                            const ComplexVector& s_stacked,
                            const ComplexVector& w, double snr);

/// Noise-free rescaled observation (I_R (x) diag(x)*A) * s.
ComplexVector noiseless_output(const CovarianceFactor& a,
                               const ComplexVector& x,
                               const ComplexVector& s_stacked);

/// Draws x, s, w i.i.d. CN(0,1) in that order and applies the channel.
BlockSample sample_block(const ChannelConfig& cfg, const CovarianceFactor& a,
                         Rng& rng);

/// Output components kept for blind recovery: all of antenna 1, the first
/// cov_rank+1 of every further antenna. Cardinality block_length +
/// (n_rx-1)*(cov_rank+1); for n_rx == cov_rank that is
/// block_length - 1 + cov_rank^2.
IndexSet index_set_J(int block_length, int cov_rank, int n_rx);

}  // namespace simo

#endif  // SIMO_CHANNEL_HPP
