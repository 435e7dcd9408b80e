// simo/channel.cpp

#include "simo/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace simo {

void ChannelConfig::validate() const {
  if (cov_rank < 1 || cov_rank >= block_length)
    throw std::invalid_argument(
        "ChannelConfig: need 1 <= cov_rank < block_length");
  if (n_rx < 1) throw std::invalid_argument("ChannelConfig: n_rx >= 1");
  if (!(snr > 0.0)) throw std::invalid_argument("ChannelConfig: snr > 0");
}

CovarianceFactor CovarianceFactor::from_matrix(ComplexMatrix a, double tol) {
  if (a.rows() < 1 || a.cols() < 1)
    throw std::invalid_argument("CovarianceFactor: empty matrix");
  if (a.cols() > a.rows())
    throw std::invalid_argument("CovarianceFactor: more columns than rows");
  if (!all_finite(a))
    throw std::invalid_argument("CovarianceFactor: entries must be finite");
  const int rank = numerical_rank(a, tol);
  if (rank != a.cols())
    throw std::invalid_argument(
        "CovarianceFactor: factor must have full column rank, got rank " +
        std::to_string(rank) + " for " + std::to_string(a.cols()) +
        " columns");
  return CovarianceFactor(std::move(a));
}

CovarianceFactor dft_covariance_factor(int block_length,
                                       const IndexSet& keep_cols) {
  const int rank = keep_cols.size();
  if (rank < 1 || rank >= block_length)
    throw std::invalid_argument(
        "dft_covariance_factor: need 1 <= #cols < block_length");
  if (keep_cols.bound() != block_length)
    throw std::invalid_argument(
        "dft_covariance_factor: column set must index [1, block_length]");
  const double scale = 1.0 / std::sqrt(static_cast<double>(block_length));
  ComplexMatrix a(block_length, rank);
  for (int j = 0; j < block_length; ++j) {
    for (int c = 0; c < rank; ++c) {
      const int k = keep_cols[c];
      const double phase = -2.0 * std::numbers::pi *
                           static_cast<double>(j) *
                           static_cast<double>(k - 1) /
                           static_cast<double>(block_length);
      a(j, c) = scale * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return CovarianceFactor::from_matrix(std::move(a));
}

ComplexMatrix fading_matrix(const ComplexVector& s_stacked, int n_rx) {
  if (n_rx < 1 || s_stacked.size() % n_rx != 0)
    throw std::invalid_argument("fading_matrix: length not divisible by n_rx");
  const int rank = static_cast<int>(s_stacked.size()) / n_rx;
  ComplexMatrix s(n_rx, rank);
  for (int m = 0; m < n_rx; ++m)
    s.row(m) = s_stacked.segment(m * rank, rank).transpose();
  return s;
}

ComplexVector fading_stack(const ComplexMatrix& s_matrix) {
  ComplexVector s(s_matrix.rows() * s_matrix.cols());
  for (Eigen::Index m = 0; m < s_matrix.rows(); ++m)
    s.segment(m * s_matrix.cols(), s_matrix.cols()) =
        s_matrix.row(m).transpose();
  return s;
}

namespace {

// The stacked map is formed explicitly; per-antenna expansions stay on the
// test side as an independent route.
ComplexMatrix stacked_map(const CovarianceFactor& a, const ComplexVector& x) {
  const int t = a.block_length();
  if (x.size() != t)
    throw std::invalid_argument("channel: symbol vector length");
  return x.asDiagonal() * a.matrix();
}

}  // namespace

ComplexVector apply_channel(const CovarianceFactor& a, const ComplexVector& x,
                            const ComplexVector& s_stacked,
                            const ComplexVector& w, double snr) {
  if (!(snr > 0.0)) throw std::invalid_argument("apply_channel: snr > 0");
  const ComplexVector noiseless = noiseless_output(a, x, s_stacked);
  if (w.size() != noiseless.size())
    throw std::invalid_argument("apply_channel: noise vector length");
  return std::sqrt(snr) * noiseless + w;
}

ComplexVector noiseless_output(const CovarianceFactor& a,
                               const ComplexVector& x,
                               const ComplexVector& s_stacked) {
  const int rank = a.rank();
  if (s_stacked.size() % rank != 0)
    throw std::invalid_argument("noiseless_output: fading vector length");
  const int n_rx = static_cast<int>(s_stacked.size()) / rank;
  const ComplexMatrix identity =
      ComplexMatrix::Identity(n_rx, n_rx);
  return kron(identity, stacked_map(a, x)) * s_stacked;
}

BlockSample sample_block(const ChannelConfig& cfg, const CovarianceFactor& a,
                         Rng& rng) {
  cfg.validate();
  if (a.block_length() != cfg.block_length || a.rank() != cfg.cov_rank)
    throw std::invalid_argument("sample_block: factor shape mismatch");
  BlockSample blk;
  blk.x = rng.cgauss_vector(cfg.block_length);
  blk.s_stacked = rng.cgauss_vector(cfg.n_rx * cfg.cov_rank);
  blk.w = rng.cgauss_vector(cfg.n_rx * cfg.block_length);
  blk.s_matrix = fading_matrix(blk.s_stacked, cfg.n_rx);
  blk.y = apply_channel(a, blk.x, blk.s_stacked, blk.w, cfg.snr);
  return blk;
}

IndexSet index_set_J(int block_length, int cov_rank, int n_rx) {
  if (cov_rank < 1 || cov_rank >= block_length)
    throw std::invalid_argument("index_set_J: need 1 <= cov_rank < length");
  if (n_rx < 1) throw std::invalid_argument("index_set_J: n_rx >= 1");
  std::vector<int> idx;
  idx.reserve(static_cast<size_t>(block_length +
                                  (n_rx - 1) * (cov_rank + 1)));
  for (int i = 1; i <= block_length; ++i) idx.push_back(i);
  for (int m = 1; m < n_rx; ++m)
    for (int i = 1; i <= cov_rank + 1; ++i)
      idx.push_back(m * block_length + i);
  return IndexSet(std::move(idx), n_rx * block_length);
}

}  // namespace simo
