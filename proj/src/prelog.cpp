// simo/prelog.cpp

#include "simo/prelog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "simo/jacobian.hpp"
#include "simo/property_a.hpp"
#include "simo/recovery.hpp"

namespace simo {

namespace {

const double kLog2PiE = std::log2(std::numbers::pi * std::numbers::e);

// Substream labels; fixed so every estimator sees its own stream.
constexpr std::uint64_t kDirectStream = 1;
constexpr std::uint64_t kDecomposedStream = 2;
constexpr std::uint64_t kLogdetStream = 11;
constexpr std::uint64_t kEntropyStream = 12;

double logdet2_hermitian(const ComplexMatrix& g) {
  Eigen::LLT<ComplexMatrix> llt(g);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("logdet: Cholesky factorization failed");
  const ComplexMatrix& packed = llt.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < packed.rows(); ++i)
    acc += std::log2(packed(i, i).real());
  return 2.0 * acc;
}

}  // namespace

MeanEstimate conditional_entropy_estimate(const ComplexMatrix& a, int n_rx,
                                          double snr, std::int64_t n_samples,
                                          const Rng& rng, int threads) {
  if (!(snr > 0.0))
    throw std::invalid_argument("conditional_entropy: snr > 0");
  if (n_rx < 1) throw std::invalid_argument("conditional_entropy: n_rx >= 1");
  if (n_samples < 1)
    throw std::invalid_argument("conditional_entropy: n_samples >= 1");
  const int t = static_cast<int>(a.rows());
  const ComplexMatrix identity_rx = ComplexMatrix::Identity(n_rx, n_rx);
  const int n_out = n_rx * t;

  std::vector<double> samples(static_cast<size_t>(n_samples));
  parallel_for(n_samples, threads, [&](std::int64_t i) {
    Rng rs = rng.substream(static_cast<std::uint64_t>(i));
    const ComplexVector x = rs.cgauss_vector(t);
    const ComplexMatrix f = kron(identity_rx, x.asDiagonal() * a);
    const ComplexMatrix gram =
        ComplexMatrix::Identity(n_out, n_out) + snr * f * f.adjoint();
    samples[static_cast<size_t>(i)] = logdet2_hermitian(gram);
  });
  MeanEstimate est = mc_mean(samples);
  est.mean += static_cast<double>(n_out) * kLog2PiE;
  return est;
}

double conditional_entropy_term(const ComplexMatrix& a, int n_rx, double snr,
                                std::int64_t n_samples, const Rng& rng,
                                int threads) {
  return conditional_entropy_estimate(a, n_rx, snr, n_samples, rng, threads)
      .mean;
}

JacobianLogdetEstimate jacobian_logdet_expectation(
    const CovarianceFactor& a, std::int64_t n_samples, const Rng& rng,
    int threads, std::optional<Complex> frozen_pilot) {
  const int t = a.block_length();
  const int q = a.rank();
  if (n_samples < 2)
    throw std::invalid_argument("jacobian_logdet: n_samples >= 2");
  if (!satisfies_property_a(a.matrix().topRows(q + 1)).satisfied)
    throw std::invalid_argument(
        "jacobian_logdet: leading rows of the factor fail the "
        "row-independence property");
  if (frozen_pilot && *frozen_pilot == Complex(0.0, 0.0))
    throw std::invalid_argument("jacobian_logdet: frozen pilot must be != 0");

  const IndexSet j_set = index_set_J(t, q, q);
  const size_t n = static_cast<size_t>(n_samples);

  std::vector<double> direct(n);
  std::vector<int> redraws_direct(n, 0);
  const Rng direct_root = rng.substream(kDirectStream);
  parallel_for(n_samples, threads, [&](std::int64_t i) {
    Rng rs = direct_root.substream(static_cast<std::uint64_t>(i));
    const AdmissibleDraw d = draw_admissible(a, rs, frozen_pilot);
    redraws_direct[static_cast<size_t>(i)] = d.redraws;
    const double abs_det =
        std::abs(determinant(build_jacobian(a, d.x, d.s, j_set)));
    direct[static_cast<size_t>(i)] = std::log2(abs_det);
  });

  std::vector<double> decomposed(n);
  std::vector<std::array<double, 6>> terms(n);
  std::vector<int> redraws_decomp(n, 0);
  const Rng decomp_root = rng.substream(kDecomposedStream);
  parallel_for(n_samples, threads, [&](std::int64_t i) {
    Rng rs = decomp_root.substream(static_cast<std::uint64_t>(i));
    const AdmissibleDraw d = draw_admissible(a, rs, frozen_pilot);
    redraws_decomp[static_cast<size_t>(i)] = d.redraws;
    const JacobianFactorization f = factored_abs_det(a, d.x, d.s);
    auto& tr = terms[static_cast<size_t>(i)];
    tr[0] = std::log2(f.boundary_product);
    tr[1] = std::log2(std::abs(f.det_m1));
    tr[2] = std::log2(std::abs(f.det_m2));
    tr[3] = std::log2(std::abs(f.det_m3));
    tr[4] = std::log2(std::abs(f.det_m4));
    tr[5] = std::log2(std::abs(f.det_m5));
    decomposed[static_cast<size_t>(i)] =
        tr[0] + tr[1] + tr[2] + tr[3] + tr[4] + tr[5];
  });

  JacobianLogdetEstimate est;
  const MeanEstimate md = mc_mean(direct);
  const MeanEstimate mc = mc_mean(decomposed);
  est.direct = md.mean;
  est.decomposed = mc.mean;
  est.direct_std_err = md.std_err;
  est.decomposed_std_err = mc.std_err;
  est.std_err = std::hypot(md.std_err, mc.std_err);

  std::vector<double> column(n);
  for (size_t k = 0; k < 6; ++k) {
    for (size_t i = 0; i < n; ++i) column[i] = terms[i][k];
    const MeanEstimate mt = mc_mean(column);
    est.terms[k] = mt.mean;
    est.term_std_errs[k] = mt.std_err;
  }
  for (size_t i = 0; i < n; ++i)
    est.rejected += redraws_direct[i] + redraws_decomp[i];
  return est;
}

BoundPoint capacity_lower_bound(const CovarianceFactor& a, double snr,
                                std::int64_t n_samples, const Rng& rng,
                                int threads,
                                std::optional<Complex> frozen_pilot) {
  if (!(snr > 0.0))
    throw std::invalid_argument("capacity_lower_bound: snr > 0");
  const int t = a.block_length();
  const int q = a.rank();
  const int n_rx = q;
  const int kept = t - 1 + q * q;
  const int dropped = n_rx * t - kept;

  const JacobianLogdetEstimate logdet = jacobian_logdet_expectation(
      a, n_samples, rng.substream(kLogdetStream), threads, frozen_pilot);
  const MeanEstimate hyx = conditional_entropy_estimate(
      a.matrix(), n_rx, snr, n_samples, rng.substream(kEntropyStream),
      threads);

  BoundPoint pt;
  pt.snr = snr;
  pt.bound_bits = (static_cast<double>(kept) * std::log2(snr) +
                   static_cast<double>(n_rx * q + t - 1) * kLog2PiE +
                   logdet.direct + static_cast<double>(dropped) * kLog2PiE -
                   hyx.mean) /
                  static_cast<double>(t);
  pt.std_err = std::hypot(logdet.direct_std_err, hyx.std_err) /
               static_cast<double>(t);
  return pt;
}

BoundCurve prelog_sweep(const CovarianceFactor& a,
                        std::vector<double> snr_grid, std::int64_t n_samples,
                        const Rng& rng, int threads,
                        std::optional<Complex> frozen_pilot) {
  if (snr_grid.size() < 3)
    throw std::invalid_argument("prelog_sweep: need at least 3 grid points");
  for (double s : snr_grid)
    if (!(s > 0.0))
      throw std::invalid_argument("prelog_sweep: snr values must be > 0");
  std::sort(snr_grid.begin(), snr_grid.end());
  if (snr_grid.back() / snr_grid.front() < 1e3 * (1.0 - 1e-9))
    throw std::invalid_argument("prelog_sweep: grid must span >= 3 decades");

  BoundCurve curve;
  curve.mc_samples = n_samples;
  curve.points.resize(snr_grid.size());
  for (size_t p = 0; p < snr_grid.size(); ++p) {
    curve.points[p] =
        capacity_lower_bound(a, snr_grid[p], n_samples,
                             rng.substream(100 + static_cast<std::uint64_t>(p)),
                             threads, frozen_pilot);
  }

  // Fit over the top two decades, but never fewer than the top 3 points.
  const double hi = snr_grid.back();
  double lo = hi / 100.0;
  size_t first = 0;
  while (first < snr_grid.size() && snr_grid[first] < lo * (1.0 - 1e-9))
    ++first;
  if (snr_grid.size() - first < 3)
    first = snr_grid.size() >= 3 ? snr_grid.size() - 3 : 0;
  lo = snr_grid[first];

  std::vector<double> xs, ys;
  for (size_t p = first; p < snr_grid.size(); ++p) {
    xs.push_back(std::log2(curve.points[p].snr));
    ys.push_back(curve.points[p].bound_bits);
  }
  curve.fitted_slope = least_squares_line(xs, ys).slope;
  curve.fit_range = {lo, hi};
  return curve;
}

LineFit least_squares_line(std::span<const double> xs,
                           std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("least_squares_line: need >= 2 points");
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("least_squares_line: degenerate abscissa");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double target_slope(int block_length) {
  return 1.0 - 1.0 / static_cast<double>(block_length);
}

double siso_reference_slope(int block_length, int cov_rank) {
  return 1.0 -
         static_cast<double>(cov_rank) / static_cast<double>(block_length);
}

}  // namespace simo
