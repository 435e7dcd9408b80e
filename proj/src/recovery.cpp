// simo/recovery.cpp

#include "simo/recovery.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace simo {

RecoverySystem build_recovery_system(const CovarianceFactor& a,
                                     const ComplexVector& y_tilde_j,
                                     Complex pilot, int block_length,
                                     int cov_rank) {
  if (pilot == Complex(0.0, 0.0))
    throw std::invalid_argument("zero pilot: recovery needs pilot != 0");
  if (a.block_length() != block_length || a.rank() != cov_rank)
    throw std::invalid_argument("build_recovery_system: factor shape");
  const int t = block_length;
  const int q = cov_rank;
  const int side = t - 1 + q * q;
  if (y_tilde_j.size() != side)
    throw std::invalid_argument(
        "build_recovery_system: observation must have length "
        "block_length - 1 + cov_rank^2");

  RecoverySystem sys;
  sys.pilot = pilot;
  sys.block_length = t;
  sys.cov_rank = q;
  sys.j_set = index_set_J(t, q, /*n_rx=*/q);
  sys.g = ComplexMatrix::Zero(side, side);
  sys.rhs = ComplexVector::Zero(side);

  // One row per kept output component j = (m-1)*t + i. Fading unknowns
  // come first (q per antenna), then the reciprocal symbols for i >= 2.
  for (int r = 0; r < side; ++r) {
    const int j = sys.j_set[r];
    const int m = (j - 1) / t;      // antenna, 0-based
    const int i = j - m * t;        // time slot, 1-based
    sys.g.block(r, m * q, 1, q) = a.matrix().row(i - 1);
    if (i == 1) {
      sys.rhs(r) = y_tilde_j(r) / pilot;
    } else {
      sys.g(r, q * q + i - 2) = -y_tilde_j(r);
    }
  }
  return sys;
}

namespace {

RecoveryResult assemble_result(const RecoverySystem& sys,
                               const ComplexVector& unknowns,
                               double condition) {
  const int t = sys.block_length;
  const int q = sys.cov_rank;
  RecoveryResult res;
  res.condition = condition;
  res.s_hat = unknowns.head(q * q);
  res.x_hat = ComplexVector(t);
  res.x_hat(0) = sys.pilot;
  for (int i = 2; i <= t; ++i) {
    const Complex beta = unknowns(q * q + i - 2);
    if (beta == Complex(0.0, 0.0))
      throw ZeroSymbolError("zero symbol: reciprocal unknown " +
                            std::to_string(i) + " is zero");
    const Complex sym = Complex(1.0, 0.0) / beta;
    if (!std::isfinite(sym.real()) || !std::isfinite(sym.imag()))
      throw ZeroSymbolError("zero symbol: reciprocal unknown " +
                            std::to_string(i) + " overflows");
    res.x_hat(i - 1) = sym;
  }
  return res;
}

}  // namespace

RecoveryResult solve_recovery(const RecoverySystem& sys) {
  double condition = 0.0;
  const ComplexVector unknowns = solve_square(sys.g, sys.rhs, &condition);
  return assemble_result(sys, unknowns, condition);
}

ConstraintReport check_appendix_a_constraints(const ComplexVector& x,
                                              const ComplexMatrix& s_matrix,
                                              const CovarianceFactor& a,
                                              double tol) {
  const int t = a.block_length();
  const int q = a.rank();
  if (s_matrix.rows() != q || s_matrix.cols() != q)
    throw std::invalid_argument(
        "check_appendix_a_constraints: fading matrix must be square "
        "(theorem path has n_rx == cov_rank)");
  if (x.size() != t)
    throw std::invalid_argument("check_appendix_a_constraints: symbol length");

  ConstraintReport rep;
  rep.symbols_in_range = true;
  for (int i = 0; i < t; ++i) {
    const double mag = std::abs(x(i));
    if (!(mag > tol) || !(mag < 1.0 / tol)) {
      rep.symbols_in_range = false;
      break;
    }
  }
  rep.fading_invertible = std::abs(determinant(s_matrix)) > tol;
  rep.boundary_sums_nonzero = true;
  for (int j = q + 2; j <= t; ++j) {
    Complex sum(0.0, 0.0);
    for (int c = 0; c < q; ++c) sum += s_matrix(0, c) * a.matrix()(j - 1, c);
    if (!(std::abs(sum) > tol)) {
      rep.boundary_sums_nonzero = false;
      break;
    }
  }
  return rep;
}

AdmissibleDraw draw_admissible(const CovarianceFactor& a, Rng& rng,
                               std::optional<Complex> frozen_pilot,
                               double tol) {
  constexpr int kMaxRedraws = 1000;
  const int t = a.block_length();
  const int q = a.rank();
  AdmissibleDraw d;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    if (frozen_pilot) {
      d.x = ComplexVector(t);
      d.x(0) = *frozen_pilot;
      for (int i = 1; i < t; ++i) d.x(i) = rng.cgauss();
    } else {
      d.x = rng.cgauss_vector(t);
    }
    d.s = fading_matrix(rng.cgauss_vector(q * q), q);
    if (check_appendix_a_constraints(d.x, d.s, a, tol).all()) return d;
    ++d.redraws;
  }
  throw std::runtime_error("draw_admissible: no admissible draw found");
}

RecoveryResult recover_noisy_demo(const CovarianceFactor& a,
                                  const ComplexVector& y_j, Complex pilot,
                                  int block_length, int cov_rank, double snr) {
  if (!(snr > 0.0))
    throw std::invalid_argument("recover_noisy_demo: snr > 0");
  const ComplexVector rescaled = y_j / std::sqrt(snr);
  const RecoverySystem sys =
      build_recovery_system(a, rescaled, pilot, block_length, cov_rank);
  // Least-squares solve: with noise the square system is only
  // approximately consistent.
  Eigen::JacobiSVD<ComplexMatrix> svd(
      sys.g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double cond =
      smin == 0.0 ? std::numeric_limits<double>::infinity() : sv(0) / smin;
  if (!(cond <= kConditionLimit))
    throw SingularSystemError("singular system in noisy demo");
  return assemble_result(sys, svd.solve(sys.rhs), cond);
}

}  // namespace simo
