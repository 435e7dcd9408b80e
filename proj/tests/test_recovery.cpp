#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "simo/recovery.hpp"
#include "oracles.hpp"

using namespace simo;

namespace {

CovarianceFactor dft32() {
  return dft_covariance_factor(3, IndexSet({1, 2}, 3));
}

CovarianceFactor ones21() {
  ComplexMatrix a(2, 1);
  a << 1.0, 1.0;
  return CovarianceFactor::from_matrix(a);
}

double max_rel_err(const ComplexVector& got, const ComplexVector& want) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < got.size(); ++i)
    worst = std::max(worst, std::abs(got(i) - want(i)) / std::abs(want(i)));
  return worst;
}

}  // namespace

TEST_CASE("the 6x6 system for T=3, Q=2 has the expected layout") {
  Rng rng(211);
  const CovarianceFactor f = dft32();
  const ComplexMatrix& a = f.matrix();
  const ComplexVector y = rng.cgauss_vector(6);
  const Complex pilot(1.0, 0.0);
  const RecoverySystem sys = build_recovery_system(f, y, pilot, 3, 2);

  REQUIRE(sys.g.rows() == 6);
  REQUIRE(sys.g.cols() == 6);
  CHECK(sys.j_set == IndexSet::all(6));

  ComplexMatrix want = ComplexMatrix::Zero(6, 6);
  ComplexVector want_rhs = ComplexVector::Zero(6);
  for (int m = 0; m < 2; ++m) {
    for (int i = 1; i <= 3; ++i) {
      const int r = 3 * m + i - 1;
      want.block(r, 2 * m, 1, 2) = a.row(i - 1);
      if (i == 1)
        want_rhs(r) = y(r) / pilot;
      else
        want(r, 4 + i - 2) = -y(r);
    }
  }
  CHECK(oracle::max_abs_diff(sys.g, want) == 0.0);
  CHECK((sys.rhs - want_rhs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("system equals symbol-scaled factor-side matrix on true draws") {
  // With observations generated by (x, S), the receiver-side system is the
  // row-by-symbol scaling of the matrix built from 1/x and the fading:
  //   B = (I_R (x) X) * [ I_R (x) X^-1 A | (S (x) I_T) dstack(A) cols 2..T ]
  // where B carries +y in the reciprocal columns (our g negates them).
  Rng rng(223);
  const CovarianceFactor f = dft32();
  const AdmissibleDraw d = draw_admissible(f, rng);
  const ComplexVector y = noiseless_output(f, d.x, fading_stack(d.s));
  const RecoverySystem sys =
      build_recovery_system(f, y, d.x(0), 3, 2);

  ComplexMatrix b_paper = sys.g;
  b_paper.col(4) = -b_paper.col(4);
  b_paper.col(5) = -b_paper.col(5);

  const ComplexMatrix x_diag = ComplexMatrix(d.x.asDiagonal());
  const ComplexMatrix x_inv_diag = x_diag.inverse();
  const ComplexMatrix identity2 = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix identity3 = ComplexMatrix::Identity(3, 3);
  ComplexMatrix g_paper(6, 6);
  g_paper << kron(identity2, x_inv_diag * f.matrix()),
      submatrix(kron(d.s, identity3) * dstack(f.matrix()),
                IndexSet::all(6), IndexSet::range(2, 3, 3));
  const ComplexMatrix relation = kron(identity2, x_diag) * g_paper;
  CHECK(oracle::max_abs_diff(b_paper, relation) < 1e-13);
}

TEST_CASE("two-symbol single-antenna case solves by hand") {
  const CovarianceFactor f = ones21();
  ComplexVector y(2);
  y << Complex(1.4, -0.3), Complex(0.2, 0.9);
  const RecoverySystem sys =
      build_recovery_system(f, y, Complex(1.0, 0.0), 2, 1);
  const RecoveryResult res = solve_recovery(sys);
  CHECK(std::abs(res.s_hat(0) - y(0)) < 1e-14);
  CHECK(std::abs(res.x_hat(1) - y(1) / y(0)) < 1e-14);
}

TEST_CASE("all-zero observation is a singular draw") {
  const CovarianceFactor f = dft32();
  const RecoverySystem sys = build_recovery_system(
      f, ComplexVector::Zero(6), Complex(1.0, 0.0), 3, 2);
  CHECK_THROWS_AS(solve_recovery(sys), SingularSystemError);
}

TEST_CASE("zero pilot is rejected") {
  const CovarianceFactor f = dft32();
  CHECK_THROWS_AS(build_recovery_system(f, ComplexVector::Zero(6),
                                        Complex(0.0, 0.0), 3, 2),
                  std::invalid_argument);
}

TEST_CASE("a symbol recovered as zero raises the dedicated error") {
  const CovarianceFactor f = ones21();
  ComplexVector y(2);
  y << Complex(0.0, 0.0), Complex(1.0, 0.0);
  const RecoverySystem sys =
      build_recovery_system(f, y, Complex(1.0, 0.0), 2, 1);
  CHECK_THROWS_AS(solve_recovery(sys), ZeroSymbolError);
}

TEST_CASE("round trip recovers symbols and fading to 1e-6") {
  Rng rng(227);
  const CovarianceFactor f = dft32();
  for (int trial = 0; trial < 200; ++trial) {
    Rng rs = rng.substream(static_cast<std::uint64_t>(trial));
    const AdmissibleDraw d = draw_admissible(f, rs);
    const ComplexVector s_stacked = fading_stack(d.s);
    const ComplexVector y = noiseless_output(f, d.x, s_stacked);
    const RecoverySystem sys = build_recovery_system(f, y, d.x(0), 3, 2);
    const RecoveryResult res = solve_recovery(sys);
    CHECK(max_rel_err(res.x_hat, d.x) < 1e-6);
    CHECK(max_rel_err(res.s_hat, s_stacked) < 1e-6);
    if (res.condition <= 1e6) {
      CHECK(max_rel_err(res.x_hat, d.x) < 1e-8);
      CHECK(max_rel_err(res.s_hat, s_stacked) < 1e-8);
    }
  }
}

TEST_CASE("observation scaling moves fading, pilot scaling moves symbols") {
  Rng rng(229);
  const CovarianceFactor f = dft32();
  const AdmissibleDraw d = draw_admissible(f, rng);
  const ComplexVector s_stacked = fading_stack(d.s);
  const ComplexVector y = noiseless_output(f, d.x, s_stacked);
  const Complex c(1.7, -0.8);

  const RecoveryResult base =
      solve_recovery(build_recovery_system(f, y, d.x(0), 3, 2));

  // same pilot, scaled observation: the fading estimate absorbs the scale
  // (degree-1 homogeneity of the noiseless map in the fading)
  const RecoveryResult scaled_obs =
      solve_recovery(build_recovery_system(f, c * y, d.x(0), 3, 2));
  CHECK(max_rel_err(scaled_obs.s_hat, ComplexVector(c * base.s_hat)) < 1e-10);
  CHECK(max_rel_err(scaled_obs.x_hat.tail(2), base.x_hat.tail(2)) < 1e-10);

  // scaled pilot with scaled observation: the symbols absorb the scale
  const RecoveryResult scaled_pilot =
      solve_recovery(build_recovery_system(f, c * y, c * d.x(0), 3, 2));
  CHECK(max_rel_err(scaled_pilot.s_hat, base.s_hat) < 1e-10);
  CHECK(max_rel_err(scaled_pilot.x_hat.tail(2),
                    ComplexVector(c * base.x_hat.tail(2))) < 1e-10);
}

TEST_CASE("without a pilot the homogeneous system keeps a kernel") {
  Rng rng(233);
  for (const auto [t, q] : {std::pair{3, 2}, std::pair{4, 2}}) {
    const CovarianceFactor f =
        dft_covariance_factor(t, IndexSet::range(1, q, t));
    const AdmissibleDraw d = draw_admissible(f, rng);
    const ComplexVector y = noiseless_output(f, d.x, fading_stack(d.s));
    const IndexSet j_set = index_set_J(t, q, q);

    // widened matrix with a reciprocal column for every symbol
    const int n_rows = j_set.size();
    const int n_cols = q * q + t;
    ComplexMatrix wide = ComplexMatrix::Zero(n_rows, n_cols);
    for (int r = 0; r < n_rows; ++r) {
      const int j = j_set[r];
      const int m = (j - 1) / t;
      const int i = j - m * t;
      wide.block(r, m * q, 1, q) = f.matrix().row(i - 1);
      wide(r, q * q + i - 1) = -y(j - 1);
    }
    CHECK(numerical_rank(wide) < n_cols);
    CHECK(numerical_rank(wide) == n_cols - 1);  // generic draw
  }
}

TEST_CASE("system determinant is nonzero for nearly all admissible draws") {
  const CovarianceFactor f = dft32();
  const Rng root(271);
  const int trials = 10000;
  int nonzero = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rs = root.substream(static_cast<std::uint64_t>(trial));
    const AdmissibleDraw d = draw_admissible(f, rs);
    const ComplexVector y = noiseless_output(f, d.x, fading_stack(d.s));
    const RecoverySystem sys = build_recovery_system(f, y, d.x(0), 3, 2);
    ComplexMatrix scaled = sys.g;
    for (Eigen::Index r = 0; r < scaled.rows(); ++r) {
      const double norm = scaled.row(r).norm();
      if (norm > 0.0) scaled.row(r) /= norm;
    }
    if (std::abs(determinant(scaled)) > 1e-12) ++nonzero;
  }
  CHECK(nonzero >= trials * 999 / 1000);
}

TEST_CASE("appendix constraints evaluate the three conditions") {
  const CovarianceFactor f =
      dft_covariance_factor(4, IndexSet({1, 2}, 4));
  Rng rng(239);
  const double tol = 1e-9;

  ComplexVector x = rng.cgauss_vector(4);
  x(2) = Complex(0.0, 0.0);
  const ComplexMatrix s = fading_matrix(rng.cgauss_vector(4), 2);
  CHECK(!check_appendix_a_constraints(x, s, f, tol).symbols_in_range);

  const ComplexVector good_x = ComplexVector::Ones(4);
  CHECK(check_appendix_a_constraints(good_x, ComplexMatrix::Identity(2, 2), f,
                                     tol)
            .fading_invertible);

  int all_ok = 0;
  const int trials = 2000;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rs = rng.substream(static_cast<std::uint64_t>(trial));
    const ComplexVector xt = rs.cgauss_vector(4);
    const ComplexMatrix st = fading_matrix(rs.cgauss_vector(4), 2);
    if (check_appendix_a_constraints(xt, st, f, tol).all()) ++all_ok;
  }
  CHECK(all_ok >= trials * 99 / 100);
}

TEST_CASE("noisy demo degrades gracefully with SNR") {
  Rng rng(241);
  const CovarianceFactor f = dft32();
  const AdmissibleDraw d = draw_admissible(f, rng);
  const ComplexVector s_stacked = fading_stack(d.s);
  const ComplexVector w = rng.cgauss_vector(6);
  const IndexSet j_set = index_set_J(3, 2, 2);

  auto demo_err = [&](double snr_db) {
    const double snr = std::pow(10.0, snr_db / 10.0);
    const ComplexVector y = apply_channel(f, d.x, s_stacked, w, snr);
    const RecoveryResult res =
        recover_noisy_demo(f, subvector(y, j_set), d.x(0), 3, 2, snr);
    return max_rel_err(res.x_hat, d.x);
  };
  const double at_80 = demo_err(80.0);
  const double at_30 = demo_err(30.0);
  CHECK(at_80 < 1e-2);
  CHECK(at_80 < at_30);
}
