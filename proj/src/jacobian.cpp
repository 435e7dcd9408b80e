// simo/jacobian.cpp

#include "simo/jacobian.hpp"

#include <cmath>

#include "simo/property_a.hpp"

namespace simo {

ComplexMatrix build_jacobian(const CovarianceFactor& a, const ComplexVector& x,
                             const ComplexMatrix& s_matrix,
                             const IndexSet& j_set) {
  const int t = a.block_length();
  const int q = a.rank();
  const int n_rx = static_cast<int>(s_matrix.rows());
  if (x.size() != t)
    throw std::invalid_argument("build_jacobian: symbol vector length");
  if (s_matrix.cols() != q)
    throw std::invalid_argument("build_jacobian: fading matrix width");
  if (n_rx != q)
    throw std::invalid_argument(
        "build_jacobian: theorem path requires n_rx == cov_rank");
  if (j_set.bound() != n_rx * t)
    throw std::invalid_argument("build_jacobian: index set bound");
  if (j_set.size() != t - 1 + q * q)
    throw std::invalid_argument("build_jacobian: index set cardinality");

  const ComplexMatrix identity_rx = ComplexMatrix::Identity(n_rx, n_rx);
  const ComplexMatrix identity_t = ComplexMatrix::Identity(t, t);
  const ComplexMatrix left_full =
      kron(identity_rx, x.asDiagonal() * a.matrix());
  const ComplexMatrix right_full = kron(s_matrix, identity_t) *
                                   dstack(a.matrix());

  const IndexSet all_left_cols = IndexSet::all(n_rx * q);
  const IndexSet data_cols = IndexSet::range(2, t, t);
  ComplexMatrix jac(j_set.size(), n_rx * q + t - 1);
  jac << submatrix(left_full, j_set, all_left_cols),
      submatrix(right_full, j_set, data_cols);
  return jac;
}

JacobianFactorization factored_abs_det(const CovarianceFactor& a,
                                       const ComplexVector& x,
                                       const ComplexMatrix& s_matrix) {
  const int t = a.block_length();
  const int q = a.rank();
  if (x.size() != t)
    throw std::invalid_argument("factored_abs_det: symbol vector length");
  if (s_matrix.rows() != q || s_matrix.cols() != q)
    throw std::invalid_argument(
        "factored_abs_det: theorem path requires a square fading matrix");
  for (int i = 0; i < q + 1; ++i)
    if (x(i) == Complex(0.0, 0.0))
      throw FactorizationError(
          "factorization precondition violated: leading symbol is zero");
  const auto lu = s_matrix.fullPivLu();
  if (!lu.isInvertible())
    throw FactorizationError(
        "factorization precondition violated: fading matrix is singular");

  JacobianFactorization f;
  f.boundary_product = 1.0;
  for (int j = q + 2; j <= t; ++j) {
    Complex sum(0.0, 0.0);
    for (int c = 0; c < q; ++c) sum += s_matrix(0, c) * a.matrix()(j - 1, c);
    f.boundary_product *= std::abs(sum);
  }

  const ComplexMatrix identity_rx = ComplexMatrix::Identity(q, q);
  const ComplexMatrix identity_q1 = ComplexMatrix::Identity(q + 1, q + 1);

  const ComplexMatrix lead_diag =
      ComplexMatrix(x.head(q + 1).asDiagonal());
  const ComplexMatrix m1 = kron(identity_rx, lead_diag);
  const ComplexMatrix m2 = kron(s_matrix, identity_q1);

  const ComplexMatrix a_tilde = a.matrix().topRows(q + 1);
  const ComplexMatrix d_tilde = dstack(a_tilde);
  const IndexSet cols_2_to_q1 = IndexSet::range(2, q + 1, q + 1);
  const IndexSet all_rows_d = IndexSet::all(static_cast<int>(d_tilde.rows()));
  ComplexMatrix m3(q * (q + 1), q * q + q);
  m3 << kron(ComplexMatrix::Identity(q, q), a_tilde),
      submatrix(d_tilde, all_rows_d, cols_2_to_q1);

  const ComplexMatrix s_inv = lu.inverse();
  ComplexMatrix m4 = ComplexMatrix::Zero(q * q + q, q * q + q);
  m4.topLeftCorner(q * q, q * q) =
      kron(s_inv, ComplexMatrix::Identity(q, q));
  m4.bottomRightCorner(q, q) = ComplexMatrix::Identity(q, q);

  ComplexMatrix m5 = ComplexMatrix::Zero(q * q + q, q * q + q);
  m5.topLeftCorner(q * q, q * q) = ComplexMatrix::Identity(q * q, q * q);
  for (int i = 0; i < q; ++i)
    m5(q * q + i, q * q + i) = Complex(1.0, 0.0) / x(i + 1);

  f.det_m1 = determinant(m1);
  f.det_m2 = determinant(m2);
  f.det_m3 = determinant(m3);
  f.det_m4 = determinant(m4);
  f.det_m5 = determinant(m5);
  f.abs_det_factored = f.boundary_product * std::abs(f.det_m1) *
                       std::abs(f.det_m2) * std::abs(f.det_m3) *
                       std::abs(f.det_m4) * std::abs(f.det_m5);

  const IndexSet j_set = index_set_J(t, q, q);
  f.abs_det_direct =
      std::abs(determinant(build_jacobian(a, x, s_matrix, j_set)));
  return f;
}

ComplexMatrix build_mhat(const ComplexMatrix& a_tilde) {
  const int n = static_cast<int>(a_tilde.cols());
  if (n < 1 || a_tilde.rows() != n + 1)
    throw std::invalid_argument("build_mhat: matrix must be (N+1) x N");
  const ComplexMatrix d = dstack(a_tilde);
  ComplexMatrix mhat(n * (n + 1), n * n + n);
  mhat << kron(ComplexMatrix::Identity(n, n), a_tilde),
      submatrix(d, IndexSet::all(static_cast<int>(d.rows())),
                IndexSet::range(2, n + 1, n + 1));
  return mhat;
}

Lemma3Report lemma3_check(const ComplexMatrix& a_tilde, double tol) {
  Lemma3Report rep;
  rep.hypothesis_holds = satisfies_property_a(a_tilde, tol).satisfied;
  const ComplexMatrix mhat = build_mhat(a_tilde);
  rep.mhat_full_rank =
      numerical_rank(mhat, tol) == static_cast<int>(mhat.rows());
  return rep;
}

}  // namespace simo
