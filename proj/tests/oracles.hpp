// tests/oracles.hpp
//
// Reference implementations used only by tests. Each one takes a route
// independent of the library code it checks: cofactor expansion instead of
// pivoted elimination, per-antenna loops instead of the stacked Kronecker
// map, quadrature instead of Monte Carlo, and explicit subset enumeration.

#ifndef SIMO_TESTS_ORACLES_HPP
#define SIMO_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "simo/matrix.hpp"

namespace oracle {

using simo::Complex;
using simo::ComplexMatrix;
using simo::ComplexVector;

inline Complex cofactor_determinant(const ComplexMatrix& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return Complex(1.0, 0.0);
  if (n == 1) return a(0, 0);
  Complex acc(0.0, 0.0);
  double sign = 1.0;
  for (int j = 0; j < n; ++j, sign = -sign) {
    ComplexMatrix minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    acc += sign * a(0, j) * cofactor_determinant(minor);
  }
  return acc;
}

// The channel relation expanded one antenna and one sample at a time:
// y[(m-1)T + i] = sqrt(snr) * x_i * (row i of A . s_m) + w[(m-1)T + i].
inline ComplexVector per_antenna_output(const ComplexMatrix& a,
                                        const ComplexVector& x,
                                        const ComplexVector& s_stacked,
                                        const ComplexVector& w, double snr) {
  const int t = static_cast<int>(a.rows());
  const int q = static_cast<int>(a.cols());
  const int n_rx = static_cast<int>(s_stacked.size()) / q;
  const double root_snr = std::sqrt(snr);
  ComplexVector y(n_rx * t);
  for (int m = 0; m < n_rx; ++m) {
    for (int i = 0; i < t; ++i) {
      Complex acc(0.0, 0.0);
      for (int c = 0; c < q; ++c) acc += a(i, c) * s_stacked(m * q + c);
      y(m * t + i) = root_snr * x(i) * acc + w(m * t + i);
    }
  }
  return y;
}

// E_{u ~ Exp(1)} log2(1 + snr*u) by composite Simpson on [0, 60]; the
// truncated tail is ~1e-26 of the mass.
inline double expected_log2_one_plus_snr_exp(double snr) {
  const int n = 200000;  // even
  const double hi = 60.0;
  const double h = hi / n;
  auto f = [snr](double u) { return std::exp(-u) * std::log2(1.0 + snr * u); };
  double acc = f(0.0) + f(hi);
  for (int k = 1; k < n; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * f(k * h);
  return acc * h / 3.0;
}

// All k-subsets of {1..n} in lexicographic order.
inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int next) {
    if (static_cast<int>(pick.size()) == k) {
      out.push_back(pick);
      return;
    }
    for (int v = next; v <= n - (k - 1 - static_cast<int>(pick.size())); ++v) {
      pick.push_back(v);
      rec(v + 1);
      pick.pop_back();
    }
  };
  rec(1);
  return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double rel_err(double got, double want) {
  const double denom = std::max(std::abs(got), std::abs(want));
  return denom == 0.0 ? 0.0 : std::abs(got - want) / denom;
}

inline double rel_err(Complex got, Complex want) {
  const double denom = std::max(std::abs(got), std::abs(want));
  return denom == 0.0 ? 0.0 : std::abs(got - want) / denom;
}

}  // namespace oracle

#endif  // SIMO_TESTS_ORACLES_HPP
