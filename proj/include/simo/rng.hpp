// simo/rng.hpp
//
// Seeded random streams. Every stochastic routine takes an explicit Rng;
// independent trials derive disjoint substreams from (seed, index), so
// results are bit-identical regardless of scheduling.

#ifndef SIMO_RNG_HPP
#define SIMO_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "simo/matrix.hpp"

namespace simo {

/// One splitmix64 step; used to whiten substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  /// Stream derived from (seed, index); independent of this stream's
  /// position, so substreams may be taken in any order and in parallel.
  Rng substream(std::uint64_t index) const {
    return Rng(splitmix64(seed_ ^ splitmix64(index)));
  }

  /// Standard real normal N(0,1).
  double normal() { return gauss_(engine_); }

  /// Circularly symmetric complex Gaussian CN(0,1): real and imaginary
  /// parts are independent N(0,1/2), drawn in that order.
  Complex cgauss() {
    const double re = normal() * kHalfVar;
    const double im = normal() * kHalfVar;
    return Complex(re, im);
  }

  ComplexVector cgauss_vector(int n) {
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) v(i) = cgauss();
    return v;
  }

  /// Entries drawn row by row.
  ComplexMatrix cgauss_matrix(int rows, int cols) {
    ComplexMatrix a(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) a(i, j) = cgauss();
    return a;
  }

 private:
  static constexpr double kHalfVar = 0.70710678118654752440;  // sqrt(1/2)

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace simo

#endif  // SIMO_RNG_HPP
