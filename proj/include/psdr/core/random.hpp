// SPDX-License-Identifier: Apache-2.0
//
// Seeded randomness. Every stochastic routine takes an explicit stream; child
// streams are derived deterministically so experiments reproduce bit-for-bit
// from a single config seed.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace psdr {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  /// Independent child stream; tag distinguishes siblings.
  RandomStream child(std::uint64_t tag) const {
    return RandomStream(splitmix64(seed_ ^ splitmix64(tag)));
  }
  RandomStream child(std::string_view name) const { return child(fnv1a64(name)); }

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

  std::complex<double> normal_complex() { return {normal(), normal()}; }

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Eigen::VectorXcd normal_complex_vector(int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal_complex();
    return v;
  }

  Eigen::MatrixXcd normal_complex_matrix(int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = normal_complex();
    return m;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace psdr
