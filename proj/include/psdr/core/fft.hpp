// SPDX-License-Identifier: Apache-2.0
//
// Discrete Fourier analysis on torus grids via FFTW. The conventions match
// the continuum operator formula on [-B, B)^d:
//   to_frequency:   hat(k_j)  = h^d sum_x u(x) e^{-i x . k_j}
//   from_frequency: u(x)      = (M h)^{-d} sum_j e^{i x . k_j} hat(k_j)
// so from_frequency(to_frequency(u)) = u exactly (up to round-off).

#pragma once

#include <fftw3.h>

#include <Eigen/Dense>

#include <mutex>
#include <stdexcept>

#include "psdr/core/grid.hpp"

namespace psdr {

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

// unnormalized FFT of one contiguous complex field of grid shape
inline void raw_fft(const GridSpec& g, Eigen::VectorXcd& field, int sign) {
  auto* data = reinterpret_cast<fftw_complex*>(field.data());
  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (g.dimension == 1)
      plan = fftw_plan_dft_1d(g.points_per_axis, data, data, sign, FFTW_ESTIMATE);
    else
      plan = fftw_plan_dft_2d(g.points_per_axis, g.points_per_axis, data, data, sign,
                              FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fftw plan creation failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
}

// parity (-1)^{sum_a j_a} of the signed axis indices of a bin
inline double bin_parity(const GridSpec& g, long bin) {
  int s = 0;
  for (int a = 0; a < g.dimension; ++a) {
    s += static_cast<int>(bin % g.points_per_axis);
    bin /= g.points_per_axis;
  }
  return (s % 2 == 0) ? 1.0 : -1.0;  // (-1)^j == (-1)^bin since bin = j mod M, M even
}

}  // namespace detail

/// hat coefficients, bin-indexed, for each fiber component of u.
inline Eigen::VectorXcd to_frequency(const GridSpec& g, int fiber_dim,
                                     const Eigen::VectorXcd& u) {
  const long n = g.nodes();
  if (u.size() != n * fiber_dim) throw std::invalid_argument("to_frequency: size mismatch");
  Eigen::VectorXcd out(n * fiber_dim);
  Eigen::VectorXcd field(n);
  const double scale = g.cell_volume();
  for (int c = 0; c < fiber_dim; ++c) {
    for (long i = 0; i < n; ++i) field[i] = u[i * fiber_dim + c];
    detail::raw_fft(g, field, FFTW_FORWARD);
    for (long b = 0; b < n; ++b)
      out[b * fiber_dim + c] = scale * detail::bin_parity(g, b) * field[b];
  }
  return out;
}

/// inverse of to_frequency
inline Eigen::VectorXcd from_frequency(const GridSpec& g, int fiber_dim,
                                       const Eigen::VectorXcd& hat) {
  const long n = g.nodes();
  if (hat.size() != n * fiber_dim) throw std::invalid_argument("from_frequency: size mismatch");
  Eigen::VectorXcd out(n * fiber_dim);
  Eigen::VectorXcd field(n);
  const double scale = 1.0 / (n * g.cell_volume());
  for (int c = 0; c < fiber_dim; ++c) {
    for (long b = 0; b < n; ++b) field[b] = detail::bin_parity(g, b) * hat[b * fiber_dim + c];
    detail::raw_fft(g, field, FFTW_BACKWARD);
    for (long i = 0; i < n; ++i) out[i * fiber_dim + c] = scale * field[i];
  }
  return out;
}

}  // namespace psdr
