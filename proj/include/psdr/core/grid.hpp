// SPDX-License-Identifier: Apache-2.0
//
// Torus grids and grid functions. The box [-B, B)^d with M points per axis
// stands in for R^d; the induced frequency lattice is {k pi / B : |k_j| <= M/2}
// (the +-Nyquist pair shares one storage bin). Grid functions serialize to a
// flat binary layout (header: d, M, B, m; payload row-major complex doubles,
// little endian) and to CSV for small grids.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "psdr/core/spaces.hpp"

namespace psdr {

struct GridSpec {
  int dimension = 1;          // d, 1 or 2 at desk scale
  double box_halfwidth = 16;  // B
  int points_per_axis = 64;   // M, even, >= 4

  void validate() const {
    if (dimension < 1 || dimension > 2) throw std::invalid_argument("GridSpec: dimension must be 1 or 2");
    if (!(box_halfwidth > 0)) throw std::invalid_argument("GridSpec: box half-width must be positive");
    if (points_per_axis < 4 || points_per_axis % 2 != 0)
      throw std::invalid_argument("GridSpec: points_per_axis must be even and >= 4");
  }

  long nodes() const {
    long n = 1;
    for (int a = 0; a < dimension; ++a) n *= points_per_axis;
    return n;
  }
  double spacing() const { return 2.0 * box_halfwidth / points_per_axis; }
  double cell_volume() const { return std::pow(spacing(), dimension); }
  double freq_step() const { return std::numbers::pi / box_halfwidth; }

  /// node coordinates from the flat row-major node index
  Eigen::VectorXd node(long idx) const {
    Eigen::VectorXd x(dimension);
    const double h = spacing();
    for (int a = dimension - 1; a >= 0; --a) {
      x[a] = -box_halfwidth + h * (idx % points_per_axis);
      idx /= points_per_axis;
    }
    return x;
  }

  /// signed per-axis frequency index for a storage bin in [0, M)
  int axis_index_of_bin(int b) const {
    return b < points_per_axis / 2 ? b : b - points_per_axis;
  }

  /// frequency vector of the flat row-major bin index
  Eigen::VectorXd frequency(long bin) const {
    Eigen::VectorXd k(dimension);
    const double dk = freq_step();
    for (int a = dimension - 1; a >= 0; --a) {
      k[a] = dk * axis_index_of_bin(static_cast<int>(bin % points_per_axis));
      bin /= points_per_axis;
    }
    return k;
  }

  /// signed per-axis indices of a flat bin
  std::vector<int> axis_indices(long bin) const {
    std::vector<int> j(dimension);
    for (int a = dimension - 1; a >= 0; --a) {
      j[a] = axis_index_of_bin(static_cast<int>(bin % points_per_axis));
      bin /= points_per_axis;
    }
    return j;
  }

  /// the declared (symmetric) frequency set of one axis, |k| <= M/2
  std::vector<double> declared_axis_frequencies() const {
    std::vector<double> f;
    for (int k = -points_per_axis / 2; k <= points_per_axis / 2; ++k)
      f.push_back(freq_step() * k);
    return f;
  }

  bool operator==(const GridSpec& o) const {
    return dimension == o.dimension && box_halfwidth == o.box_halfwidth &&
           points_per_axis == o.points_per_axis;
  }
};

struct GridFunction {
  GridSpec grid;
  BanachSpaceSpec fiber;
  Eigen::VectorXcd values;  // node-major, fiber minor: size nodes * fiber.dim

  void validate() const {
    grid.validate();
    if (values.size() != grid.nodes() * fiber.dim)
      throw std::invalid_argument("GridFunction: value array shape mismatch");
    if (!values.allFinite()) throw std::invalid_argument("GridFunction: non-finite entries");
  }

  Eigen::VectorXcd at_node(long idx) const { return values.segment(idx * fiber.dim, fiber.dim); }

  static GridFunction zero(const GridSpec& g, const BanachSpaceSpec& fiber) {
    GridFunction u{g, fiber, Eigen::VectorXcd::Zero(g.nodes() * fiber.dim)};
    return u;
  }

  /// discrete L_p norm with Riemann cell weights and the fiber norm inside
  double lp_norm(double p) const {
    const long n = grid.nodes();
    double acc = 0.0;
    for (long i = 0; i < n; ++i) acc += std::pow(fiber.norm(at_node(i)), p);
    return std::pow(grid.cell_volume() * acc, 1.0 / p);
  }

  void write_binary(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("GridFunction::write_binary: cannot open " + path);
    const std::uint32_t d = static_cast<std::uint32_t>(grid.dimension);
    const std::uint32_t M = static_cast<std::uint32_t>(grid.points_per_axis);
    const double B = grid.box_halfwidth;
    const std::uint32_t m = static_cast<std::uint32_t>(fiber.dim);
    out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    out.write(reinterpret_cast<const char*>(&M), sizeof(M));
    out.write(reinterpret_cast<const char*>(&B), sizeof(B));
    out.write(reinterpret_cast<const char*>(&m), sizeof(m));
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(sizeof(cplx) * values.size()));
    if (!out) throw std::runtime_error("GridFunction::write_binary: short write");
  }

  static GridFunction read_binary(const std::string& path,
                                  const BanachSpaceSpec* fiber_hint = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("GridFunction::read_binary: cannot open " + path);
    std::uint32_t d = 0, M = 0, m = 0;
    double B = 0;
    in.read(reinterpret_cast<char*>(&d), sizeof(d));
    in.read(reinterpret_cast<char*>(&M), sizeof(M));
    in.read(reinterpret_cast<char*>(&B), sizeof(B));
    in.read(reinterpret_cast<char*>(&m), sizeof(m));
    if (!in) throw std::runtime_error("GridFunction::read_binary: truncated header");
    GridFunction u;
    u.grid.dimension = static_cast<int>(d);
    u.grid.box_halfwidth = B;
    u.grid.points_per_axis = static_cast<int>(M);
    u.fiber = fiber_hint ? *fiber_hint : BanachSpaceSpec::euclidean(static_cast<int>(m));
    if (u.fiber.dim != static_cast<int>(m))
      throw std::runtime_error("GridFunction::read_binary: fiber dimension mismatch");
    u.grid.validate();
    u.values.resize(u.grid.nodes() * u.fiber.dim);
    in.read(reinterpret_cast<char*>(u.values.data()),
            static_cast<std::streamsize>(sizeof(cplx) * u.values.size()));
    if (!in) throw std::runtime_error("GridFunction::read_binary: truncated payload");
    return u;
  }

  /// CSV rows: node coordinates, fiber component, re, im (RFC 4180, CRLF)
  void write_csv(const std::string& path) const {
    if (grid.nodes() > 65536) throw std::runtime_error("GridFunction::write_csv: grid too large for CSV");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("GridFunction::write_csv: cannot open " + path);
    out << "node";
    for (int a = 0; a < grid.dimension; ++a) out << ",x" << a;
    out << ",component,re,im\r\n";
    out.precision(17);
    for (long i = 0; i < grid.nodes(); ++i) {
      const Eigen::VectorXd x = grid.node(i);
      for (int c = 0; c < fiber.dim; ++c) {
        out << i;
        for (int a = 0; a < grid.dimension; ++a) out << "," << x[a];
        const cplx v = values[i * fiber.dim + c];
        out << "," << c << "," << v.real() << "," << v.imag() << "\r\n";
      }
    }
  }
};

}  // namespace psdr
