// SPDX-License-Identifier: Apache-2.0
//
// Closed sectors in the complex plane and their sampling. The sector
// Lambda = { |arg z| <= half_angle, |z| >= min_radius } is the parameter
// domain of the resolvent experiments; half_angle = pi/2 is the right
// half-plane. Lambda is treated as a real 2-dimensional parameter set.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace psdr {

using cplx = std::complex<double>;

struct SectorSpec {
  double half_angle = std::numbers::pi / 2.0;  // in (0, pi]
  double min_radius = 1.0;
  std::vector<double> sample_radii;   // strictly increasing, all >= min_radius
  std::vector<double> sample_angles;  // |angle| <= half_angle

  void validate() const {
    if (!(half_angle > 0.0) || half_angle > std::numbers::pi + 1e-15)
      throw std::invalid_argument("SectorSpec: half_angle must lie in (0, pi]");
    if (!(min_radius > 0.0)) throw std::invalid_argument("SectorSpec: min_radius must be positive");
    for (std::size_t i = 0; i < sample_radii.size(); ++i) {
      if (sample_radii[i] < min_radius * (1.0 - 1e-12))
        throw std::invalid_argument("SectorSpec: sample radius below min_radius");
      if (i > 0 && sample_radii[i] <= sample_radii[i - 1])
        throw std::invalid_argument("SectorSpec: sample radii must be strictly increasing");
    }
    for (double a : sample_angles)
      if (std::abs(a) > half_angle + 1e-12)
        throw std::invalid_argument("SectorSpec: sample angle outside sector");
  }

  bool contains(cplx z) const {
    if (std::abs(z) < min_radius * (1.0 - 1e-12)) return false;
    if (z == cplx(0.0, 0.0)) return false;
    return std::abs(std::arg(z)) <= half_angle + 1e-12;
  }

  /// Product set {r e^{i a}} of sample radii and angles.
  std::vector<cplx> samples() const {
    std::vector<cplx> out;
    out.reserve(sample_radii.size() * sample_angles.size());
    for (double r : sample_radii)
      for (double a : sample_angles) out.push_back(std::polar(r, a));
    return out;
  }

  /// Logarithmically spaced radii, uniformly spaced angles.
  static SectorSpec make(double half_angle, double min_radius, double max_radius,
                         int n_radii, int n_angles) {
    if (n_radii < 1 || n_angles < 1) throw std::invalid_argument("SectorSpec::make: counts >= 1");
    if (max_radius < min_radius) throw std::invalid_argument("SectorSpec::make: radius range");
    SectorSpec s;
    s.half_angle = half_angle;
    s.min_radius = min_radius;
    for (int i = 0; i < n_radii; ++i) {
      const double t = n_radii == 1 ? 0.0 : static_cast<double>(i) / (n_radii - 1);
      s.sample_radii.push_back(min_radius * std::pow(max_radius / min_radius, t));
    }
    for (int i = 0; i < n_angles; ++i) {
      const double t = n_angles == 1 ? 0.5 : static_cast<double>(i) / (n_angles - 1);
      s.sample_angles.push_back(-half_angle + 2.0 * half_angle * t);
    }
    s.validate();
    return s;
  }

  static SectorSpec right_half_plane(double min_radius, double max_radius, int n_radii,
                                     int n_angles) {
    return make(std::numbers::pi / 2.0, min_radius, max_radius, n_radii, n_angles);
  }
};

/// Euclidean distance from z to the sector (0 if z lies in it).
inline double distance_to_sector(cplx z, const SectorSpec& s) {
  if (s.contains(z)) return 0.0;
  const double r = std::abs(z);
  if (r == 0.0) return s.min_radius;
  const double theta = std::abs(std::arg(z));
  if (theta <= s.half_angle) return s.min_radius - r;  // radial projection stays in Lambda
  // nearest point lies on one of the boundary rays {t e^{+-i phi} : t >= min_radius}
  double best = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    const cplx dir = std::polar(1.0, sign * s.half_angle);
    const double t = std::max(s.min_radius, std::real(z * std::conj(dir)));
    best = std::min(best, std::abs(z - t * dir));
  }
  return best;
}

}  // namespace psdr
