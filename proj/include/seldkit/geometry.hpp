// SPDX-License-Identifier: Apache-2.0
//
// seldkit: spatial sound scene synthesis and SELD evaluation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELDKIT_GEOMETRY_HPP
#define SELDKIT_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seldkit/common.hpp"

namespace seldkit {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Direction of arrival. Azimuth is counter-clockwise from the front (+x axis),
// stored normalized to (-pi, pi]; elevation is up from the horizontal plane,
// restricted to [-pi/2, pi/2].
struct Direction {
  double azimuth = 0.0;    // radians, (-pi, pi]
  double elevation = 0.0;  // radians, [-pi/2, pi/2]

  Direction() = default;

  Direction(double az, double el) {
    if (!(std::abs(el) <= kPi / 2.0 + 1e-12)) {
      throw std::invalid_argument("Direction: elevation outside [-pi/2, pi/2]");
    }
    elevation = std::clamp(el, -kPi / 2.0, kPi / 2.0);
    az = std::fmod(az + kPi, kTwoPi);
    if (az <= 0.0) az += kTwoPi;
    azimuth = az - kPi;
  }

  static Direction from_degrees(double az_deg, double el_deg) {
    return Direction(deg2rad(az_deg), deg2rad(el_deg));
  }

  double azimuth_deg() const { return rad2deg(azimuth); }
  double elevation_deg() const { return rad2deg(elevation); }
};

inline Vec3 unit_vector(const Direction& d) {
  const double ce = std::cos(d.elevation);
  return {ce * std::cos(d.azimuth), ce * std::sin(d.azimuth), std::sin(d.elevation)};
}

inline Direction direction_from_unit(const Vec3& v) {
  const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  if (n <= 0.0) {
    throw std::invalid_argument("direction_from_unit: zero vector");
  }
  return Direction(std::atan2(v.y, v.x), std::asin(std::clamp(v.z / n, -1.0, 1.0)));
}

// Great-circle angle between two directions, in radians.
inline double angular_distance(const Direction& a, const Direction& b) {
  const double c = std::sin(a.elevation) * std::sin(b.elevation) +
                   std::cos(a.elevation) * std::cos(b.elevation) *
                       std::cos(a.azimuth - b.azimuth);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

inline double angular_distance_deg(const Direction& a, const Direction& b) {
  return rad2deg(angular_distance(a, b));
}

}  // namespace seldkit

#endif  // SELDKIT_GEOMETRY_HPP
