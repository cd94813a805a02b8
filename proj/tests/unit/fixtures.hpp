#pragma once

// Frozen 17-point contact-angle curve produced by the half-plane module at
// its default resolution; shared by the suites that need a spectral curve
// without paying for the eigensolves (flags mark samples inside the
// essential-edge boundary layer).

#include <numbers>
#include <vector>

#include "glsurf/halfplane.hpp"

inline const std::vector<double> kNus = {
    0.0,
    std::numbers::pi / 32,      2 * std::numbers::pi / 32,
    3 * std::numbers::pi / 32,  4 * std::numbers::pi / 32,
    5 * std::numbers::pi / 32,  6 * std::numbers::pi / 32,
    7 * std::numbers::pi / 32,  8 * std::numbers::pi / 32,
    9 * std::numbers::pi / 32,  10 * std::numbers::pi / 32,
    11 * std::numbers::pi / 32, 12 * std::numbers::pi / 32,
    13 * std::numbers::pi / 32, 14 * std::numbers::pi / 32,
    15 * std::numbers::pi / 32, 16 * std::numbers::pi / 32};
inline const std::vector<double> kZetas = {
    0.59104488, 0.66197656, 0.72689723, 0.78441496, 0.83426602, 0.87645666,
    0.91119668, 0.93889573, 0.96014495, 0.97569268, 0.98641006, 0.99324148,
    0.99718004, 0.99918927, 1.00014497, 1.00056506, 1.00068926};
inline const std::vector<unsigned char> kFlags = {0, 0, 0, 0, 0, 0, 0, 0, 1,
                                                  1, 1, 1, 1, 1, 1, 1, 1};
inline constexpr double kTheta0Ref = 0.5901073;

inline glsurf::halfplane::SpectralCurve fixture_curve() {
  return glsurf::halfplane::SpectralCurve(kNus, kZetas, kFlags, kTheta0Ref);
}
