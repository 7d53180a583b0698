#pragma once

// Independent reference implementations used only by tests.

#include "silcorr/road.hpp"
#include "silcorr/sensor.hpp"

#include <span>
#include <vector>

namespace oracle
{

/// Correlation coefficient straight from its definition, in long double.
double pearson(std::span<const double> m, std::span<const double> g);

/// RMSE(M, G) / RMS(M), in long double.
double rrmse(std::span<const double> m, std::span<const double> g);

/// Two-sided Student-t p-value of r with n - 2 degrees of freedom (Boost.Math).
double p_value(double r, std::size_t n);

/// Regularized incomplete beta from Boost.Math.
double ibeta(double a, double b, double x);

/// Brute-force detection check: nearest distance by dense boundary sampling,
/// FOV by bearing angles, line of sight by sweeping 721 rays across the
/// target's angular extent and testing which rectangle each ray meets first.
bool sweep_visible(
  silcorr::Vec2 origin, double heading, const silcorr::sim::SensorConfig & config,
  const silcorr::Footprint & target, std::span<const silcorr::Footprint> occluders);

/// Ray parameter of the first hit of origin + s * dir (|dir| = 1) with the
/// rectangle, or a negative value when the ray misses.
double ray_hit(silcorr::Vec2 origin, silcorr::Vec2 dir, const silcorr::Footprint & box);

/// True when the two rectangles overlap (separating-axis test).
bool overlaps(const silcorr::Footprint & a, const silcorr::Footprint & b);

bool contains(const silcorr::Footprint & box, silcorr::Vec2 p);

}  // namespace oracle
