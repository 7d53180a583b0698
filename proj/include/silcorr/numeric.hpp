#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace silcorr::numeric
{

/// Neumaier-compensated running sum.
class CompensatedSum
{
public:
  void add(double value) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

private:
  double sum_{0.0};
  double compensation_{0.0};
};

/// Arithmetic mean computed as x0 + sum(x_i - x0) / n. A set of identical
/// values returns that value bit-exactly.
double mean(std::span<const double> values);

/// Value of the segment (t0, v0)-(t1, v1) at t.
inline double lerp(double t0, double v0, double t1, double v1, double t)
{
  if (t1 == t0) {
    return v0;
  }
  const double w = (t - t0) / (t1 - t0);
  return v0 + w * (v1 - v0);
}

/// Shortest decimal representation that parses back to the same double.
std::string format_exact(double value);

/// Fixed-point formatting with the given number of decimals.
std::string format_fixed(double value, int decimals);

/// Strict decimal parse of the whole token; nullopt on any trailing text.
std::optional<double> parse_double(std::string_view token);

}  // namespace silcorr::numeric
