#pragma once

#include "silcorr/drive_log.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace silcorr::metrics
{

/// Aligned value pairs: M from the track (reference), G from the simulation.
struct MetricInput
{
  std::span<const double> m;
  std::span<const double> g;
  logs::Signal signal{logs::Signal::v_lon};
};

enum class CorrelationBand { High, Moderate, Low, Weak, NotPositive };
enum class AccuracyBand { Excellent, Good, Fair, Poor };

std::string_view to_string(CorrelationBand band);
std::string_view to_string(AccuracyBand band);
CorrelationBand correlation_band_from_string(std::string_view text);
AccuracyBand accuracy_band_from_string(std::string_view text);

inline constexpr double kSignificanceLevel = 0.05;

/// Sample correlation coefficient. Throws ZeroVariance when either series is constant.
double pearson_r(const MetricInput & input);

/// Two-sided p-value of r under the null hypothesis of zero correlation.
double p_value(double r, std::size_t n);

/// RMSE of G against M divided by the RMS of M. Throws ZeroRMS when M is all zero.
double rrmse(const MetricInput & input);

CorrelationBand rate_correlation(double r);
AccuracyBand rate_accuracy(double rrmse);

struct Rating
{
  CorrelationBand r_band;
  AccuracyBand rrmse_band;
};

Rating rate(double r, double rrmse);

/// Metrics of one aligned pair. An undefined coefficient (constant series)
/// leaves r, p_value and r_band empty; a zero reference RMS leaves rrmse empty.
struct MetricResult
{
  logs::Signal signal{logs::Signal::v_lon};
  std::size_t n{0};
  std::optional<double> r;
  std::optional<double> p_value;
  std::optional<double> rrmse;
  std::optional<CorrelationBand> r_band;
  std::optional<AccuracyBand> rrmse_band;
  bool significant{false};
};

/// Full evaluation; throws DegenerateSampleSize for fewer than 3 pairs.
MetricResult evaluate(const MetricInput & input);

}  // namespace silcorr::metrics
