#pragma once

#include "silcorr/metrics.hpp"
#include "silcorr/sensor.hpp"

#include <span>
#include <vector>

namespace silcorr::kernels
{

struct SeriesPair
{
  std::vector<double> m;
  std::vector<double> g;
  logs::Signal signal{logs::Signal::v_lon};

  metrics::MetricInput input() const { return {m, g, signal}; }
};

/// Batch metric evaluation. Both variants return identical results in input
/// order; the first failing pair's error is rethrown.
std::vector<metrics::MetricResult> evaluate_pairs_serial(std::span<const SeriesPair> pairs);
std::vector<metrics::MetricResult> evaluate_pairs_parallel(std::span<const SeriesPair> pairs);

/// Batch sensor evaluation over independent scenes.
std::vector<std::vector<sim::Detection>> visibility_batch_serial(
  std::span<const sim::SensorScene> scenes, const sim::SensorConfig & config);
std::vector<std::vector<sim::Detection>> visibility_batch_parallel(
  std::span<const sim::SensorScene> scenes, const sim::SensorConfig & config);

}  // namespace silcorr::kernels
