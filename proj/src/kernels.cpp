#include "silcorr/kernels.hpp"

#include <exception>

namespace silcorr::kernels
{

namespace
{

void rethrow_first(const std::vector<std::exception_ptr> & errors)
{
  for (const auto & e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<metrics::MetricResult> evaluate_pairs_serial(std::span<const SeriesPair> pairs)
{
  std::vector<metrics::MetricResult> out;
  out.reserve(pairs.size());
  for (const auto & p : pairs) out.push_back(metrics::evaluate(p.input()));
  return out;
}

std::vector<metrics::MetricResult> evaluate_pairs_parallel(std::span<const SeriesPair> pairs)
{
  const auto n = static_cast<long long>(pairs.size());
  std::vector<metrics::MetricResult> out(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = metrics::evaluate(pairs[static_cast<std::size_t>(i)].input());
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  rethrow_first(errors);
  return out;
}

std::vector<std::vector<sim::Detection>> visibility_batch_serial(
  std::span<const sim::SensorScene> scenes, const sim::SensorConfig & config)
{
  std::vector<std::vector<sim::Detection>> out;
  out.reserve(scenes.size());
  for (const auto & scene : scenes) out.push_back(sim::visibility(scene, config));
  return out;
}

std::vector<std::vector<sim::Detection>> visibility_batch_parallel(
  std::span<const sim::SensorScene> scenes, const sim::SensorConfig & config)
{
  const auto n = static_cast<long long>(scenes.size());
  std::vector<std::vector<sim::Detection>> out(scenes.size());
  std::vector<std::exception_ptr> errors(scenes.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = sim::visibility(scenes[static_cast<std::size_t>(i)], config);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  rethrow_first(errors);
  return out;
}

}  // namespace silcorr::kernels
