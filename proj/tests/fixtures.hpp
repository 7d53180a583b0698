#pragma once

#include "silcorr/pipeline.hpp"

#include <filesystem>
#include <string>

namespace fixture
{

/// The bundled pipeline config with its output redirected to `out`.
silcorr::pipeline::PipelineConfig bundled_config(const std::filesystem::path & out);

/// Track repetitions that are copies of the simulation of `spec_file`
/// (relative to the bundled scenarios directory). A positive `v_lon_sigma`
/// adds multiplicative noise to each copy's v_lon.
silcorr::pipeline::PreparedScenario self_comparison(
  const silcorr::pipeline::PipelineConfig & config, const std::string & spec_file, int copies,
  double v_lon_sigma = 0.0);

/// Smallest r and largest RRMSE over every cell of the report, restricted to
/// one signal unless `all` is set.
struct Extremes
{
  double min_r{1.0};
  double max_rrmse{0.0};
  bool all_defined{true};
};
Extremes extremes(const silcorr::report::ScenarioReport & report, silcorr::logs::Signal signal, bool all = false);

}  // namespace fixture
