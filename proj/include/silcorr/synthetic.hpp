#pragma once

#include "silcorr/controller.hpp"
#include "silcorr/drive_log.hpp"
#include "silcorr/scenario.hpp"
#include "silcorr/simulator.hpp"

#include <cstdint>
#include <vector>

namespace silcorr::synthetic
{

/// Stand-in track repetitions: each one is a closed-loop run with a perturbed
/// set speed and sensor range, recorded with a random start delay.
struct SyntheticOptions
{
  int count{5};
  std::uint64_t seed{1};
  double speed_jitter{0.01};   // relative, uniform in +-jitter
  double range_jitter{5.0};    // m, uniform in +-jitter
  double max_time_shift{1.5};  // s, uniform in [0, max]
  double duration{30.0};
  double v_lon_noise{0.0};     // relative standard deviation, 0 disables
};

std::vector<logs::DriveLog> synthesize_track_repetitions(
  const scenario::ScenarioSpec & spec, const sim::AdsConfig & ads, const sim::SensorConfig & sensor,
  const SyntheticOptions & options = {}, const sim::SimulationOptions & sim_options = {},
  const scenario::GenerationOptions & generation = {});

/// Copy of `log` with every timestamp and the annotation moved by `shift`.
logs::DriveLog shift_log(const logs::DriveLog & log, double shift);

/// Multiplies each value of a dense signal by (1 + N(0, sigma)).
void inject_multiplicative_noise(logs::DriveLog & log, logs::Signal signal, double sigma, std::uint64_t seed);

}  // namespace silcorr::synthetic
