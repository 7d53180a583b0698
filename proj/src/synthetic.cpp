#include "silcorr/synthetic.hpp"

#include "silcorr/error.hpp"

#include <random>
#include <string>

namespace silcorr::synthetic
{

std::vector<logs::DriveLog> synthesize_track_repetitions(
  const scenario::ScenarioSpec & spec, const sim::AdsConfig & ads, const sim::SensorConfig & sensor,
  const SyntheticOptions & options, const sim::SimulationOptions & sim_options,
  const scenario::GenerationOptions & generation)
{
  if (options.count < 1) throw Error(ErrorCode::InvalidConfig, "synthetic count must be >= 1");
  if (options.speed_jitter < 0.0 || options.range_jitter < 0.0 || options.max_time_shift < 0.0 ||
      options.v_lon_noise < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "synthetic jitter settings must be >= 0");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> shift(0.0, options.max_time_shift);

  std::vector<logs::DriveLog> out;
  out.reserve(static_cast<std::size_t>(options.count));
  for (int i = 0; i < options.count; ++i) {
    scenario::ScenarioSpec rep_spec = spec;
    rep_spec.ads_init_speed = spec.ads_init_speed * (1.0 + options.speed_jitter * unit(rng));
    sim::SensorConfig rep_sensor = sensor;
    rep_sensor.max_range = sensor.max_range + options.range_jitter * unit(rng);
    const double delay = shift(rng);
    const std::uint64_t noise_seed = rng();

    sim::AdsConfig rep_ads = ads;
    rep_ads.set_speed = scenario::kmh_to_ms(rep_spec.ads_init_speed);
    sim::SimulationOptions rep_options = sim_options;
    rep_options.repetition_id = std::to_string(i);
    const auto artifacts = scenario::generate_scenario(rep_spec, generation);
    auto log = shift_log(sim::simulate(artifacts, rep_ads, rep_sensor, options.duration, rep_options), delay);
    log.source = logs::Source::Track;
    log.scenario_id = spec.scenario_id;
    if (options.v_lon_noise > 0.0) {
      inject_multiplicative_noise(log, logs::Signal::v_lon, options.v_lon_noise, noise_seed);
    }
    out.push_back(std::move(log));
  }
  return out;
}

logs::DriveLog shift_log(const logs::DriveLog & log, double shift)
{
  logs::DriveLog out = log;
  for (auto & s : out.samples) s.t += shift;
  out.annotation_t += shift;
  return out;
}

void inject_multiplicative_noise(logs::DriveLog & log, logs::Signal signal, double sigma, std::uint64_t seed)
{
  if (signal == logs::Signal::s_dist) {
    throw Error(ErrorCode::InvalidConfig, "noise injection applies to dense signals only");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto & s : log.samples) {
    const double factor = 1.0 + noise(rng);
    switch (signal) {
      case logs::Signal::v_lon: s.v_lon *= factor; break;
      case logs::Signal::a_lon: s.a_lon *= factor; break;
      case logs::Signal::a_lat: s.a_lat *= factor; break;
      case logs::Signal::s_dist: break;
    }
  }
}

}  // namespace silcorr::synthetic
