#pragma once

#include "silcorr/fusion.hpp"
#include "silcorr/sensor.hpp"

#include <optional>
#include <span>

namespace silcorr::sim
{

/// Reference longitudinal policy standing in for the system under test.
struct AdsConfig
{
  double set_speed{70.0 / 3.6};  // m/s
  double time_gap{1.5};
  double standstill_gap{5.0};
  double comfort_decel{3.0};
  double emergency_decel{8.0};
  double max_accel{2.0};
  double jerk_limit{8.0};
  double controller_period{0.04};
  double speed_gain{0.5};
  double gap_gain{0.2};
  double rate_gain{0.6};
};

void validate(const AdsConfig & config);

enum class Regime { Cruise, Follow, ComfortBrake, EmergencyBrake };

struct ControlDecision
{
  double command{0.0};  // m/s^2, after the jerk rate limit
  Regime regime{Regime::Cruise};
  double required_decel{0.0};
  std::optional<int> threat_track_id;
};

/// Nearest confirmed in-lane track, if any.
const TrackedObject * select_threat(std::span<const TrackedObject> tracked);

/// Kinematic deceleration needed to match the target speed at standstill_gap.
double required_deceleration(double v_ego, double v_target, double gap, double standstill_gap);

/// One controller cycle. `previous_command` feeds the jerk rate limit.
ControlDecision controller_step(
  const EgoState & ego, std::span<const TrackedObject> tracked, const AdsConfig & config,
  double previous_command);

}  // namespace silcorr::sim
