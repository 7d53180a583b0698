#include "silcorr/controller.hpp"

#include "silcorr/error.hpp"

#include <algorithm>
#include <cmath>

namespace silcorr::sim
{

namespace
{
constexpr double kMinClearance = 1e-3;
// Stop zone behind a standing threat: finish the stop, then hold.
constexpr double kStandingSpeed = 0.1;
constexpr double kStopZone = 1.0;
constexpr double kStopDecel = 1.0;
}

void validate(const AdsConfig & c)
{
  if (!(c.comfort_decel > 0.0 && c.comfort_decel < c.emergency_decel)) {
    throw Error(ErrorCode::InvalidConfig, "require 0 < comfort_decel < emergency_decel");
  }
  if (!(c.time_gap > 0.0) || !(c.standstill_gap > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "time_gap and standstill_gap must be > 0");
  }
  if (!(c.max_accel > 0.0) || !(c.jerk_limit > 0.0) || !(c.controller_period > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "max_accel, jerk_limit and controller_period must be > 0");
  }
  if (!(c.set_speed >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "set_speed must be >= 0");
  }
}

const TrackedObject * select_threat(std::span<const TrackedObject> tracked)
{
  const TrackedObject * best = nullptr;
  for (const auto & t : tracked) {
    if (!t.confirmed || !t.in_ego_lane) continue;
    if (best == nullptr || t.range < best->range) best = &t;
  }
  return best;
}

double required_deceleration(double v_ego, double v_target, double gap, double standstill_gap)
{
  if (v_ego <= v_target) return 0.0;
  return (v_ego * v_ego - v_target * v_target) / (2.0 * std::max(kMinClearance, gap - standstill_gap));
}

ControlDecision controller_step(
  const EgoState & ego, std::span<const TrackedObject> tracked, const AdsConfig & config,
  double previous_command)
{
  ControlDecision decision;
  const double v = ego.v_lon;
  double command =
    std::clamp(config.speed_gain * (config.set_speed - v), -config.comfort_decel, config.max_accel);

  if (const TrackedObject * threat = select_threat(tracked)) {
    decision.threat_track_id = threat->track_id;
    const double gap = threat->range;
    const double v_target = std::max(0.0, v + threat->range_rate);
    const double desired_gap = config.standstill_gap + config.time_gap * v;
    const double gap_law = config.gap_gain * (gap - desired_gap) + config.rate_gain * (v_target - v);
    const double d_req = required_deceleration(v, v_target, gap, config.standstill_gap);
    decision.required_decel = d_req;

    double follow = std::min(config.max_accel, gap_law);
    if (d_req > 0.0) follow = std::min(follow, -d_req);
    const bool emergency = d_req > config.comfort_decel;
    follow = std::max(emergency ? -config.emergency_decel : -config.comfort_decel, follow);

    if (v_target < kStandingSpeed && gap <= config.standstill_gap + kStopZone) {
      follow = std::min(follow, v > 0.0 ? -kStopDecel : 0.0);
    }

    if (follow < command) {
      command = follow;
      if (emergency) {
        decision.regime = Regime::EmergencyBrake;
      } else if (command < 0.0 && d_req > 0.0) {
        decision.regime = Regime::ComfortBrake;
      } else {
        decision.regime = Regime::Follow;
      }
    }
  }

  const double max_step = config.jerk_limit * config.controller_period;
  decision.command = std::clamp(command, previous_command - max_step, previous_command + max_step);
  return decision;
}

}  // namespace silcorr::sim
