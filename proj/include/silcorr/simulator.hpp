#pragma once

#include "silcorr/controller.hpp"
#include "silcorr/drive_log.hpp"
#include "silcorr/fusion.hpp"
#include "silcorr/scenario.hpp"
#include "silcorr/sensor.hpp"

namespace silcorr::sim
{

struct SimulationOptions
{
  int oversample{4};          // integration steps per controller cycle
  double log_period{0.02};    // must be a multiple of the integration step
  double lag_tau{0.2};        // first-order actuation lag
  FusionConfig fusion;
  std::string repetition_id{"sim"};
};

/// Replays one target trajectory: interpolated world position, lane
/// coordinates and station rate at any time within its span.
class TrajectoryPlayer
{
public:
  TrajectoryPlayer(const scenario::TargetTrajectory & trajectory, const RoadFrame & road);

  LanePosition lane_at(double t) const;
  double station_rate_at(double t) const;

private:
  const scenario::TargetTrajectory * trajectory_;
  const RoadFrame * road_;
  std::vector<LanePosition> lane_;
};

/// Closed-loop run of the reference ADS through the scenario. The ego stays
/// on the ego-lane centerline; targets replay their trajectories.
logs::DriveLog simulate(
  const scenario::ScenarioArtifacts & artifacts, const AdsConfig & ads, const SensorConfig & sensor,
  double duration, const SimulationOptions & options = {});

}  // namespace silcorr::sim
