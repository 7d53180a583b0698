#pragma once

#include "silcorr/sensor.hpp"

#include <span>
#include <string>
#include <vector>

namespace silcorr::sim
{

struct FusionConfig
{
  int confirm_cycles{3};
  int coast_cycles{5};
  double ema_alpha{0.4};
};

void validate(const FusionConfig & config);

struct TrackedObject
{
  int track_id{0};
  std::string actor_id;
  double range{0.0};       // smoothed
  double range_rate{0.0};  // smoothed
  bool in_ego_lane{false};
  int confirmation_age{0};  // consecutive cycles with a detection
  int missed_cycles{0};
  bool confirmed{false};
  double first_seen_t{0.0};
};

/// Emulated sensor fusion: per-actor tracks with N-cycle confirmation,
/// exponential smoothing and coasting through short dropouts.
class SensorFusion
{
public:
  SensorFusion(FusionConfig config, double cycle_period);

  /// Feeds one cycle of detections; returns the confirmed tracks reported
  /// downstream, ordered by track id.
  std::vector<TrackedObject> update(std::span<const Detection> detections);

  const std::vector<TrackedObject> & tracks() const { return tracks_; }

private:
  FusionConfig config_;
  double cycle_period_;
  int next_track_id_{1};
  std::vector<TrackedObject> tracks_;
};

}  // namespace silcorr::sim
