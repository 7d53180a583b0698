#pragma once

#include "silcorr/road.hpp"

#include <span>
#include <string>
#include <vector>

namespace silcorr::sim
{

/// Ideal sensor: reports every actor inside range and field of view that is
/// not fully hidden behind another actor.
struct SensorConfig
{
  double max_range{150.0};
  double fov_half_angle{0.5};  // rad
  double mount_offset{0.0};    // behind the front bumper
};

void validate(const SensorConfig & config);

struct EgoState
{
  double t{0.0};
  double station{0.0};
  double lateral{0.0};
  double v_lon{0.0};
  double a_lon{0.0};
  double a_lat{0.0};
};

/// An actor as seen by the sensor model, in both road and world frames.
struct ActorState
{
  std::string actor_id;
  LanePosition lane;
  Footprint footprint;
  double station_rate{0.0};
};

struct Detection
{
  std::string actor_id;
  double range{0.0};  // bumper-to-bumper along the ego-lane centerline
  double relative_speed{0.0};
  bool in_ego_lane{false};
  double first_seen_t{0.0};
};

/// Scene snapshot handed to the sensor.
struct SensorScene
{
  EgoState ego;
  Footprint ego_footprint;
  double ego_station_rate{0.0};
  double lane_width{3.5};
  std::vector<ActorState> actors;
};

/// Sensor origin: ego front-bumper center moved back by mount_offset.
Vec2 sensor_origin(const Footprint & ego, const SensorConfig & config);
Vec2 heading_vector(double heading);

/// Distance from `p` to the closest point of the footprint (0 when inside).
double distance_to_footprint(Vec2 p, const Footprint & footprint);

/// True when the open segment a-b passes through the interior of the footprint.
bool segment_blocked_by(Vec2 a, Vec2 b, const Footprint & footprint);

/// Sight points of a footprint: its 4 corners followed by its center.
std::array<Vec2, 5> sight_points(const Footprint & footprint);

/// Detection predicate for `target` with every entry of `occluders` able to
/// hide it: nearest point within range, a sight point inside the FOV cone and
/// at least one unobstructed sight ray.
bool is_visible(
  Vec2 origin, Vec2 forward, const SensorConfig & config, const Footprint & target,
  std::span<const Footprint> occluders);

std::vector<Detection> visibility(const SensorScene & scene, const SensorConfig & config);

}  // namespace silcorr::sim
