#include "silcorr/sensor.hpp"

#include "silcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace silcorr::sim
{

namespace
{

// Tolerance on the range bound: a target sitting exactly at max_range stays
// detectable after a round trip of the range through text or arithmetic.
constexpr double kRangeTolerance = 1e-6;
constexpr double kGrazeTolerance = 1e-12;

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double w = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  w = std::clamp(w, 0.0, 1.0);
  return norm(p - (a + w * ab));
}

}  // namespace

void validate(const SensorConfig & config)
{
  if (!(config.max_range > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "sensor max_range must be > 0");
  }
  if (!(config.fov_half_angle > 0.0 && config.fov_half_angle <= std::numbers::pi)) {
    throw Error(ErrorCode::InvalidConfig, "sensor fov_half_angle must lie in (0, pi]");
  }
  if (!std::isfinite(config.mount_offset)) {
    throw Error(ErrorCode::InvalidConfig, "sensor mount_offset must be finite");
  }
}

Vec2 heading_vector(double heading) { return {std::cos(heading), std::sin(heading)}; }

Vec2 sensor_origin(const Footprint & ego, const SensorConfig & config)
{
  const Vec2 fwd = heading_vector(ego.pose.heading);
  return ego.center() + (0.5 * ego.length - config.mount_offset) * fwd;
}

double distance_to_footprint(Vec2 p, const Footprint & footprint)
{
  const Vec2 fwd = heading_vector(footprint.pose.heading);
  const Vec2 left{-fwd.y, fwd.x};
  const Vec2 rel = p - footprint.center();
  if (std::fabs(dot(rel, fwd)) <= 0.5 * footprint.length && std::fabs(dot(rel, left)) <= 0.5 * footprint.width) {
    return 0.0;
  }
  const auto c = footprint.corners();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i) {
    best = std::min(best, point_segment_distance(p, c[i], c[(i + 1) % c.size()]));
  }
  return best;
}

bool segment_blocked_by(Vec2 a, Vec2 b, const Footprint & footprint)
{
  // Liang-Barsky clip in the footprint's local frame.
  const Vec2 fwd = heading_vector(footprint.pose.heading);
  const Vec2 left{-fwd.y, fwd.x};
  const Vec2 ra = a - footprint.center();
  const Vec2 d = b - a;
  const double p0[2] = {dot(ra, fwd), dot(ra, left)};
  const double dir[2] = {dot(d, fwd), dot(d, left)};
  const double half[2] = {0.5 * footprint.length, 0.5 * footprint.width};

  double t_enter = 0.0;
  double t_exit = 1.0;
  for (int axis = 0; axis < 2; ++axis) {
    if (dir[axis] == 0.0) {
      if (std::fabs(p0[axis]) >= half[axis]) return false;
      continue;
    }
    double t0 = (-half[axis] - p0[axis]) / dir[axis];
    double t1 = (half[axis] - p0[axis]) / dir[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter >= t_exit) return false;
  }
  return (t_exit - t_enter) * norm(d) > kGrazeTolerance;
}

std::array<Vec2, 5> sight_points(const Footprint & footprint)
{
  const auto c = footprint.corners();
  return {c[0], c[1], c[2], c[3], footprint.center()};
}

bool is_visible(
  Vec2 origin, Vec2 forward, const SensorConfig & config, const Footprint & target,
  std::span<const Footprint> occluders)
{
  if (distance_to_footprint(origin, target) > config.max_range + kRangeTolerance) {
    return false;
  }
  const auto points = sight_points(target);
  const double cos_half = std::cos(config.fov_half_angle);
  const auto in_fov = [&](Vec2 p) {
    const Vec2 v = p - origin;
    const double len = norm(v);
    if (len == 0.0) return true;
    return dot(v, forward) >= cos_half * len;
  };
  if (std::none_of(points.begin(), points.end(), in_fov)) {
    return false;
  }
  return std::any_of(points.begin(), points.end(), [&](Vec2 p) {
    return std::none_of(occluders.begin(), occluders.end(), [&](const Footprint & o) {
      return segment_blocked_by(origin, p, o);
    });
  });
}

std::vector<Detection> visibility(const SensorScene & scene, const SensorConfig & config)
{
  const Vec2 origin = sensor_origin(scene.ego_footprint, config);
  const Vec2 forward = heading_vector(scene.ego_footprint.pose.heading);

  std::vector<Footprint> occluders;
  occluders.reserve(scene.actors.size());
  std::vector<Detection> detections;
  for (std::size_t i = 0; i < scene.actors.size(); ++i) {
    occluders.clear();
    for (std::size_t j = 0; j < scene.actors.size(); ++j) {
      if (j != i) occluders.push_back(scene.actors[j].footprint);
    }
    const auto & actor = scene.actors[i];
    if (!is_visible(origin, forward, config, actor.footprint, occluders)) {
      continue;
    }
    Detection d;
    d.actor_id = actor.actor_id;
    d.range = actor.lane.station - scene.ego.station - 0.5 * (scene.ego_footprint.length + actor.footprint.length);
    d.relative_speed = actor.station_rate - scene.ego_station_rate;
    d.in_ego_lane = std::fabs(actor.lane.lateral - scene.ego.lateral) < 0.5 * scene.lane_width;
    d.first_seen_t = scene.ego.t;
    detections.push_back(std::move(d));
  }
  return detections;
}

}  // namespace silcorr::sim
