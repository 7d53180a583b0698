#include "silcorr/road.hpp"

#include "silcorr/error.hpp"

#include <cmath>

namespace silcorr
{

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

RoadFrame::RoadFrame(double curvature) : curvature_(curvature)
{
  if (!(curvature >= 0.0) || !std::isfinite(curvature)) {
    throw Error(ErrorCode::SpecInvariantViolation, "curvature must be finite and >= 0");
  }
}

double RoadFrame::radius() const { return 1.0 / curvature_; }

Vec2 RoadFrame::arc_center() const { return {0.0, -radius()}; }

double RoadFrame::radius_at(double lateral) const { return radius() + lateral; }

Pose RoadFrame::to_world(LanePosition lane) const
{
  if (is_straight()) {
    return {{lane.station, lane.lateral}, 0.0};
  }
  const double r = radius();
  const double theta = lane.station / r;
  const double rho = r + lane.lateral;
  return {{rho * std::sin(theta), -r + rho * std::cos(theta)}, -theta};
}

LanePosition RoadFrame::to_lane(Vec2 world) const
{
  if (is_straight()) {
    return {world.x, world.y};
  }
  const double r = radius();
  const Vec2 rel{world.x, world.y + r};
  const double theta = std::atan2(rel.x, rel.y);
  return {r * theta, norm(rel) - r};
}

double RoadFrame::station_rate_factor(double lateral) const
{
  if (is_straight()) {
    return 1.0;
  }
  return radius() / radius_at(lateral);
}

std::array<Vec2, 4> Footprint::corners() const
{
  const Vec2 fwd{std::cos(pose.heading), std::sin(pose.heading)};
  const Vec2 left{-fwd.y, fwd.x};
  const Vec2 c = pose.position;
  const double hl = 0.5 * length;
  const double hw = 0.5 * width;
  return {{
    c + hl * fwd + hw * left,
    c + hl * fwd - hw * left,
    c - hl * fwd - hw * left,
    c - hl * fwd + hw * left,
  }};
}

}  // namespace silcorr
