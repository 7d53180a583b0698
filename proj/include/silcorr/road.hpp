#pragma once

#include <array>

namespace silcorr
{

struct Vec2
{
  double x{0.0};
  double y{0.0};
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 v);

/// Position in the road frame: station along the ego-lane centerline and
/// lateral offset from it (positive to the left).
struct LanePosition
{
  double station{0.0};
  double lateral{0.0};
};

struct Pose
{
  Vec2 position;
  double heading{0.0};
};

/// Constant-curvature road. The ego-lane centerline starts at the origin
/// heading along +x and, for curvature > 0, bends to the right around the
/// center (0, -1/curvature). Lanes are concentric with the ego lane.
class RoadFrame
{
public:
  explicit RoadFrame(double curvature);

  double curvature() const noexcept { return curvature_; }
  bool is_straight() const noexcept { return curvature_ == 0.0; }
  double radius() const;
  Vec2 arc_center() const;

  /// Radius of the path at the given lateral offset (curved roads only).
  double radius_at(double lateral) const;

  Pose to_world(LanePosition lane) const;
  LanePosition to_lane(Vec2 world) const;

  /// Conversion factor from speed along a path at `lateral` to station rate.
  double station_rate_factor(double lateral) const;

private:
  double curvature_;
};

/// Vehicle footprint aligned with the lane tangent.
struct Footprint
{
  Pose pose;
  double length{4.8};
  double width{1.9};

  Vec2 center() const { return pose.position; }
  std::array<Vec2, 4> corners() const;
};

}  // namespace silcorr
