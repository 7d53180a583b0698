#pragma once

#include "silcorr/road.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace silcorr::scenario
{

enum class ScenarioClass { StationaryTarget, CutIn, CutOut };

std::string_view to_string(ScenarioClass c);
ScenarioClass scenario_class_from_string(std::string_view text);

/// Parameter vector of one designed scenario. Speeds are in km/h as they
/// are written in scenario tables; everything else is SI.
struct ScenarioSpec
{
  std::string scenario_id;
  ScenarioClass scenario_class{ScenarioClass::StationaryTarget};
  double ads_init_speed{0.0};
  double target_init_speed{0.0};
  std::optional<double> target_decel;
  std::optional<double> trigger_distance;  // bumper-to-bumper
  std::optional<double> event_duration;
  double curvature{0.0};
  double lane_width{3.5};

  bool operator==(const ScenarioSpec &) const = default;
};

/// Throws SpecInvariantViolation when field ranges or the class/parameter
/// combination are inconsistent.
void validate(const ScenarioSpec & spec);

struct RoadSpec
{
  double curvature{0.0};
  double lane_width{3.5};
  int num_lanes{2};
  double length{0.0};
};

struct TrajectorySample
{
  double t{0.0};
  double x{0.0};
  double y{0.0};

  bool operator==(const TrajectorySample &) const = default;
};

struct TargetTrajectory
{
  std::string actor_id;
  std::vector<TrajectorySample> samples;
  std::optional<double> trigger_bumper_distance;
};

/// Checks sample count, strictly increasing time and the 100 m/s step bound.
void validate(const TargetTrajectory & trajectory);

/// Knobs not carried by ScenarioSpec itself.
struct GenerationOptions
{
  double sample_period{0.02};
  double duration{30.0};
  double vehicle_length{4.8};
  double vehicle_width{1.9};
  /// Maneuver triggers are armed only from this time on, giving the ego a
  /// steady-state stretch before the event.
  double lead_in_time{5.0};
  /// Initial bumper gap between ego and the (lead) target; derived from the
  /// class when absent.
  std::optional<double> initial_gap;
  /// Bumper gap from the cut-out lead (at maneuver start) to the secondary target.
  double secondary_gap{40.0};
  /// Default initial gap for stationary-target scenarios.
  double stationary_gap{250.0};
};

/// Closed-form motion law of one target in the road frame. Speed is measured
/// along the target's own path; station is the ego-lane centerline coordinate.
class TargetMotion
{
public:
  TargetMotion() = default;
  TargetMotion(
    const RoadFrame & road, double start_station, double initial_speed, double initial_lateral,
    double final_lateral, double maneuver_duration, double decel_after_maneuver);

  void set_maneuver_start(double t) { maneuver_start_ = t; }
  std::optional<double> maneuver_start() const { return maneuver_start_; }
  double maneuver_duration() const { return maneuver_duration_; }

  double speed_at(double t) const;
  double lateral_at(double t) const;
  double station_at(double t) const;

private:
  double station_integral(double t0, double t1) const;

  RoadFrame road_{0.0};
  double start_station_{0.0};
  double initial_speed_{0.0};
  double initial_lateral_{0.0};
  double final_lateral_{0.0};
  double maneuver_duration_{0.0};
  double decel_{0.0};
  std::optional<double> maneuver_start_;
};

/// Quintic smoothstep on [0, 1] with zero first and second derivatives at both ends.
double smoothstep5(double u);

struct StaticTarget
{
  std::string actor_id;
  LanePosition lane;
  Pose pose;
};

struct EgoInit
{
  LanePosition lane;
  Pose pose;
  double speed{0.0};  // m/s
};

struct ScenarioArtifacts
{
  ScenarioSpec spec;
  RoadSpec road;
  EgoInit ego_init;
  std::vector<TargetTrajectory> targets;
  std::vector<TargetMotion> motions;  // parallel to targets
  std::optional<StaticTarget> secondary_target;
  std::optional<double> maneuver_start;
  /// Actor whose detection defines the response distance of this class.
  std::string target_of_interest;
  double vehicle_length{4.8};
  double vehicle_width{1.9};
};

ScenarioArtifacts generate_scenario(const ScenarioSpec & spec, const GenerationOptions & options = {});

/// Line-oriented reference trajectory document ("#pmc v1").
std::string export_pmc(const TargetTrajectory & trajectory);
TargetTrajectory import_pmc(std::string_view document, std::string actor_id = "target");

void to_json(nlohmann::json & j, const ScenarioSpec & spec);
void from_json(const nlohmann::json & j, ScenarioSpec & spec);

ScenarioSpec read_spec_file(const std::string & path);
void write_spec_file(const std::string & path, const ScenarioSpec & spec);

constexpr double kmh_to_ms(double kmh) { return kmh / 3.6; }

}  // namespace silcorr::scenario
