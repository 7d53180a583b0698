#include "silcorr/simulator.hpp"

#include "silcorr/error.hpp"

#include <algorithm>
#include <cmath>

namespace silcorr::sim
{

namespace
{
constexpr double kTimeSlack = 1e-9;
}

TrajectoryPlayer::TrajectoryPlayer(const scenario::TargetTrajectory & trajectory, const RoadFrame & road)
: trajectory_(&trajectory), road_(&road)
{
  scenario::validate(trajectory);
  lane_.reserve(trajectory.samples.size());
  for (const auto & s : trajectory.samples) {
    lane_.push_back(road.to_lane({s.x, s.y}));
  }
}

LanePosition TrajectoryPlayer::lane_at(double t) const
{
  const auto & s = trajectory_->samples;
  if (t <= s.front().t) return lane_.front();
  if (t >= s.back().t) return lane_.back();
  const auto it = std::upper_bound(
    s.begin(), s.end(), t + kTimeSlack, [](double value, const scenario::TrajectorySample & x) { return value < x.t; });
  const auto i = static_cast<std::size_t>(it - s.begin()) - 1;
  if (std::fabs(s[i].t - t) <= kTimeSlack || i + 1 >= s.size()) return lane_[i];
  const double w = (t - s[i].t) / (s[i + 1].t - s[i].t);
  return {
    lane_[i].station + w * (lane_[i + 1].station - lane_[i].station),
    lane_[i].lateral + w * (lane_[i + 1].lateral - lane_[i].lateral)};
}

double TrajectoryPlayer::station_rate_at(double t) const
{
  const auto & s = trajectory_->samples;
  if (t >= s.back().t) return 0.0;
  const auto it = std::upper_bound(
    s.begin(), s.end(), t + kTimeSlack, [](double value, const scenario::TrajectorySample & x) { return value < x.t; });
  std::size_t i = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
  i = std::min(i, s.size() - 2);
  return (lane_[i + 1].station - lane_[i].station) / (s[i + 1].t - s[i].t);
}

logs::DriveLog simulate(
  const scenario::ScenarioArtifacts & artifacts, const AdsConfig & ads, const SensorConfig & sensor,
  double duration, const SimulationOptions & options)
{
  validate(ads);
  validate(sensor);
  if (options.oversample < 1) throw Error(ErrorCode::InvalidConfig, "oversample must be >= 1");
  if (!(options.lag_tau > 0.0)) throw Error(ErrorCode::InvalidConfig, "lag_tau must be > 0");
  if (!(duration > 0.0)) throw Error(ErrorCode::InvalidConfig, "duration must be > 0");

  const RoadFrame road(artifacts.spec.curvature);
  const double dt = ads.controller_period / options.oversample;
  const long steps_per_log = std::lround(options.log_period / dt);
  if (steps_per_log < 1 || std::fabs(steps_per_log * dt - options.log_period) > 1e-9) {
    throw Error(ErrorCode::InvalidConfig, "log_period must be a multiple of the integration step");
  }
  const long n_steps = static_cast<long>(std::floor(duration / dt + 1e-9));
  const double length = artifacts.vehicle_length;
  const double width = artifacts.vehicle_width;
  const double curvature = artifacts.spec.curvature;

  std::vector<TrajectoryPlayer> players;
  players.reserve(artifacts.targets.size());
  for (const auto & trajectory : artifacts.targets) {
    players.emplace_back(trajectory, road);
  }

  const auto actor_states = [&](double t) {
    std::vector<ActorState> actors;
    actors.reserve(players.size() + 1);
    for (std::size_t i = 0; i < players.size(); ++i) {
      ActorState a;
      a.actor_id = artifacts.targets[i].actor_id;
      a.lane = players[i].lane_at(t);
      a.footprint = {road.to_world(a.lane), length, width};
      a.station_rate = players[i].station_rate_at(t);
      actors.push_back(std::move(a));
    }
    if (artifacts.secondary_target) {
      ActorState a;
      a.actor_id = artifacts.secondary_target->actor_id;
      a.lane = artifacts.secondary_target->lane;
      a.footprint = {road.to_world(a.lane), length, width};
      actors.push_back(std::move(a));
    }
    return actors;
  };

  logs::DriveLog log;
  log.repetition_id = options.repetition_id;
  log.scenario_id = artifacts.spec.scenario_id;
  log.source = logs::Source::Simulation;
  log.annotation_t = 0.0;
  log.samples.reserve(static_cast<std::size_t>(n_steps / steps_per_log) + 1);

  SensorFusion fusion(options.fusion, ads.controller_period);
  double station = artifacts.ego_init.lane.station;
  double speed = artifacts.ego_init.speed;
  double accel = 0.0;
  double command = 0.0;
  std::optional<std::string> threat_actor;
  bool target_detected = false;

  for (long n = 0; n <= n_steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    const EgoState ego{t, station, 0.0, speed, accel, speed * speed * curvature};
    std::vector<ActorState> actors = actor_states(t);

    if (n % options.oversample == 0) {
      SensorScene scene;
      scene.ego = ego;
      scene.ego_footprint = {road.to_world({station, 0.0}), length, width};
      scene.ego_station_rate = speed;
      scene.lane_width = artifacts.spec.lane_width;
      scene.actors = actors;
      const auto detections = visibility(scene, sensor);
      const auto tracked = fusion.update(detections);
      target_detected = std::any_of(detections.begin(), detections.end(), [&](const Detection & d) {
        return d.actor_id == artifacts.target_of_interest;
      });
      const auto decision = controller_step(ego, tracked, ads, command);
      command = decision.command;
      const TrackedObject * threat = select_threat(tracked);
      threat_actor = threat ? std::optional<std::string>(threat->actor_id) : std::nullopt;
    }

    for (const auto & a : actors) {
      const double gap = a.lane.station - station - length;
      if (std::fabs(a.lane.lateral) < width && gap <= 0.0 && gap > -2.0 * length) {
        log.collision_flag = true;
      }
    }

    if (n % steps_per_log == 0) {
      logs::LogSample row;
      row.t = t;
      if (threat_actor) {
        const auto it = std::find_if(actors.begin(), actors.end(), [&](const ActorState & a) {
          return a.actor_id == *threat_actor;
        });
        row.s_dist = it->lane.station - station - length;
      }
      row.v_lon = speed;
      row.a_lon = accel;
      row.a_lat = ego.a_lat;
      row.target_in_lane = threat_actor && *threat_actor == artifacts.target_of_interest;
      row.target_detected = target_detected;
      log.samples.push_back(row);
    }

    if (n == n_steps) break;
    const double max_da = ads.jerk_limit * dt;
    accel += std::clamp(dt / options.lag_tau * (command - accel), -max_da, max_da);
    speed = std::max(0.0, speed + accel * dt);
    station += speed * dt;
  }
  return log;
}

}  // namespace silcorr::sim
