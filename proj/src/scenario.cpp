#include "silcorr/scenario.hpp"

#include "silcorr/error.hpp"
#include "silcorr/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace silcorr::scenario
{

namespace
{

constexpr double kTriggerTolerance = 1e-9;
constexpr double kMaxStepSpeed = 100.0;
constexpr int kSimpsonIntervals = 64;

[[noreturn]] void invariant(const std::string & message)
{
  throw Error(ErrorCode::SpecInvariantViolation, message);
}

std::string format_pmc_number(double value)
{
  std::array<char, 40> buffer{};
  std::snprintf(buffer.data(), buffer.size(), "%.17g", value);
  return buffer.data();
}

}  // namespace

std::string_view to_string(ScenarioClass c)
{
  switch (c) {
    case ScenarioClass::StationaryTarget: return "StationaryTarget";
    case ScenarioClass::CutIn: return "CutIn";
    case ScenarioClass::CutOut: return "CutOut";
  }
  return "StationaryTarget";
}

ScenarioClass scenario_class_from_string(std::string_view text)
{
  if (text == "StationaryTarget") return ScenarioClass::StationaryTarget;
  if (text == "CutIn") return ScenarioClass::CutIn;
  if (text == "CutOut") return ScenarioClass::CutOut;
  invariant("unknown scenario_class '" + std::string(text) + "'");
}

void validate(const ScenarioSpec & spec)
{
  const auto finite = [](double v) { return std::isfinite(v); };
  if (spec.scenario_id.empty()) invariant("scenario_id must not be empty");
  if (!finite(spec.ads_init_speed) || spec.ads_init_speed < 0.0) invariant("ads_init_speed must be >= 0");
  if (!finite(spec.target_init_speed) || spec.target_init_speed < 0.0) {
    invariant("target_init_speed must be >= 0");
  }
  if (!finite(spec.curvature) || spec.curvature < 0.0) invariant("curvature must be >= 0");
  if (!finite(spec.lane_width) || spec.lane_width <= 0.0) invariant("lane_width must be > 0");
  if (spec.event_duration && !(*spec.event_duration > 0.0)) invariant("event_duration must be > 0");
  if (spec.trigger_distance && !(*spec.trigger_distance > 0.0)) invariant("trigger_distance must be > 0");
  if (spec.target_decel && !(*spec.target_decel >= 0.0)) invariant("target_decel must be >= 0");
  if (spec.curvature > 0.0 && 1.0 / spec.curvature <= 2.0 * spec.lane_width) {
    invariant("curvature too large for the lane layout");
  }

  switch (spec.scenario_class) {
    case ScenarioClass::StationaryTarget:
      if (spec.target_init_speed != 0.0) invariant("StationaryTarget requires target_init_speed = 0");
      if (spec.trigger_distance || spec.event_duration) {
        invariant("StationaryTarget takes no trigger_distance/event_duration");
      }
      break;
    case ScenarioClass::CutIn:
      if (!spec.trigger_distance || !spec.event_duration || !spec.target_decel) {
        invariant("CutIn requires trigger_distance, event_duration and target_decel");
      }
      break;
    case ScenarioClass::CutOut:
      if (!spec.trigger_distance || !spec.event_duration) {
        invariant("CutOut requires trigger_distance and event_duration");
      }
      break;
  }
}

void validate(const TargetTrajectory & trajectory)
{
  const auto & s = trajectory.samples;
  if (s.size() < 2) {
    throw Error(ErrorCode::TooFewSamples, "trajectory needs at least 2 samples");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double dt = s[i].t - s[i - 1].t;
    if (!(dt > 0.0)) {
      throw Error(
        ErrorCode::NonMonotonicTime, "sample " + std::to_string(i) + " does not advance time");
    }
    const double step = std::hypot(s[i].x - s[i - 1].x, s[i].y - s[i - 1].y);
    if (step / dt > kMaxStepSpeed) {
      invariant("sample " + std::to_string(i) + " implies a speed above 100 m/s");
    }
  }
}

double smoothstep5(double u)
{
  u = std::clamp(u, 0.0, 1.0);
  return std::clamp(u * u * u * (10.0 + u * (-15.0 + 6.0 * u)), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// TargetMotion

TargetMotion::TargetMotion(
  const RoadFrame & road, double start_station, double initial_speed, double initial_lateral,
  double final_lateral, double maneuver_duration, double decel_after_maneuver)
: road_(road),
  start_station_(start_station),
  initial_speed_(initial_speed),
  initial_lateral_(initial_lateral),
  final_lateral_(final_lateral),
  maneuver_duration_(maneuver_duration),
  decel_(decel_after_maneuver)
{
}

double TargetMotion::speed_at(double t) const
{
  if (!maneuver_start_) {
    return initial_speed_;
  }
  const double end = *maneuver_start_ + maneuver_duration_;
  if (t <= end || decel_ == 0.0) {
    return initial_speed_;
  }
  return std::max(0.0, initial_speed_ - decel_ * (t - end));
}

double TargetMotion::lateral_at(double t) const
{
  if (!maneuver_start_ || t <= *maneuver_start_) {
    return initial_lateral_;
  }
  if (t >= *maneuver_start_ + maneuver_duration_) {
    return final_lateral_;
  }
  const double u = (t - *maneuver_start_) / maneuver_duration_;
  return initial_lateral_ + (final_lateral_ - initial_lateral_) * smoothstep5(u);
}

double TargetMotion::station_at(double t) const
{
  return start_station_ + station_integral(0.0, t);
}

double TargetMotion::station_integral(double t0, double t1) const
{
  if (t1 <= t0) {
    return 0.0;
  }
  if (!maneuver_start_) {
    return initial_speed_ * road_.station_rate_factor(initial_lateral_) * (t1 - t0);
  }
  const double ms = *maneuver_start_;
  const double me = ms + maneuver_duration_;
  double total = 0.0;

  // Before the maneuver: constant speed on the initial lane.
  if (t0 < ms) {
    const double b = std::min(t1, ms);
    total += initial_speed_ * road_.station_rate_factor(initial_lateral_) * (b - t0);
  }
  // Lane change at constant speed.
  if (t1 > ms && t0 < me) {
    const double a = std::max(t0, ms);
    const double b = std::min(t1, me);
    if (road_.is_straight()) {
      total += initial_speed_ * (b - a);
    } else {
      const double h = (b - a) / kSimpsonIntervals;
      double acc = 0.0;
      for (int i = 0; i <= kSimpsonIntervals; ++i) {
        const double w = (i == 0 || i == kSimpsonIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * road_.station_rate_factor(lateral_at(a + i * h));
      }
      total += initial_speed_ * acc * h / 3.0;
    }
  }
  // After the maneuver: final lane, optionally braking to standstill.
  if (t1 > me) {
    const double a = std::max(t0, me);
    const double factor = road_.station_rate_factor(final_lateral_);
    if (decel_ == 0.0) {
      total += initial_speed_ * factor * (t1 - a);
    } else {
      const double stop = me + initial_speed_ / decel_;
      const auto distance_until = [&](double t) {
        const double tau = std::min(t, stop) - me;
        return initial_speed_ * tau - 0.5 * decel_ * tau * tau;
      };
      total += factor * (distance_until(t1) - distance_until(a));
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Generation

namespace
{

TargetTrajectory sample_trajectory(
  const RoadFrame & road, const TargetMotion & motion, std::string actor_id, int sample_count,
  double sample_period)
{
  TargetTrajectory trajectory;
  trajectory.actor_id = std::move(actor_id);
  trajectory.samples.reserve(static_cast<std::size_t>(sample_count) + 1);
  for (int k = 0; k <= sample_count; ++k) {
    const double t = k * sample_period;
    const Pose pose = road.to_world({motion.station_at(t), motion.lateral_at(t)});
    trajectory.samples.push_back({t, pose.position.x, pose.position.y});
  }
  return trajectory;
}

double find_trigger_time(
  const TargetMotion & motion, double ego_speed, double vehicle_length, double trigger,
  const GenerationOptions & options, int sample_count)
{
  for (int k = 0; k <= sample_count; ++k) {
    const double t = k * options.sample_period;
    if (t + 1e-12 < options.lead_in_time) {
      continue;
    }
    const double gap = motion.station_at(t) - ego_speed * t - vehicle_length;
    if (gap <= trigger + kTriggerTolerance) {
      return t;
    }
  }
  const double gap0 = motion.station_at(0.0) - vehicle_length;
  if (gap0 > trigger && ego_speed <= motion.speed_at(0.0)) {
    throw Error(
      ErrorCode::UnreachableTrigger,
      "ego never closes in on the target; trigger distance " + numeric::format_exact(trigger) +
        " m is never attained");
  }
  throw Error(
    ErrorCode::UnreachableTrigger,
    "trigger distance " + numeric::format_exact(trigger) + " m not attained within " +
      numeric::format_exact(options.duration) + " s");
}

}  // namespace

ScenarioArtifacts generate_scenario(const ScenarioSpec & spec, const GenerationOptions & options)
{
  validate(spec);
  if (!(options.sample_period > 0.0 && options.sample_period <= 0.5)) {
    invariant("sample_period must lie in (0, 0.5] s");
  }
  if (!(options.duration > 0.0)) invariant("duration must be > 0");
  if (!(options.vehicle_length > 0.0 && options.vehicle_width > 0.0)) {
    invariant("vehicle dimensions must be > 0");
  }

  const RoadFrame road(spec.curvature);
  const double length = options.vehicle_length;
  const double ego_speed = kmh_to_ms(spec.ads_init_speed);
  const double target_speed = kmh_to_ms(spec.target_init_speed);
  const int sample_count = static_cast<int>(std::floor(options.duration / options.sample_period + 1e-9));

  ScenarioArtifacts out;
  out.spec = spec;
  out.vehicle_length = length;
  out.vehicle_width = options.vehicle_width;
  out.ego_init.lane = {0.0, 0.0};
  out.ego_init.pose = road.to_world(out.ego_init.lane);
  out.ego_init.speed = ego_speed;

  const double lane = spec.lane_width;
  const auto lead_gap = [&]() {
    if (options.initial_gap) return *options.initial_gap;
    const double gap = *spec.trigger_distance + (ego_speed - target_speed) * options.lead_in_time;
    if (!(gap > 0.0)) {
      throw Error(ErrorCode::UnreachableTrigger, "target outruns the ego before the trigger is armed");
    }
    return gap;
  };

  switch (spec.scenario_class) {
    case ScenarioClass::StationaryTarget: {
      const double gap = options.initial_gap.value_or(options.stationary_gap);
      if (!(gap > 0.0)) invariant("initial gap must be > 0");
      TargetMotion motion(road, gap + length, 0.0, 0.0, 0.0, 0.0, 0.0);
      out.targets.push_back(sample_trajectory(road, motion, "target", sample_count, options.sample_period));
      out.motions.push_back(motion);
      out.target_of_interest = "target";
      break;
    }
    case ScenarioClass::CutIn: {
      TargetMotion motion(
        road, lead_gap() + length, target_speed, lane, 0.0, *spec.event_duration, *spec.target_decel);
      const double t_m =
        find_trigger_time(motion, ego_speed, length, *spec.trigger_distance, options, sample_count);
      motion.set_maneuver_start(t_m);
      auto trajectory = sample_trajectory(road, motion, "cut_in", sample_count, options.sample_period);
      trajectory.trigger_bumper_distance = spec.trigger_distance;
      out.targets.push_back(std::move(trajectory));
      out.motions.push_back(motion);
      out.maneuver_start = t_m;
      out.target_of_interest = "cut_in";
      break;
    }
    case ScenarioClass::CutOut: {
      TargetMotion motion(road, lead_gap() + length, target_speed, 0.0, lane, *spec.event_duration, 0.0);
      const double t_m =
        find_trigger_time(motion, ego_speed, length, *spec.trigger_distance, options, sample_count);
      motion.set_maneuver_start(t_m);
      auto trajectory = sample_trajectory(road, motion, "lead", sample_count, options.sample_period);
      trajectory.trigger_bumper_distance = spec.trigger_distance;
      out.targets.push_back(std::move(trajectory));
      out.motions.push_back(motion);
      out.maneuver_start = t_m;

      StaticTarget secondary;
      secondary.actor_id = "secondary";
      secondary.lane = {motion.station_at(t_m) + length + options.secondary_gap, 0.0};
      secondary.pose = road.to_world(secondary.lane);
      out.secondary_target = secondary;
      out.target_of_interest = "secondary";
      break;
    }
  }

  double far = ego_speed * options.duration;
  for (const auto & motion : out.motions) {
    far = std::max(far, motion.station_at(options.duration));
  }
  if (out.secondary_target) {
    far = std::max(far, out.secondary_target->lane.station);
  }
  out.road = {spec.curvature, lane, 2, far + length + 50.0};
  return out;
}

// ---------------------------------------------------------------------------
// .pmc

std::string export_pmc(const TargetTrajectory & trajectory)
{
  validate(trajectory);
  std::string doc = "#pmc v1\ntrigger_bumper_distance=";
  doc += trajectory.trigger_bumper_distance ? format_pmc_number(*trajectory.trigger_bumper_distance) : "none";
  doc += '\n';
  for (const auto & s : trajectory.samples) {
    doc += format_pmc_number(s.t);
    doc += ' ';
    doc += format_pmc_number(s.x);
    doc += ' ';
    doc += format_pmc_number(s.y);
    doc += '\n';
  }
  return doc;
}

TargetTrajectory import_pmc(std::string_view document, std::string actor_id)
{
  TargetTrajectory trajectory;
  trajectory.actor_id = std::move(actor_id);

  const auto parse_error = [](std::size_t line, const std::string & what) {
    return Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
  };

  std::size_t line_no = 0;
  bool header_seen = false;
  bool trigger_line_possible = true;
  std::size_t pos = 0;
  while (pos <= document.size()) {
    const std::size_t end = std::min(document.find('\n', pos), document.size());
    std::string_view line = document.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (end == document.size()) break;
      continue;
    }
    if (!header_seen) {
      if (line != "#pmc v1") throw parse_error(line_no, "expected '#pmc v1' header");
      header_seen = true;
      continue;
    }
    constexpr std::string_view kTrigger = "trigger_bumper_distance=";
    if (trigger_line_possible && line.substr(0, kTrigger.size()) == kTrigger) {
      const auto value = line.substr(kTrigger.size());
      if (value != "none") {
        const auto parsed = numeric::parse_double(value);
        if (!parsed) throw parse_error(line_no, "invalid trigger_bumper_distance");
        trajectory.trigger_bumper_distance = *parsed;
      }
      trigger_line_possible = false;
      continue;
    }
    trigger_line_possible = false;

    std::array<double, 3> fields{};
    std::size_t count = 0;
    std::size_t cursor = 0;
    while (cursor < line.size()) {
      const std::size_t start = line.find_first_not_of(" \t", cursor);
      if (start == std::string_view::npos) break;
      const std::size_t stop = std::min(line.find_first_of(" \t", start), line.size());
      if (count == fields.size()) throw parse_error(line_no, "expected 't x y'");
      const auto parsed = numeric::parse_double(line.substr(start, stop - start));
      if (!parsed) throw parse_error(line_no, "invalid number");
      fields[count++] = *parsed;
      cursor = stop;
    }
    if (count != fields.size()) throw parse_error(line_no, "expected 't x y'");
    trajectory.samples.push_back({fields[0], fields[1], fields[2]});
    if (end == document.size()) break;
  }
  if (!header_seen) throw parse_error(1, "empty document");
  validate(trajectory);
  return trajectory;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json & j, const ScenarioSpec & spec)
{
  const auto opt = [](const std::optional<double> & v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j = nlohmann::json{
    {"scenario_id", spec.scenario_id},
    {"scenario_class", std::string(to_string(spec.scenario_class))},
    {"ads_init_speed", spec.ads_init_speed},
    {"target_init_speed", spec.target_init_speed},
    {"target_decel", opt(spec.target_decel)},
    {"trigger_distance", opt(spec.trigger_distance)},
    {"event_duration", opt(spec.event_duration)},
    {"curvature", spec.curvature},
    {"lane_width", spec.lane_width},
  };
}

void from_json(const nlohmann::json & j, ScenarioSpec & spec)
{
  try {
    const auto opt = [&](const char * key) -> std::optional<double> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return j.at(key).get<double>();
    };
    spec.scenario_id = j.at("scenario_id").get<std::string>();
    spec.scenario_class = scenario_class_from_string(j.at("scenario_class").get<std::string>());
    spec.ads_init_speed = j.at("ads_init_speed").get<double>();
    spec.target_init_speed = j.at("target_init_speed").get<double>();
    spec.target_decel = opt("target_decel");
    spec.trigger_distance = opt("trigger_distance");
    spec.event_duration = opt("event_duration");
    spec.curvature = j.value("curvature", 0.0);
    spec.lane_width = j.value("lane_width", 3.5);
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::ParseError, std::string("scenario spec: ") + e.what());
  }
}

ScenarioSpec read_spec_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  auto spec = j.get<ScenarioSpec>();
  validate(spec);
  return spec;
}

void write_spec_file(const std::string & path, const ScenarioSpec & spec)
{
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << nlohmann::json(spec).dump(2) << '\n';
}

}  // namespace silcorr::scenario
