#include "silcorr/sync.hpp"

#include "silcorr/error.hpp"
#include "silcorr/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace silcorr::sync
{

using logs::DriveLog;
using logs::Signal;
using scenario::ScenarioClass;

namespace
{

constexpr double kTimeSlack = 1e-9;
constexpr double kSpeedWindow = 0.5;
constexpr double kMaxGapFactor = 1.5;

bool measured(const logs::LogSample & s) { return s.target_in_lane && s.s_dist.has_value(); }

double estimate_target_speed(const DriveLog & log, std::size_t j)
{
  const auto & s = log.samples;
  std::size_t q = j;
  while (q + 1 < s.size() && s[q + 1].t <= s[j].t + kSpeedWindow + kTimeSlack && measured(s[q + 1])) {
    ++q;
  }
  if (q == j) return 0.0;
  numeric::CompensatedSum ego_travel;
  for (std::size_t i = j; i < q; ++i) {
    ego_travel.add(0.5 * (s[i].v_lon + s[i + 1].v_lon) * (s[i + 1].t - s[i].t));
  }
  return (*s[q].s_dist - *s[j].s_dist + ego_travel.value()) / (s[q].t - s[j].t);
}

double distance_at(const TargetDistance & td, double t)
{
  const auto & ts = td.t;
  if (t < ts.front() - kTimeSlack || t > ts.back() + kTimeSlack) {
    throw Error(ErrorCode::EventNotFound, "time lies outside the log");
  }
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t i = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
  const auto & d = td.distance;
  if (std::fabs(ts[i] - t) <= kTimeSlack && d[i]) return *d[i];
  if (i + 1 < ts.size() && std::fabs(ts[i + 1] - t) <= kTimeSlack && d[i + 1]) return *d[i + 1];
  if (i + 1 < ts.size() && d[i] && d[i + 1]) return numeric::lerp(ts[i], *d[i], ts[i + 1], *d[i + 1], t);
  throw Error(ErrorCode::EventNotFound, "distance to the target is unknown at t=" + numeric::format_exact(t));
}

}  // namespace

std::string_view to_string(SyncFormula formula)
{
  return formula == SyncFormula::Eq1Literal ? "eq1_literal" : "midpoint";
}

SyncFormula sync_formula_from_string(std::string_view text)
{
  if (text == "eq1_literal") return SyncFormula::Eq1Literal;
  if (text == "midpoint") return SyncFormula::Midpoint;
  throw Error(ErrorCode::InvalidConfig, "unknown sync formula '" + std::string(text) + "'");
}

double sync_distance(double s_at, double s_min, SyncFormula formula)
{
  if (!(s_at > s_min)) {
    throw Error(
      ErrorCode::DegenerateRange,
      "S_at=" + numeric::format_exact(s_at) + " does not exceed S_min=" + numeric::format_exact(s_min));
  }
  return formula == SyncFormula::Eq1Literal ? (s_at - s_min) / 2.0 : (s_at + s_min) / 2.0;
}

std::size_t response_event(const DriveLog & log, ScenarioClass scenario_class)
{
  const auto & s = log.samples;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool hit = scenario_class == ScenarioClass::CutIn ? s[i].target_in_lane : s[i].target_detected;
    if (hit) return i;
  }
  throw Error(
    ErrorCode::EventNotFound, "no response event for " + std::string(scenario::to_string(scenario_class)) +
                                " in log '" + log.repetition_id + "'");
}

TargetDistance target_distance(const DriveLog & log, ScenarioClass scenario_class)
{
  const auto & s = log.samples;
  TargetDistance td;
  td.event_index = response_event(log, scenario_class);
  std::size_t j = td.event_index;
  while (j < s.size() && !measured(s[j])) ++j;
  if (j == s.size()) {
    throw Error(
      ErrorCode::EventNotFound, "target never measured in lane after the response event in log '" +
                                  log.repetition_id + "'");
  }
  td.measurement_index = j;
  td.target_speed = scenario_class == ScenarioClass::CutIn ? estimate_target_speed(log, j) : 0.0;

  td.t.resize(s.size());
  td.distance.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    td.t[i] = s[i].t;
    if (i >= j && measured(s[i])) td.distance[i] = s[i].s_dist;
  }
  double d = *s[j].s_dist;
  for (std::size_t i = j; i-- > 0;) {
    const double dt = s[i + 1].t - s[i].t;
    d += 0.5 * (s[i].v_lon + s[i + 1].v_lon) * dt - td.target_speed * dt;
    td.distance[i] = d;
  }
  return td;
}

double response_distance(const DriveLog & log, ScenarioClass scenario_class)
{
  const auto td = target_distance(log, scenario_class);
  return *td.distance[td.event_index];
}

double crossing_time(const TargetDistance & td, double level, double floor_level)
{
  const auto & d = td.distance;
  std::size_t limit = d.size() - 1;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] && *d[i] <= floor_level + kTimeSlack) {
      limit = i;
      break;
    }
  }
  const auto crossing = [&](std::size_t i) -> std::optional<double> {
    if (!d[i] || !d[i + 1]) return std::nullopt;
    const double a = *d[i];
    const double b = *d[i + 1];
    if (a >= level && level > b) return td.t[i] + (a - level) / (a - b) * (td.t[i + 1] - td.t[i]);
    return std::nullopt;
  };
  if (level >= floor_level) {
    for (std::size_t i = limit; i-- > 0;) {
      if (const auto t = crossing(i)) return *t;
    }
  } else {
    // Anchor below the floor (literal formula): first crossing after it.
    for (std::size_t i = limit; i + 1 < d.size(); ++i) {
      if (const auto t = crossing(i)) return *t;
    }
  }
  throw Error(ErrorCode::NoCrossing, "distance never crosses S_sync=" + numeric::format_exact(level));
}

SyncSolution solve_sync(const logs::RepetitionSet & set, SyncFormula formula)
{
  if (set.logs.empty()) throw Error(ErrorCode::EmptyInput, "no repetitions to synchronize");

  SyncSolution sol;
  sol.scenario_id = set.scenario_id;
  sol.scenario_class = set.scenario_class;
  sol.formula = formula;

  std::map<std::string, TargetDistance> distances;
  double s_at = 0.0;
  bool first = true;
  for (const auto & log : set.logs) {
    if (log.scenario_id != set.scenario_id) {
      throw Error(ErrorCode::InconsistentScenario, "log '" + log.repetition_id + "' belongs to another scenario");
    }
    auto td = target_distance(log, set.scenario_class);
    RepetitionSync rs;
    rs.response_distance = *td.distance[td.event_index];
    rs.event_t = td.t[td.event_index];
    const double at_annotation = distance_at(td, log.annotation_t);
    if (!sol.per_rep.emplace(log.repetition_id, rs).second) {
      throw Error(ErrorCode::InconsistentScenario, "duplicate repetition id '" + log.repetition_id + "'");
    }
    distances.emplace(log.repetition_id, std::move(td));
    s_at = first ? at_annotation : std::min(s_at, at_annotation);
    first = false;
  }

  // Map order makes ties resolve to the smallest repetition id.
  auto best = sol.per_rep.begin();
  for (auto it = sol.per_rep.begin(); it != sol.per_rep.end(); ++it) {
    if (it->second.response_distance < best->second.response_distance) best = it;
  }
  sol.min_repetition = best->first;
  sol.s_min = best->second.response_distance;
  sol.t_min = best->second.event_t;
  sol.s_at = s_at;
  sol.s_sync = sync_distance(sol.s_at, sol.s_min, formula);

  for (auto & [id, rs] : sol.per_rep) {
    rs.anchor_crossing_t = crossing_time(distances.at(id), sol.s_sync, sol.s_min);
    rs.offset = -rs.anchor_crossing_t;
  }
  return sol;
}

RepetitionSync synchronize_log(const DriveLog & log, ScenarioClass scenario_class, const SyncSolution & sol)
{
  const auto td = target_distance(log, scenario_class);
  RepetitionSync rs;
  rs.response_distance = *td.distance[td.event_index];
  rs.event_t = td.t[td.event_index];
  rs.anchor_crossing_t = crossing_time(td, sol.s_sync, std::min(sol.s_min, rs.response_distance));
  rs.offset = -rs.anchor_crossing_t;
  return rs;
}

GridValues resample(const DriveLog & log, Signal signal, double offset, const std::vector<double> & grid)
{
  const auto & s = log.samples;
  const double max_gap = kMaxGapFactor * logs::median_period(log);
  const auto value = [&](std::size_t i) -> std::optional<double> {
    switch (signal) {
      case Signal::s_dist: return s[i].s_dist;
      case Signal::v_lon: return s[i].v_lon;
      case Signal::a_lon: return s[i].a_lon;
      case Signal::a_lat: return s[i].a_lat;
    }
    return std::nullopt;
  };

  GridValues out(grid.size());
  std::size_t i = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double tau = grid[g] - offset;
    if (tau < s.front().t - kTimeSlack || tau > s.back().t + kTimeSlack) continue;
    while (i + 1 < s.size() && s[i + 1].t <= tau) ++i;
    if (std::fabs(s[i].t - tau) <= kTimeSlack || i + 1 == s.size()) {
      out[g] = value(i);
      continue;
    }
    if (std::fabs(s[i + 1].t - tau) <= kTimeSlack) {
      out[g] = value(i + 1);
      continue;
    }
    const auto a = value(i);
    const auto b = value(i + 1);
    if (!a || !b) continue;
    if (signal == Signal::s_dist && s[i + 1].t - s[i].t > max_gap) continue;
    out[g] = numeric::lerp(s[i].t, *a, s[i + 1].t, *b, tau);
  }
  return out;
}

AlignedRepetitionSet align(const logs::RepetitionSet & set, const SyncSolution & sol, double grid_period)
{
  if (!(grid_period > 0.0)) throw Error(ErrorCode::InvalidConfig, "grid_period must be > 0");
  if (set.logs.empty()) throw Error(ErrorCode::EmptyInput, "no repetitions to align");

  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto & log : set.logs) {
    const auto it = sol.per_rep.find(log.repetition_id);
    if (it == sol.per_rep.end()) {
      throw Error(ErrorCode::InconsistentScenario, "repetition '" + log.repetition_id + "' is not in the solution");
    }
    lo = std::max(lo, log.samples.front().t + it->second.offset);
    hi = std::min(hi, log.samples.back().t + it->second.offset);
  }
  const auto k0 = static_cast<long long>(std::ceil(lo / grid_period - 1e-9));
  const auto k1 = static_cast<long long>(std::floor(hi / grid_period + 1e-9));
  if (k1 < k0) throw Error(ErrorCode::EmptyOverlap, "shifted repetitions do not overlap");

  AlignedRepetitionSet out;
  out.scenario_id = set.scenario_id;
  out.grid_period = grid_period;
  for (long long k = k0; k <= k1; ++k) out.grid.push_back(static_cast<double>(k) * grid_period);

  for (const auto & log : set.logs) {
    AlignedSeries series;
    series.repetition_id = log.repetition_id;
    series.offset = sol.per_rep.at(log.repetition_id).offset;
    for (const Signal signal : logs::kAllSignals) {
      series.at(signal) = resample(log, signal, series.offset, out.grid);
    }
    out.repetitions.push_back(std::move(series));
    out.annotation_speeds.push_back(logs::interpolate_signal(log, Signal::v_lon, log.annotation_t));
  }

  std::vector<double> column;
  for (const Signal signal : logs::kAllSignals) {
    auto & mean = out.mean_rep[static_cast<std::size_t>(signal)];
    mean.resize(out.grid.size());
    for (std::size_t g = 0; g < out.grid.size(); ++g) {
      column.clear();
      for (const auto & rep : out.repetitions) {
        if (const auto & v = rep.at(signal)[g]) column.push_back(*v);
      }
      if (!column.empty()) mean[g] = numeric::mean(column);
    }
  }
  return out;
}

void align_simulation(AlignedRepetitionSet & aligned, const DriveLog & simulation, const SyncSolution & sol)
{
  const auto rs = synchronize_log(simulation, sol.scenario_class, sol);
  AlignedSeries series;
  series.repetition_id = simulation.repetition_id;
  series.offset = rs.offset;
  for (const Signal signal : logs::kAllSignals) {
    series.at(signal) = resample(simulation, signal, series.offset, aligned.grid);
  }
  aligned.simulation = std::move(series);
}

TuneResult tune_scenario(
  const scenario::ScenarioSpec & spec, const AlignedRepetitionSet & aligned, const SyncSolution & sol,
  const sim::SensorConfig & sensor)
{
  if (aligned.annotation_speeds.empty() || sol.per_rep.empty()) {
    throw Error(ErrorCode::EmptyInput, "cannot tune from an empty repetition set");
  }
  TuneResult out{spec, sensor};
  out.spec.ads_init_speed = 3.6 * numeric::mean(aligned.annotation_speeds);
  if (spec.scenario_class != ScenarioClass::CutIn) {
    std::vector<double> distances;
    for (const auto & [id, rs] : sol.per_rep) distances.push_back(rs.response_distance);
    out.sensor.max_range = numeric::mean(distances);
  }
  return out;
}

nlohmann::json to_json(const SyncSolution & sol)
{
  nlohmann::json per_rep = nlohmann::json::object();
  for (const auto & [id, rs] : sol.per_rep) {
    per_rep[id] = {
      {"S_d", rs.response_distance},
      {"event_t", rs.event_t},
      {"anchor_crossing_t", rs.anchor_crossing_t},
      {"offset", rs.offset}};
  }
  return {
    {"scenario_id", sol.scenario_id},
    {"scenario_class", std::string(scenario::to_string(sol.scenario_class))},
    {"sync_formula", std::string(to_string(sol.formula))},
    {"S_min", sol.s_min},
    {"t_min", sol.t_min},
    {"min_repetition", sol.min_repetition},
    {"S_at", sol.s_at},
    {"S_sync", sol.s_sync},
    {"per_rep", per_rep}};
}

SyncSolution sync_solution_from_json(const nlohmann::json & j)
{
  try {
    SyncSolution sol;
    sol.scenario_id = j.at("scenario_id").get<std::string>();
    sol.scenario_class = scenario::scenario_class_from_string(j.at("scenario_class").get<std::string>());
    sol.formula = sync_formula_from_string(j.at("sync_formula").get<std::string>());
    sol.s_min = j.at("S_min").get<double>();
    sol.t_min = j.at("t_min").get<double>();
    sol.min_repetition = j.at("min_repetition").get<std::string>();
    sol.s_at = j.at("S_at").get<double>();
    sol.s_sync = j.at("S_sync").get<double>();
    for (const auto & [id, r] : j.at("per_rep").items()) {
      RepetitionSync rs;
      rs.response_distance = r.at("S_d").get<double>();
      rs.event_t = r.at("event_t").get<double>();
      rs.anchor_crossing_t = r.at("anchor_crossing_t").get<double>();
      rs.offset = r.at("offset").get<double>();
      sol.per_rep.emplace(id, rs);
    }
    return sol;
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::ParseError, std::string("sync solution: ") + e.what());
  }
}

}  // namespace silcorr::sync
