#include "silcorr/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace silcorr::pipeline
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

[[noreturn]] void invalid(const std::string & what) { throw Error(ErrorCode::InvalidConfig, what); }

void check_keys(const json & j, std::string_view where, std::initializer_list<std::string_view> allowed)
{
  if (!j.is_object()) invalid(std::string(where) + " must be an object");
  for (const auto & [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      invalid("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <class T>
void read(const json & j, const char * key, T & target)
{
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception &) {
    invalid(std::string("bad value for '") + key + "'");
  }
}

sim::AdsConfig parse_ads(const json & j)
{
  check_keys(
    j, "ads",
    {"set_speed", "time_gap", "standstill_gap", "comfort_decel", "emergency_decel", "max_accel", "jerk_limit",
     "controller_period", "speed_gain", "gap_gain", "rate_gain"});
  sim::AdsConfig c;
  read(j, "set_speed", c.set_speed);
  read(j, "time_gap", c.time_gap);
  read(j, "standstill_gap", c.standstill_gap);
  read(j, "comfort_decel", c.comfort_decel);
  read(j, "emergency_decel", c.emergency_decel);
  read(j, "max_accel", c.max_accel);
  read(j, "jerk_limit", c.jerk_limit);
  read(j, "controller_period", c.controller_period);
  read(j, "speed_gain", c.speed_gain);
  read(j, "gap_gain", c.gap_gain);
  read(j, "rate_gain", c.rate_gain);
  sim::validate(c);
  return c;
}

sim::SensorConfig parse_sensor(const json & j)
{
  check_keys(j, "sensor", {"max_range", "fov_half_angle", "mount_offset"});
  sim::SensorConfig c;
  read(j, "max_range", c.max_range);
  read(j, "fov_half_angle", c.fov_half_angle);
  read(j, "mount_offset", c.mount_offset);
  sim::validate(c);
  return c;
}

sim::SimulationOptions parse_simulation(const json & j)
{
  check_keys(j, "simulation", {"oversample", "log_period", "lag_tau", "fusion"});
  sim::SimulationOptions o;
  read(j, "oversample", o.oversample);
  read(j, "log_period", o.log_period);
  read(j, "lag_tau", o.lag_tau);
  if (j.contains("fusion")) {
    const auto & f = j.at("fusion");
    check_keys(f, "fusion", {"confirm_cycles", "coast_cycles", "ema_alpha"});
    read(f, "confirm_cycles", o.fusion.confirm_cycles);
    read(f, "coast_cycles", o.fusion.coast_cycles);
    read(f, "ema_alpha", o.fusion.ema_alpha);
    sim::validate(o.fusion);
  }
  return o;
}

scenario::GenerationOptions parse_generation(const json & j)
{
  check_keys(j, "generation", {"sample_period", "lead_in_time", "initial_gap", "secondary_gap", "stationary_gap"});
  scenario::GenerationOptions g;
  read(j, "sample_period", g.sample_period);
  read(j, "lead_in_time", g.lead_in_time);
  if (j.contains("initial_gap") && !j.at("initial_gap").is_null()) {
    double gap = 0.0;
    read(j, "initial_gap", gap);
    g.initial_gap = gap;
  }
  read(j, "secondary_gap", g.secondary_gap);
  read(j, "stationary_gap", g.stationary_gap);
  return g;
}

synthetic::SyntheticOptions parse_synthetic(const json & j)
{
  check_keys(
    j, "synthetic", {"count", "seed", "speed_jitter", "range_jitter", "max_time_shift", "duration", "v_lon_noise"});
  synthetic::SyntheticOptions o;
  read(j, "count", o.count);
  read(j, "seed", o.seed);
  read(j, "speed_jitter", o.speed_jitter);
  read(j, "range_jitter", o.range_jitter);
  read(j, "max_time_shift", o.max_time_shift);
  read(j, "duration", o.duration);
  read(j, "v_lon_noise", o.v_lon_noise);
  return o;
}

fs::path resolve(const fs::path & base, const std::string & p)
{
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

ScenarioEntry parse_entry(const json & j, const fs::path & base)
{
  check_keys(j, "scenario entry", {"spec", "track_logs", "synthetic", "exclude", "signals"});
  ScenarioEntry e;
  if (!j.contains("spec")) invalid("scenario entry needs 'spec'");
  std::string spec;
  read(j, "spec", spec);
  e.spec_path = resolve(base, spec);
  if (!fs::is_regular_file(e.spec_path)) invalid("spec file '" + e.spec_path.string() + "' does not exist");
  if (j.contains("track_logs")) {
    std::string dir;
    read(j, "track_logs", dir);
    e.track_logs = resolve(base, dir);
    if (!fs::is_directory(*e.track_logs)) {
      invalid("track-log directory '" + e.track_logs->string() + "' does not exist");
    }
  }
  if (j.contains("synthetic")) e.synthetic = parse_synthetic(j.at("synthetic"));
  if (e.track_logs.has_value() == e.synthetic.has_value()) {
    invalid("scenario entry needs exactly one of 'track_logs' and 'synthetic'");
  }
  read(j, "exclude", e.exclude);
  if (j.contains("signals")) {
    std::vector<std::string> names;
    read(j, "signals", names);
    std::vector<logs::Signal> signals;
    for (const auto & n : names) {
      try {
        signals.push_back(logs::signal_from_string(n));
      } catch (const Error &) {
        invalid("unknown signal '" + n + "'");
      }
    }
    e.signals = signals;
  }
  return e;
}

template <class F>
auto in_stage(const char * name, F && f) -> decltype(f())
{
  try {
    return f();
  } catch (const Error & e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(name);
  } catch (const json::exception & e) {
    throw Error(ErrorCode::ParseError, e.what()).with_stage(name);
  } catch (const fs::filesystem_error & e) {
    throw Error(ErrorCode::Io, e.what()).with_stage(name);
  }
}

json sensor_json(const sim::SensorConfig & s)
{
  return {{"max_range", s.max_range}, {"fov_half_angle", s.fov_half_angle}, {"mount_offset", s.mount_offset}};
}

void finish_analysis(
  ScenarioResult & result, const PreparedScenario & prepared, const std::optional<fs::path> & out_dir)
{
  auto & aligned = *result.aligned;
  const auto & sol = *result.sync;
  const auto & simulation = *result.simulation;
  in_stage("align", [&] { sync::align_simulation(aligned, simulation, sol); });

  auto rep = in_stage("analyze", [&] { return report::compute_report(aligned, prepared.signals); });
  const double sim_sd = aligned.simulation ? sync::response_distance(simulation, sol.scenario_class) : 0.0;
  double lo = sol.per_rep.begin()->second.response_distance;
  double hi = lo;
  for (const auto & [id, rs] : sol.per_rep) {
    lo = std::min(lo, rs.response_distance);
    hi = std::max(hi, rs.response_distance);
  }
  rep.simulation_response_distance = sim_sd;
  rep.track_response_min = lo;
  rep.track_response_max = hi;
  rep.harmonized = sim_sd >= lo && sim_sd <= hi;
  if (!rep.harmonized) {
    result.notices.push_back(result.scenario_id + ": NOT-HARMONIZED, simulation response distance outside track range");
  }
  result.report = rep;

  const auto straight = prepared.spec.curvature == 0.0;
  if (straight) result.notices.push_back(result.scenario_id + ": a_lat plot omitted on a straight road");
  if (!out_dir) return;
  in_stage("report", [&] {
    report::CorrelationReport single{{rep}};
    write_text(*out_dir / "report.md", report::render_report(single, report::Format::Markdown));
    write_text(*out_dir / "report.csv", report::render_report(single, report::Format::Csv));
    for (const logs::Signal signal : prepared.signals) {
      write_text(
        *out_dir / "plots" / (std::string(logs::to_string(signal)) + ".csv"),
        report::export_plot_data(aligned, signal));
    }
  });
}

ScenarioResult sync_and_align(
  const PreparedScenario & prepared, const PipelineConfig & config, const std::optional<fs::path> & out_dir)
{
  ScenarioResult result;
  result.scenario_id = prepared.spec.scenario_id;
  result.sync = in_stage("sync", [&] { return sync::solve_sync(prepared.tracks, config.sync_formula); });
  if (out_dir) write_text(*out_dir / "sync.json", sync::to_json(*result.sync).dump(2) + "\n");
  result.aligned = in_stage("align", [&] { return sync::align(prepared.tracks, *result.sync, config.grid_period); });
  return result;
}

}  // namespace

json sensor_to_json(const sim::SensorConfig & sensor) { return sensor_json(sensor); }

void write_text(const fs::path & path, const std::string & content)
{
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string read_text(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

PipelineConfig parse_config(const json & j, const fs::path & base_dir)
{
  check_keys(
    j, "config",
    {"scenarios", "output_dir", "sync_formula", "grid_period", "duration", "ads", "sensor", "simulation",
     "generation"});
  PipelineConfig c;
  if (!j.contains("scenarios") || !j.at("scenarios").is_array() || j.at("scenarios").empty()) {
    invalid("config needs a non-empty 'scenarios' array");
  }
  if (j.contains("output_dir")) {
    std::string out;
    read(j, "output_dir", out);
    c.output_dir = resolve(base_dir, out);
  } else {
    c.output_dir = base_dir / "out";
  }
  if (j.contains("sync_formula")) {
    std::string f;
    read(j, "sync_formula", f);
    c.sync_formula = sync::sync_formula_from_string(f);
  }
  read(j, "grid_period", c.grid_period);
  if (!(c.grid_period > 0.0)) invalid("grid_period must be > 0");
  read(j, "duration", c.duration);
  if (!(c.duration > 0.0)) invalid("duration must be > 0");
  if (j.contains("ads")) c.ads = parse_ads(j.at("ads"));
  if (j.contains("sensor")) c.sensor = parse_sensor(j.at("sensor"));
  if (j.contains("simulation")) c.simulation = parse_simulation(j.at("simulation"));
  if (j.contains("generation")) c.generation = parse_generation(j.at("generation"));
  c.generation.duration = c.duration;
  for (const auto & e : j.at("scenarios")) c.scenarios.push_back(parse_entry(e, base_dir));
  return c;
}

PipelineConfig load_config(const fs::path & path)
{
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error & e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  auto config = parse_config(j, fs::absolute(path).parent_path());
  if (const char * env = std::getenv("SILCORR_OUT"); env != nullptr && *env != '\0') {
    config.output_dir = env;
  }
  return config;
}

std::vector<logs::Signal> select_signals(
  const scenario::ScenarioSpec & spec, const std::optional<std::vector<logs::Signal>> & requested)
{
  const bool curved = spec.curvature > 0.0;
  if (!requested) {
    std::vector<logs::Signal> out{logs::Signal::s_dist, logs::Signal::v_lon, logs::Signal::a_lon};
    if (curved) out.push_back(logs::Signal::a_lat);
    return out;
  }
  if (requested->empty()) invalid("signal selection is empty");
  std::vector<logs::Signal> out;
  for (const logs::Signal s : logs::kAllSignals) {
    if (std::find(requested->begin(), requested->end(), s) == requested->end()) continue;
    if (s == logs::Signal::a_lat && !curved) {
      invalid("a_lat requested for straight-road scenario '" + spec.scenario_id + "'");
    }
    out.push_back(s);
  }
  return out;
}

PreparedScenario prepare_scenario(const ScenarioEntry & entry, const PipelineConfig & config)
{
  return in_stage("ingest", [&] {
    PreparedScenario p;
    p.spec = scenario::read_spec_file(entry.spec_path.string());
    p.signals = select_signals(p.spec, entry.signals);
    std::vector<logs::DriveLog> logs;
    if (entry.track_logs) {
      logs = logs::load_log_directory(entry.track_logs->string());
    } else {
      auto generation = config.generation;
      generation.duration = std::max(generation.duration, entry.synthetic->duration);
      logs = synthetic::synthesize_track_repetitions(
        p.spec, config.ads, config.sensor, *entry.synthetic, config.simulation, generation);
    }
    std::erase_if(logs, [&](const logs::DriveLog & log) {
      return log.source == logs::Source::Simulation ||
             std::find(entry.exclude.begin(), entry.exclude.end(), log.repetition_id) != entry.exclude.end();
    });
    p.tracks = logs::make_repetition_set(p.spec.scenario_id, p.spec.scenario_class, std::move(logs));
    return p;
  });
}

logs::DriveLog simulate_spec(
  const scenario::ScenarioSpec & spec, const sim::SensorConfig & sensor, const PipelineConfig & config)
{
  const auto artifacts = in_stage("generate", [&] { return scenario::generate_scenario(spec, config.generation); });
  return in_stage("simulate", [&] {
    sim::AdsConfig ads = config.ads;
    ads.set_speed = scenario::kmh_to_ms(spec.ads_init_speed);
    return sim::simulate(artifacts, ads, sensor, config.duration, config.simulation);
  });
}

ScenarioResult run_scenario(
  const PreparedScenario & prepared, const PipelineConfig & config, const std::optional<fs::path> & out_dir)
{
  auto result = sync_and_align(prepared, config, out_dir);
  result.tuned = in_stage(
    "tune", [&] { return sync::tune_scenario(prepared.spec, *result.aligned, *result.sync, config.sensor); });
  if (out_dir) {
    scenario::write_spec_file((*out_dir / "refined_spec.json").string(), result.tuned->spec);
    write_text(*out_dir / "refined_sensor.json", sensor_json(result.tuned->sensor).dump(2) + "\n");
  }
  result.simulation = simulate_spec(result.tuned->spec, result.tuned->sensor, config);
  if (out_dir) logs::save_drive_log((*out_dir / "sim_log.csv").string(), *result.simulation);
  finish_analysis(result, prepared, out_dir);
  return result;
}

ScenarioResult analyze_scenario(
  const PreparedScenario & prepared, const logs::DriveLog & simulation, const PipelineConfig & config,
  const std::optional<fs::path> & out_dir)
{
  if (simulation.scenario_id != prepared.spec.scenario_id) {
    throw Error(ErrorCode::InconsistentScenario, "simulation log belongs to '" + simulation.scenario_id + "'")
      .with_stage("analyze");
  }
  auto result = sync_and_align(prepared, config, out_dir);
  result.simulation = simulation;
  finish_analysis(result, prepared, out_dir);
  return result;
}

PipelineOutcome run_pipeline(const PipelineConfig & config)
{
  const auto n = static_cast<long long>(config.scenarios.size());
  std::vector<std::optional<ScenarioResult>> results(config.scenarios.size());
  PipelineOutcome outcome;
  outcome.scenarios.resize(config.scenarios.size());

  std::set<std::string> ids;
  for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
    auto & o = outcome.scenarios[i];
    o.label = config.scenarios[i].spec_path.stem().string();
    try {
      o.label = scenario::read_spec_file(config.scenarios[i].spec_path.string()).scenario_id;
    } catch (const Error &) {
      continue;  // reported by the worker
    }
    if (!ids.insert(o.label).second) invalid("scenario id '" + o.label + "' appears twice");
  }

#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    auto & o = outcome.scenarios[k];
    try {
      const auto prepared = prepare_scenario(config.scenarios[k], config);
      const fs::path out_dir = config.output_dir / prepared.spec.scenario_id;
      if (config.scenarios[k].synthetic) {
        for (const auto & log : prepared.tracks.logs) {
          logs::save_drive_log((out_dir / "tracks" / (log.repetition_id + ".csv")).string(), log);
        }
      }
      results[k] = run_scenario(prepared, config, out_dir);
      o.notices = results[k]->notices;
    } catch (const Error & e) {
      o.error = e;
    } catch (const std::exception & e) {
      o.error = Error(ErrorCode::Io, e.what());
    }
  }

  for (const auto & r : results) {
    if (r && r->report) outcome.report.scenarios.push_back(*r->report);
  }
  if (!outcome.report.scenarios.empty()) {
    write_text(config.output_dir / "report.md", report::render_report(outcome.report, report::Format::Markdown));
    write_text(config.output_dir / "report.csv", report::render_report(outcome.report, report::Format::Csv));
  }
  return outcome;
}

}  // namespace silcorr::pipeline
