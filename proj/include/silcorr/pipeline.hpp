#pragma once

#include "silcorr/controller.hpp"
#include "silcorr/drive_log.hpp"
#include "silcorr/error.hpp"
#include "silcorr/report.hpp"
#include "silcorr/scenario.hpp"
#include "silcorr/sensor.hpp"
#include "silcorr/simulator.hpp"
#include "silcorr/sync.hpp"
#include "silcorr/synthetic.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace silcorr::pipeline
{

/// One scenario of a pipeline config. Track repetitions come from a log
/// directory or are synthesized from the spec.
struct ScenarioEntry
{
  std::filesystem::path spec_path;
  std::optional<std::filesystem::path> track_logs;
  std::optional<synthetic::SyntheticOptions> synthetic;
  std::vector<std::string> exclude;  // repetition ids left out of the analysis
  std::optional<std::vector<logs::Signal>> signals;
};

struct PipelineConfig
{
  std::vector<ScenarioEntry> scenarios;
  std::filesystem::path output_dir{"out"};
  sync::SyncFormula sync_formula{sync::SyncFormula::Midpoint};
  double grid_period{0.02};
  double duration{30.0};
  sim::AdsConfig ads;
  sim::SensorConfig sensor;
  sim::SimulationOptions simulation;
  scenario::GenerationOptions generation;
};

/// Parses a config document. Relative paths resolve against `base_dir`.
PipelineConfig parse_config(const nlohmann::json & j, const std::filesystem::path & base_dir);

/// Reads a config file; SILCORR_OUT, when set, replaces the output directory.
PipelineConfig load_config(const std::filesystem::path & path);

/// s_dist, v_lon and a_lon, plus a_lat on curved roads. An explicit
/// selection must not ask for a_lat on a straight road.
std::vector<logs::Signal> select_signals(
  const scenario::ScenarioSpec & spec, const std::optional<std::vector<logs::Signal>> & requested);

struct PreparedScenario
{
  scenario::ScenarioSpec spec;
  std::vector<logs::Signal> signals;
  logs::RepetitionSet tracks;
};

/// Loads the spec and the track repetitions (after exclusions).
PreparedScenario prepare_scenario(const ScenarioEntry & entry, const PipelineConfig & config);

/// Runs the reference ADS through a spec with the given sensor.
logs::DriveLog simulate_spec(
  const scenario::ScenarioSpec & spec, const sim::SensorConfig & sensor, const PipelineConfig & config);

struct ScenarioResult
{
  std::string scenario_id;
  std::optional<sync::SyncSolution> sync;
  std::optional<sync::AlignedRepetitionSet> aligned;
  std::optional<sync::TuneResult> tuned;
  std::optional<logs::DriveLog> simulation;
  std::optional<report::ScenarioReport> report;
  std::vector<std::string> notices;
};

/// Full chain: sync, align, tune, regenerate, re-simulate, analyze. Each
/// artifact is written to `out_dir` (when given) as soon as it exists.
ScenarioResult run_scenario(
  const PreparedScenario & prepared, const PipelineConfig & config,
  const std::optional<std::filesystem::path> & out_dir = std::nullopt);

/// Sync, align and analyze against an existing simulation log.
ScenarioResult analyze_scenario(
  const PreparedScenario & prepared, const logs::DriveLog & simulation, const PipelineConfig & config,
  const std::optional<std::filesystem::path> & out_dir = std::nullopt);

struct ScenarioOutcome
{
  std::string label;  // scenario id, or the spec path when the spec failed to load
  std::optional<Error> error;
  std::vector<std::string> notices;
};

struct PipelineOutcome
{
  report::CorrelationReport report;
  std::vector<ScenarioOutcome> scenarios;
};

/// Runs every scenario concurrently and writes per-scenario outputs under
/// `<output_dir>/<scenario_id>/` plus the combined report.
PipelineOutcome run_pipeline(const PipelineConfig & config);

nlohmann::json sensor_to_json(const sim::SensorConfig & sensor);

void write_text(const std::filesystem::path & path, const std::string & content);
std::string read_text(const std::filesystem::path & path);

}  // namespace silcorr::pipeline
