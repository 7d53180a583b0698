#pragma once

#include "silcorr/scenario.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace silcorr::logs
{

enum class Source { Track, Simulation };

std::string_view to_string(Source source);
Source source_from_string(std::string_view text);

enum class Signal { s_dist, v_lon, a_lon, a_lat };

std::string_view to_string(Signal signal);
Signal signal_from_string(std::string_view text);
inline constexpr Signal kAllSignals[] = {Signal::s_dist, Signal::v_lon, Signal::a_lon, Signal::a_lat};

/// One row of a drive log.
///
/// `s_dist` is the bumper-to-bumper distance to the current in-lane threat
/// and is absent while no threat is tracked. `target_in_lane` is set while
/// the scenario's target is that threat; `target_detected` is set while the
/// sensor reports the scenario's target.
struct LogSample
{
  double t{0.0};
  std::optional<double> s_dist;
  double v_lon{0.0};
  double a_lon{0.0};
  double a_lat{0.0};
  bool target_in_lane{false};
  bool target_detected{false};

  bool operator==(const LogSample &) const = default;
};

struct LogMetadata
{
  std::string repetition_id;
  std::string scenario_id;
  Source source{Source::Track};
  double annotation_t{0.0};
  bool collision_flag{false};

  bool operator==(const LogMetadata &) const = default;
};

struct DriveLog
{
  std::string repetition_id;
  std::string scenario_id;
  Source source{Source::Track};
  double annotation_t{0.0};
  std::vector<LogSample> samples;
  bool collision_flag{false};

  LogMetadata metadata() const;
  bool operator==(const DriveLog &) const = default;
};

struct SignalSeries
{
  Signal name{Signal::v_lon};
  std::vector<double> t;
  std::vector<double> values;
};

struct RepetitionSet
{
  std::string scenario_id;
  scenario::ScenarioClass scenario_class{scenario::ScenarioClass::StationaryTarget};
  std::vector<DriveLog> logs;  // track repetitions
  std::optional<DriveLog> simulation;
};

/// Canonical CSV header.
inline constexpr std::string_view kCsvHeader = "t,s_dist,v_lon,a_lon,a_lat,target_in_lane,target_detected";

/// Enforces monotonic time, the sampling-jitter rule and the annotation range.
void validate(const DriveLog & log);

DriveLog ingest_drive_log(std::string_view csv, const LogMetadata & meta);
std::string emit_drive_log(const DriveLog & log);

std::string emit_metadata(const LogMetadata & meta);
LogMetadata parse_metadata(std::string_view json_text);

SignalSeries extract_signal(const DriveLog & log, Signal name);

/// Value of a dense signal at time t by linear interpolation (clamped to the ends).
double interpolate_signal(const DriveLog & log, Signal name, double t);

/// Median sample period of a log.
double median_period(const DriveLog & log);

RepetitionSet make_repetition_set(
  std::string scenario_id, scenario::ScenarioClass scenario_class, std::vector<DriveLog> logs);

/// Reads `<stem>.csv` plus its `<stem>.json` sidecar.
DriveLog load_drive_log(const std::string & csv_path);
void save_drive_log(const std::string & csv_path, const DriveLog & log);

/// Loads every `*.csv` with a sidecar in a directory, sorted by repetition_id.
std::vector<DriveLog> load_log_directory(const std::string & directory);

}  // namespace silcorr::logs
