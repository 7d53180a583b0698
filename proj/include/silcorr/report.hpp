#pragma once

#include "silcorr/drive_log.hpp"
#include "silcorr/metrics.hpp"
#include "silcorr/sync.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace silcorr::report
{

/// One report row: a repetition (or "mean") with one result per signal.
struct ReportRow
{
  std::string row_id;
  std::vector<metrics::MetricResult> cells;  // parallel to ScenarioReport::signals
};

struct ScenarioReport
{
  std::string scenario_id;
  std::vector<logs::Signal> signals;
  std::vector<ReportRow> rows;  // repetitions in order, then "mean"
  bool harmonized{true};
  std::optional<double> simulation_response_distance;
  std::optional<double> track_response_min;
  std::optional<double> track_response_max;
};

struct CorrelationReport
{
  std::vector<ScenarioReport> scenarios;
};

inline constexpr std::string_view kMeanRow = "mean";

/// Metrics of every repetition and of the mean repetition against the
/// aligned simulation, over grid points where both values are present.
ScenarioReport compute_report(const sync::AlignedRepetitionSet & aligned, std::span<const logs::Signal> signals);

enum class Format { Markdown, Csv };

std::string render_report(const CorrelationReport & report, Format format);

inline constexpr std::string_view kReportCsvHeader =
  "scenario_id,row,signal,n,r,p_value,rrmse_pct,r_band,rrmse_band,significant,harmonized";

/// Rebuilds a report from its CSV rendering; values carry display precision.
CorrelationReport parse_report_csv(std::string_view csv);

/// Wide CSV: grid time, one column per repetition, mean, simulation.
std::string export_plot_data(const sync::AlignedRepetitionSet & aligned, logs::Signal signal);

}  // namespace silcorr::report
