#pragma once

#include "silcorr/drive_log.hpp"
#include "silcorr/scenario.hpp"
#include "silcorr/sensor.hpp"

#include "json.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace silcorr::sync
{

enum class SyncFormula { Eq1Literal, Midpoint };

std::string_view to_string(SyncFormula formula);
SyncFormula sync_formula_from_string(std::string_view text);

/// S_sync from the anchor interval. Eq1Literal: (S_at - S_min) / 2,
/// Midpoint: (S_at + S_min) / 2.
double sync_distance(double s_at, double s_min, SyncFormula formula);

/// Distance-to-target series of one log. Before the target becomes the
/// in-lane threat the distance is reconstructed backwards from the first
/// measurement by integrating the relative speed.
struct TargetDistance
{
  std::vector<double> t;
  std::vector<std::optional<double>> distance;
  std::size_t event_index{0};        // class-specific response event
  std::size_t measurement_index{0};  // first measured in-lane s_dist
  double target_speed{0.0};          // used for the reconstruction
};

/// Index of the first sample satisfying the class event predicate
/// (first detection for stationary and cut-out, first in-lane for cut-in).
std::size_t response_event(const logs::DriveLog & log, scenario::ScenarioClass scenario_class);

TargetDistance target_distance(const logs::DriveLog & log, scenario::ScenarioClass scenario_class);

/// S_d: distance to the target at the response event.
double response_distance(const logs::DriveLog & log, scenario::ScenarioClass scenario_class);

/// Time of the last downward crossing of `level` at or before the first
/// sample where the distance drops to `floor_level`; for a level below the
/// floor, the first crossing after that sample. Linear interpolation
/// between the bracketing samples.
double crossing_time(const TargetDistance & td, double level, double floor_level);

struct RepetitionSync
{
  double response_distance{0.0};
  double event_t{0.0};
  double anchor_crossing_t{0.0};
  double offset{0.0};  // added to log time to place the crossing at t = 0
};

struct SyncSolution
{
  std::string scenario_id;
  scenario::ScenarioClass scenario_class{scenario::ScenarioClass::StationaryTarget};
  std::map<std::string, RepetitionSync> per_rep;
  std::string min_repetition;
  double s_min{0.0};
  double t_min{0.0};
  double s_at{0.0};
  double s_sync{0.0};
  SyncFormula formula{SyncFormula::Midpoint};
};

SyncSolution solve_sync(const logs::RepetitionSet & set, SyncFormula formula = SyncFormula::Midpoint);

/// Crossing and offset of a log that did not take part in the solve, such
/// as the simulation.
RepetitionSync synchronize_log(
  const logs::DriveLog & log, scenario::ScenarioClass scenario_class, const SyncSolution & sol);

using GridValues = std::vector<std::optional<double>>;

struct AlignedSeries
{
  std::string repetition_id;
  double offset{0.0};
  std::array<GridValues, 4> signals;

  const GridValues & at(logs::Signal signal) const { return signals[static_cast<std::size_t>(signal)]; }
  GridValues & at(logs::Signal signal) { return signals[static_cast<std::size_t>(signal)]; }
};

struct AlignedRepetitionSet
{
  std::string scenario_id;
  double grid_period{0.02};
  std::vector<double> grid;
  std::vector<AlignedSeries> repetitions;
  std::array<GridValues, 4> mean_rep;
  std::vector<double> annotation_speeds;  // v_lon at each repetition's annotation
  std::optional<AlignedSeries> simulation;

  const GridValues & mean(logs::Signal signal) const { return mean_rep[static_cast<std::size_t>(signal)]; }
};

/// Resamples one signal of a log shifted by `offset` onto the grid. No
/// extrapolation; s_dist is not bridged across gaps in the log.
GridValues resample(const logs::DriveLog & log, logs::Signal signal, double offset, const std::vector<double> & grid);

AlignedRepetitionSet align(const logs::RepetitionSet & set, const SyncSolution & sol, double grid_period = 0.02);

/// Aligns the simulation log onto an existing grid with the same anchor.
void align_simulation(AlignedRepetitionSet & aligned, const logs::DriveLog & simulation, const SyncSolution & sol);

struct TuneResult
{
  scenario::ScenarioSpec spec;
  sim::SensorConfig sensor;
};

TuneResult tune_scenario(
  const scenario::ScenarioSpec & spec, const AlignedRepetitionSet & aligned, const SyncSolution & sol,
  const sim::SensorConfig & sensor);

nlohmann::json to_json(const SyncSolution & sol);
SyncSolution sync_solution_from_json(const nlohmann::json & j);

}  // namespace silcorr::sync
