#include "fixtures.hpp"

#include <algorithm>

namespace fixture
{

using namespace silcorr;

pipeline::PipelineConfig bundled_config(const std::filesystem::path & out)
{
  const std::filesystem::path dir = SILCORR_CONFIG_DIR;
  auto config = pipeline::parse_config(
    nlohmann::json::parse(pipeline::read_text(dir / "pipeline.json")), dir);
  config.output_dir = out;
  return config;
}

pipeline::PreparedScenario self_comparison(
  const pipeline::PipelineConfig & config, const std::string & spec_file, int copies, double v_lon_sigma)
{
  const std::filesystem::path dir = SILCORR_CONFIG_DIR;
  pipeline::PreparedScenario prepared;
  prepared.spec = scenario::read_spec_file((dir / "scenarios" / spec_file).string());
  prepared.signals = pipeline::select_signals(prepared.spec, std::nullopt);
  const auto sim = pipeline::simulate_spec(prepared.spec, config.sensor, config);
  std::vector<logs::DriveLog> tracks;
  for (int k = 0; k < copies; ++k) {
    auto copy = sim;
    copy.source = logs::Source::Track;
    copy.repetition_id = std::to_string(k);
    if (v_lon_sigma > 0.0) {
      synthetic::inject_multiplicative_noise(copy, logs::Signal::v_lon, v_lon_sigma, 1000 + static_cast<unsigned>(k));
    }
    tracks.push_back(std::move(copy));
  }
  prepared.tracks =
    logs::make_repetition_set(prepared.spec.scenario_id, prepared.spec.scenario_class, std::move(tracks));
  return prepared;
}

Extremes extremes(const report::ScenarioReport & report, logs::Signal signal, bool all)
{
  Extremes e;
  for (const auto & row : report.rows) {
    for (const auto & cell : row.cells) {
      if (!all && cell.signal != signal) continue;
      if (!cell.r || !cell.rrmse) {
        e.all_defined = false;
        continue;
      }
      e.min_r = std::min(e.min_r, *cell.r);
      e.max_rrmse = std::max(e.max_rrmse, *cell.rrmse);
    }
  }
  return e;
}

}  // namespace fixture
