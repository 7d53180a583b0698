// silcorr: scenario generation, closed-loop simulation and track/simulation
// correlation analysis driven by a JSON config.

#include "silcorr/numeric.hpp"
#include "silcorr/pipeline.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <functional>
#include <iostream>

namespace fs = std::filesystem;
using namespace silcorr;

namespace
{

constexpr int kExitValidation = 2;
constexpr int kExitAnalysis = 3;

struct Overrides
{
  std::string config;
  std::string out;
  std::string sync_formula;
  double grid_period{0.0};
  double duration{0.0};
  std::vector<std::string> only;
};

pipeline::PipelineConfig load(const Overrides & o)
{
  auto config = pipeline::load_config(o.config);
  if (!o.out.empty()) config.output_dir = o.out;
  if (!o.sync_formula.empty()) config.sync_formula = sync::sync_formula_from_string(o.sync_formula);
  if (o.grid_period > 0.0) config.grid_period = o.grid_period;
  if (o.duration > 0.0) {
    config.duration = o.duration;
    config.generation.duration = o.duration;
  }
  if (!o.only.empty()) {
    std::erase_if(config.scenarios, [&](const pipeline::ScenarioEntry & e) {
      const auto id = scenario::read_spec_file(e.spec_path.string()).scenario_id;
      return std::find(o.only.begin(), o.only.end(), id) == o.only.end();
    });
    if (config.scenarios.empty()) throw Error(ErrorCode::InvalidConfig, "--scenario matched nothing");
  }
  return config;
}

int exit_code(const Error & e) { return is_validation_error(e.code()) ? kExitValidation : kExitAnalysis; }

void print_error(const std::string & label, const Error & e)
{
  std::cerr << "error";
  if (!label.empty()) std::cerr << " [" << label << "]";
  if (!e.stage().empty()) std::cerr << " (" << e.stage() << ")";
  std::cerr << ": " << e.what() << '\n';
}

/// Runs `body` for every scenario entry; returns the exit code of the first failure.
int for_each_scenario(
  const pipeline::PipelineConfig & config,
  const std::function<void(const pipeline::ScenarioEntry &, const fs::path &)> & body)
{
  int code = 0;
  for (const auto & entry : config.scenarios) {
    std::string label = entry.spec_path.stem().string();
    try {
      const auto spec = scenario::read_spec_file(entry.spec_path.string());
      label = spec.scenario_id;
      body(entry, config.output_dir / spec.scenario_id);
    } catch (const Error & e) {
      print_error(label, e);
      if (code == 0) code = exit_code(e);
    }
  }
  return code;
}

nlohmann::json layout_json(const scenario::ScenarioArtifacts & a)
{
  nlohmann::json secondary = nullptr;
  if (a.secondary_target) {
    secondary = {
      {"actor_id", a.secondary_target->actor_id},
      {"station", a.secondary_target->lane.station},
      {"lateral", a.secondary_target->lane.lateral},
      {"x", a.secondary_target->pose.position.x},
      {"y", a.secondary_target->pose.position.y},
      {"heading", a.secondary_target->pose.heading}};
  }
  return {
    {"road",
     {{"curvature", a.road.curvature},
      {"lane_width", a.road.lane_width},
      {"num_lanes", a.road.num_lanes},
      {"length", a.road.length}}},
    {"ego", {{"station", a.ego_init.lane.station}, {"speed", a.ego_init.speed}}},
    {"maneuver_start", a.maneuver_start ? nlohmann::json(*a.maneuver_start) : nlohmann::json(nullptr)},
    {"target_of_interest", a.target_of_interest},
    {"secondary_target", secondary}};
}

int cmd_generate(const pipeline::PipelineConfig & config)
{
  return for_each_scenario(config, [&](const pipeline::ScenarioEntry & entry, const fs::path & out) {
    const auto spec = scenario::read_spec_file(entry.spec_path.string());
    const auto artifacts = scenario::generate_scenario(spec, config.generation);
    const fs::path dir = out / "scenario";
    pipeline::write_text(dir / "layout.json", layout_json(artifacts).dump(2) + "\n");
    scenario::write_spec_file((dir / "spec.json").string(), spec);
    for (const auto & t : artifacts.targets) {
      pipeline::write_text(dir / (t.actor_id + ".pmc"), scenario::export_pmc(t));
    }
    std::cout << spec.scenario_id << ": " << artifacts.targets.size() << " trajectory file(s) in " << dir.string()
              << '\n';
  });
}

int cmd_simulate(const pipeline::PipelineConfig & config)
{
  return for_each_scenario(config, [&](const pipeline::ScenarioEntry & entry, const fs::path & out) {
    const auto spec = scenario::read_spec_file(entry.spec_path.string());
    const auto log = pipeline::simulate_spec(spec, config.sensor, config);
    logs::save_drive_log((out / "sim_log.csv").string(), log);
    std::cout << spec.scenario_id << ": " << log.samples.size() << " samples"
              << (log.collision_flag ? " (collision)" : "") << '\n';
  });
}

int cmd_ingest(const pipeline::PipelineConfig & config)
{
  return for_each_scenario(config, [&](const pipeline::ScenarioEntry & entry, const fs::path &) {
    const auto p = pipeline::prepare_scenario(entry, config);
    std::cout << p.spec.scenario_id << ": " << p.tracks.logs.size() << " repetition(s)";
    for (const auto & log : p.tracks.logs) std::cout << ' ' << log.repetition_id << '[' << log.samples.size() << ']';
    std::cout << '\n';
  });
}

int cmd_sync(const pipeline::PipelineConfig & config)
{
  return for_each_scenario(config, [&](const pipeline::ScenarioEntry & entry, const fs::path & out) {
    const auto p = pipeline::prepare_scenario(entry, config);
    const auto sol = sync::solve_sync(p.tracks, config.sync_formula);
    pipeline::write_text(out / "sync.json", sync::to_json(sol).dump(2) + "\n");
    std::cout << p.spec.scenario_id << ": S_min=" << numeric::format_fixed(sol.s_min, 2)
              << " S_at=" << numeric::format_fixed(sol.s_at, 2) << " S_sync=" << numeric::format_fixed(sol.s_sync, 2)
              << '\n';
  });
}

int cmd_tune(const pipeline::PipelineConfig & config)
{
  return for_each_scenario(config, [&](const pipeline::ScenarioEntry & entry, const fs::path & out) {
    const auto p = pipeline::prepare_scenario(entry, config);
    const auto sol = sync::solve_sync(p.tracks, config.sync_formula);
    const auto aligned = sync::align(p.tracks, sol, config.grid_period);
    const auto tuned = sync::tune_scenario(p.spec, aligned, sol, config.sensor);
    pipeline::write_text(out / "sync.json", sync::to_json(sol).dump(2) + "\n");
    scenario::write_spec_file((out / "refined_spec.json").string(), tuned.spec);
    pipeline::write_text(out / "refined_sensor.json", pipeline::sensor_to_json(tuned.sensor).dump(2) + "\n");
    std::cout << p.spec.scenario_id << ": ads_init_speed=" << numeric::format_fixed(tuned.spec.ads_init_speed, 2)
              << " km/h max_range=" << numeric::format_fixed(tuned.sensor.max_range, 2) << " m\n";
  });
}

void print_notices(const std::vector<std::string> & notices)
{
  for (const auto & n : notices) std::cerr << "notice: " << n << '\n';
}

int cmd_analyze(const pipeline::PipelineConfig & config, const std::string & sim_path)
{
  if (!sim_path.empty() && config.scenarios.size() != 1) {
    throw Error(ErrorCode::InvalidConfig, "--sim needs exactly one scenario (use --scenario)");
  }
  return for_each_scenario(config, [&](const pipeline::ScenarioEntry & entry, const fs::path & out) {
    const auto p = pipeline::prepare_scenario(entry, config);
    const auto log = logs::load_drive_log(sim_path.empty() ? (out / "sim_log.csv").string() : sim_path);
    const auto result = pipeline::analyze_scenario(p, log, config, out);
    print_notices(result.notices);
    std::cout << report::render_report({{*result.report}}, report::Format::Markdown);
  });
}

int cmd_run(const pipeline::PipelineConfig & config)
{
  const auto outcome = pipeline::run_pipeline(config);
  int code = 0;
  for (const auto & s : outcome.scenarios) {
    print_notices(s.notices);
    if (s.error) {
      print_error(s.label, *s.error);
      if (code == 0) code = exit_code(*s.error);
    }
  }
  if (!outcome.report.scenarios.empty()) {
    std::cout << report::render_report(outcome.report, report::Format::Markdown);
    std::cout << "outputs written to " << config.output_dir.string() << '\n';
  }
  return code;
}

int cmd_report(const pipeline::PipelineConfig & config, const std::string & format)
{
  const auto fmt = format == "csv" ? report::Format::Csv : report::Format::Markdown;
  report::CorrelationReport combined;
  const int code = for_each_scenario(config, [&](const pipeline::ScenarioEntry &, const fs::path & out) {
    auto r = report::parse_report_csv(pipeline::read_text(out / "report.csv"));
    for (auto & s : r.scenarios) combined.scenarios.push_back(std::move(s));
  });
  if (!combined.scenarios.empty()) std::cout << report::render_report(combined, fmt);
  return code;
}

int cmd_synth(const pipeline::PipelineConfig & config, const std::string & dest)
{
  return for_each_scenario(config, [&](const pipeline::ScenarioEntry & entry, const fs::path & out) {
    const auto spec = scenario::read_spec_file(entry.spec_path.string());
    const auto options = entry.synthetic.value_or(synthetic::SyntheticOptions{});
    auto generation = config.generation;
    generation.duration = std::max(generation.duration, options.duration);
    const auto reps = synthetic::synthesize_track_repetitions(
      spec, config.ads, config.sensor, options, config.simulation, generation);
    const fs::path dir = dest.empty() ? out / "tracks" : fs::path(dest) / spec.scenario_id;
    for (const auto & log : reps) logs::save_drive_log((dir / (log.repetition_id + ".csv")).string(), log);
    std::cout << spec.scenario_id << ": " << reps.size() << " repetition(s) in " << dir.string() << '\n';
  });
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Scenario generation, simulation and track/simulation correlation"};
  app.require_subcommand(1);
  Overrides overrides;

  const auto add = [&](const char * name, const char * help) {
    auto * sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", overrides.config, "Pipeline config (JSON)")->required();
    sub->add_option("-o,--out", overrides.out, "Output directory");
    sub->add_option("--sync-formula", overrides.sync_formula, "midpoint or eq1_literal");
    sub->add_option("--grid-period", overrides.grid_period, "Alignment grid period [s]");
    sub->add_option("--duration", overrides.duration, "Simulation duration [s]");
    sub->add_option("-s,--scenario", overrides.only, "Restrict to these scenario ids");
    return sub;
  };
  auto * generate = add("generate", "Write trajectory files for each scenario");
  auto * simulate = add("simulate", "Simulate each scenario as specified");
  auto * ingest = add("ingest", "Load and validate track repetitions");
  auto * sync_cmd = add("sync", "Solve the synchronization anchor");
  auto * tune = add("tune", "Refine scenario parameters from the track repetitions");
  auto * analyze = add("analyze", "Correlate track repetitions with an existing simulation log");
  std::string sim_path;
  analyze->add_option("--sim", sim_path, "Simulation log (CSV with JSON sidecar)");
  auto * run = add("run", "Full pipeline");
  auto * report_cmd = add("report", "Render stored report CSVs");
  std::string format = "md";
  report_cmd->add_option("--format", format, "md or csv")->check(CLI::IsMember({"md", "csv"}));
  auto * synth = add("synth", "Write synthetic track repetitions");
  std::string dest;
  synth->add_option("--dest", dest, "Destination directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    const auto config = load(overrides);
    if (generate->parsed()) return cmd_generate(config);
    if (simulate->parsed()) return cmd_simulate(config);
    if (ingest->parsed()) return cmd_ingest(config);
    if (sync_cmd->parsed()) return cmd_sync(config);
    if (tune->parsed()) return cmd_tune(config);
    if (analyze->parsed()) return cmd_analyze(config, sim_path);
    if (run->parsed()) return cmd_run(config);
    if (report_cmd->parsed()) return cmd_report(config, format);
    if (synth->parsed()) return cmd_synth(config, dest);
  } catch (const Error & e) {
    print_error("", e);
    return exit_code(e);
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAnalysis;
  }
  return 0;
}
