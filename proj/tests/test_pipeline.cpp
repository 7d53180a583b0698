#include "fixtures.hpp"

#include "silcorr/pipeline.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

using namespace silcorr;
using namespace silcorr::pipeline;
using logs::Signal;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string & name)
{
  const auto p = fs::temp_directory_path() / ("silcorr_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ErrorCode code_of(auto && fn)
{
  try {
    fn();
  } catch (const Error & e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::EmptyInput;
}

int run_cli(const std::string & args)
{
  const std::string cmd = std::string(SILCORR_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const fs::path kConfigDir = SILCORR_CONFIG_DIR;

nlohmann::json entry(const std::string & spec)
{
  return {{"spec", (kConfigDir / "scenarios" / spec).string()}, {"synthetic", {{"count", 2}}}};
}

}  // namespace

TEST(Signals, SelectionFollowsRoadGeometry)
{
  scenario::ScenarioSpec straight;
  straight.scenario_id = "s";
  scenario::ScenarioSpec curved = straight;
  curved.curvature = 1.0 / 140.0;
  EXPECT_EQ(select_signals(straight, std::nullopt), (std::vector{Signal::s_dist, Signal::v_lon, Signal::a_lon}));
  EXPECT_EQ(
    select_signals(curved, std::nullopt), (std::vector{Signal::s_dist, Signal::v_lon, Signal::a_lon, Signal::a_lat}));
  EXPECT_EQ(select_signals(straight, std::vector{Signal::v_lon}), std::vector{Signal::v_lon});
  EXPECT_EQ(code_of([&] { select_signals(straight, std::vector{Signal::a_lat}); }), ErrorCode::InvalidConfig);
}

TEST(Config, ParseErrors)
{
  const auto base = kConfigDir;
  EXPECT_EQ(code_of([&] { parse_config({{"scenarios", nlohmann::json::array()}}, base); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { parse_config({{"scenarios", {entry("cut_in.json")}}, {"bogus", 1}}, base); }),
    ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { parse_config({{"scenarios", {{{"spec", "missing.json"}, {"synthetic", nlohmann::json::object()}}}}}, base); }),
    ErrorCode::InvalidConfig);
  auto both = entry("cut_in.json");
  both["track_logs"] = base.string();
  EXPECT_EQ(code_of([&] { parse_config({{"scenarios", {both}}}, base); }), ErrorCode::InvalidConfig);
  auto missing_dir = entry("cut_in.json");
  missing_dir.erase("synthetic");
  missing_dir["track_logs"] = "no/such/dir";
  EXPECT_EQ(code_of([&] { parse_config({{"scenarios", {missing_dir}}}, base); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { parse_config({{"scenarios", {entry("cut_in.json")}}, {"grid_period", 0}}, base); }),
    ErrorCode::InvalidConfig);
  EXPECT_EQ(
    code_of([&] { parse_config({{"scenarios", {entry("cut_in.json")}}, {"sync_formula", "other"}}, base); }),
    ErrorCode::InvalidConfig);

  const auto ok = parse_config({{"scenarios", {entry("cut_in.json")}}, {"sync_formula", "eq1_literal"}}, base);
  EXPECT_EQ(ok.sync_formula, sync::SyncFormula::Eq1Literal);
  EXPECT_EQ(ok.scenarios.front().synthetic->count, 2);
}

TEST(Config, OutputDirectoryOverride)
{
  ::setenv("SILCORR_OUT", "/tmp/silcorr_env_out", 1);
  const auto config = load_config(kConfigDir / "pipeline.json");
  ::unsetenv("SILCORR_OUT");
  EXPECT_EQ(config.output_dir, fs::path("/tmp/silcorr_env_out"));
  const auto plain = load_config(kConfigDir / "pipeline.json");
  EXPECT_NE(plain.output_dir, fs::path("/tmp/silcorr_env_out"));
}

TEST(Pipeline, SelfComparisonIsPerfect)
{
  const auto config = fixture::bundled_config(scratch("self"));
  for (const std::string spec : {"stationary_target.json", "cut_in.json", "cut_out.json"}) {
    const auto prepared = fixture::self_comparison(config, spec, 3);
    const auto result = run_scenario(prepared, config);
    ASSERT_TRUE(result.report.has_value());
    const auto e = fixture::extremes(*result.report, Signal::v_lon, true);
    EXPECT_TRUE(e.all_defined) << spec;
    EXPECT_GE(e.min_r, 1.0 - 1e-9) << spec;
    EXPECT_LE(e.max_rrmse, 1e-9) << spec;
    EXPECT_TRUE(result.report->harmonized) << spec;
  }
}

TEST(Pipeline, NoisySpeedStaysExcellent)
{
  const auto config = fixture::bundled_config(scratch("noise"));
  const auto prepared = fixture::self_comparison(config, "stationary_target.json", 3, 0.01);
  const auto result = run_scenario(prepared, config);
  const auto e = fixture::extremes(*result.report, Signal::v_lon);
  EXPECT_LT(e.max_rrmse, 0.10);
  EXPECT_GT(e.min_r, 0.99);
}

TEST(Pipeline, BundledSuiteShapesAndDeterminism)
{
  const auto out1 = scratch("run1");
  const auto out2 = scratch("run2");
  const auto first = run_pipeline(fixture::bundled_config(out1));
  const auto second = run_pipeline(fixture::bundled_config(out2));
  for (const auto & o : first.scenarios) EXPECT_FALSE(o.error.has_value()) << o.label << ": " << o.error->what();

  ASSERT_EQ(first.report.scenarios.size(), 3u);
  for (const auto & s : first.report.scenarios) {
    ASSERT_EQ(s.rows.size(), 6u) << s.scenario_id;
    EXPECT_EQ(s.rows.back().row_id, "mean");
    const bool curved = s.scenario_id == "cut-out";
    EXPECT_EQ(s.signals.size(), curved ? 4u : 3u) << s.scenario_id;
    for (const auto & row : s.rows) EXPECT_EQ(row.cells.size(), s.signals.size());
  }

  for (const auto & p : fs::recursive_directory_iterator(out1)) {
    if (!p.is_regular_file()) continue;
    const auto rel = fs::relative(p.path(), out1);
    ASSERT_TRUE(fs::exists(out2 / rel)) << rel;
    EXPECT_EQ(read_text(p.path()), read_text(out2 / rel)) << rel;
  }
  for (const char * f : {"sync.json", "refined_spec.json", "sim_log.csv", "report.md", "report.csv", "plots/s_dist.csv"}) {
    EXPECT_TRUE(fs::exists(out1 / "cut-in" / f)) << f;
  }
  EXPECT_TRUE(fs::exists(out1 / "cut-out" / "plots" / "a_lat.csv"));
  EXPECT_FALSE(fs::exists(out1 / "cut-in" / "plots" / "a_lat.csv"));
  EXPECT_TRUE(fs::exists(out1 / "report.md"));
}

TEST(Pipeline, ErrorsCarryStage)
{
  const auto config = fixture::bundled_config(scratch("stage"));
  auto prepared = fixture::self_comparison(config, "stationary_target.json", 2);
  for (auto & log : prepared.tracks.logs) {
    for (auto & s : log.samples) {
      s.target_detected = false;
      s.target_in_lane = false;
      s.s_dist.reset();
    }
  }
  try {
    run_scenario(prepared, config);
    FAIL() << "expected an error";
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::EventNotFound);
    EXPECT_EQ(e.stage(), "sync");
  }
}

TEST(Cli, ExitCodes)
{
  const auto out = scratch("cli");
  EXPECT_EQ(run_cli("run -c " + (kConfigDir / "pipeline.json").string() + " -o " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "report.md"));
  EXPECT_EQ(run_cli("report -c " + (kConfigDir / "pipeline.json").string() + " -o " + out.string() + " --format csv"), 0);

  // Validation: missing config file, unknown flag.
  EXPECT_EQ(run_cli("run -c " + (out / "missing.json").string()), 2);
  EXPECT_EQ(run_cli("run --no-such-flag"), 2);

  // Analysis: track logs in which the target never shows up.
  const auto config = fixture::bundled_config(out);
  auto prepared = fixture::self_comparison(config, "stationary_target.json", 2);
  const auto logs_dir = out / "blind_tracks";
  for (auto log : prepared.tracks.logs) {
    for (auto & s : log.samples) {
      s.target_detected = false;
      s.target_in_lane = false;
      s.s_dist.reset();
    }
    logs::save_drive_log((logs_dir / (log.repetition_id + ".csv")).string(), log);
  }
  const nlohmann::json cfg = {
    {"output_dir", (out / "blind_out").string()},
    {"scenarios", {{{"spec", (kConfigDir / "scenarios" / "stationary_target.json").string()}, {"track_logs", logs_dir.string()}}}}};
  write_text(out / "blind.json", cfg.dump());
  EXPECT_EQ(run_cli("run -c " + (out / "blind.json").string()), 3);
}
