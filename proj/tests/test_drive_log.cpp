#include "silcorr/drive_log.hpp"
#include "silcorr/error.hpp"
#include "silcorr/simulator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>

using namespace silcorr;
using namespace silcorr::logs;

namespace
{

LogMetadata meta(std::string id = "0")
{
  LogMetadata m;
  m.repetition_id = std::move(id);
  m.scenario_id = "s";
  return m;
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

DriveLog random_log(std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::bernoulli_distribution coin(0.5);
  DriveLog log;
  log.repetition_id = "r" + std::to_string(seed);
  log.scenario_id = "s";
  log.source = coin(rng) ? Source::Track : Source::Simulation;
  log.collision_flag = coin(rng);
  for (int i = 0; i < 200; ++i) {
    LogSample s;
    s.t = 1.0 + 0.02 * i;
    if (coin(rng)) s.s_dist = u(rng);
    s.v_lon = u(rng);
    s.a_lon = u(rng) * 1e-7;
    s.a_lat = u(rng) / 3.0;
    s.target_in_lane = coin(rng);
    s.target_detected = coin(rng);
    log.samples.push_back(s);
  }
  log.annotation_t = log.samples[37].t;
  return log;
}

}  // namespace

TEST(DriveLog, IngestWellFormed)
{
  const std::string csv = std::string(kCsvHeader) + "\n0,,10,0,0,0,0\n0.02,50,10,0,0,1,1\n0.04,49.8,10,0,0,1,1\n";
  const auto log = ingest_drive_log(csv, meta());
  ASSERT_EQ(log.samples.size(), 3u);
  EXPECT_FALSE(log.samples[0].s_dist.has_value());
  EXPECT_EQ(log.samples[2].s_dist, 49.8);
  EXPECT_TRUE(log.samples[1].target_in_lane);
}

TEST(DriveLog, IngestErrors)
{
  const std::string h = std::string(kCsvHeader) + "\n";
  EXPECT_EQ(code_of([&] { ingest_drive_log(h + "0,,1,0,0,0,0\n0.02,,1,0,0,0,0\n0.02,,1,0,0,0,0\n", meta()); }),
    ErrorCode::NonMonotonicTime);
  EXPECT_EQ(code_of([&] { ingest_drive_log(h + "0,,1,0,0,0,0\n0.02,,x,0,0,0,0\n", meta()); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { ingest_drive_log(h + "0,,1,0,0,0,2\n", meta()); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { ingest_drive_log(h + "0,,1,0,0\n", meta()); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { ingest_drive_log("t,v_lon\n0,1\n", meta()); }), ErrorCode::SchemaMismatch);
  EXPECT_EQ(code_of([&] { ingest_drive_log(h, meta()); }), ErrorCode::EmptyLog);
  EXPECT_EQ(
    code_of([&] { ingest_drive_log(h + "0,,1,0,0,0,0\n0.02,,1,0,0,0,0\n0.04,,1,0,0,0,0\n0.1,,1,0,0,0,0\n", meta()); }),
    ErrorCode::InvalidSampling);
  auto late = meta();
  late.annotation_t = 5.0;
  EXPECT_EQ(code_of([&] { ingest_drive_log(h + "0,,1,0,0,0,0\n0.02,,1,0,0,0,0\n", late); }), ErrorCode::SchemaMismatch);
}

TEST(DriveLog, AbsentUntilRowK)
{
  std::string csv = std::string(kCsvHeader) + "\n";
  for (int i = 0; i < 10; ++i) {
    csv += std::to_string(i * 0.1) + "," + (i < 6 ? std::string() : std::to_string(60 - i)) + ",5,0,0,0,0\n";
  }
  const auto log = ingest_drive_log(csv, meta());
  for (int i = 0; i < 10; ++i) EXPECT_EQ(log.samples[static_cast<std::size_t>(i)].s_dist.has_value(), i >= 6);
}

TEST(DriveLog, EmitIngestIdentity)
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto log = random_log(seed);
    const auto back = ingest_drive_log(emit_drive_log(log), parse_metadata(emit_metadata(log.metadata())));
    EXPECT_EQ(back, log);
  }
}

TEST(DriveLog, ExtractSignal)
{
  DriveLog log;
  for (int i = 0; i < 100; ++i) {
    LogSample s;
    s.t = 0.1 * i;
    if (s.t >= 4.0 - 1e-9) s.s_dist = 100.0 - i;
    s.v_lon = i;
    log.samples.push_back(s);
  }
  const auto v = extract_signal(log, Signal::v_lon);
  EXPECT_EQ(v.t.size(), 100u);
  EXPECT_EQ(v.values.size(), 100u);
  const auto d = extract_signal(log, Signal::s_dist);
  ASSERT_FALSE(d.t.empty());
  EXPECT_NEAR(d.t.front(), 4.0, 1e-12);
  // Never fabricates: every pair exists in the log.
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    const auto it = std::find_if(log.samples.begin(), log.samples.end(), [&](const LogSample & s) { return s.t == d.t[i]; });
    ASSERT_NE(it, log.samples.end());
    EXPECT_EQ(*it->s_dist, d.values[i]);
  }
}

TEST(DriveLog, StraightRoadLateralIsZero)
{
  scenario::ScenarioSpec spec;
  spec.scenario_id = "stationary-target";
  spec.ads_init_speed = 70.0;
  sim::AdsConfig ads;
  ads.set_speed = 70.0 / 3.6;
  const auto log = sim::simulate(scenario::generate_scenario(spec), ads, sim::SensorConfig{}, 10.0);
  const auto a = extract_signal(log, Signal::a_lat);
  EXPECT_EQ(a.values.size(), log.samples.size());
  EXPECT_TRUE(std::all_of(a.values.begin(), a.values.end(), [](double x) { return x == 0.0; }));
}

TEST(DriveLog, RepetitionSetConsistency)
{
  auto a = random_log(1);
  auto b = random_log(2);
  a.source = Source::Track;
  b.source = Source::Track;
  auto sim = random_log(3);
  sim.source = Source::Simulation;
  const auto set = make_repetition_set("s", scenario::ScenarioClass::CutIn, {a, b, sim});
  EXPECT_EQ(set.logs.size(), 2u);
  EXPECT_TRUE(set.simulation.has_value());

  auto other = random_log(4);
  other.scenario_id = "x";
  EXPECT_EQ(code_of([&] { make_repetition_set("s", scenario::ScenarioClass::CutIn, {a, other}); }),
    ErrorCode::InconsistentScenario);
  EXPECT_EQ(code_of([&] { make_repetition_set("s", scenario::ScenarioClass::CutIn, {sim}); }), ErrorCode::EmptyInput);
}

TEST(DriveLog, DirectoryRoundTrip)
{
  const auto dir = std::filesystem::temp_directory_path() / "silcorr_test_logs";
  std::filesystem::remove_all(dir);
  auto b = random_log(9);
  b.repetition_id = "b";
  auto a = random_log(8);
  a.repetition_id = "a";
  save_drive_log((dir / "b.csv").string(), b);
  save_drive_log((dir / "a.csv").string(), a);
  const auto logs = load_log_directory(dir.string());
  ASSERT_EQ(logs.size(), 2u);
  EXPECT_EQ(logs[0], a);
  EXPECT_EQ(logs[1], b);
  std::filesystem::remove_all(dir);
  EXPECT_EQ(code_of([&] { load_log_directory(dir.string()); }), ErrorCode::Io);
}

TEST(DriveLog, InterpolationAndMedianPeriod)
{
  DriveLog log;
  for (int i = 0; i < 5; ++i) {
    LogSample s;
    s.t = 0.1 * i;
    s.v_lon = 10.0 * i;
    log.samples.push_back(s);
  }
  EXPECT_NEAR(median_period(log), 0.1, 1e-12);
  EXPECT_NEAR(interpolate_signal(log, Signal::v_lon, 0.15), 15.0, 1e-9);
  EXPECT_EQ(interpolate_signal(log, Signal::v_lon, -1.0), 0.0);
  EXPECT_EQ(interpolate_signal(log, Signal::v_lon, 9.0), 40.0);
}
