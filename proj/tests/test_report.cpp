#include "silcorr/metrics.hpp"
#include "silcorr/report.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace silcorr;
using namespace silcorr::report;
using logs::Signal;

namespace
{

sync::GridValues values(std::initializer_list<double> v)
{
  sync::GridValues out;
  for (double x : v) out.emplace_back(x);
  return out;
}

/// Two repetitions whose per-rep correlations average to something other
/// than the correlation of their pointwise mean.
sync::AlignedRepetitionSet two_rep_fixture()
{
  sync::AlignedRepetitionSet a;
  a.scenario_id = "fx";
  a.grid = {0.0, 0.02, 0.04, 0.06, 0.08};
  sync::AlignedSeries r0;
  r0.repetition_id = "0";
  sync::AlignedSeries r1;
  r1.repetition_id = "1";
  sync::AlignedSeries sim;
  sim.repetition_id = "sim";
  for (Signal s : logs::kAllSignals) {
    r0.at(s) = values({1, 3, 2, 5, 4});
    r1.at(s) = values({5, 1, 4, 2, 6});
    sim.at(s) = values({2, 2, 3, 4, 5});
    sync::GridValues mean;
    for (std::size_t g = 0; g < a.grid.size(); ++g) mean.emplace_back(0.5 * (*r0.at(s)[g] + *r1.at(s)[g]));
    a.mean_rep[static_cast<std::size_t>(s)] = mean;
  }
  a.repetitions = {r0, r1};
  a.simulation = sim;
  return a;
}

std::vector<double> dense(const sync::GridValues & v)
{
  std::vector<double> out;
  for (const auto & x : v) out.push_back(*x);
  return out;
}

}  // namespace

TEST(Report, MeanRowUsesMeanRepetition)
{
  const auto a = two_rep_fixture();
  const std::vector<Signal> signals{Signal::v_lon};
  const auto rep = compute_report(a, signals);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_EQ(rep.rows.back().row_id, "mean");

  const auto m = dense(a.mean(Signal::v_lon));
  const auto g = dense(a.simulation->at(Signal::v_lon));
  const double direct = metrics::pearson_r({m, g});
  const double averaged = 0.5 * (*rep.rows[0].cells[0].r + *rep.rows[1].cells[0].r);
  EXPECT_DOUBLE_EQ(*rep.rows.back().cells[0].r, direct);
  EXPECT_GT(std::fabs(direct - averaged), 0.05);
  EXPECT_DOUBLE_EQ(*rep.rows.back().cells[0].rrmse, metrics::rrmse({m, g}));
}

TEST(Report, SingleRepetitionGivesTwoIdenticalRows)
{
  auto a = two_rep_fixture();
  a.repetitions.resize(1);
  a.mean_rep = a.repetitions.front().signals;
  const std::vector<Signal> signals{Signal::s_dist, Signal::v_lon, Signal::a_lon};
  const auto rep = compute_report(a, signals);
  ASSERT_EQ(rep.rows.size(), 2u);
  for (std::size_t c = 0; c < signals.size(); ++c) {
    EXPECT_EQ(rep.rows[0].cells[c].r, rep.rows[1].cells[c].r);
    EXPECT_EQ(rep.rows[0].cells[c].rrmse, rep.rows[1].cells[c].rrmse);
  }
}

TEST(Report, PairsOnlyWherePresent)
{
  auto a = two_rep_fixture();
  a.simulation->at(Signal::s_dist)[1].reset();
  a.repetitions[0].at(Signal::s_dist)[3].reset();
  const std::vector<Signal> signals{Signal::s_dist};
  const auto rep = compute_report(a, signals);
  EXPECT_EQ(rep.rows[0].cells[0].n, 3u);
  EXPECT_EQ(rep.rows[1].cells[0].n, 4u);
}

TEST(Report, RenderPrecision)
{
  ScenarioReport s;
  s.scenario_id = "cut-in";
  s.signals = {Signal::s_dist};
  metrics::MetricResult cell;
  cell.signal = Signal::s_dist;
  cell.n = 500;
  cell.r = 0.9820;
  cell.rrmse = 0.1559;
  cell.p_value = 1e-200;
  cell.r_band = metrics::rate_correlation(0.9820);
  cell.rrmse_band = metrics::rate_accuracy(0.1559);
  cell.significant = true;
  s.rows.push_back({"0", {cell}});
  const CorrelationReport report{{s}};
  const auto md = render_report(report, Format::Markdown);
  EXPECT_NE(md.find("| 0 | 0.98 High | 15.59 Good |"), std::string::npos) << md;
  EXPECT_NE(md.find("## cut-in"), std::string::npos);
  const auto csv = render_report(report, Format::Csv);
  EXPECT_NE(csv.find("cut-in,0,s_dist,500,0.98,1.00e-200,15.59,High,Good,true,true"), std::string::npos) << csv;
}

TEST(Report, UndefinedCellsRenderAsNa)
{
  ScenarioReport s;
  s.scenario_id = "x";
  s.signals = {Signal::a_lat};
  metrics::MetricResult cell;
  cell.signal = Signal::a_lat;
  cell.n = 2;
  s.rows.push_back({"mean", {cell}});
  s.harmonized = false;
  const auto md = render_report({{s}}, Format::Markdown);
  EXPECT_NE(md.find("| mean | n/a | n/a |"), std::string::npos) << md;
  EXPECT_NE(md.find("NOT-HARMONIZED"), std::string::npos);
}

TEST(Report, CsvRoundTrip)
{
  const auto a = two_rep_fixture();
  const std::vector<Signal> signals{Signal::s_dist, Signal::v_lon, Signal::a_lon, Signal::a_lat};
  CorrelationReport report{{compute_report(a, signals)}};
  report.scenarios.front().harmonized = false;
  const auto csv = render_report(report, Format::Csv);
  const auto parsed = parse_report_csv(csv);
  EXPECT_EQ(render_report(parsed, Format::Csv), csv);
  const auto & p = parsed.scenarios.front();
  EXPECT_EQ(p.signals, signals);
  EXPECT_FALSE(p.harmonized);
  ASSERT_EQ(p.rows.size(), 3u);
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    for (std::size_t c = 0; c < signals.size(); ++c) {
      const auto & orig = report.scenarios.front().rows[r].cells[c];
      const auto & back = p.rows[r].cells[c];
      EXPECT_EQ(back.n, orig.n);
      EXPECT_NEAR(*back.r, *orig.r, 0.005 + 1e-12);
      EXPECT_NEAR(*back.rrmse, *orig.rrmse, 0.00005 + 1e-12);
      EXPECT_EQ(back.r_band, orig.r_band);
      EXPECT_EQ(back.rrmse_band, orig.rrmse_band);
    }
  }
}

TEST(Report, CsvRejectsBadHeader)
{
  EXPECT_THROW(parse_report_csv("a,b\n"), std::exception);
}

TEST(PlotData, ColumnsAndLines)
{
  sync::AlignedRepetitionSet a;
  a.scenario_id = "fx";
  for (int k = 0; k < 500; ++k) a.grid.push_back(0.02 * k);
  for (int r = 0; r < 5; ++r) {
    sync::AlignedSeries s;
    s.repetition_id = std::to_string(r);
    for (Signal sig : logs::kAllSignals) s.at(sig) = sync::GridValues(500, 1.0 + r);
    a.repetitions.push_back(s);
  }
  for (Signal sig : logs::kAllSignals) a.mean_rep[static_cast<std::size_t>(sig)] = sync::GridValues(500, 3.0);
  sync::AlignedSeries sim;
  for (Signal sig : logs::kAllSignals) sim.at(sig) = sync::GridValues(500, 2.5);
  a.simulation = sim;

  const auto csv = export_plot_data(a, Signal::v_lon);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 501);
  const auto header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header, "t,0,1,2,3,4,mean,simulation");
  EXPECT_EQ(std::count(header.begin(), header.end(), ',') + 1, 8);
  EXPECT_NE(csv.find("\n0.02,1,2,3,4,5,3,2.5\n"), std::string::npos);
}
