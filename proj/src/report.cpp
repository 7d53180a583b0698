#include "silcorr/report.hpp"

#include "silcorr/error.hpp"
#include "silcorr/kernels.hpp"
#include "silcorr/numeric.hpp"

#include <cstdio>
#include <map>
#include <sstream>

namespace silcorr::report
{

using logs::Signal;

namespace
{

std::string format_p(double p)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", p);
  return buf;
}

std::string format_time(double t)
{
  std::string s = numeric::format_fixed(t, 9);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string r_cell(const metrics::MetricResult & m)
{
  if (!m.r) return "n/a";
  return numeric::format_fixed(*m.r, 2) + " " + std::string(metrics::to_string(*m.r_band));
}

std::string rrmse_cell(const metrics::MetricResult & m)
{
  if (!m.rrmse) return "n/a";
  return numeric::format_fixed(*m.rrmse * 100.0, 2) + " " + std::string(metrics::to_string(*m.rrmse_band));
}

void render_markdown(std::ostringstream & out, const ScenarioReport & s)
{
  out << "## " << s.scenario_id << "\n\n";
  if (!s.harmonized) {
    out << "**NOT-HARMONIZED**: the simulation's response distance lies outside the range observed on the track.\n\n";
  }
  if (s.simulation_response_distance && s.track_response_min && s.track_response_max) {
    out << "Response distance: simulation " << numeric::format_fixed(*s.simulation_response_distance, 2)
        << " m, track [" << numeric::format_fixed(*s.track_response_min, 2) << ", "
        << numeric::format_fixed(*s.track_response_max, 2) << "] m.\n\n";
  }
  out << "| rep |";
  for (const Signal sig : s.signals) out << ' ' << logs::to_string(sig) << " r | " << logs::to_string(sig) << " R (%) |";
  out << "\n|---|";
  for (std::size_t i = 0; i < s.signals.size(); ++i) out << "---|---|";
  out << '\n';
  for (const auto & row : s.rows) {
    out << "| " << row.row_id << " |";
    for (const auto & cell : row.cells) out << ' ' << r_cell(cell) << " | " << rrmse_cell(cell) << " |";
    out << '\n';
  }
  out << "\nTwo-sided p-values and pair counts:\n\n| rep |";
  for (const Signal sig : s.signals) out << ' ' << logs::to_string(sig) << " p | " << logs::to_string(sig) << " n |";
  out << "\n|---|";
  for (std::size_t i = 0; i < s.signals.size(); ++i) out << "---|---|";
  out << '\n';
  for (const auto & row : s.rows) {
    out << "| " << row.row_id << " |";
    for (const auto & cell : row.cells) {
      out << ' ' << (cell.p_value ? format_p(*cell.p_value) : "n/a") << " | " << cell.n << " |";
    }
    out << '\n';
  }
  out << '\n';
}

std::vector<std::string_view> split(std::string_view line)
{
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_optional(std::string_view cell, std::size_t line)
{
  if (cell.empty()) return std::nullopt;
  const auto v = numeric::parse_double(cell);
  if (!v) throw Error(ErrorCode::ParseError, "report line " + std::to_string(line) + ": bad number");
  return v;
}

bool parse_bool(std::string_view cell, std::size_t line)
{
  if (cell == "true") return true;
  if (cell == "false") return false;
  throw Error(ErrorCode::ParseError, "report line " + std::to_string(line) + ": expected true/false");
}

}  // namespace

ScenarioReport compute_report(const sync::AlignedRepetitionSet & aligned, std::span<const Signal> signals)
{
  if (!aligned.simulation) throw Error(ErrorCode::EmptyInput, "aligned set has no simulation");
  ScenarioReport report;
  report.scenario_id = aligned.scenario_id;
  report.signals.assign(signals.begin(), signals.end());

  std::vector<std::pair<std::string, const std::array<sync::GridValues, 4> *>> sources;
  for (const auto & rep : aligned.repetitions) sources.emplace_back(rep.repetition_id, &rep.signals);
  sources.emplace_back(std::string(kMeanRow), &aligned.mean_rep);

  std::vector<kernels::SeriesPair> jobs;
  std::vector<std::pair<std::size_t, std::size_t>> job_cells;
  for (std::size_t r = 0; r < sources.size(); ++r) {
    ReportRow row;
    row.row_id = sources[r].first;
    for (std::size_t c = 0; c < signals.size(); ++c) {
      const Signal sig = signals[c];
      const auto & m = (*sources[r].second)[static_cast<std::size_t>(sig)];
      const auto & g = aligned.simulation->at(sig);
      kernels::SeriesPair pair;
      pair.signal = sig;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] && g[i]) {
          pair.m.push_back(*m[i]);
          pair.g.push_back(*g[i]);
        }
      }
      metrics::MetricResult cell;
      cell.signal = sig;
      cell.n = pair.m.size();
      row.cells.push_back(cell);
      if (pair.m.size() >= 3) {
        jobs.push_back(std::move(pair));
        job_cells.emplace_back(r, c);
      }
    }
    report.rows.push_back(std::move(row));
  }
  const auto results = kernels::evaluate_pairs_parallel(jobs);
  for (std::size_t k = 0; k < results.size(); ++k) {
    report.rows[job_cells[k].first].cells[job_cells[k].second] = results[k];
  }
  return report;
}

std::string render_report(const CorrelationReport & report, Format format)
{
  std::ostringstream out;
  if (format == Format::Markdown) {
    out << "# Correlation report\n\n"
        << "r: sample correlation coefficient. R: RMSE relative to the RMS of the track signal.\n\n";
    for (const auto & s : report.scenarios) render_markdown(out, s);
    return out.str();
  }
  out << kReportCsvHeader << '\n';
  for (const auto & s : report.scenarios) {
    for (const auto & row : s.rows) {
      for (const auto & cell : row.cells) {
        out << s.scenario_id << ',' << row.row_id << ',' << logs::to_string(cell.signal) << ',' << cell.n << ','
            << (cell.r ? numeric::format_fixed(*cell.r, 2) : "") << ','
            << (cell.p_value ? format_p(*cell.p_value) : "") << ','
            << (cell.rrmse ? numeric::format_fixed(*cell.rrmse * 100.0, 2) : "") << ','
            << (cell.r_band ? metrics::to_string(*cell.r_band) : "") << ','
            << (cell.rrmse_band ? metrics::to_string(*cell.rrmse_band) : "") << ','
            << (cell.significant ? "true" : "false") << ',' << (s.harmonized ? "true" : "false") << '\n';
      }
    }
  }
  return out.str();
}

CorrelationReport parse_report_csv(std::string_view csv)
{
  CorrelationReport report;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header = true;
  while (pos < csv.size()) {
    auto end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kReportCsvHeader) throw Error(ErrorCode::SchemaMismatch, "unexpected report CSV header");
      header = false;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != 11) {
      throw Error(ErrorCode::ParseError, "report line " + std::to_string(line_no) + ": expected 11 fields");
    }
    const std::string scenario_id(cells[0]);
    if (report.scenarios.empty() || report.scenarios.back().scenario_id != scenario_id) {
      report.scenarios.emplace_back();
      report.scenarios.back().scenario_id = scenario_id;
    }
    auto & s = report.scenarios.back();
    s.harmonized = parse_bool(cells[10], line_no);
    const std::string row_id(cells[1]);
    if (s.rows.empty() || s.rows.back().row_id != row_id) {
      s.rows.emplace_back();
      s.rows.back().row_id = row_id;
    }
    metrics::MetricResult cell;
    cell.signal = logs::signal_from_string(cells[2]);
    const auto n = numeric::parse_double(cells[3]);
    if (!n || *n < 0) throw Error(ErrorCode::ParseError, "report line " + std::to_string(line_no) + ": bad n");
    cell.n = static_cast<std::size_t>(*n);
    cell.r = parse_optional(cells[4], line_no);
    cell.p_value = parse_optional(cells[5], line_no);
    if (const auto pct = parse_optional(cells[6], line_no)) cell.rrmse = *pct / 100.0;
    if (!cells[7].empty()) cell.r_band = metrics::correlation_band_from_string(cells[7]);
    if (!cells[8].empty()) cell.rrmse_band = metrics::accuracy_band_from_string(cells[8]);
    cell.significant = parse_bool(cells[9], line_no);
    if (s.rows.size() == 1) s.signals.push_back(cell.signal);
    s.rows.back().cells.push_back(cell);
  }
  if (header) throw Error(ErrorCode::EmptyLog, "report CSV is empty");
  return report;
}

std::string export_plot_data(const sync::AlignedRepetitionSet & aligned, Signal signal)
{
  std::ostringstream out;
  out << 't';
  for (const auto & rep : aligned.repetitions) out << ',' << rep.repetition_id;
  out << ",mean,simulation\n";
  const auto cell = [](const std::optional<double> & v) { return v ? numeric::format_exact(*v) : std::string(); };
  for (std::size_t g = 0; g < aligned.grid.size(); ++g) {
    out << format_time(aligned.grid[g]);
    for (const auto & rep : aligned.repetitions) out << ',' << cell(rep.at(signal)[g]);
    out << ',' << cell(aligned.mean(signal)[g]) << ',';
    if (aligned.simulation) out << cell(aligned.simulation->at(signal)[g]);
    out << '\n';
  }
  return out.str();
}

}  // namespace silcorr::report
