#include "silcorr/drive_log.hpp"

#include "silcorr/error.hpp"
#include "silcorr/numeric.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace silcorr::logs
{

namespace fs = std::filesystem;

namespace
{

constexpr double kJitterFraction = 0.2;
constexpr std::array<std::string_view, 7> kColumns = {
  "t", "s_dist", "v_lon", "a_lon", "a_lat", "target_in_lane", "target_detected"};

std::vector<std::string_view> split_csv(std::string_view line)
{
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string & path, const std::string & content)
{
  const fs::path parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) fs::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << content;
}

}  // namespace

std::string_view to_string(Source source)
{
  return source == Source::Track ? "Track" : "Simulation";
}

Source source_from_string(std::string_view text)
{
  if (text == "Track") return Source::Track;
  if (text == "Simulation") return Source::Simulation;
  throw Error(ErrorCode::SchemaMismatch, "unknown log source '" + std::string(text) + "'");
}

std::string_view to_string(Signal signal)
{
  switch (signal) {
    case Signal::s_dist: return "s_dist";
    case Signal::v_lon: return "v_lon";
    case Signal::a_lon: return "a_lon";
    case Signal::a_lat: return "a_lat";
  }
  return "v_lon";
}

Signal signal_from_string(std::string_view text)
{
  for (const Signal s : kAllSignals) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown signal '" + std::string(text) + "'");
}

LogMetadata DriveLog::metadata() const
{
  return {repetition_id, scenario_id, source, annotation_t, collision_flag};
}

double median_period(const DriveLog & log)
{
  if (log.samples.size() < 2) return 0.0;
  std::vector<double> periods;
  periods.reserve(log.samples.size() - 1);
  for (std::size_t i = 1; i < log.samples.size(); ++i) {
    periods.push_back(log.samples[i].t - log.samples[i - 1].t);
  }
  const auto mid = periods.begin() + static_cast<std::ptrdiff_t>(periods.size() / 2);
  std::nth_element(periods.begin(), mid, periods.end());
  if (periods.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(periods.begin(), mid);
  return 0.5 * (lower + upper);
}

void validate(const DriveLog & log)
{
  const auto & s = log.samples;
  if (s.empty()) throw Error(ErrorCode::EmptyLog, "log '" + log.repetition_id + "' has no samples");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i].t > s[i - 1].t)) {
      throw Error(
        ErrorCode::NonMonotonicTime,
        "row " + std::to_string(i + 1) + " (t=" + numeric::format_exact(s[i].t) + ") does not advance time");
    }
  }
  if (s.size() >= 3) {
    const double median = median_period(log);
    for (std::size_t i = 1; i < s.size(); ++i) {
      const double period = s[i].t - s[i - 1].t;
      if (std::fabs(period - median) > kJitterFraction * median) {
        throw Error(
          ErrorCode::InvalidSampling,
          "row " + std::to_string(i + 1) + ": sample period " + numeric::format_exact(period) +
            " deviates more than 20% from the median " + numeric::format_exact(median));
      }
    }
  }
  if (log.annotation_t < s.front().t || log.annotation_t > s.back().t) {
    throw Error(ErrorCode::SchemaMismatch, "annotation_t lies outside the log's time range");
  }
}

DriveLog ingest_drive_log(std::string_view csv, const LogMetadata & meta)
{
  DriveLog log;
  log.repetition_id = meta.repetition_id;
  log.scenario_id = meta.scenario_id;
  log.source = meta.source;
  log.annotation_t = meta.annotation_t;
  log.collision_flag = meta.collision_flag;

  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::array<int, kColumns.size()> index{};
  index.fill(-1);
  std::size_t width = 0;
  bool header_seen = false;

  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    const std::string_view line = trim(csv.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto cells = split_csv(line);
    if (!header_seen) {
      header_seen = true;
      width = cells.size();
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto name = trim(cells[c]);
        const auto it = std::find(kColumns.begin(), kColumns.end(), name);
        if (it == kColumns.end()) {
          throw Error(ErrorCode::SchemaMismatch, "unexpected column '" + std::string(name) + "'");
        }
        index[static_cast<std::size_t>(it - kColumns.begin())] = static_cast<int>(c);
      }
      for (std::size_t k = 0; k < kColumns.size(); ++k) {
        if (index[k] < 0) {
          throw Error(ErrorCode::SchemaMismatch, "missing column '" + std::string(kColumns[k]) + "'");
        }
      }
      continue;
    }

    if (cells.size() != width) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": wrong number of cells");
    }
    const auto cell = [&](std::size_t k) { return trim(cells[static_cast<std::size_t>(index[k])]); };
    const auto number = [&](std::size_t k) {
      const auto v = numeric::parse_double(cell(k));
      if (!v) {
        throw Error(
          ErrorCode::ParseError,
          "line " + std::to_string(line_no) + ": invalid value in column '" + std::string(kColumns[k]) + "'");
      }
      return *v;
    };
    const auto boolean = [&](std::size_t k) {
      const auto c = cell(k);
      if (c == "0") return false;
      if (c == "1") return true;
      throw Error(
        ErrorCode::ParseError,
        "line " + std::to_string(line_no) + ": column '" + std::string(kColumns[k]) + "' must be 0 or 1");
    };

    LogSample sample;
    sample.t = number(0);
    if (!cell(1).empty()) sample.s_dist = number(1);
    sample.v_lon = number(2);
    sample.a_lon = number(3);
    sample.a_lat = number(4);
    sample.target_in_lane = boolean(5);
    sample.target_detected = boolean(6);
    log.samples.push_back(sample);
  }
  if (!header_seen) throw Error(ErrorCode::SchemaMismatch, "missing header");
  validate(log);
  return log;
}

std::string emit_drive_log(const DriveLog & log)
{
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto & s : log.samples) {
    out += numeric::format_exact(s.t);
    out += ',';
    if (s.s_dist) out += numeric::format_exact(*s.s_dist);
    out += ',';
    out += numeric::format_exact(s.v_lon);
    out += ',';
    out += numeric::format_exact(s.a_lon);
    out += ',';
    out += numeric::format_exact(s.a_lat);
    out += s.target_in_lane ? ",1" : ",0";
    out += s.target_detected ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

std::string emit_metadata(const LogMetadata & meta)
{
  nlohmann::json j{
    {"repetition_id", meta.repetition_id},
    {"scenario_id", meta.scenario_id},
    {"source", std::string(to_string(meta.source))},
    {"annotation_t", meta.annotation_t},
    {"collision_flag", meta.collision_flag},
  };
  return j.dump(2) + "\n";
}

LogMetadata parse_metadata(std::string_view json_text)
{
  try {
    const auto j = nlohmann::json::parse(json_text);
    LogMetadata meta;
    meta.repetition_id = j.at("repetition_id").get<std::string>();
    meta.scenario_id = j.at("scenario_id").get<std::string>();
    meta.source = source_from_string(j.at("source").get<std::string>());
    meta.annotation_t = j.at("annotation_t").get<double>();
    meta.collision_flag = j.value("collision_flag", false);
    return meta;
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::SchemaMismatch, std::string("log metadata: ") + e.what());
  }
}

SignalSeries extract_signal(const DriveLog & log, Signal name)
{
  SignalSeries series;
  series.name = name;
  series.t.reserve(log.samples.size());
  series.values.reserve(log.samples.size());
  for (const auto & s : log.samples) {
    switch (name) {
      case Signal::s_dist:
        if (!s.s_dist) continue;
        series.values.push_back(*s.s_dist);
        break;
      case Signal::v_lon: series.values.push_back(s.v_lon); break;
      case Signal::a_lon: series.values.push_back(s.a_lon); break;
      case Signal::a_lat: series.values.push_back(s.a_lat); break;
    }
    series.t.push_back(s.t);
  }
  if (series.t.empty()) {
    throw Error(
      ErrorCode::SignalAllAbsent,
      std::string(to_string(name)) + " is absent throughout log '" + log.repetition_id + "'");
  }
  return series;
}

double interpolate_signal(const DriveLog & log, Signal name, double t)
{
  const auto series = extract_signal(log, name);
  if (t <= series.t.front()) return series.values.front();
  if (t >= series.t.back()) return series.values.back();
  const auto it = std::upper_bound(series.t.begin(), series.t.end(), t);
  const auto i = static_cast<std::size_t>(it - series.t.begin());
  return numeric::lerp(series.t[i - 1], series.values[i - 1], series.t[i], series.values[i], t);
}

RepetitionSet make_repetition_set(
  std::string scenario_id, scenario::ScenarioClass scenario_class, std::vector<DriveLog> logs)
{
  RepetitionSet set;
  set.scenario_id = std::move(scenario_id);
  set.scenario_class = scenario_class;
  for (auto & log : logs) {
    if (log.scenario_id != set.scenario_id) {
      throw Error(
        ErrorCode::InconsistentScenario,
        "log '" + log.repetition_id + "' belongs to scenario '" + log.scenario_id + "', expected '" +
          set.scenario_id + "'");
    }
    if (log.source == Source::Simulation) {
      set.simulation = std::move(log);
    } else {
      set.logs.push_back(std::move(log));
    }
  }
  if (set.logs.empty()) {
    throw Error(ErrorCode::EmptyInput, "scenario '" + set.scenario_id + "' has no track repetitions");
  }
  return set;
}

DriveLog load_drive_log(const std::string & csv_path)
{
  fs::path sidecar(csv_path);
  sidecar.replace_extension(".json");
  const auto meta = parse_metadata(read_file(sidecar.string()));
  return ingest_drive_log(read_file(csv_path), meta);
}

void save_drive_log(const std::string & csv_path, const DriveLog & log)
{
  fs::path sidecar(csv_path);
  sidecar.replace_extension(".json");
  write_file(csv_path, emit_drive_log(log));
  write_file(sidecar.string(), emit_metadata(log.metadata()));
}

std::vector<DriveLog> load_log_directory(const std::string & directory)
{
  if (!fs::is_directory(directory)) {
    throw Error(ErrorCode::Io, "track-log directory '" + directory + "' does not exist");
  }
  std::vector<DriveLog> logs;
  for (const auto & entry : fs::directory_iterator(directory)) {
    if (entry.path().extension() != ".csv") continue;
    fs::path sidecar = entry.path();
    sidecar.replace_extension(".json");
    if (!fs::exists(sidecar)) continue;
    logs.push_back(load_drive_log(entry.path().string()));
  }
  std::sort(logs.begin(), logs.end(), [](const DriveLog & a, const DriveLog & b) {
    return a.repetition_id < b.repetition_id;
  });
  return logs;
}

}  // namespace silcorr::logs
