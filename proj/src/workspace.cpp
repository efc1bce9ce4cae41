#include "semibus/workspace.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "semibus/version.hpp"

namespace semibus {

namespace fs = std::filesystem;

std::int64_t provenance_epoch() {
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0') return static_cast<std::int64_t>(v);
  }
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
  }
  fs::rename(tmp, path);
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

Workspace::Workspace(fs::path root) : root_(std::move(root)) {
  if (!fs::exists(root_)) throw Error("workspace '" + root_.string() + "' does not exist");
}

std::string Workspace::dataset_hash() const {
  std::string all;
  for (const fs::path& p : {events_path(), stations_path(), schedule_path(),
                            shortcuts_path(), boardings_path()}) {
    all += p.filename().string();
    all += '\0';
    all += read_file(p);
    all += '\0';
  }
  return fnv1a64_hex(all);
}

Workspace::Inputs Workspace::load_inputs() const {
  Inputs in{parse_stations_file(stations_path().string()),
            parse_schedule_file(schedule_path().string()),
            parse_shortcuts_file(shortcuts_path().string()),
            parse_boardings_file(boardings_path().string())};
  validate_schedule(in.schedule, in.stations);
  return in;
}

MetricsArtifact Workspace::build_metrics(double link_threshold_minutes) const {
  Inputs inputs = load_inputs();
  EventParse events = parse_events_file(events_path().string());
  std::vector<RawEvent> known =
      filter_known_events(events.events, inputs.stations, events.report);

  LinkResult linked = build_linked_visits(known, link_threshold_minutes);
  LatenessResult lateness =
      compute_lateness(linked.visits, inputs.schedule, link_threshold_minutes);

  MetricsArtifact m;
  m.dataset_hash = dataset_hash();
  m.tool_version = kToolVersion;
  m.link_threshold_minutes = link_threshold_minutes;
  m.stations = inputs.stations.all();
  m.lateness = std::move(lateness.records);
  m.idle = IdleTimeTable::build(linked.visits, inputs.stations);
  m.trip = TripTimeMatrix::build(linked.visits, inputs.stations);
  m.probability = StopProbabilityTable::build(linked.visits, inputs.stations);

  ShortcutValidation sv = validate_shortcuts(inputs.shortcuts, m.trip, inputs.stations);
  m.accepted_shortcuts = std::move(sv.accepted);
  m.shortcut_report = std::move(sv.report);
  m.event_report = std::move(events.report);
  m.link_report = std::move(linked.report);
  m.lateness_report = std::move(lateness.report);
  return m;
}

void Workspace::save_metrics(const MetricsArtifact& artifact) const {
  atomic_write(metrics_path(), to_json(artifact).dump(2) + "\n");
  atomic_write(tables_dir() / "idle_time.csv", idle_table_csv(artifact.idle));
  atomic_write(tables_dir() / "trip_time.csv", trip_matrix_csv(artifact.trip));
  atomic_write(tables_dir() / "stop_probability.csv",
               probability_table_csv(artifact.probability));
  atomic_write(tables_dir() / "lateness.csv", lateness_csv(artifact.lateness));

  json manifest = {{"dataset_hash", artifact.dataset_hash},
                   {"built_at_epoch", provenance_epoch()},
                   {"tool_version", artifact.tool_version},
                   {"tables",
                    {"tables/metrics.json", "tables/idle_time.csv",
                     "tables/trip_time.csv", "tables/stop_probability.csv",
                     "tables/lateness.csv"}}};
  atomic_write(manifest_path(), manifest.dump(2) + "\n");
}

MetricsArtifact Workspace::load_metrics() const {
  if (!fs::exists(metrics_path())) {
    throw Error("tables not built; run `semibus metrics` first");
  }
  MetricsArtifact m = metrics_from_json(json::parse(read_file(metrics_path())));
  if (m.dataset_hash != dataset_hash()) {
    throw Error("stale tables (input dataset changed); re-run `semibus metrics`");
  }
  return m;
}

void Workspace::write_report(const std::string& name, const json& contents) const {
  atomic_write(reports_dir() / name, contents.dump(2) + "\n");
}

void Workspace::write_plot_csv(const std::string& name, const std::string& contents) const {
  atomic_write(plot_dir() / name, contents);
}

void Workspace::append_log(const std::string& command, const std::string& status,
                           const std::vector<std::string>& artifacts,
                           const std::string& error) const {
  json entry = {{"command", command},
                {"status", status},
                {"epoch", provenance_epoch()},
                {"artifacts", artifacts}};
  if (!error.empty()) entry["error"] = error;
  std::ofstream out(log_path(), std::ios::app);
  if (out) out << entry.dump() << "\n";
}

RoutingBundle load_routing_bundle(const Workspace& workspace) {
  RoutingBundle bundle;
  bundle.metrics = workspace.load_metrics();
  bundle.stations = StationRegistry(bundle.metrics.stations);
  bundle.boardings = parse_boardings_file(workspace.boardings_path().string());
  return bundle;
}

std::string idle_table_csv(const IdleTimeTable& table) {
  std::string out = "stop_id,hour,median_idle_minutes,source\n";
  for (const auto& [stop_id, row] : table.cells()) {
    for (int h = 0; h < 24; ++h) {
      out += stop_id + "," + std::to_string(h) + "," +
             format_double(row[h].median_minutes) + "," + to_string(row[h].source) + "\n";
    }
  }
  return out;
}

std::string trip_matrix_csv(const TripTimeMatrix& matrix) {
  std::string out = "from_stop,to_stop,hour,median_trip_minutes,source\n";
  for (const auto& [pair, row] : matrix.cells()) {
    for (int h = 0; h < 24; ++h) {
      out += pair.first + "," + pair.second + "," + std::to_string(h) + "," +
             format_double(row[h].median_minutes) + "," + to_string(row[h].source) + "\n";
    }
  }
  return out;
}

std::string probability_table_csv(const StopProbabilityTable& table) {
  std::string out = "stop_id,hour,stopped,passed,probability\n";
  for (const auto& [stop_id, row] : table.cells()) {
    for (int h = 0; h < 24; ++h) {
      out += stop_id + "," + std::to_string(h) + "," + std::to_string(row[h].stopped) +
             "," + std::to_string(row[h].passed) + ",";
      out += row[h].has_data() ? format_double(row[h].probability()) : std::string("no_data");
      out += "\n";
    }
  }
  return out;
}

std::string lateness_csv(const std::vector<LatenessRecord>& records) {
  std::string out = "service_date,stop_id,scheduled_departure,actual_departure,lateness_minutes\n";
  for (const LatenessRecord& r : records) {
    out += r.service_date_text + "," + r.stop_id + "," +
           format_clock(r.scheduled_departure) + "," + format_clock(r.actual_departure) +
           "," + format_double(r.lateness_minutes) + "\n";
  }
  return out;
}

}  // namespace semibus
