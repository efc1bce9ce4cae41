#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "semibus/json_io.hpp"

namespace semibus {

// Seconds since epoch for provenance stamps; honors SOURCE_DATE_EPOCH so
// reproducible pipelines stay byte-identical.
std::int64_t provenance_epoch();

// Stable content hash of the input dataset (not cryptographic; staleness
// detection only).
std::string fnv1a64_hex(const std::string& bytes);

// Write-temp-then-rename, so readers never observe partial artifacts.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// A persisted pipeline directory:
//   input/    events.csv stations.csv schedule.csv shortcuts.csv boardings.csv
//   tables/   metrics.json + delimited-text tables
//   reports/  per-command JSON artifacts and plot data
//   manifest.json, log.jsonl
class Workspace {
 public:
  explicit Workspace(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path input_dir() const { return root_ / "input"; }
  std::filesystem::path tables_dir() const { return root_ / "tables"; }
  std::filesystem::path reports_dir() const { return root_ / "reports"; }
  std::filesystem::path plot_dir() const { return reports_dir() / "plotdata"; }
  std::filesystem::path manifest_path() const { return root_ / "manifest.json"; }
  std::filesystem::path metrics_path() const { return tables_dir() / "metrics.json"; }
  std::filesystem::path log_path() const { return root_ / "log.jsonl"; }

  std::filesystem::path events_path() const { return input_dir() / "events.csv"; }
  std::filesystem::path stations_path() const { return input_dir() / "stations.csv"; }
  std::filesystem::path schedule_path() const { return input_dir() / "schedule.csv"; }
  std::filesystem::path shortcuts_path() const { return input_dir() / "shortcuts.csv"; }
  std::filesystem::path boardings_path() const { return input_dir() / "boardings.csv"; }

  // Hash over the five input files' bytes, in fixed order.
  std::string dataset_hash() const;

  struct Inputs {
    StationRegistry stations;
    std::vector<ScheduleEntry> schedule;
    std::vector<ShortcutEdge> shortcuts;
    BoardingAverages boardings;
  };
  Inputs load_inputs() const;  // everything but events (parsed on demand)

  // Full wrangle: parse events, link, lateness, tables, shortcut validation.
  MetricsArtifact build_metrics(double link_threshold_minutes) const;

  void save_metrics(const MetricsArtifact& artifact) const;  // tables + manifest

  // Loads tables, checking presence and dataset-hash staleness.
  MetricsArtifact load_metrics() const;

  void write_report(const std::string& name, const json& contents) const;
  void write_plot_csv(const std::string& name, const std::string& contents) const;

  void append_log(const std::string& command, const std::string& status,
                  const std::vector<std::string>& artifacts,
                  const std::string& error = "") const;

 private:
  std::filesystem::path root_;
};

// Everything a routing command needs, with stable addresses for the
// RoutingTables pointers.
struct RoutingBundle {
  StationRegistry stations;
  MetricsArtifact metrics;
  BoardingAverages boardings;

  RoutingTables tables() const {
    return RoutingTables{&stations, &metrics.idle, &metrics.trip,
                         &metrics.probability, metrics.accepted_shortcuts};
  }
};

RoutingBundle load_routing_bundle(const Workspace& workspace);

// Delimited-text table renderers (the CSV side of the metrics artifacts).
std::string idle_table_csv(const IdleTimeTable& table);
std::string trip_matrix_csv(const TripTimeMatrix& matrix);
std::string probability_table_csv(const StopProbabilityTable& table);
std::string lateness_csv(const std::vector<LatenessRecord>& records);

}  // namespace semibus
