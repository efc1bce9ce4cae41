#pragma once

#include <istream>
#include <string>
#include <vector>

#include "semibus/model.hpp"

namespace semibus {

class TripTimeMatrix;

struct EventParse {
  std::vector<RawEvent> events;
  ValidationReport report;
};

// Parses the event feed. Malformed rows land in the report, never silently
// dropped. Throws Error on a missing required column, or when a nonempty
// file yields zero accepted rows.
EventParse parse_events(std::istream& in);
EventParse parse_events_file(const std::string& path);

// Strict parsers for the authored inputs: any malformed row is an Error.
StationRegistry parse_stations(std::istream& in);
StationRegistry parse_stations_file(const std::string& path);

std::vector<ScheduleEntry> parse_schedule(std::istream& in);
std::vector<ScheduleEntry> parse_schedule_file(const std::string& path);

std::vector<ShortcutEdge> parse_shortcuts(std::istream& in);
std::vector<ShortcutEdge> parse_shortcuts_file(const std::string& path);

BoardingAverages parse_boardings(std::istream& in);
BoardingAverages parse_boardings_file(const std::string& path);

// Cross-file checks done at ingest time.
void validate_schedule(const std::vector<ScheduleEntry>& schedule,
                       const StationRegistry& stations);

// Drops events referencing unknown stations, recording each in the report.
std::vector<RawEvent> filter_known_events(const std::vector<RawEvent>& events,
                                          const StationRegistry& stations,
                                          ValidationReport& report);

struct ShortcutValidation {
  std::vector<ShortcutEdge> accepted;
  ValidationReport report;  // rejections carry the shortcut id and reason
};

// A shortcut is excluded iff it is structurally wrong (endpoints out of
// order, bypassed list not exactly the stations between) or its estimated
// time at some hour exceeds the direct multi-segment time at that hour.
ShortcutValidation validate_shortcuts(const std::vector<ShortcutEdge>& shortcuts,
                                      const TripTimeMatrix& trip_times,
                                      const StationRegistry& stations);

}  // namespace semibus
