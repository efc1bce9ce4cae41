#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semibus/time_util.hpp"

namespace semibus {

// Domain errors surfaced to the CLI as one-line diagnostics.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Direction { incoming, outgoing };
enum class EventType { arriving, departing };

std::optional<Direction> parse_direction(const std::string& text);
std::optional<EventType> parse_event_type(const std::string& text);
const char* to_string(Direction d);
const char* to_string(EventType t);

// One arrival/departure record from the bus event feed.
struct RawEvent {
  std::string service_date_text;
  CivilDate service_date;
  std::string timestamp_text;  // as read, so accepted rows re-serialize bit-for-bit
  Minutes timestamp = 0;       // minutes since service-day midnight
  Direction direction = Direction::outgoing;
  EventType event_type = EventType::arriving;
  std::string stop_id;
  std::string trip_id;
};

struct Station {
  std::string stop_id;
  std::string name;
  int route_position = 0;
  double population_density = 0;
  bool is_origin = false;
  bool is_terminus = false;
  Direction direction = Direction::outgoing;
};

struct ScheduleEntry {
  std::string stop_id;
  std::string departure_text;  // "HH:MM" as read
  Minutes scheduled_departure = 0;
  DayKind day_kind = DayKind::weekday;
};

// Alternate road segment bypassing consecutive stations, with authored
// per-hour travel-time estimates. Validity against the trip-time matrix is
// checked separately (validate_shortcuts).
struct ShortcutEdge {
  std::string from_stop;
  std::string to_stop;
  std::vector<std::string> bypassed;  // stations strictly between, route order
  std::array<double, 24> minutes_by_hour{};
};

struct Rejection {
  int line = 0;  // 1-based input line, 0 when not tied to a line
  std::string reason;
};

struct ValidationReport {
  int total = 0;
  int accepted = 0;
  int rejected = 0;
  std::vector<Rejection> rejections;

  void add_accepted() {
    ++total;
    ++accepted;
  }
  void add_rejected(int line, std::string reason) {
    ++total;
    ++rejected;
    rejections.push_back({line, std::move(reason)});
  }
};

// Canonical ordered station registry. Construction validates the route
// structure: unique stop ids; per direction contiguous positions 0..S-1 with
// at least two stations, the single origin at position 0 and the single
// terminus at the last position.
class StationRegistry {
 public:
  StationRegistry() = default;
  explicit StationRegistry(std::vector<Station> stations);

  const std::vector<Station>& all() const { return all_; }

  // Stations of one direction in route-position order (empty if absent).
  const std::vector<Station>& route(Direction d) const;

  const Station* find(const std::string& stop_id) const;
  const Station& require(const std::string& stop_id) const;
  bool contains(const std::string& stop_id) const { return find(stop_id) != nullptr; }

  const Station& origin(Direction d) const;
  const Station& terminus(Direction d) const;

 private:
  std::vector<Station> all_;  // sorted by (direction, position)
  std::vector<Station> incoming_;
  std::vector<Station> outgoing_;
  std::map<std::string, Station> by_id_;
};

// Scheduled departure time -> mean boardings observed at that departure.
using BoardingAverages = std::map<Minutes, double>;

}  // namespace semibus
