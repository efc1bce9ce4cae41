#include "semibus/ingest.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "semibus/csv.hpp"
#include "semibus/wrangle.hpp"

namespace semibus {

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file '" + path + "'");
  return in;
}

std::optional<double> parse_double(const std::string& text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::optional<int> parse_int(const std::string& text) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  return std::nullopt;
}

// Header lookup that throws on a missing required column.
struct Columns {
  std::vector<std::string> header;

  int require(const char* name, const char* what) const {
    int idx = csv::column_index(header, name);
    if (idx < 0) {
      throw Error(std::string(what) + " file is missing required column '" + name + "'");
    }
    return idx;
  }
};

}  // namespace

EventParse parse_events(std::istream& in) {
  csv::Reader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) {
    throw Error("events file is empty (expected a header row)");
  }
  Columns cols{row};
  int c_date = cols.require("service_date", "events");
  int c_ts = cols.require("timestamp", "events");
  int c_dir = cols.require("direction_id", "events");
  int c_type = cols.require("event_type", "events");
  int c_stop = cols.require("stop_id", "events");
  int c_trip = cols.require("trip_id", "events");
  int width = static_cast<int>(row.size());

  EventParse out;
  while (reader.next(row)) {
    int line = reader.line_number();
    if (static_cast<int>(row.size()) < width) {
      out.report.add_rejected(line, "wrong field count");
      continue;
    }
    auto date = parse_date(row[c_date]);
    if (!date) {
      out.report.add_rejected(line, "unparseable service_date '" + row[c_date] + "'");
      continue;
    }
    auto ts = parse_timestamp(row[c_ts], *date);
    if (!ts) {
      out.report.add_rejected(line, "unparseable timestamp '" + row[c_ts] +
                                        "' (must fall on the service day)");
      continue;
    }
    auto dir = parse_direction(row[c_dir]);
    if (!dir) {
      out.report.add_rejected(line, "bad direction_id '" + row[c_dir] + "'");
      continue;
    }
    auto type = parse_event_type(row[c_type]);
    if (!type) {
      out.report.add_rejected(line, "bad event_type '" + row[c_type] + "'");
      continue;
    }
    if (row[c_stop].empty() || row[c_trip].empty()) {
      out.report.add_rejected(line, "empty stop_id or trip_id");
      continue;
    }
    RawEvent ev;
    ev.service_date_text = row[c_date];
    ev.service_date = *date;
    ev.timestamp_text = row[c_ts];
    ev.timestamp = *ts;
    ev.direction = *dir;
    ev.event_type = *type;
    ev.stop_id = row[c_stop];
    ev.trip_id = row[c_trip];
    out.events.push_back(std::move(ev));
    out.report.add_accepted();
  }
  if (out.report.total > 0 && out.report.accepted == 0) {
    throw Error("events file yielded zero accepted rows");
  }
  return out;
}

EventParse parse_events_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_events(in);
}

StationRegistry parse_stations(std::istream& in) {
  csv::Reader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) throw Error("stations file is empty");
  Columns cols{row};
  int c_stop = cols.require("stop_id", "stations");
  int c_name = cols.require("name", "stations");
  int c_pos = cols.require("route_position", "stations");
  int c_dens = cols.require("population_density", "stations");
  int c_origin = cols.require("is_origin", "stations");
  int c_term = cols.require("is_terminus", "stations");
  int c_dir = cols.require("direction_id", "stations");

  std::vector<Station> stations;
  while (reader.next(row)) {
    int line = reader.line_number();
    auto fail = [&](const std::string& why) {
      throw Error("stations line " + std::to_string(line) + ": " + why);
    };
    Station s;
    s.stop_id = row[c_stop];
    s.name = row[c_name];
    auto pos = parse_int(row[c_pos]);
    if (!pos || *pos < 0) fail("bad route_position '" + row[c_pos] + "'");
    s.route_position = *pos;
    auto dens = parse_double(row[c_dens]);
    if (!dens || *dens < 0) fail("bad population_density '" + row[c_dens] + "'");
    s.population_density = *dens;
    auto origin = parse_bool(row[c_origin]);
    auto term = parse_bool(row[c_term]);
    if (!origin || !term) fail("bad is_origin/is_terminus flag");
    s.is_origin = *origin;
    s.is_terminus = *term;
    auto dir = parse_direction(row[c_dir]);
    if (!dir) fail("bad direction_id '" + row[c_dir] + "'");
    s.direction = *dir;
    if (s.stop_id.empty()) fail("empty stop_id");
    stations.push_back(std::move(s));
  }
  return StationRegistry(std::move(stations));  // structural validation
}

StationRegistry parse_stations_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_stations(in);
}

std::vector<ScheduleEntry> parse_schedule(std::istream& in) {
  csv::Reader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) throw Error("schedule file is empty");
  Columns cols{row};
  int c_stop = cols.require("stop_id", "schedule");
  int c_dep = cols.require("scheduled_departure", "schedule");
  int c_kind = cols.require("day_kind", "schedule");

  std::vector<ScheduleEntry> entries;
  while (reader.next(row)) {
    int line = reader.line_number();
    ScheduleEntry e;
    e.stop_id = row[c_stop];
    auto dep = parse_clock(row[c_dep]);
    if (!dep) {
      throw Error("schedule line " + std::to_string(line) +
                  ": bad scheduled_departure '" + row[c_dep] +
                  "' (HH:MM within 00:00-27:59)");
    }
    e.departure_text = row[c_dep];
    e.scheduled_departure = *dep;
    auto kind = parse_day_kind(row[c_kind]);
    if (!kind) {
      throw Error("schedule line " + std::to_string(line) + ": bad day_kind '" +
                  row[c_kind] + "'");
    }
    e.day_kind = *kind;
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ScheduleEntry> parse_schedule_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_schedule(in);
}

std::vector<ShortcutEdge> parse_shortcuts(std::istream& in) {
  csv::Reader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) throw Error("shortcuts file is empty");
  Columns cols{row};
  int c_from = cols.require("from_stop", "shortcuts");
  int c_to = cols.require("to_stop", "shortcuts");
  int c_byp = cols.require("bypassed_stops", "shortcuts");
  int c_hour = cols.require("hour", "shortcuts");
  int c_min = cols.require("estimated_minutes", "shortcuts");

  struct Partial {
    ShortcutEdge edge;
    std::array<bool, 24> seen{};
  };
  std::map<std::pair<std::string, std::string>, Partial> partials;
  std::vector<std::pair<std::string, std::string>> order;

  while (reader.next(row)) {
    int line = reader.line_number();
    auto fail = [&](const std::string& why) {
      throw Error("shortcuts line " + std::to_string(line) + ": " + why);
    };
    auto hour = parse_int(row[c_hour]);
    if (!hour || *hour < 0 || *hour > 23) fail("bad hour '" + row[c_hour] + "'");
    auto minutes = parse_double(row[c_min]);
    if (!minutes || *minutes <= 0) fail("bad estimated_minutes '" + row[c_min] + "'");

    std::vector<std::string> bypassed;
    std::stringstream ss(row[c_byp]);
    std::string part;
    while (std::getline(ss, part, ';')) {
      if (!part.empty()) bypassed.push_back(part);
    }
    if (bypassed.empty()) fail("empty bypassed_stops");

    auto key = std::make_pair(row[c_from], row[c_to]);
    auto it = partials.find(key);
    if (it == partials.end()) {
      Partial p;
      p.edge.from_stop = key.first;
      p.edge.to_stop = key.second;
      p.edge.bypassed = bypassed;
      it = partials.emplace(key, std::move(p)).first;
      order.push_back(key);
    } else if (it->second.edge.bypassed != bypassed) {
      fail("bypassed_stops differs from earlier rows of the same shortcut");
    }
    if (it->second.seen[*hour]) fail("duplicate hour for shortcut");
    it->second.seen[*hour] = true;
    it->second.edge.minutes_by_hour[*hour] = *minutes;
  }

  std::vector<ShortcutEdge> edges;
  for (const auto& key : order) {
    const Partial& p = partials.at(key);
    for (int h = 0; h < 24; ++h) {
      if (!p.seen[h]) {
        throw Error("shortcut " + key.first + "->" + key.second +
                    " is missing hour " + std::to_string(h) +
                    " (all 24 hours are required)");
      }
    }
    edges.push_back(p.edge);
  }
  return edges;
}

std::vector<ShortcutEdge> parse_shortcuts_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_shortcuts(in);
}

BoardingAverages parse_boardings(std::istream& in) {
  csv::Reader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) throw Error("boardings file is empty");
  Columns cols{row};
  int c_dep = cols.require("departure_time", "boardings");
  int c_avg = cols.require("average_boardings", "boardings");

  BoardingAverages averages;
  while (reader.next(row)) {
    int line = reader.line_number();
    auto dep = parse_clock(row[c_dep]);
    auto avg = parse_double(row[c_avg]);
    if (!dep || !avg || *avg < 0) {
      throw Error("boardings line " + std::to_string(line) + ": bad row");
    }
    averages[*dep] = *avg;
  }
  return averages;
}

BoardingAverages parse_boardings_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_boardings(in);
}

void validate_schedule(const std::vector<ScheduleEntry>& schedule,
                       const StationRegistry& stations) {
  for (const ScheduleEntry& e : schedule) {
    if (!stations.contains(e.stop_id)) {
      throw Error("schedule references unknown stop_id '" + e.stop_id + "'");
    }
  }
}

std::vector<RawEvent> filter_known_events(const std::vector<RawEvent>& events,
                                          const StationRegistry& stations,
                                          ValidationReport& report) {
  std::vector<RawEvent> known;
  known.reserve(events.size());
  for (const RawEvent& ev : events) {
    if (stations.contains(ev.stop_id)) {
      known.push_back(ev);
      report.add_accepted();
    } else {
      report.add_rejected(0, "event references unknown stop_id '" + ev.stop_id + "'");
    }
  }
  return known;
}

ShortcutValidation validate_shortcuts(const std::vector<ShortcutEdge>& shortcuts,
                                      const TripTimeMatrix& trip_times,
                                      const StationRegistry& stations) {
  ShortcutValidation out;
  for (const ShortcutEdge& sc : shortcuts) {
    const std::string label = sc.from_stop + "->" + sc.to_stop;
    const Station* from = stations.find(sc.from_stop);
    const Station* to = stations.find(sc.to_stop);
    if (!from || !to) {
      out.report.add_rejected(0, label + ": unknown endpoint station");
      continue;
    }
    if (from->direction != to->direction ||
        from->route_position >= to->route_position) {
      out.report.add_rejected(0, label + ": from_stop must precede to_stop on the route");
      continue;
    }
    const auto& seq = stations.route(from->direction);
    std::vector<std::string> between;
    for (int p = from->route_position + 1; p < to->route_position; ++p) {
      between.push_back(seq[p].stop_id);
    }
    if (between != sc.bypassed) {
      out.report.add_rejected(
          0, label + ": bypassed_stops must be exactly the stations between");
      continue;
    }

    bool ok = true;
    for (int h = 0; h < 24 && ok; ++h) {
      double direct = 0;
      for (int p = from->route_position; p < to->route_position; ++p) {
        direct += trip_times.minutes(seq[p].stop_id, seq[p + 1].stop_id, h);
      }
      if (sc.minutes_by_hour[h] > direct) {
        out.report.add_rejected(
            0, label + ": slower than the direct route at hour " + std::to_string(h));
        ok = false;
      }
    }
    if (ok) {
      out.accepted.push_back(sc);
      out.report.add_accepted();
    }
  }
  return out;
}

}  // namespace semibus
