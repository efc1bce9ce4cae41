#pragma once

#include <array>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "semibus/probability.hpp"
#include "semibus/wrangle.hpp"

namespace semibus::testing {

// Linear outgoing route S1..Sn, origin first, terminus last.
inline StationRegistry make_route(int n, std::vector<double> densities = {}) {
  std::vector<Station> stations;
  for (int i = 0; i < n; ++i) {
    Station s;
    s.stop_id = "S" + std::to_string(i + 1);
    s.name = "Station " + std::to_string(i + 1);
    s.route_position = i;
    s.population_density =
        i < static_cast<int>(densities.size()) ? densities[i] : 1000.0;
    s.is_origin = (i == 0);
    s.is_terminus = (i == n - 1);
    s.direction = Direction::outgoing;
    stations.push_back(std::move(s));
  }
  return StationRegistry(std::move(stations));
}

// Idle table with one value per station, constant across hours.
inline IdleTimeTable make_idle(const StationRegistry& registry,
                               const std::map<std::string, double>& minutes) {
  IdleTimeTable::Cells cells;
  for (const Station& s : registry.all()) {
    auto it = minutes.find(s.stop_id);
    double v = it != minutes.end() ? it->second : 1.0;
    for (int h = 0; h < 24; ++h) cells[s.stop_id][h] = {v, IdleSource::observed};
  }
  return IdleTimeTable::from_cells(std::move(cells));
}

// Trip matrix with one value per adjacent pair, constant across hours.
inline TripTimeMatrix make_trip(const StationRegistry& registry,
                                const std::vector<double>& segment_minutes) {
  TripTimeMatrix::Cells cells;
  const auto& seq = registry.route(Direction::outgoing);
  for (size_t i = 0; i + 1 < seq.size(); ++i) {
    auto& row = cells[{seq[i].stop_id, seq[i + 1].stop_id}];
    for (int h = 0; h < 24; ++h) row[h] = {segment_minutes[i], TripSource::observed};
  }
  return TripTimeMatrix::from_cells(std::move(cells));
}

// Probability table from per-station (stopped, passed) counts, constant
// across hours.
inline StopProbabilityTable make_prob(
    const StationRegistry& registry,
    const std::map<std::string, std::pair<int, int>>& counts) {
  StopProbabilityTable::Cells cells;
  for (const Station& s : registry.all()) {
    auto it = counts.find(s.stop_id);
    for (int h = 0; h < 24; ++h) {
      cells[s.stop_id][h] =
          it != counts.end() ? ProbCell{it->second.first, it->second.second}
                             : ProbCell{};
    }
  }
  return StopProbabilityTable::from_cells(std::move(cells));
}

inline RawEvent make_event(const std::string& date, const std::string& clock,
                           EventType type, const std::string& stop,
                           const std::string& trip,
                           Direction dir = Direction::outgoing) {
  RawEvent ev;
  ev.service_date_text = date;
  ev.service_date = *parse_date(date);
  ev.timestamp_text = date + "T" + clock;
  ev.timestamp = *parse_timestamp(ev.timestamp_text, ev.service_date);
  ev.direction = dir;
  ev.event_type = type;
  ev.stop_id = stop;
  ev.trip_id = trip;
  return ev;
}

inline LinkedVisit make_visit(const std::string& trip, const std::string& stop,
                              const std::string& date, double arrival,
                              double departure,
                              Direction dir = Direction::outgoing) {
  LinkedVisit v;
  v.trip_id = trip;
  v.stop_id = stop;
  v.service_date_text = date;
  v.direction = dir;
  v.arrival = arrival;
  v.departure = departure;
  v.idle_minutes = departure - arrival;
  return v;
}

}  // namespace semibus::testing
