#include "semibus/probability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace semibus {

StopProbabilityTable StopProbabilityTable::build(const std::vector<LinkedVisit>& visits,
                                                 const StationRegistry& stations) {
  StopProbabilityTable table;
  for (const Station& s : stations.all()) table.cells_[s.stop_id];  // all no-data

  using TripKey = std::tuple<std::string, std::string, Direction>;
  std::map<TripKey, std::vector<LinkedVisit>> trips;
  for (const LinkedVisit& v : visits) {
    stations.require(v.stop_id);
    trips[{v.service_date_text, v.trip_id, v.direction}].push_back(v);
  }

  for (const auto& [key, trip_visits] : trips) {
    Direction direction = std::get<2>(key);
    const auto& seq = stations.route(direction);

    int first = static_cast<int>(seq.size());
    int last = -1;
    std::map<std::string, Minutes> visited;  // stop -> arrival
    for (const LinkedVisit& v : trip_visits) {
      int pos = stations.require(v.stop_id).route_position;
      first = std::min(first, pos);
      last = std::max(last, pos);
      visited[v.stop_id] = v.arrival;
    }

    // The trip passes every station between its first and last visited
    // positions; each pass is a stop or a skip.
    for (int pos = first; pos <= last; ++pos) {
      const std::string& stop_id = seq[pos].stop_id;
      auto& row = table.cells_[stop_id];
      auto it = visited.find(stop_id);
      if (it != visited.end()) {
        ProbCell& cell = row[hour_of(it->second)];
        ++cell.stopped;
        ++cell.passed;
      } else {
        Minutes t = skipped_station_time(trip_visits, stop_id, stations);
        ++row[hour_of(t)].passed;
      }
    }
  }
  return table;
}

StopProbabilityTable StopProbabilityTable::from_cells(Cells cells) {
  StopProbabilityTable t;
  t.cells_ = std::move(cells);
  return t;
}

const ProbCell& StopProbabilityTable::cell(const std::string& stop_id, int hour) const {
  auto it = cells_.find(stop_id);
  if (it == cells_.end() || hour < 0 || hour > 23) {
    throw Error("probability table has no cell for stop '" + stop_id + "' hour " +
                std::to_string(hour));
  }
  return it->second[hour];
}

double StopProbabilityTable::effective(const std::string& stop_id, int hour) const {
  const ProbCell& c = cell(stop_id, hour);
  if (c.has_data()) return c.probability();
  // Station's all-hours probability, then always-stop.
  const auto& row = cells_.at(stop_id);
  int stopped = 0;
  int passed = 0;
  for (const ProbCell& hc : row) {
    stopped += hc.stopped;
    passed += hc.passed;
  }
  if (passed > 0) return static_cast<double>(stopped) / passed;
  return 1.0;
}

Minutes skipped_station_time(const std::vector<LinkedVisit>& trip_visits,
                             const std::string& stop_id,
                             const StationRegistry& stations) {
  if (trip_visits.empty()) throw Error("trip has no stopped stations");
  int skip_pos = stations.require(stop_id).route_position;

  bool have_preceding = false;
  Minutes preceding_max = 0;
  bool have_succeeding = false;
  Minutes succeeding_min = 0;
  for (const LinkedVisit& v : trip_visits) {
    int pos = stations.require(v.stop_id).route_position;
    if (pos == skip_pos) {
      throw Error("stop '" + stop_id + "' was visited by the trip, not skipped");
    }
    if (pos < skip_pos) {
      if (!have_preceding || v.arrival > preceding_max) preceding_max = v.arrival;
      have_preceding = true;
    } else {
      if (!have_succeeding || v.arrival < succeeding_min) succeeding_min = v.arrival;
      have_succeeding = true;
    }
  }
  if (have_preceding) return preceding_max;
  if (have_succeeding) return succeeding_min;
  throw Error("trip has no stopped stations");
}

double percentile_linear(std::vector<double> values, double pct) {
  if (values.empty()) throw Error("percentile of empty set");
  if (pct < 0 || pct > 100) throw Error("percentile must be within [0, 100]");
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values[0];
  double rank = pct / 100.0 * static_cast<double>(values.size() - 1);
  size_t lo = static_cast<size_t>(std::floor(rank));
  size_t hi = static_cast<size_t>(std::ceil(rank));
  double frac = rank - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

SkipThreshold threshold_for_hour(const StopProbabilityTable& table, int hour,
                                 double t_p, const std::vector<std::string>& pool) {
  if (hour < 0 || hour > 23) throw Error("hour must be within [0, 23]");
  std::vector<double> probs;
  for (const auto& [stop_id, row] : table.cells()) {
    if (!pool.empty() &&
        std::find(pool.begin(), pool.end(), stop_id) == pool.end()) {
      continue;
    }
    if (row[hour].has_data()) probs.push_back(row[hour].probability());
  }
  if (probs.empty()) {
    throw Error("no probability data for hour " + std::to_string(hour));
  }
  return SkipThreshold{hour, percentile_linear(std::move(probs), t_p), t_p};
}

}  // namespace semibus
