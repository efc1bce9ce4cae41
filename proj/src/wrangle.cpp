#include "semibus/wrangle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <tuple>

namespace semibus {

std::vector<LinkedVisit> link_events(const std::vector<RawEvent>& departures,
                                     const std::vector<RawEvent>& arrivals,
                                     double threshold_minutes) {
  if (threshold_minutes <= 0) throw Error("linking threshold must be positive");

  std::vector<const RawEvent*> deps;
  deps.reserve(departures.size());
  for (const RawEvent& d : departures) deps.push_back(&d);
  std::sort(deps.begin(), deps.end(),
            [](const RawEvent* a, const RawEvent* b) { return a->timestamp < b->timestamp; });

  std::vector<const RawEvent*> arrs;
  arrs.reserve(arrivals.size());
  for (const RawEvent& a : arrivals) arrs.push_back(&a);
  std::sort(arrs.begin(), arrs.end(),
            [](const RawEvent* a, const RawEvent* b) { return a->timestamp < b->timestamp; });
  std::vector<bool> consumed(arrs.size(), false);

  std::vector<LinkedVisit> visits;
  for (const RawEvent* dep : deps) {
    // Latest prior arrival = smallest positive difference. A zero difference
    // is invalid (cannot arrive and depart at the same time).
    std::optional<size_t> best;
    double best_diff = 0;
    for (size_t i = 0; i < arrs.size(); ++i) {
      if (consumed[i]) continue;
      double diff = dep->timestamp - arrs[i]->timestamp;
      if (diff <= 0) break;  // arrivals sorted; the rest are not prior
      if (!best || diff < best_diff) {
        best = i;
        best_diff = diff;
      }
    }
    if (!best || best_diff >= threshold_minutes) continue;  // sanity check
    consumed[*best] = true;

    LinkedVisit v;
    v.trip_id = dep->trip_id;
    v.stop_id = dep->stop_id;
    v.service_date_text = dep->service_date_text;
    v.direction = dep->direction;
    v.arrival = arrs[*best]->timestamp;
    v.departure = dep->timestamp;
    v.idle_minutes = best_diff;
    visits.push_back(std::move(v));
  }
  return visits;
}

LinkResult build_linked_visits(const std::vector<RawEvent>& events,
                               double threshold_minutes) {
  using GroupKey = std::tuple<std::string, std::string, std::string>;
  std::map<GroupKey, std::pair<std::vector<RawEvent>, std::vector<RawEvent>>> groups;
  for (const RawEvent& ev : events) {
    auto& [deps, arrs] = groups[{ev.service_date_text, ev.trip_id, ev.stop_id}];
    (ev.event_type == EventType::departing ? deps : arrs).push_back(ev);
  }

  LinkResult out;
  for (const auto& [key, pair] : groups) {
    const auto& [deps, arrs] = pair;
    auto linked = link_events(deps, arrs, threshold_minutes);
    size_t paired = linked.size();
    size_t unpaired = deps.size() + arrs.size() - 2 * paired;
    for (size_t i = 0; i < paired; ++i) out.report.add_accepted();
    if (unpaired > 0) {
      out.report.add_rejected(0, std::to_string(unpaired) +
                                     " unpairable event(s) at stop '" +
                                     std::get<2>(key) + "' trip '" +
                                     std::get<1>(key) + "' on " + std::get<0>(key));
    }
    out.visits.insert(out.visits.end(), linked.begin(), linked.end());
  }
  // Deterministic order regardless of input shuffling.
  std::sort(out.visits.begin(), out.visits.end(),
            [](const LinkedVisit& a, const LinkedVisit& b) {
              return std::tie(a.service_date_text, a.trip_id, a.arrival, a.stop_id) <
                     std::tie(b.service_date_text, b.trip_id, b.arrival, b.stop_id);
            });
  return out;
}

LatenessResult compute_lateness(const std::vector<LinkedVisit>& visits,
                                const std::vector<ScheduleEntry>& schedule,
                                double threshold_minutes) {
  if (threshold_minutes <= 0) throw Error("linking threshold must be positive");

  std::map<std::pair<std::string, DayKind>, std::vector<Minutes>> scheduled;
  for (const ScheduleEntry& e : schedule) {
    scheduled[{e.stop_id, e.day_kind}].push_back(e.scheduled_departure);
  }
  for (auto& [key, times] : scheduled) std::sort(times.begin(), times.end());

  // One day's actual departures at a station consume that station's
  // scheduled times one-to-one, nearest first in departure order.
  std::map<std::pair<std::string, std::string>, std::vector<const LinkedVisit*>> by_day_stop;
  for (const LinkedVisit& v : visits) {
    by_day_stop[{v.service_date_text, v.stop_id}].push_back(&v);
  }

  LatenessResult out;
  for (auto& [key, day_visits] : by_day_stop) {
    const auto& [date_text, stop_id] = key;
    auto date = parse_date(date_text);
    DayKind kind = date ? day_kind_of(*date) : DayKind::weekday;
    auto it = scheduled.find({stop_id, kind});
    if (it == scheduled.end() || it->second.empty()) {
      out.report.add_rejected(0, "no schedule entries for stop '" + stop_id +
                                     "' (" + std::string(to_string(kind)) + ")");
      continue;
    }
    const std::vector<Minutes>& times = it->second;
    std::vector<bool> consumed(times.size(), false);

    std::sort(day_visits.begin(), day_visits.end(),
              [](const LinkedVisit* a, const LinkedVisit* b) {
                return a->departure < b->departure;
              });
    for (const LinkedVisit* v : day_visits) {
      std::optional<size_t> best;
      double best_diff = 0;
      for (size_t i = 0; i < times.size(); ++i) {
        if (consumed[i]) continue;
        double diff = std::abs(v->departure - times[i]);
        if (!best || diff < best_diff) {
          best = i;
          best_diff = diff;
        }
      }
      if (!best || best_diff >= threshold_minutes) {
        out.report.add_rejected(0, "departure " + format_clock(v->departure) +
                                       " at stop '" + stop_id +
                                       "' has no scheduled departure within threshold");
        continue;
      }
      consumed[*best] = true;
      LatenessRecord rec;
      rec.stop_id = stop_id;
      rec.service_date_text = date_text;
      rec.scheduled_departure = times[*best];
      rec.actual_departure = v->departure;
      rec.lateness_minutes = v->departure - times[*best];
      out.records.push_back(std::move(rec));
      out.report.add_accepted();
    }
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const LatenessRecord& a, const LatenessRecord& b) {
              return std::tie(a.service_date_text, a.stop_id, a.actual_departure) <
                     std::tie(b.service_date_text, b.stop_id, b.actual_departure);
            });
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error("median of empty set");
  std::sort(values.begin(), values.end());
  size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

IdleTimeTable IdleTimeTable::build(const std::vector<LinkedVisit>& visits,
                                   const StationRegistry& stations) {
  if (visits.empty()) throw Error("no linked visits");

  std::map<std::string, std::array<std::vector<double>, 24>> samples;
  std::vector<double> all_samples;
  for (const LinkedVisit& v : visits) {
    stations.require(v.stop_id);
    samples[v.stop_id][hour_of(v.arrival)].push_back(v.idle_minutes);
    all_samples.push_back(v.idle_minutes);
  }
  double global = median(all_samples);

  IdleTimeTable table;
  for (const Station& s : stations.all()) {
    auto it = samples.find(s.stop_id);
    std::optional<double> station_median;
    if (it != samples.end()) {
      std::vector<double> station_all;
      for (const auto& hour_samples : it->second) {
        station_all.insert(station_all.end(), hour_samples.begin(), hour_samples.end());
      }
      if (!station_all.empty()) station_median = median(station_all);
    }
    auto& row = table.cells_[s.stop_id];
    for (int h = 0; h < 24; ++h) {
      if (it != samples.end() && !it->second[h].empty()) {
        row[h] = {median(it->second[h]), IdleSource::observed};
      } else if (station_median) {
        row[h] = {*station_median, IdleSource::imputed_station};
      } else {
        row[h] = {global, IdleSource::imputed_global};
      }
    }
  }
  return table;
}

IdleTimeTable IdleTimeTable::from_cells(Cells cells) {
  IdleTimeTable t;
  t.cells_ = std::move(cells);
  return t;
}

const IdleCell& IdleTimeTable::at(const std::string& stop_id, int hour) const {
  auto it = cells_.find(stop_id);
  if (it == cells_.end() || hour < 0 || hour > 23) {
    throw Error("idle-time table has no cell for stop '" + stop_id + "' hour " +
                std::to_string(hour));
  }
  return it->second[hour];
}

double IdleTimeTable::minutes(const std::string& stop_id, int hour) const {
  return at(stop_id, hour).median_minutes;
}

TripTimeMatrix TripTimeMatrix::build(const std::vector<LinkedVisit>& visits,
                                     const StationRegistry& stations) {
  // Observations come from same-trip visits at route-adjacent stations.
  using TripKey = std::tuple<std::string, std::string, Direction>;
  std::map<TripKey, std::vector<const LinkedVisit*>> trips;
  for (const LinkedVisit& v : visits) {
    stations.require(v.stop_id);
    trips[{v.service_date_text, v.trip_id, v.direction}].push_back(&v);
  }

  std::map<PairKey, std::array<std::vector<double>, 24>> samples;
  for (auto& [key, trip_visits] : trips) {
    std::sort(trip_visits.begin(), trip_visits.end(),
              [&](const LinkedVisit* a, const LinkedVisit* b) {
                return stations.require(a->stop_id).route_position <
                       stations.require(b->stop_id).route_position;
              });
    for (size_t i = 1; i < trip_visits.size(); ++i) {
      const Station& prev = stations.require(trip_visits[i - 1]->stop_id);
      const Station& next = stations.require(trip_visits[i]->stop_id);
      if (next.route_position != prev.route_position + 1) continue;
      double dt = trip_visits[i]->arrival - trip_visits[i - 1]->departure;
      if (dt <= 0) continue;  // matrix values must be positive
      samples[{prev.stop_id, next.stop_id}][hour_of(trip_visits[i]->arrival)].push_back(dt);
    }
  }

  // Route-ordered adjacent pairs, both directions.
  struct PairInfo {
    PairKey key;
    int index;  // position along its direction
    Direction direction;
  };
  std::vector<PairInfo> pairs;
  for (Direction d : {Direction::incoming, Direction::outgoing}) {
    const auto& seq = stations.route(d);
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
      pairs.push_back({{seq[i].stop_id, seq[i + 1].stop_id}, static_cast<int>(i), d});
    }
  }

  std::map<PairKey, double> overall;  // pair -> all-hours median
  for (const PairInfo& p : pairs) {
    auto it = samples.find(p.key);
    if (it == samples.end()) continue;
    std::vector<double> all;
    for (const auto& hour_samples : it->second) {
      all.insert(all.end(), hour_samples.begin(), hour_samples.end());
    }
    if (!all.empty()) overall[p.key] = median(all);
  }

  TripTimeMatrix matrix;
  for (const PairInfo& p : pairs) {
    auto& row = matrix.cells_[p.key];
    auto sample_it = samples.find(p.key);
    auto overall_it = overall.find(p.key);
    if (overall_it != overall.end()) {
      for (int h = 0; h < 24; ++h) {
        if (sample_it != samples.end() && !sample_it->second[h].empty()) {
          row[h] = {median(sample_it->second[h]), TripSource::observed};
        } else {
          row[h] = {overall_it->second, TripSource::imputed_hour};
        }
      }
      continue;
    }
    // No data at all: borrow the overall median of the nearest pair with
    // data in the same direction ("similar distance"; adjacent pairs all
    // have gap 1, so nearest by route order, lower index on ties).
    std::optional<PairInfo> donor;
    for (const PairInfo& q : pairs) {
      if (q.direction != p.direction || !overall.count(q.key)) continue;
      if (!donor || std::abs(q.index - p.index) < std::abs(donor->index - p.index)) {
        donor = q;
      }
    }
    if (!donor) {
      throw Error("no trip-time data for station pair " + p.key.first + "->" +
                  p.key.second + " and no similar pair to impute from");
    }
    for (int h = 0; h < 24; ++h) {
      row[h] = {overall.at(donor->key), TripSource::imputed_pair};
    }
  }
  return matrix;
}

TripTimeMatrix TripTimeMatrix::from_cells(Cells cells) {
  TripTimeMatrix m;
  m.cells_ = std::move(cells);
  return m;
}

const TripCell& TripTimeMatrix::at(const std::string& from, const std::string& to,
                                   int hour) const {
  auto it = cells_.find({from, to});
  if (it == cells_.end() || hour < 0 || hour > 23) {
    throw Error("trip-time matrix has no cell for pair " + from + "->" + to +
                " hour " + std::to_string(hour));
  }
  return it->second[hour];
}

double TripTimeMatrix::minutes(const std::string& from, const std::string& to,
                               int hour) const {
  return at(from, to, hour).median_minutes;
}

const char* to_string(IdleSource s) {
  switch (s) {
    case IdleSource::observed: return "observed";
    case IdleSource::imputed_station: return "imputed_station";
    case IdleSource::imputed_global: return "imputed_global";
  }
  return "observed";
}

const char* to_string(TripSource s) {
  switch (s) {
    case TripSource::observed: return "observed";
    case TripSource::imputed_hour: return "imputed_hour";
    case TripSource::imputed_pair: return "imputed_pair";
  }
  return "observed";
}

}  // namespace semibus
