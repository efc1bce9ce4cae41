#include "semibus/routing.hpp"

#include <algorithm>
#include <cmath>

namespace semibus {

const char* to_string(StopAction a) {
  return a == StopAction::stop ? "stop" : "skip";
}

const char* to_string(SegmentKind k) {
  return k == SegmentKind::direct ? "direct" : "shortcut";
}

bool RouteProposal::stops_at(const std::string& stop_id) const {
  for (const auto& [id, action] : decisions) {
    if (id == stop_id) return action == StopAction::stop;
  }
  return false;
}

int RouteProposal::num_intermediate_stops() const {
  int n = 0;
  for (size_t i = 1; i + 1 < decisions.size(); ++i) {
    if (decisions[i].second == StopAction::stop) ++n;
  }
  return n;
}

std::vector<std::string> RouteProposal::stopped_stations() const {
  std::vector<std::string> out;
  for (const auto& [id, action] : decisions) {
    if (action == StopAction::stop) out.push_back(id);
  }
  return out;
}

namespace {

void check_tables(const RoutingTables& tables) {
  if (!tables.stations || !tables.idle || !tables.trip || !tables.probability) {
    throw Error("routing tables are incomplete");
  }
}

const ShortcutEdge* find_shortcut(const RoutingTables& tables,
                                  const std::string& from, const std::string& to) {
  for (const ShortcutEdge& sc : tables.shortcuts) {
    if (sc.from_stop == from && sc.to_stop == to) return &sc;
  }
  return nullptr;
}

}  // namespace

double threshold_at_hour(const RoutingTables& tables, Direction direction,
                         int hour, double t_p) {
  check_tables(tables);
  std::vector<std::string> pool;
  for (const Station& s : tables.stations->route(direction)) pool.push_back(s.stop_id);
  try {
    return threshold_for_hour(*tables.probability, hour, t_p, pool).t;
  } catch (const Error&) {
    // Hour without any data cell: percentile over the fallback-resolved
    // probabilities the lookups themselves would use.
    std::vector<double> probs;
    for (const std::string& stop_id : pool) {
      probs.push_back(tables.probability->effective(stop_id, hour));
    }
    return percentile_linear(std::move(probs), t_p);
  }
}

void compute_timeline(RouteProposal& route, const RoutingTables& tables) {
  check_tables(tables);
  const auto& seq = tables.stations->route(route.direction);
  if (route.decisions.size() != seq.size()) {
    throw Error("route decisions do not cover the full route");
  }

  route.segments.clear();
  route.timeline.clear();

  Minutes clock = route.departure_time;
  route.timeline.push_back({seq.front().stop_id, clock, clock});
  std::string prev_stop = seq.front().stop_id;
  std::vector<std::string> run;  // skipped stations since the last stop

  for (size_t i = 1; i < seq.size(); ++i) {
    const std::string& stop_id = seq[i].stop_id;
    if (route.decisions[i].second == StopAction::skip) {
      run.push_back(stop_id);
      continue;
    }

    // Direct chain through the skipped run, hour re-resolved per hop.
    Minutes t = clock;
    std::string hop_from = prev_stop;
    for (const std::string& skipped : run) {
      t += tables.trip->minutes(hop_from, skipped, hour_of(t));
      hop_from = skipped;
    }
    t += tables.trip->minutes(hop_from, stop_id, hour_of(t));
    double direct_minutes = t - clock;

    SegmentKind kind = SegmentKind::direct;
    double minutes = direct_minutes;
    if (!run.empty()) {
      const ShortcutEdge* sc = find_shortcut(tables, prev_stop, stop_id);
      if (sc) {
        double sc_minutes = sc->minutes_by_hour[hour_of(clock)];
        if (sc_minutes <= direct_minutes) {
          kind = SegmentKind::shortcut;
          minutes = sc_minutes;
        }
      }
    }

    Minutes arrival = clock + minutes;
    bool is_terminus = (i + 1 == seq.size());
    double idle = is_terminus ? 0.0 : tables.idle->minutes(stop_id, hour_of(arrival));
    route.segments.push_back({prev_stop, stop_id, kind, minutes});
    route.timeline.push_back({stop_id, arrival, arrival + idle});
    clock = arrival + idle;
    prev_stop = stop_id;
    run.clear();
  }
  route.total_minutes = route.timeline.back().arrival - route.departure_time;
}

RouteProposal propose_route(Minutes departure_time, double t_p,
                            const RoutingTables& tables, Direction direction) {
  check_tables(tables);
  if (t_p < 0 || t_p > 100) throw Error("t_p must be within [0, 100]");
  if (departure_time < 0 || departure_time >= kServiceDayEnd) {
    throw Error("departure time outside the service day");
  }
  const auto& seq = tables.stations->route(direction);
  if (seq.empty()) throw Error("no stations for requested direction");

  RouteProposal route;
  route.departure_time = departure_time;
  route.direction = direction;
  route.params.t_p = t_p;

  // Decision walk on the direct-segment clock; origin and terminus are
  // mandatory stops. Shortcut substitution happens in timeline assembly.
  route.decisions.emplace_back(seq.front().stop_id, StopAction::stop);
  Minutes clock = departure_time;
  for (size_t i = 1; i < seq.size(); ++i) {
    clock += tables.trip->minutes(seq[i - 1].stop_id, seq[i].stop_id, hour_of(clock));
    if (i + 1 == seq.size()) {
      route.decisions.emplace_back(seq[i].stop_id, StopAction::stop);
      break;
    }
    int h = hour_of(clock);
    double threshold = threshold_at_hour(tables, direction, h, t_p);
    double p = tables.probability->effective(seq[i].stop_id, h);
    if (p >= threshold) {  // k >= p stops, ties stop
      route.decisions.emplace_back(seq[i].stop_id, StopAction::stop);
      clock += tables.idle->minutes(seq[i].stop_id, h);
    } else {
      route.decisions.emplace_back(seq[i].stop_id, StopAction::skip);
    }
  }

  compute_timeline(route, tables);
  return route;
}

RouteProposal revise_for_pickup(const RouteProposal& route,
                                const PickupAggregate& aggregate, double pa_min,
                                const RoutingTables& tables) {
  check_tables(tables);
  if (pa_min < 0 || pa_min > 1) throw Error("pa_min must be within [0, 1]");

  auto fraction_of = [&](const std::string& stop_id) {
    auto it = aggregate.mean_fraction.find(stop_id);
    if (it == aggregate.mean_fraction.end()) {
      throw Error("pickup aggregate does not cover stop '" + stop_id + "'");
    }
    return it->second;
  };

  RouteProposal revised = route;
  revised.params.pa_min = pa_min;

  double covered = 0;
  for (const auto& [stop_id, action] : revised.decisions) {
    if (action == StopAction::stop) covered += fraction_of(stop_id);
  }

  // Candidates in descending fraction, earlier route position on ties.
  std::vector<size_t> candidates;
  for (size_t i = 0; i < revised.decisions.size(); ++i) {
    if (revised.decisions[i].second == StopAction::skip &&
        fraction_of(revised.decisions[i].first) > 0) {
      candidates.push_back(i);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](size_t a, size_t b) {
    return fraction_of(revised.decisions[a].first) >
           fraction_of(revised.decisions[b].first);
  });

  constexpr double kEps = 1e-9;
  for (size_t idx : candidates) {
    if (covered >= pa_min - kEps) break;
    revised.decisions[idx].second = StopAction::stop;
    covered += fraction_of(revised.decisions[idx].first);
  }
  if (covered < pa_min - kEps) {
    throw Error("pa_min exceeds the achievable pickup fraction");
  }

  compute_timeline(revised, tables);
  return revised;
}

RouteProposal full_stop_route(Minutes departure_time, const RoutingTables& tables,
                              Direction direction) {
  check_tables(tables);
  const auto& seq = tables.stations->route(direction);
  if (seq.empty()) throw Error("no stations for requested direction");

  RouteProposal route;
  route.departure_time = departure_time;
  route.direction = direction;
  route.params.t_p = 0;
  for (const Station& s : seq) {
    route.decisions.emplace_back(s.stop_id, StopAction::stop);
  }
  compute_timeline(route, tables);
  return route;
}

PipelineOutput run_pipeline(Minutes departure_time, const RoutingTables& tables,
                            Direction direction, const RoutingParams& params,
                            int total_boardings) {
  PipelineOutput out{propose_route(departure_time, params.t_p, tables, direction), {}};
  out.route.params = params;
  if (params.pa_min > 0) {
    auto weights = station_weights_at(*tables.probability, *tables.stations,
                                      direction, hour_of(departure_time));
    out.aggregate = aggregate_pickup(departure_time, total_boardings, weights,
                                     params.n_simulations, params.seed);
    out.route = revise_for_pickup(out.route, *out.aggregate, params.pa_min, tables);
    out.route.params = params;
  }
  return out;
}

}  // namespace semibus
