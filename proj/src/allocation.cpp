#include "semibus/allocation.hpp"

#include <map>

namespace semibus {

const char* to_string(WaitModel m) {
  return m == WaitModel::median ? "median" : "worst_case";
}

double wait_proxy(Minutes trip_b_arrival, Minutes trip_a_departure, WaitModel model) {
  double gap = trip_b_arrival - trip_a_departure;
  if (gap < 0) gap = 0;
  return model == WaitModel::median ? gap / 2.0 : gap;
}

namespace {

std::vector<StationWait> station_proxies(const RouteProposal& trip_a,
                                         const RouteProposal& trip_b,
                                         WaitModel model) {
  std::map<std::string, Minutes> a_departures;
  for (const TimelineEntry& e : trip_a.timeline) a_departures[e.stop_id] = e.departure;

  std::vector<StationWait> proxies;
  for (const TimelineEntry& e : trip_b.timeline) {
    auto it = a_departures.find(e.stop_id);
    if (it == a_departures.end()) continue;  // not shared, no constraint
    double gap = e.arrival - it->second;
    proxies.push_back({e.stop_id, wait_proxy(e.arrival, it->second, model), gap <= 0});
  }
  return proxies;
}

bool violates(const std::vector<StationWait>& proxies, double max_wait) {
  for (const StationWait& w : proxies) {
    if (w.proxy_minutes > max_wait) return true;
  }
  return false;
}

}  // namespace

AllocationResult optimal_second_departure(const RouteProposal& trip_a,
                                          double max_wait,
                                          const AllocationContext& context) {
  if (!context.tables) throw Error("allocation context has no tables");
  if (max_wait < 0) throw Error("max wait must be nonnegative");
  if (context.search_cap_minutes < 1) throw Error("search cap must be at least 1 minute");
  if (trip_a.timeline.empty()) throw Error("trip A has no computed timeline");

  AllocationResult result;
  result.trip_a_start = trip_a.departure_time;
  result.max_wait = max_wait;
  result.model = context.model;

  std::vector<StationWait> last_good;
  int last_delta = 0;
  for (int delta = 1; delta <= context.search_cap_minutes; ++delta) {
    Minutes start = trip_a.departure_time + delta;
    if (start >= kServiceDayEnd) break;  // candidate would leave the service day
    RouteProposal trip_b = run_pipeline(start, *context.tables, context.direction,
                                        context.params, context.total_boardings)
                               .route;
    auto proxies = station_proxies(trip_a, trip_b, context.model);
    if (proxies.empty()) throw Error("trips A and B share no stopped stations");

    if (violates(proxies, max_wait)) {
      result.violated_at = start;
      result.trip_b_start = start - 1;  // 1 minute before the violation
      result.proxies = std::move(last_good);
      result.infeasible = (delta == 1);
      return result;
    }
    last_good = std::move(proxies);
    last_delta = delta;
  }

  result.capped = true;
  result.trip_b_start = trip_a.departure_time + last_delta;
  result.proxies = std::move(last_good);
  return result;
}

}  // namespace semibus
