#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semibus/routing.hpp"

namespace semibus {

enum class WaitModel { median, worst_case };

const char* to_string(WaitModel m);

// Median model: half the gap between the first bus's departure and the
// second bus's arrival. Worst case: the full gap (passenger just missed the
// first bus). Negative gaps clamp to zero and are flagged degenerate.
double wait_proxy(Minutes trip_b_arrival, Minutes trip_a_departure, WaitModel model);

struct StationWait {
  std::string stop_id;
  double proxy_minutes = 0;
  bool degenerate = false;  // gap <= 0
};

struct AllocationContext {
  const RoutingTables* tables = nullptr;
  Direction direction = Direction::outgoing;
  RoutingParams params;
  int total_boardings = 0;  // consumed only when params.pa_min > 0
  WaitModel model = WaitModel::median;
  int search_cap_minutes = 120;
};

struct AllocationResult {
  Minutes trip_a_start = 0;
  Minutes trip_b_start = 0;
  double max_wait = 0;
  WaitModel model = WaitModel::median;
  std::vector<StationWait> proxies;      // at the returned start
  std::optional<Minutes> violated_at;    // first violating start, for audit
  bool infeasible = false;               // violation already at +1 minute
  bool capped = false;                   // search cap reached, no violation
};

// Walks trip-B start times at 1-minute increments from trip A's start + 1,
// routing each candidate semi-dynamically for its own start; the wait
// constraint is checked at every station stopped by both trips. Returns the
// last start before the first violation (1 minute before it), or the cap.
AllocationResult optimal_second_departure(const RouteProposal& trip_a,
                                          double max_wait,
                                          const AllocationContext& context);

}  // namespace semibus
