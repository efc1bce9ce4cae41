#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semibus/model.hpp"
#include "semibus/passenger.hpp"
#include "semibus/probability.hpp"
#include "semibus/wrangle.hpp"

namespace semibus {

enum class StopAction { stop, skip };
enum class SegmentKind { direct, shortcut };

const char* to_string(StopAction a);
const char* to_string(SegmentKind k);

struct RoutingParams {
  double t_p = 25.0;        // skip percentile
  double pa_min = 0.0;      // minimum pickup aggregation, 0 disables revision
  int n_simulations = 100;  // scenario count behind pa_min revision
  std::uint64_t seed = 0;
};

struct RouteSegment {
  std::string from_stop;
  std::string to_stop;
  SegmentKind kind = SegmentKind::direct;
  double minutes = 0;
};

struct TimelineEntry {
  std::string stop_id;
  Minutes arrival = 0;
  Minutes departure = 0;
};

struct RouteProposal {
  Minutes departure_time = 0;
  Direction direction = Direction::outgoing;
  RoutingParams params;
  std::vector<std::pair<std::string, StopAction>> decisions;  // full route order
  std::vector<RouteSegment> segments;   // connects consecutive stopped stations
  std::vector<TimelineEntry> timeline;  // stopped stations only
  double total_minutes = 0;             // terminus arrival - origin departure

  bool stops_at(const std::string& stop_id) const;
  // Stopped stations excluding the mandatory origin and terminus.
  int num_intermediate_stops() const;
  std::vector<std::string> stopped_stations() const;
};

// Immutable inputs the engine routes against. Shortcuts must already be
// validated (accepted set).
struct RoutingTables {
  const StationRegistry* stations = nullptr;
  const IdleTimeTable* idle = nullptr;
  const TripTimeMatrix* trip = nullptr;
  const StopProbabilityTable* probability = nullptr;
  std::vector<ShortcutEdge> shortcuts;
};

// Per-hour skip threshold over the route's stations. Hours with no data
// cells fall back to pooling the fallback-resolved probabilities instead of
// erroring mid-trip.
double threshold_at_hour(const RoutingTables& tables, Direction direction,
                         int hour, double t_p);

// Walks the route with a simulated clock: at each station the stopping
// probability at the clock's hour is compared against that hour's threshold
// (stop on ties); stopped stations accrue trip + idle time, skipped ones
// trip time only. Maximal skip runs are then replaced by a matching
// validated shortcut when one is at least as fast at the lookup hour, and
// the timeline is assembled.
RouteProposal propose_route(Minutes departure_time, double t_p,
                            const RoutingTables& tables, Direction direction);

// Adds skipped stations in descending pickup fraction (ties: earlier route
// position) until the stopped set's summed fraction reaches pa_min. Never
// removes stops. Throws when pa_min exceeds the achievable fraction.
RouteProposal revise_for_pickup(const RouteProposal& route,
                                const PickupAggregate& aggregate, double pa_min,
                                const RoutingTables& tables);

// Rebuilds segments and the timeline from the fixed decisions: arrivals
// advance by segment minutes, departures add the idle minutes at the arrival
// hour, every lookup at the simulated clock hour. Origin departs at the
// proposal's departure time; the terminus arrival closes the trip.
void compute_timeline(RouteProposal& route, const RoutingTables& tables);

// All-stations comparator route (the existing static routing).
RouteProposal full_stop_route(Minutes departure_time, const RoutingTables& tables,
                              Direction direction);

struct PipelineOutput {
  RouteProposal route;
  std::optional<PickupAggregate> aggregate;  // present when pa_min > 0
};

// Steps 1-5 for one departure: propose by t_p, then, when pa_min > 0,
// simulate boardings (aggregation domain of params.seed) and revise.
PipelineOutput run_pipeline(Minutes departure_time, const RoutingTables& tables,
                            Direction direction, const RoutingParams& params,
                            int total_boardings);

}  // namespace semibus
