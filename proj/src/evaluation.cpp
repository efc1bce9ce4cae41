#include "semibus/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace semibus {

namespace {

// Fraction of the scenario boarding at the route's stopped stations, in
// route order; the optional seat cap truncates once the bus is full.
double pickup_fraction(const RouteProposal& route, const PassengerScenario& scenario,
                       std::optional<int> capacity) {
  if (scenario.total_boardings == 0) return 0.0;
  int picked = 0;
  int remaining = capacity.value_or(scenario.total_boardings);
  for (const auto& [stop_id, action] : route.decisions) {
    if (action != StopAction::stop) continue;
    auto it = scenario.assignment.find(stop_id);
    if (it == scenario.assignment.end()) continue;
    int take = std::min(it->second, remaining);
    picked += take;
    remaining -= take;
    if (remaining == 0) break;
  }
  return static_cast<double>(picked) / scenario.total_boardings;
}

}  // namespace

DryRunReport dry_run(Minutes departure_time, const RouteProposal& static_route,
                     const RoutingParams& dynamic_params,
                     const RoutingTables& tables, Direction direction,
                     int total_boardings, int n_simulations, std::uint64_t seed,
                     std::optional<int> capacity) {
  if (n_simulations < 1) throw Error("n_simulations must be at least 1");

  DryRunReport report;
  report.departure_time = departure_time;
  report.n_simulations = n_simulations;
  report.seed = seed;
  report.total_boardings = total_boardings;
  report.capacity = capacity;
  report.static_route = static_route;
  report.semi_route =
      run_pipeline(departure_time, tables, direction, dynamic_params, total_boardings)
          .route;

  auto weights = station_weights_at(*tables.probability, *tables.stations, direction,
                                    hour_of(departure_time));

  for (int i = 0; i < n_simulations; ++i) {
    // One scenario per simulation, scored by both systems (shared draw).
    auto rng = substream(seed, kDryRunDomain, static_cast<std::uint64_t>(i));
    PassengerScenario scenario =
        generate_scenario(departure_time, total_boardings, weights, rng);
    report.static_system.per_sim_fractions.push_back(
        pickup_fraction(report.static_route, scenario, capacity));
    report.semi_dynamic.per_sim_fractions.push_back(
        pickup_fraction(report.semi_route, scenario, capacity));
  }

  auto mean = [](const std::vector<double>& xs) {
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  };
  report.static_system.pickup_fraction_mean = mean(report.static_system.per_sim_fractions);
  report.static_system.num_stops = report.static_route.num_intermediate_stops();
  report.semi_dynamic.pickup_fraction_mean = mean(report.semi_dynamic.per_sim_fractions);
  report.semi_dynamic.num_stops = report.semi_route.num_intermediate_stops();
  return report;
}

const SweepPoint& SweepReport::at(double t_p, double pa_min) const {
  for (const SweepPoint& p : grid) {
    if (p.t_p == t_p && p.pa_min == pa_min) return p;
  }
  throw Error("sweep grid has no such point");
}

SweepReport parameter_sweep(Minutes departure_time, const RoutingTables& tables,
                            Direction direction, std::vector<double> t_p_values,
                            std::vector<double> pa_min_values, int total_boardings,
                            int n_simulations, std::uint64_t seed) {
  if (t_p_values.empty() || pa_min_values.empty()) {
    throw Error("sweep parameter lists must be nonempty");
  }

  SweepReport report;
  report.departure_time = departure_time;
  report.n_simulations = n_simulations;
  report.seed = seed;
  report.t_p_values = std::move(t_p_values);
  report.pa_min_values = std::move(pa_min_values);

  for (double t_p : report.t_p_values) {
    for (double pa_min : report.pa_min_values) {
      RoutingParams params;
      params.t_p = t_p;
      params.pa_min = pa_min;
      params.n_simulations = n_simulations;
      params.seed = seed;
      RouteProposal route =
          run_pipeline(departure_time, tables, direction, params, total_boardings).route;
      report.grid.push_back(
          {t_p, pa_min, route.num_intermediate_stops(), route.total_minutes});
    }
  }
  return report;
}

}  // namespace semibus
