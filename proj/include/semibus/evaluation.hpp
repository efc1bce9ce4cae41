#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "semibus/routing.hpp"

namespace semibus {

inline constexpr int kBusSeatingCapacity = 36;

struct SystemOutcome {
  double pickup_fraction_mean = 0;
  int num_stops = 0;  // intermediate stops only
  std::vector<double> per_sim_fractions;
};

struct DryRunReport {
  Minutes departure_time = 0;
  int n_simulations = 0;
  std::uint64_t seed = 0;
  int total_boardings = 0;
  std::optional<int> capacity;  // seat cap when enabled
  SystemOutcome static_system;
  SystemOutcome semi_dynamic;
  RouteProposal static_route;
  RouteProposal semi_route;
};

// Scores the static comparator and the semi-dynamic proposal against the
// same generated passenger scenario in each simulation (shared draw per
// iteration). Pickup = fraction of the scenario boarding at stopped
// stations; the optional capacity cap truncates boarding in route order.
DryRunReport dry_run(Minutes departure_time, const RouteProposal& static_route,
                     const RoutingParams& dynamic_params,
                     const RoutingTables& tables, Direction direction,
                     int total_boardings, int n_simulations, std::uint64_t seed,
                     std::optional<int> capacity = std::nullopt);

struct SweepPoint {
  double t_p = 0;
  double pa_min = 0;
  int num_stops = 0;
  double total_minutes = 0;
};

struct SweepReport {
  Minutes departure_time = 0;
  int n_simulations = 0;
  std::uint64_t seed = 0;
  std::vector<double> t_p_values;
  std::vector<double> pa_min_values;
  std::vector<SweepPoint> grid;  // t_p-major, complete

  const SweepPoint& at(double t_p, double pa_min) const;
};

// Full pipeline at every (t_p, pa_min) grid point, deterministic under seed.
SweepReport parameter_sweep(Minutes departure_time, const RoutingTables& tables,
                            Direction direction, std::vector<double> t_p_values,
                            std::vector<double> pa_min_values, int total_boardings,
                            int n_simulations, std::uint64_t seed);

}  // namespace semibus
