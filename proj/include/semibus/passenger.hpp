#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "semibus/model.hpp"
#include "semibus/probability.hpp"

namespace semibus {

// Reproducibility contract: every randomized result derives from
// std::mt19937_64 (bit-specified by the standard) seeded through splitmix64,
// with uniforms taken as 53-bit-mantissa doubles. Substreams are independent
// per (seed, domain, index) so simulations can fan out and merge.
std::uint64_t splitmix64_next(std::uint64_t& state);
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t domain, std::uint64_t index);
double next_unit(std::mt19937_64& rng);  // uniform in [0, 1)

// Substream domains.
inline constexpr std::uint64_t kAggregationDomain = 0;
inline constexpr std::uint64_t kDryRunDomain = 1;

struct StationWeight {
  std::string stop_id;
  double probability = 0;  // P_s at the proposed departure hour
  double density = 0;      // population density tie-break weight
};

struct PassengerScenario {
  Minutes departure_time = 0;
  int total_boardings = 0;
  std::map<std::string, int> assignment;  // stop_id -> passengers
};

// Assigns each passenger independently: a P_s-weighted draw, re-drawn within
// the exactly-tied probability group by population density when the drawn
// station's P_s value is shared. Throws when all P_s are zero.
PassengerScenario generate_scenario(Minutes departure_time, int total,
                                    const std::vector<StationWeight>& stations,
                                    std::mt19937_64& rng);

struct PickupAggregate {
  Minutes departure_time = 0;
  int n_simulations = 0;
  std::uint64_t rng_seed = 0;
  int total_boardings = 0;
  std::map<std::string, double> mean_fraction;  // sums to 1 when total > 0
};

// Runs generate_scenario over n independent substreams of (seed,
// aggregation domain) and averages per-station fractions.
PickupAggregate aggregate_pickup(Minutes departure_time, int total,
                                 const std::vector<StationWeight>& stations,
                                 int n_simulations, std::uint64_t seed);

// Nearest scheduled departure's average, rounded to the nearest integer.
// Equidistant queries take the earlier departure.
int infer_total_boardings(Minutes departure_time, const BoardingAverages& averages);

// Sampling weights for one direction's route at an hour: fallback-resolved
// stopping probabilities plus densities, in route order.
std::vector<StationWeight> station_weights_at(const StopProbabilityTable& table,
                                              const StationRegistry& stations,
                                              Direction direction, int hour);

}  // namespace semibus
