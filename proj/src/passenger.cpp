#include "semibus/passenger.hpp"

#include <algorithm>
#include <cmath>

namespace semibus {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
  std::uint64_t state = seed;
  std::uint64_t a = splitmix64_next(state);
  state ^= domain * 0xD1B54A32D192ED03ull;
  std::uint64_t b = splitmix64_next(state);
  state ^= index * 0x8CB92BA72F3D8DD7ull;
  std::uint64_t c = splitmix64_next(state);
  return std::mt19937_64{a ^ b ^ c};
}

double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

// Index into `weights` by cumulative share of `u * total`.
size_t weighted_pick(const std::vector<double>& weights, double total, double u) {
  double r = u * total;
  double acc = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (r < acc && weights[i] > 0) return i;
  }
  for (size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0) return i;  // r landed on the accumulated total
  }
  return 0;
}

}  // namespace

PassengerScenario generate_scenario(Minutes departure_time, int total,
                                    const std::vector<StationWeight>& stations,
                                    std::mt19937_64& rng) {
  if (total < 0) throw Error("total boardings must be nonnegative");
  if (stations.empty()) throw Error("no stations to assign passengers to");

  std::vector<double> probs;
  double prob_sum = 0;
  for (const StationWeight& s : stations) {
    if (s.probability < 0) throw Error("negative stopping probability");
    probs.push_back(s.probability);
    prob_sum += s.probability;
  }
  if (prob_sum <= 0) throw Error("degenerate probability vector (all P_s are zero)");

  // Stations sharing the drawn station's exact P_s value form its tie group.
  std::vector<std::vector<size_t>> tie_group(stations.size());
  for (size_t i = 0; i < stations.size(); ++i) {
    for (size_t j = 0; j < stations.size(); ++j) {
      if (probs[j] == probs[i]) tie_group[i].push_back(j);
    }
  }

  PassengerScenario scenario;
  scenario.departure_time = departure_time;
  scenario.total_boardings = total;
  for (const StationWeight& s : stations) scenario.assignment[s.stop_id] = 0;

  for (int p = 0; p < total; ++p) {
    size_t drawn = weighted_pick(probs, prob_sum, next_unit(rng));
    const auto& group = tie_group[drawn];
    if (group.size() >= 2) {
      // Tiebreak: re-assign within the tied group by population density.
      std::vector<double> dens;
      double dens_sum = 0;
      for (size_t j : group) {
        dens.push_back(stations[j].density);
        dens_sum += stations[j].density;
      }
      if (dens_sum > 0) {
        drawn = group[weighted_pick(dens, dens_sum, next_unit(rng))];
      } else {
        std::vector<double> uniform(group.size(), 1.0);
        drawn = group[weighted_pick(uniform, static_cast<double>(group.size()),
                                    next_unit(rng))];
      }
    }
    ++scenario.assignment[stations[drawn].stop_id];
  }
  return scenario;
}

PickupAggregate aggregate_pickup(Minutes departure_time, int total,
                                 const std::vector<StationWeight>& stations,
                                 int n_simulations, std::uint64_t seed) {
  if (n_simulations < 1) throw Error("n_simulations must be at least 1");

  PickupAggregate agg;
  agg.departure_time = departure_time;
  agg.n_simulations = n_simulations;
  agg.rng_seed = seed;
  agg.total_boardings = total;
  for (const StationWeight& s : stations) agg.mean_fraction[s.stop_id] = 0;

  for (int i = 0; i < n_simulations; ++i) {
    auto rng = substream(seed, kAggregationDomain, static_cast<std::uint64_t>(i));
    PassengerScenario scenario = generate_scenario(departure_time, total, stations, rng);
    if (total == 0) continue;
    for (const auto& [stop_id, count] : scenario.assignment) {
      agg.mean_fraction[stop_id] += static_cast<double>(count) / total;
    }
  }
  for (auto& [stop_id, f] : agg.mean_fraction) f /= n_simulations;
  return agg;
}

int infer_total_boardings(Minutes departure_time, const BoardingAverages& averages) {
  if (averages.empty()) throw Error("boarding averages are empty");
  double best_diff = 0;
  double best_avg = 0;
  bool first = true;
  for (const auto& [dep, avg] : averages) {  // keys ascending, ties take the earlier
    double diff = std::abs(departure_time - dep);
    if (first || diff < best_diff) {
      best_diff = diff;
      best_avg = avg;
      first = false;
    }
  }
  return static_cast<int>(std::lround(best_avg));
}

std::vector<StationWeight> station_weights_at(const StopProbabilityTable& table,
                                              const StationRegistry& stations,
                                              Direction direction, int hour) {
  std::vector<StationWeight> weights;
  for (const Station& s : stations.route(direction)) {
    weights.push_back({s.stop_id, table.effective(s.stop_id, hour), s.population_density});
  }
  return weights;
}

}  // namespace semibus
