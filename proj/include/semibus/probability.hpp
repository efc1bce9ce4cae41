#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "semibus/model.hpp"
#include "semibus/wrangle.hpp"

namespace semibus {

struct ProbCell {
  int stopped = 0;  // passes where the bus stopped
  int passed = 0;   // passes total, stopping or skipping

  bool has_data() const { return passed > 0; }
  double probability() const {
    return passed > 0 ? static_cast<double>(stopped) / passed : 0.0;
  }

  friend bool operator==(const ProbCell&, const ProbCell&) = default;
};

// Per-station, per-hour stopping probability. Cells with passed == 0 are
// no-data; lookups with fallback resolve them to the station's all-hours
// probability, then to 1.0 (absent evidence never causes silent skipping).
class StopProbabilityTable {
 public:
  using Cells = std::map<std::string, std::array<ProbCell, 24>>;

  // A trip passes every station between its first and last visited route
  // positions; skipped stations are attributed to the hour of the
  // skipping-time heuristic.
  static StopProbabilityTable build(const std::vector<LinkedVisit>& visits,
                                    const StationRegistry& stations);
  static StopProbabilityTable from_cells(Cells cells);

  const ProbCell& cell(const std::string& stop_id, int hour) const;
  double effective(const std::string& stop_id, int hour) const;
  const Cells& cells() const { return cells_; }

 private:
  Cells cells_;
};

// Time at which a trip passed a station it did not stop at: the max stop
// time among preceding stopped stations, else the min among succeeding ones.
// Stop times are arrival instants. Throws on a trip with no stopped stations.
Minutes skipped_station_time(const std::vector<LinkedVisit>& trip_visits,
                             const std::string& stop_id,
                             const StationRegistry& stations);

struct SkipThreshold {
  int hour = 0;
  double t = 0;    // probability cut in [0,1]
  double t_p = 0;  // percentile that produced it
};

// t_p-th percentile (linear interpolation) of the hour's station
// probabilities, over cells with data. Throws when the hour has none.
// `pool` restricts the stations considered (empty = all).
SkipThreshold threshold_for_hour(const StopProbabilityTable& table, int hour,
                                 double t_p,
                                 const std::vector<std::string>& pool = {});

double percentile_linear(std::vector<double> values, double pct);

}  // namespace semibus
