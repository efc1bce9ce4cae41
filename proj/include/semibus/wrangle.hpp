#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "semibus/model.hpp"

namespace semibus {

// Gaps at or beyond this are treated as data errors (breakdowns etc.) and
// excluded from linking.
inline constexpr double kDefaultLinkThresholdMinutes = 30.0;

// One arrival/departure pair stitched together at a station within a trip.
struct LinkedVisit {
  std::string trip_id;
  std::string stop_id;
  std::string service_date_text;
  Direction direction = Direction::outgoing;
  Minutes arrival = 0;
  Minutes departure = 0;
  double idle_minutes = 0;  // departure - arrival, 0 < idle < threshold
};

struct LatenessRecord {
  std::string stop_id;
  std::string service_date_text;
  Minutes scheduled_departure = 0;
  Minutes actual_departure = 0;
  double lateness_minutes = 0;  // actual - scheduled, negative = early
};

// Pairs each departure with the latest prior arrival (smallest positive
// difference). Pairs with difference >= threshold or == 0 are discarded;
// each arrival is consumed at most once, matching greedily in departure
// order. Both lists must already share stop and trip context.
std::vector<LinkedVisit> link_events(const std::vector<RawEvent>& departures,
                                     const std::vector<RawEvent>& arrivals,
                                     double threshold_minutes);

struct LinkResult {
  std::vector<LinkedVisit> visits;
  ValidationReport report;  // unpairable events, per (date, trip, stop) group
};

// Groups a raw event stream by (service date, trip, stop) and links within
// each group.
LinkResult build_linked_visits(const std::vector<RawEvent>& events,
                               double threshold_minutes);

struct LatenessResult {
  std::vector<LatenessRecord> records;
  ValidationReport report;  // unmatched departures, stations without schedule
};

// Matches each linked departure to the nearest scheduled departure of the
// service date's day kind at that station (same one-to-one linking rule,
// absolute difference, |lateness| < threshold).
LatenessResult compute_lateness(const std::vector<LinkedVisit>& visits,
                                const std::vector<ScheduleEntry>& schedule,
                                double threshold_minutes);

// Median with even counts averaging the two middle order statistics.
double median(std::vector<double> values);

enum class IdleSource { observed, imputed_station, imputed_global };

struct IdleCell {
  double median_minutes = 0;
  IdleSource source = IdleSource::observed;

  friend bool operator==(const IdleCell&, const IdleCell&) = default;
};

// Median idle minutes per (station, hour of arrival), total over
// all registry stations x 24 hours after imputation.
class IdleTimeTable {
 public:
  using Cells = std::map<std::string, std::array<IdleCell, 24>>;

  // Missing hours fall back to the station's all-hours median, stations with
  // no visits to the global median. Throws Error("no linked visits") on
  // empty input.
  static IdleTimeTable build(const std::vector<LinkedVisit>& visits,
                             const StationRegistry& stations);
  static IdleTimeTable from_cells(Cells cells);

  const IdleCell& at(const std::string& stop_id, int hour) const;
  double minutes(const std::string& stop_id, int hour) const;
  const Cells& cells() const { return cells_; }

 private:
  Cells cells_;
};

enum class TripSource { observed, imputed_hour, imputed_pair };

struct TripCell {
  double median_minutes = 0;
  TripSource source = TripSource::observed;

  friend bool operator==(const TripCell&, const TripCell&) = default;
};

// Median trip minutes per route-adjacent station pair per hour, total over
// all adjacent pairs x 24 hours after imputation.
class TripTimeMatrix {
 public:
  using PairKey = std::pair<std::string, std::string>;  // (from, to)
  using Cells = std::map<PairKey, std::array<TripCell, 24>>;

  // Observations: consecutive same-trip visits at route-adjacent stations,
  // sample = next arrival - previous departure, bucketed by the hour of the
  // next arrival. Hour gaps take the pair's overall median; pairs with no
  // data take the overall median of the nearest pair by route order.
  static TripTimeMatrix build(const std::vector<LinkedVisit>& visits,
                              const StationRegistry& stations);
  static TripTimeMatrix from_cells(Cells cells);

  const TripCell& at(const std::string& from, const std::string& to, int hour) const;
  double minutes(const std::string& from, const std::string& to, int hour) const;
  const Cells& cells() const { return cells_; }

 private:
  Cells cells_;
};

const char* to_string(IdleSource s);
const char* to_string(TripSource s);

}  // namespace semibus
