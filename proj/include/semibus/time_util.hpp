#pragma once

#include <optional>
#include <string>

namespace semibus {

// Instants and durations are minutes since the service-day midnight.
// A service day runs past 24:00: a night trip anchored to the previous
// calendar day parses to e.g. 25.5h * 60. Everything downstream (tables,
// timelines, schedules) shares this axis.
using Minutes = double;

// Exclusive upper bound of a service day (schedule format allows 27:59).
inline constexpr Minutes kServiceDayEnd = 28.0 * 60.0;

// Hour-of-day bucket for table lookups, 0-23. Post-midnight minutes wrap
// (25:30 -> hour 1).
int hour_of(Minutes m);

// "HH:MM" or "HH:MM:SS"; HH may exceed 23 up to the service-day bound.
std::optional<Minutes> parse_clock(const std::string& text);

std::string format_clock(Minutes m);        // "HH:MM:SS", HH may exceed 23
std::string format_clock_short(Minutes m);  // "HH:MM", rounded to the minute

struct CivilDate {
  int year = 0;
  int month = 0;
  int day = 0;

  friend bool operator==(const CivilDate&, const CivilDate&) = default;
};

std::optional<CivilDate> parse_date(const std::string& text);  // "YYYY-MM-DD"

// Minutes since `service_date` midnight for an ISO-8601 local timestamp
// ("YYYY-MM-DDTHH:MM:SS", 'T' or space separator). Empty when the stamp is
// unparseable or falls outside the [00:00, 28:00) window of the service day.
std::optional<Minutes> parse_timestamp(const std::string& text,
                                       const CivilDate& service_date);

enum class DayKind { weekday, saturday, sunday };

DayKind day_kind_of(const CivilDate& date);
std::optional<DayKind> parse_day_kind(const std::string& text);
const char* to_string(DayKind k);

}  // namespace semibus
