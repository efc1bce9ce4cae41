#include "semibus/time_util.hpp"

#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace semibus {

namespace {

bool all_digits(const std::string& s, size_t from, size_t to) {
  if (from >= to || to > s.size()) return false;
  for (size_t i = from; i < to; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

int to_int(const std::string& s, size_t from, size_t to) {
  int v = 0;
  for (size_t i = from; i < to; ++i) v = v * 10 + (s[i] - '0');
  return v;
}

}  // namespace

int hour_of(Minutes m) {
  int h = static_cast<int>(std::floor(m / 60.0));
  h %= 24;
  if (h < 0) h += 24;
  return h;
}

std::optional<Minutes> parse_clock(const std::string& text) {
  // HH:MM or HH:MM:SS
  if (text.size() < 5 || text[2] != ':') return std::nullopt;
  if (!all_digits(text, 0, 2) || !all_digits(text, 3, 5)) return std::nullopt;
  int hh = to_int(text, 0, 2);
  int mm = to_int(text, 3, 5);
  int ss = 0;
  if (text.size() == 8) {
    if (text[5] != ':' || !all_digits(text, 6, 8)) return std::nullopt;
    ss = to_int(text, 6, 8);
  } else if (text.size() != 5) {
    return std::nullopt;
  }
  if (mm > 59 || ss > 59) return std::nullopt;
  Minutes m = hh * 60.0 + mm + ss / 60.0;
  if (m >= kServiceDayEnd) return std::nullopt;
  return m;
}

std::string format_clock(Minutes m) {
  long total_seconds = std::lround(m * 60.0);
  if (total_seconds < 0) total_seconds = 0;
  long hh = total_seconds / 3600;
  long mm = (total_seconds % 3600) / 60;
  long ss = total_seconds % 60;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02ld:%02ld:%02ld", hh, mm, ss);
  return buf;
}

std::string format_clock_short(Minutes m) {
  long total_minutes = std::lround(m);
  if (total_minutes < 0) total_minutes = 0;
  char buf[12];
  std::snprintf(buf, sizeof(buf), "%02ld:%02ld", total_minutes / 60, total_minutes % 60);
  return buf;
}

std::optional<CivilDate> parse_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!all_digits(text, 0, 4) || !all_digits(text, 5, 7) || !all_digits(text, 8, 10)) {
    return std::nullopt;
  }
  CivilDate d{to_int(text, 0, 4), to_int(text, 5, 7), to_int(text, 8, 10)};
  std::chrono::year_month_day ymd{std::chrono::year{d.year},
                                  std::chrono::month{static_cast<unsigned>(d.month)},
                                  std::chrono::day{static_cast<unsigned>(d.day)}};
  if (!ymd.ok()) return std::nullopt;
  return d;
}

std::optional<Minutes> parse_timestamp(const std::string& text,
                                       const CivilDate& service_date) {
  if (text.size() != 19) return std::nullopt;
  if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
  auto date = parse_date(text.substr(0, 10));
  auto clock = parse_clock(text.substr(11));
  if (!date || !clock || *clock >= 24.0 * 60.0) return std::nullopt;

  using namespace std::chrono;
  auto to_days = [](const CivilDate& d) {
    return sys_days{year{d.year} / d.month / d.day};
  };
  auto day_delta = (to_days(*date) - to_days(service_date)).count();
  Minutes m = static_cast<double>(day_delta) * 24.0 * 60.0 + *clock;
  if (m < 0 || m >= kServiceDayEnd) return std::nullopt;
  return m;
}

DayKind day_kind_of(const CivilDate& date) {
  using namespace std::chrono;
  weekday wd{sys_days{year{date.year} / date.month / date.day}};
  if (wd == Saturday) return DayKind::saturday;
  if (wd == Sunday) return DayKind::sunday;
  return DayKind::weekday;
}

std::optional<DayKind> parse_day_kind(const std::string& text) {
  if (text == "weekday") return DayKind::weekday;
  if (text == "saturday") return DayKind::saturday;
  if (text == "sunday") return DayKind::sunday;
  return std::nullopt;
}

const char* to_string(DayKind k) {
  switch (k) {
    case DayKind::weekday: return "weekday";
    case DayKind::saturday: return "saturday";
    case DayKind::sunday: return "sunday";
  }
  return "weekday";
}

}  // namespace semibus
