#include "semibus/json_io.hpp"

namespace semibus {

json to_json(const ValidationReport& r) {
  json rejections = json::array();
  for (const Rejection& rej : r.rejections) {
    rejections.push_back({{"line", rej.line}, {"reason", rej.reason}});
  }
  return {{"total", r.total},
          {"accepted", r.accepted},
          {"rejected", r.rejected},
          {"rejections", rejections}};
}

static ValidationReport report_from_json(const json& j) {
  ValidationReport r;
  r.total = j.at("total").get<int>();
  r.accepted = j.at("accepted").get<int>();
  r.rejected = j.at("rejected").get<int>();
  for (const auto& rej : j.at("rejections")) {
    r.rejections.push_back({rej.at("line").get<int>(), rej.at("reason").get<std::string>()});
  }
  return r;
}

json to_json(const Station& s) {
  return {{"stop_id", s.stop_id},
          {"name", s.name},
          {"route_position", s.route_position},
          {"population_density", s.population_density},
          {"is_origin", s.is_origin},
          {"is_terminus", s.is_terminus},
          {"direction_id", to_string(s.direction)}};
}

static Station station_from_json(const json& j) {
  Station s;
  s.stop_id = j.at("stop_id").get<std::string>();
  s.name = j.at("name").get<std::string>();
  s.route_position = j.at("route_position").get<int>();
  s.population_density = j.at("population_density").get<double>();
  s.is_origin = j.at("is_origin").get<bool>();
  s.is_terminus = j.at("is_terminus").get<bool>();
  s.direction = *parse_direction(j.at("direction_id").get<std::string>());
  return s;
}

json to_json(const ShortcutEdge& e) {
  return {{"from_stop", e.from_stop},
          {"to_stop", e.to_stop},
          {"bypassed_stops", e.bypassed},
          {"minutes_by_hour", e.minutes_by_hour}};
}

static ShortcutEdge shortcut_from_json(const json& j) {
  ShortcutEdge e;
  e.from_stop = j.at("from_stop").get<std::string>();
  e.to_stop = j.at("to_stop").get<std::string>();
  e.bypassed = j.at("bypassed_stops").get<std::vector<std::string>>();
  auto mins = j.at("minutes_by_hour").get<std::vector<double>>();
  if (mins.size() != 24) throw Error("minutes_by_hour must have 24 entries");
  std::copy(mins.begin(), mins.end(), e.minutes_by_hour.begin());
  return e;
}

json to_json(const MetricsArtifact& m) {
  json stations = json::array();
  for (const Station& s : m.stations) stations.push_back(to_json(s));

  json lateness = json::array();
  for (const LatenessRecord& r : m.lateness) {
    lateness.push_back({{"stop_id", r.stop_id},
                        {"service_date", r.service_date_text},
                        {"scheduled_departure", format_clock(r.scheduled_departure)},
                        {"scheduled_minutes", r.scheduled_departure},
                        {"actual_departure", format_clock(r.actual_departure)},
                        {"actual_minutes", r.actual_departure},
                        {"lateness_minutes", r.lateness_minutes}});
  }

  json idle = json::array();
  for (const auto& [stop_id, row] : m.idle.cells()) {
    for (int h = 0; h < 24; ++h) {
      idle.push_back({{"stop_id", stop_id},
                      {"hour", h},
                      {"median_minutes", row[h].median_minutes},
                      {"source", to_string(row[h].source)}});
    }
  }

  json trip = json::array();
  for (const auto& [pair, row] : m.trip.cells()) {
    for (int h = 0; h < 24; ++h) {
      trip.push_back({{"from_stop", pair.first},
                      {"to_stop", pair.second},
                      {"hour", h},
                      {"median_minutes", row[h].median_minutes},
                      {"source", to_string(row[h].source)}});
    }
  }

  json prob = json::array();
  for (const auto& [stop_id, row] : m.probability.cells()) {
    for (int h = 0; h < 24; ++h) {
      json cell = {{"stop_id", stop_id},
                   {"hour", h},
                   {"stopped", row[h].stopped},
                   {"passed", row[h].passed}};
      if (row[h].has_data()) {
        cell["probability"] = row[h].probability();
      } else {
        cell["probability"] = nullptr;  // explicit no-data marker
      }
      prob.push_back(cell);
    }
  }

  json shortcuts = json::array();
  for (const ShortcutEdge& e : m.accepted_shortcuts) shortcuts.push_back(to_json(e));

  return {{"dataset_hash", m.dataset_hash},
          {"tool_version", m.tool_version},
          {"link_threshold_minutes", m.link_threshold_minutes},
          {"stations", stations},
          {"lateness", lateness},
          {"idle_time", idle},
          {"trip_time", trip},
          {"stop_probability", prob},
          {"accepted_shortcuts", shortcuts},
          {"reports",
           {{"events", to_json(m.event_report)},
            {"linking", to_json(m.link_report)},
            {"lateness", to_json(m.lateness_report)},
            {"shortcuts", to_json(m.shortcut_report)}}}};
}

MetricsArtifact metrics_from_json(const json& j) {
  MetricsArtifact m;
  m.dataset_hash = j.at("dataset_hash").get<std::string>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.link_threshold_minutes = j.at("link_threshold_minutes").get<double>();
  for (const auto& s : j.at("stations")) m.stations.push_back(station_from_json(s));

  for (const auto& r : j.at("lateness")) {
    LatenessRecord rec;
    rec.stop_id = r.at("stop_id").get<std::string>();
    rec.service_date_text = r.at("service_date").get<std::string>();
    rec.scheduled_departure = r.at("scheduled_minutes").get<double>();
    rec.actual_departure = r.at("actual_minutes").get<double>();
    rec.lateness_minutes = r.at("lateness_minutes").get<double>();
    m.lateness.push_back(std::move(rec));
  }

  IdleTimeTable::Cells idle;
  for (const auto& c : j.at("idle_time")) {
    auto& row = idle[c.at("stop_id").get<std::string>()];
    int h = c.at("hour").get<int>();
    std::string src = c.at("source").get<std::string>();
    IdleSource source = src == "observed"          ? IdleSource::observed
                        : src == "imputed_station" ? IdleSource::imputed_station
                                                   : IdleSource::imputed_global;
    row[h] = {c.at("median_minutes").get<double>(), source};
  }
  m.idle = IdleTimeTable::from_cells(std::move(idle));

  TripTimeMatrix::Cells trip;
  for (const auto& c : j.at("trip_time")) {
    auto& row = trip[{c.at("from_stop").get<std::string>(),
                      c.at("to_stop").get<std::string>()}];
    int h = c.at("hour").get<int>();
    std::string src = c.at("source").get<std::string>();
    TripSource source = src == "observed"       ? TripSource::observed
                        : src == "imputed_hour" ? TripSource::imputed_hour
                                                : TripSource::imputed_pair;
    row[h] = {c.at("median_minutes").get<double>(), source};
  }
  m.trip = TripTimeMatrix::from_cells(std::move(trip));

  StopProbabilityTable::Cells prob;
  for (const auto& c : j.at("stop_probability")) {
    auto& row = prob[c.at("stop_id").get<std::string>()];
    int h = c.at("hour").get<int>();
    row[h] = {c.at("stopped").get<int>(), c.at("passed").get<int>()};
  }
  m.probability = StopProbabilityTable::from_cells(std::move(prob));

  for (const auto& e : j.at("accepted_shortcuts")) {
    m.accepted_shortcuts.push_back(shortcut_from_json(e));
  }
  m.shortcut_report = report_from_json(j.at("reports").at("shortcuts"));
  m.event_report = report_from_json(j.at("reports").at("events"));
  m.link_report = report_from_json(j.at("reports").at("linking"));
  m.lateness_report = report_from_json(j.at("reports").at("lateness"));
  return m;
}

json to_json(const RouteProposal& r) {
  json decisions = json::array();
  for (const auto& [stop_id, action] : r.decisions) {
    decisions.push_back({{"stop_id", stop_id}, {"action", to_string(action)}});
  }
  json segments = json::array();
  for (const RouteSegment& s : r.segments) {
    segments.push_back({{"from_stop", s.from_stop},
                        {"to_stop", s.to_stop},
                        {"kind", to_string(s.kind)},
                        {"minutes", s.minutes}});
  }
  json timeline = json::array();
  for (const TimelineEntry& e : r.timeline) {
    timeline.push_back({{"stop_id", e.stop_id},
                        {"arrival", format_clock(e.arrival)},
                        {"arrival_minutes", e.arrival},
                        {"departure", format_clock(e.departure)},
                        {"departure_minutes", e.departure}});
  }
  return {{"departure_time", format_clock_short(r.departure_time)},
          {"departure_minutes", r.departure_time},
          {"direction_id", to_string(r.direction)},
          {"parameters",
           {{"t_p", r.params.t_p},
            {"pa_min", r.params.pa_min},
            {"n_simulations", r.params.n_simulations},
            {"seed", r.params.seed}}},
          {"decisions", decisions},
          {"segments", segments},
          {"timeline", timeline},
          {"num_intermediate_stops", r.num_intermediate_stops()},
          {"total_minutes", r.total_minutes}};
}

json to_json(const PickupAggregate& a) {
  return {{"departure_time", format_clock_short(a.departure_time)},
          {"departure_minutes", a.departure_time},
          {"n_simulations", a.n_simulations},
          {"rng_seed", a.rng_seed},
          {"total_boardings", a.total_boardings},
          {"mean_fraction", a.mean_fraction}};
}

json to_json(const AllocationResult& r) {
  json proxies = json::array();
  for (const StationWait& w : r.proxies) {
    proxies.push_back({{"stop_id", w.stop_id},
                       {"proxy_minutes", w.proxy_minutes},
                       {"degenerate", w.degenerate}});
  }
  json out = {{"trip_a_start", format_clock_short(r.trip_a_start)},
              {"trip_b_start", format_clock_short(r.trip_b_start)},
              {"trip_a_start_minutes", r.trip_a_start},
              {"trip_b_start_minutes", r.trip_b_start},
              {"max_wait_minutes", r.max_wait},
              {"wait_model", to_string(r.model)},
              {"station_proxies", proxies},
              {"infeasible", r.infeasible},
              {"capped", r.capped}};
  if (r.violated_at) {
    out["violated_at"] = format_clock_short(*r.violated_at);
    out["violated_at_minutes"] = *r.violated_at;
  } else {
    out["violated_at"] = nullptr;
  }
  return out;
}

static json to_json(const SystemOutcome& o) {
  return {{"pickup_fraction_mean", o.pickup_fraction_mean},
          {"num_stops", o.num_stops},
          {"per_simulation_fractions", o.per_sim_fractions}};
}

json to_json(const DryRunReport& r) {
  json out = {{"departure_time", format_clock_short(r.departure_time)},
              {"departure_minutes", r.departure_time},
              {"n_simulations", r.n_simulations},
              {"seed", r.seed},
              {"total_boardings", r.total_boardings},
              {"static", to_json(r.static_system)},
              {"semi_dynamic", to_json(r.semi_dynamic)},
              {"static_route", to_json(r.static_route)},
              {"semi_route", to_json(r.semi_route)}};
  out["capacity"] = r.capacity ? json(*r.capacity) : json(nullptr);
  return out;
}

json to_json(const SweepReport& r) {
  json grid = json::array();
  for (const SweepPoint& p : r.grid) {
    grid.push_back({{"t_p", p.t_p},
                    {"pa_min", p.pa_min},
                    {"num_stops", p.num_stops},
                    {"total_minutes", p.total_minutes}});
  }
  return {{"departure_time", format_clock_short(r.departure_time)},
          {"departure_minutes", r.departure_time},
          {"n_simulations", r.n_simulations},
          {"seed", r.seed},
          {"t_p_values", r.t_p_values},
          {"pa_min_values", r.pa_min_values},
          {"grid", grid}};
}

}  // namespace semibus
