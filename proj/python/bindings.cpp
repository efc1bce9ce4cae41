#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "semibus/allocation.hpp"
#include "semibus/evaluation.hpp"
#include "semibus/version.hpp"
#include "semibus/workspace.hpp"

namespace py = pybind11;
using namespace semibus;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items()) {
        out[py::str(key)] = json_to_py(value);
      }
      return out;
    }
    default:
      return py::none();
  }
}

Minutes clock_arg(const std::string& text, const char* what) {
  auto m = parse_clock(text);
  if (!m) throw Error(std::string("bad ") + what + " '" + text + "' (expected HH:MM)");
  return *m;
}

Direction direction_arg(const std::string& text) {
  auto d = parse_direction(text);
  if (!d) throw Error("bad direction '" + text + "' (incoming|outgoing)");
  return *d;
}

// The C++ pipeline behind one workspace, exposed to python. Tables are built
// once (or loaded from a metrics artifact) and shared by every operation.
class Engine {
 public:
  static Engine from_workspace(const std::string& root) {
    Workspace ws(root);
    Engine e;
    e.bundle_ = load_routing_bundle(ws);
    return e;
  }

  static Engine build(const std::string& events, const std::string& stations,
                      const std::string& schedule, const std::string& shortcuts,
                      const std::string& boardings, double link_threshold) {
    Engine e;
    e.bundle_.stations = parse_stations_file(stations);
    auto schedule_entries = parse_schedule_file(schedule);
    validate_schedule(schedule_entries, e.bundle_.stations);
    auto shortcut_edges = parse_shortcuts_file(shortcuts);
    e.bundle_.boardings = parse_boardings_file(boardings);

    EventParse parsed = parse_events_file(events);
    auto known = filter_known_events(parsed.events, e.bundle_.stations, parsed.report);
    LinkResult linked = build_linked_visits(known, link_threshold);
    LatenessResult lateness =
        compute_lateness(linked.visits, schedule_entries, link_threshold);

    MetricsArtifact& m = e.bundle_.metrics;
    m.tool_version = kToolVersion;
    m.link_threshold_minutes = link_threshold;
    m.stations = e.bundle_.stations.all();
    m.lateness = std::move(lateness.records);
    m.idle = IdleTimeTable::build(linked.visits, e.bundle_.stations);
    m.trip = TripTimeMatrix::build(linked.visits, e.bundle_.stations);
    m.probability = StopProbabilityTable::build(linked.visits, e.bundle_.stations);
    ShortcutValidation sv =
        validate_shortcuts(shortcut_edges, m.trip, e.bundle_.stations);
    m.accepted_shortcuts = std::move(sv.accepted);
    m.shortcut_report = std::move(sv.report);
    m.event_report = std::move(parsed.report);
    m.link_report = std::move(linked.report);
    m.lateness_report = std::move(lateness.report);
    return e;
  }

  std::vector<std::string> route_stops(const std::string& direction) const {
    std::vector<std::string> out;
    for (const Station& s : bundle_.stations.route(direction_arg(direction))) {
      out.push_back(s.stop_id);
    }
    return out;
  }

  double idle_minutes(const std::string& stop_id, int hour) const {
    return bundle_.metrics.idle.minutes(stop_id, hour);
  }

  double trip_minutes(const std::string& from, const std::string& to, int hour) const {
    return bundle_.metrics.trip.minutes(from, to, hour);
  }

  py::object stop_probability(const std::string& stop_id, int hour) const {
    const ProbCell& c = bundle_.metrics.probability.cell(stop_id, hour);
    if (!c.has_data()) return py::none();
    return py::float_(c.probability());
  }

  double effective_probability(const std::string& stop_id, int hour) const {
    return bundle_.metrics.probability.effective(stop_id, hour);
  }

  double skip_threshold(int hour, double t_p, const std::string& direction) const {
    auto tables = bundle_.tables();
    return threshold_at_hour(tables, direction_arg(direction), hour, t_p);
  }

  int total_boardings(const std::string& depart) const {
    return infer_total_boardings(clock_arg(depart, "depart"), bundle_.boardings);
  }

  py::object propose(const std::string& depart, double t_p, double pa_min, int sims,
                     std::uint64_t seed, const std::string& direction) const {
    auto tables = bundle_.tables();
    Minutes dep = clock_arg(depart, "depart");
    RoutingParams params{t_p, pa_min, sims, seed};
    int total = pa_min > 0 ? infer_total_boardings(dep, bundle_.boardings) : 0;
    PipelineOutput out =
        run_pipeline(dep, tables, direction_arg(direction), params, total);
    json j = to_json(out.route);
    j["aggregate"] = out.aggregate ? to_json(*out.aggregate) : json(nullptr);
    return json_to_py(j);
  }

  py::object simulate(const std::string& depart, int sims, std::uint64_t seed,
                      std::optional<int> total, const std::string& direction) const {
    Minutes dep = clock_arg(depart, "depart");
    int n = total ? *total : infer_total_boardings(dep, bundle_.boardings);
    auto weights = station_weights_at(bundle_.metrics.probability, bundle_.stations,
                                      direction_arg(direction), hour_of(dep));
    return json_to_py(to_json(aggregate_pickup(dep, n, weights, sims, seed)));
  }

  py::object dry_run_report(const std::string& depart, double t_p, double pa_min,
                            int sims, std::uint64_t seed, const std::string& direction,
                            std::optional<int> capacity) const {
    auto tables = bundle_.tables();
    Minutes dep = clock_arg(depart, "depart");
    Direction dir = direction_arg(direction);
    RoutingParams params{t_p, pa_min, sims, seed};
    int total = infer_total_boardings(dep, bundle_.boardings);
    RouteProposal static_route = full_stop_route(dep, tables, dir);
    return json_to_py(to_json(
        dry_run(dep, static_route, params, tables, dir, total, sims, seed, capacity)));
  }

  py::object allocate(const std::string& trip_a, double max_wait, bool worst_case,
                      double t_p, double pa_min, int sims, std::uint64_t seed,
                      int search_cap, const std::string& direction) const {
    auto tables = bundle_.tables();
    Minutes start = clock_arg(trip_a, "trip_a");
    AllocationContext context;
    context.tables = &tables;
    context.direction = direction_arg(direction);
    context.params = RoutingParams{t_p, pa_min, sims, seed};
    context.total_boardings =
        pa_min > 0 ? infer_total_boardings(start, bundle_.boardings) : 0;
    context.model = worst_case ? WaitModel::worst_case : WaitModel::median;
    context.search_cap_minutes = search_cap;
    RouteProposal a = run_pipeline(start, tables, context.direction, context.params,
                                   context.total_boardings)
                          .route;
    return json_to_py(to_json(optimal_second_departure(a, max_wait, context)));
  }

  py::object sweep(const std::string& depart, std::vector<double> t_p_values,
                   std::vector<double> pa_min_values, int sims, std::uint64_t seed,
                   const std::string& direction) const {
    auto tables = bundle_.tables();
    Minutes dep = clock_arg(depart, "depart");
    int total = infer_total_boardings(dep, bundle_.boardings);
    return json_to_py(to_json(parameter_sweep(dep, tables, direction_arg(direction),
                                              std::move(t_p_values),
                                              std::move(pa_min_values), total, sims,
                                              seed)));
  }

  py::object metrics() const { return json_to_py(to_json(bundle_.metrics)); }

 private:
  RoutingBundle bundle_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Semi-dynamic bus routing engine";
  m.attr("__version__") = kToolVersion;

  py::register_exception<Error>(m, "SemibusError");

  py::class_<Engine>(m, "Engine")
      .def_static("from_workspace", &Engine::from_workspace, py::arg("root"),
                  "Load built tables from a workspace directory")
      .def_static("build", &Engine::build, py::arg("events"), py::arg("stations"),
                  py::arg("schedule"), py::arg("shortcuts"), py::arg("boardings"),
                  py::arg("link_threshold") = kDefaultLinkThresholdMinutes,
                  "Build tables directly from the five input files")
      .def("route_stops", &Engine::route_stops, py::arg("direction") = "outgoing")
      .def("idle_minutes", &Engine::idle_minutes, py::arg("stop_id"), py::arg("hour"))
      .def("trip_minutes", &Engine::trip_minutes, py::arg("from_stop"),
           py::arg("to_stop"), py::arg("hour"))
      .def("stop_probability", &Engine::stop_probability, py::arg("stop_id"),
           py::arg("hour"), "Raw cell probability, None when the cell has no data")
      .def("effective_probability", &Engine::effective_probability, py::arg("stop_id"),
           py::arg("hour"))
      .def("skip_threshold", &Engine::skip_threshold, py::arg("hour"), py::arg("t_p"),
           py::arg("direction") = "outgoing")
      .def("total_boardings", &Engine::total_boardings, py::arg("depart"))
      .def("propose", &Engine::propose, py::arg("depart"), py::arg("t_p") = 25.0,
           py::arg("pa_min") = 0.0, py::arg("sims") = 100, py::arg("seed") = 0,
           py::arg("direction") = "outgoing")
      .def("simulate", &Engine::simulate, py::arg("depart"), py::arg("sims") = 100,
           py::arg("seed") = 0, py::arg("total") = py::none(),
           py::arg("direction") = "outgoing")
      .def("dry_run", &Engine::dry_run_report, py::arg("depart"), py::arg("t_p") = 25.0,
           py::arg("pa_min") = 0.0, py::arg("sims") = 100, py::arg("seed") = 0,
           py::arg("direction") = "outgoing", py::arg("capacity") = py::none())
      .def("allocate", &Engine::allocate, py::arg("trip_a"), py::arg("max_wait"),
           py::arg("worst_case") = false, py::arg("t_p") = 25.0,
           py::arg("pa_min") = 0.0, py::arg("sims") = 100, py::arg("seed") = 0,
           py::arg("search_cap") = 120, py::arg("direction") = "outgoing")
      .def("sweep", &Engine::sweep, py::arg("depart"), py::arg("t_p_values"),
           py::arg("pa_min_values"), py::arg("sims") = 100, py::arg("seed") = 0,
           py::arg("direction") = "outgoing")
      .def("metrics", &Engine::metrics, "Full metrics artifact as a dict");
}
