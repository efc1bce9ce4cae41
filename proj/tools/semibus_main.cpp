#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semibus/allocation.hpp"
#include "semibus/evaluation.hpp"
#include "semibus/version.hpp"
#include "semibus/workspace.hpp"

namespace fs = std::filesystem;
using namespace semibus;

namespace {

Minutes parse_clock_or_throw(const std::string& text, const char* what) {
  auto m = parse_clock(text);
  if (!m) throw Error(std::string("bad ") + what + " '" + text + "' (expected HH:MM)");
  return *m;
}

Direction parse_direction_or_throw(const std::string& text) {
  auto d = parse_direction(text);
  if (!d) throw Error("bad direction '" + text + "' (incoming|outgoing)");
  return *d;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) | rd();
}

std::vector<double> parse_value_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    try {
      values.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw Error(std::string("bad value '") + part + "' in " + what);
    }
  }
  if (values.empty()) throw Error(std::string(what) + " must list at least one value");
  return values;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct CommonFlags {
  std::string depart_text;
  double t_p = 25.0;
  double pa_min = 0.0;
  int sims = 100;
  std::optional<std::uint64_t> seed;
  std::string direction_text = "outgoing";
};

void add_routing_flags(CLI::App* cmd, CommonFlags& flags, bool with_depart = true) {
  if (with_depart) {
    cmd->add_option("--depart", flags.depart_text, "Departure time HH:MM")->required();
  }
  cmd->add_option("--tp", flags.t_p, "Skip percentile t_p in [0,100]")
      ->check(CLI::Range(0.0, 100.0));
  cmd->add_option("--pa-min", flags.pa_min, "Minimum pickup aggregation in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--sims", flags.sims, "Simulations behind pickup aggregation")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags.seed, "RNG seed (generated and recorded if omitted)");
  cmd->add_option("--direction", flags.direction_text, "Route direction (incoming|outgoing)");
}

int run_ingest(const Workspace& ws) {
  auto inputs = ws.load_inputs();
  EventParse events = parse_events_file(ws.events_path().string());
  ValidationReport known_report;
  auto known = filter_known_events(events.events, inputs.stations, known_report);

  json report = {{"dataset_hash", ws.dataset_hash()},
                 {"events", to_json(events.report)},
                 {"events_station_check", to_json(known_report)},
                 {"stations", inputs.stations.all().size()},
                 {"schedule_entries", inputs.schedule.size()},
                 {"shortcuts", inputs.shortcuts.size()},
                 {"boarding_averages", inputs.boardings.size()}};
  ws.write_report("ingest.json", report);
  std::cout << "ingest: " << events.report.accepted << " events accepted, "
            << events.report.rejected << " rejected; " << inputs.stations.all().size()
            << " stations, " << inputs.schedule.size() << " schedule entries, "
            << inputs.shortcuts.size() << " shortcuts\n";
  if (!known.size()) throw Error("no events reference known stations");
  return 0;
}

int run_metrics(const Workspace& ws, double threshold) {
  MetricsArtifact m = ws.build_metrics(threshold);
  ws.save_metrics(m);
  std::cout << "metrics: tables built (dataset " << m.dataset_hash << ")\n"
            << "  idle cells:        " << m.idle.cells().size() * 24 << "\n"
            << "  trip cells:        " << m.trip.cells().size() * 24 << "\n"
            << "  probability cells: " << m.probability.cells().size() * 24 << "\n"
            << "  lateness records:  " << m.lateness.size() << "\n"
            << "  shortcuts accepted " << m.accepted_shortcuts.size() << " / "
            << m.shortcut_report.total << "\n";
  return 0;
}

int run_propose(const Workspace& ws, const CommonFlags& flags) {
  RoutingBundle bundle = load_routing_bundle(ws);
  RoutingTables tables = bundle.tables();
  Direction direction = parse_direction_or_throw(flags.direction_text);
  Minutes depart = parse_clock_or_throw(flags.depart_text, "--depart");

  RoutingParams params;
  params.t_p = flags.t_p;
  params.pa_min = flags.pa_min;
  params.n_simulations = flags.sims;
  params.seed = resolve_seed(flags.seed);

  int total = params.pa_min > 0
                  ? infer_total_boardings(depart, bundle.boardings)
                  : 0;
  PipelineOutput out = run_pipeline(depart, tables, direction, params, total);

  json artifact = to_json(out.route);
  artifact["aggregate"] = out.aggregate ? to_json(*out.aggregate) : json(nullptr);
  ws.write_report("propose.json", artifact);
  std::cout << "propose: " << format_clock_short(depart) << " t_p=" << params.t_p
            << " pa_min=" << params.pa_min << " -> " << out.route.num_intermediate_stops()
            << " intermediate stops, " << format_double(out.route.total_minutes)
            << " min total\n";
  return 0;
}

int run_simulate(const Workspace& ws, const CommonFlags& flags,
                 std::optional<int> total_override) {
  RoutingBundle bundle = load_routing_bundle(ws);
  Direction direction = parse_direction_or_throw(flags.direction_text);
  Minutes depart = parse_clock_or_throw(flags.depart_text, "--depart");
  std::uint64_t seed = resolve_seed(flags.seed);

  int total = total_override ? *total_override
                             : infer_total_boardings(depart, bundle.boardings);
  auto weights = station_weights_at(bundle.metrics.probability, bundle.stations,
                                    direction, hour_of(depart));
  PickupAggregate agg = aggregate_pickup(depart, total, weights, flags.sims, seed);

  ws.write_report("simulate.json", to_json(agg));
  std::string csv = "stop_id,mean_fraction\n";
  for (const auto& [stop_id, f] : agg.mean_fraction) {
    csv += stop_id + "," + format_double(f) + "\n";
  }
  ws.write_plot_csv("pickup_fractions.csv", csv);
  std::cout << "simulate: " << agg.n_simulations << " sims, total=" << total
            << ", seed=" << seed << "\n";
  return 0;
}

int run_dry_run(const Workspace& ws, const CommonFlags& flags, bool capacity) {
  RoutingBundle bundle = load_routing_bundle(ws);
  RoutingTables tables = bundle.tables();
  Direction direction = parse_direction_or_throw(flags.direction_text);
  Minutes depart = parse_clock_or_throw(flags.depart_text, "--depart");

  RoutingParams params;
  params.t_p = flags.t_p;
  params.pa_min = flags.pa_min;
  params.n_simulations = flags.sims;
  params.seed = resolve_seed(flags.seed);

  int total = infer_total_boardings(depart, bundle.boardings);
  RouteProposal static_route = full_stop_route(depart, tables, direction);
  DryRunReport report = dry_run(depart, static_route, params, tables, direction, total,
                                flags.sims, params.seed,
                                capacity ? std::optional<int>(kBusSeatingCapacity)
                                         : std::nullopt);
  ws.write_report("dryrun.json", to_json(report));
  std::cout << "dry-run " << format_clock_short(depart) << " (" << flags.sims
            << " sims, total=" << total << ")\n"
            << "  static:       pickup " << format_double(report.static_system.pickup_fraction_mean)
            << ", stops " << report.static_system.num_stops << "\n"
            << "  semi-dynamic: pickup " << format_double(report.semi_dynamic.pickup_fraction_mean)
            << ", stops " << report.semi_dynamic.num_stops << "\n";
  return 0;
}

int run_allocate(const Workspace& ws, const CommonFlags& flags,
                 const std::string& trip_a_text, double max_wait, bool worst_case,
                 int cap) {
  RoutingBundle bundle = load_routing_bundle(ws);
  RoutingTables tables = bundle.tables();
  Direction direction = parse_direction_or_throw(flags.direction_text);
  Minutes trip_a_start = parse_clock_or_throw(trip_a_text, "--trip-a");

  AllocationContext context;
  context.tables = &tables;
  context.direction = direction;
  context.params.t_p = flags.t_p;
  context.params.pa_min = flags.pa_min;
  context.params.n_simulations = flags.sims;
  context.params.seed = resolve_seed(flags.seed);
  context.total_boardings = flags.pa_min > 0
                                ? infer_total_boardings(trip_a_start, bundle.boardings)
                                : 0;
  context.model = worst_case ? WaitModel::worst_case : WaitModel::median;
  context.search_cap_minutes = cap;

  RouteProposal trip_a =
      run_pipeline(trip_a_start, tables, direction, context.params, context.total_boardings)
          .route;
  AllocationResult result = optimal_second_departure(trip_a, max_wait, context);

  json artifact = to_json(result);
  artifact["trip_a"] = to_json(trip_a);
  artifact["parameters"] = {{"t_p", context.params.t_p},
                            {"pa_min", context.params.pa_min},
                            {"n_simulations", context.params.n_simulations},
                            {"seed", context.params.seed},
                            {"search_cap_minutes", cap}};
  ws.write_report("allocate.json", artifact);

  // Allocation-result row: trip A start | trip B start | max wait.
  std::cout << format_clock_short(result.trip_a_start) << " -> "
            << format_clock_short(result.trip_b_start) << ", "
            << format_double(result.max_wait)
            << (result.infeasible ? " (infeasible)" : result.capped ? " (capped)" : "")
            << "\n";
  return 0;
}

int run_sweep(const Workspace& ws, const CommonFlags& flags,
              const std::string& tp_values_text, const std::string& pa_values_text) {
  RoutingBundle bundle = load_routing_bundle(ws);
  RoutingTables tables = bundle.tables();
  Direction direction = parse_direction_or_throw(flags.direction_text);
  Minutes depart = parse_clock_or_throw(flags.depart_text, "--depart");
  std::uint64_t seed = resolve_seed(flags.seed);

  auto tp_values = parse_value_list(tp_values_text, "--tp-values");
  auto pa_values = parse_value_list(pa_values_text, "--pa-values");
  int total = infer_total_boardings(depart, bundle.boardings);

  SweepReport report = parameter_sweep(depart, tables, direction, tp_values, pa_values,
                                       total, flags.sims, seed);
  ws.write_report("sweep.json", to_json(report));

  // Matrices shaped for plotting: rows t_p, columns pa_min.
  auto matrix_csv = [&](auto value_of) {
    std::string out = "t_p";
    for (double pa : report.pa_min_values) out += ",pa_min=" + format_double(pa);
    out += "\n";
    for (double tp : report.t_p_values) {
      out += format_double(tp);
      for (double pa : report.pa_min_values) {
        out += "," + format_double(value_of(report.at(tp, pa)));
      }
      out += "\n";
    }
    return out;
  };
  ws.write_plot_csv("sweep_num_stops.csv", matrix_csv([](const SweepPoint& p) {
                      return static_cast<double>(p.num_stops);
                    }));
  ws.write_plot_csv("sweep_trip_minutes.csv", matrix_csv([](const SweepPoint& p) {
                      return p.total_minutes;
                    }));
  std::cout << "sweep: " << report.grid.size() << " grid points (seed=" << seed << ")\n";
  return 0;
}

int run_report(const Workspace& ws) {
  MetricsArtifact m = ws.load_metrics();
  std::vector<std::string> bundled;

  std::string lateness = "service_date,stop_id,actual_departure,lateness_minutes\n";
  for (const LatenessRecord& r : m.lateness) {
    lateness += r.service_date_text + "," + r.stop_id + "," +
                format_clock(r.actual_departure) + "," +
                format_double(r.lateness_minutes) + "\n";
  }
  ws.write_plot_csv("lateness_series.csv", lateness);
  bundled.push_back("lateness_series.csv");

  std::string probs = "stop_id,hour,probability\n";
  for (const auto& [stop_id, row] : m.probability.cells()) {
    for (int h = 0; h < 24; ++h) {
      if (!row[h].has_data()) continue;
      probs += stop_id + "," + std::to_string(h) + "," +
               format_double(row[h].probability()) + "\n";
    }
  }
  ws.write_plot_csv("stop_probability_bars.csv", probs);
  bundled.push_back("stop_probability_bars.csv");

  // Pickup fractions and sweep matrices are bundled when their commands ran.
  for (const char* name : {"pickup_fractions.csv", "sweep_num_stops.csv",
                           "sweep_trip_minutes.csv"}) {
    if (fs::exists(ws.plot_dir() / name)) bundled.push_back(name);
  }

  std::cout << "report: bundled " << bundled.size() << " plot series under "
            << ws.plot_dir().string() << "\n";
  return 0;
}

std::vector<std::string> command_artifacts(const std::string& name) {
  if (name == "ingest") return {"reports/ingest.json"};
  if (name == "metrics") {
    return {"tables/metrics.json", "tables/idle_time.csv", "tables/trip_time.csv",
            "tables/stop_probability.csv", "tables/lateness.csv", "manifest.json"};
  }
  if (name == "propose") return {"reports/propose.json"};
  if (name == "simulate") return {"reports/simulate.json", "reports/plotdata/pickup_fractions.csv"};
  if (name == "dry-run") return {"reports/dryrun.json"};
  if (name == "allocate") return {"reports/allocate.json"};
  if (name == "sweep") {
    return {"reports/sweep.json", "reports/plotdata/sweep_num_stops.csv",
            "reports/plotdata/sweep_trip_minutes.csv"};
  }
  if (name == "report") {
    return {"reports/plotdata/lateness_series.csv",
            "reports/plotdata/stop_probability_bars.csv"};
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semibus - semi-dynamic bus routing toolkit"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string workspace_flag;
  app.add_option("-w,--workspace", workspace_flag,
                 "Workspace directory (default: $SEMIBUS_WORKSPACE or cwd)");

  auto* c_ingest = app.add_subcommand("ingest", "Parse and validate the input files");

  double threshold = kDefaultLinkThresholdMinutes;
  auto* c_metrics = app.add_subcommand("metrics", "Build the analytic tables");
  c_metrics->add_option("--threshold", threshold, "Event-linking threshold, minutes")
      ->check(CLI::PositiveNumber);

  CommonFlags propose_flags;
  auto* c_propose = app.add_subcommand("propose", "Propose a semi-dynamic route");
  add_routing_flags(c_propose, propose_flags);

  CommonFlags simulate_flags;
  std::optional<int> total_override;
  auto* c_simulate = app.add_subcommand("simulate", "Aggregate passenger pickup simulations");
  add_routing_flags(c_simulate, simulate_flags);
  c_simulate->add_option("--total", total_override, "Override inferred total boardings");

  CommonFlags dryrun_flags;
  bool capacity = false;
  auto* c_dryrun = app.add_subcommand("dry-run", "Static vs semi-dynamic comparison");
  add_routing_flags(c_dryrun, dryrun_flags);
  c_dryrun->add_flag("--capacity", capacity, "Cap pickups at the bus seating capacity");

  CommonFlags allocate_flags;
  std::string trip_a_text;
  double max_wait = 0;
  bool worst_case = false;
  int search_cap = 120;
  auto* c_allocate = app.add_subcommand("allocate", "Optimal second-bus departure");
  c_allocate->add_option("--trip-a", trip_a_text, "Trip A start HH:MM")->required();
  c_allocate->add_option("--max-wait", max_wait, "Maximum wait proxy, minutes")
      ->required()
      ->check(CLI::NonNegativeNumber);
  c_allocate->add_flag("--worst-case", worst_case, "Use the full-gap wait model");
  c_allocate->add_option("--cap", search_cap, "Search cap, minutes")
      ->check(CLI::PositiveNumber);
  add_routing_flags(c_allocate, allocate_flags, /*with_depart=*/false);

  CommonFlags sweep_flags;
  std::string tp_values_text = "0,25,50,75,100";
  std::string pa_values_text = "0,0.25,0.5,0.75,1";
  auto* c_sweep = app.add_subcommand("sweep", "Parameter responsiveness grid");
  add_routing_flags(c_sweep, sweep_flags);
  c_sweep->add_option("--tp-values", tp_values_text, "Comma-separated t_p grid");
  c_sweep->add_option("--pa-values", pa_values_text, "Comma-separated pa_min grid");

  auto* c_report = app.add_subcommand("report", "Bundle plot-ready data series");

  CLI11_PARSE(app, argc, argv);

  fs::path root;
  if (!workspace_flag.empty()) {
    root = workspace_flag;
  } else if (const char* env = std::getenv("SEMIBUS_WORKSPACE")) {
    root = env;
  } else {
    root = fs::current_path();
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    Workspace ws(root);
    int rc = 1;
    if (c_ingest->parsed()) rc = run_ingest(ws);
    if (c_metrics->parsed()) rc = run_metrics(ws, threshold);
    if (c_propose->parsed()) rc = run_propose(ws, propose_flags);
    if (c_simulate->parsed()) rc = run_simulate(ws, simulate_flags, total_override);
    if (c_dryrun->parsed()) rc = run_dry_run(ws, dryrun_flags, capacity);
    if (c_allocate->parsed()) {
      rc = run_allocate(ws, allocate_flags, trip_a_text, max_wait, worst_case, search_cap);
    }
    if (c_sweep->parsed()) rc = run_sweep(ws, sweep_flags, tp_values_text, pa_values_text);
    if (c_report->parsed()) rc = run_report(ws);
    ws.append_log(command, rc == 0 ? "ok" : "error", command_artifacts(command));
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "semibus: " << e.what() << "\n";
    try {
      Workspace ws(root);
      ws.append_log(command, "error", {}, e.what());
    } catch (...) {
    }
    return 1;
  }
}
