#include <doctest.h>

#include "helpers.hpp"
#include "semibus/allocation.hpp"

using namespace semibus;
using namespace semibus::testing;

namespace {

// Constant tables: trip B's timeline is trip A's shifted by the start delta,
// so every proxy has a closed form.
struct ConstantGapFixture {
  StationRegistry reg = make_route(4);
  IdleTimeTable idle;
  TripTimeMatrix trip;
  StopProbabilityTable prob;

  ConstantGapFixture() {
    idle = make_idle(reg, {{"S1", 0.0}, {"S2", 2.0}, {"S3", 1.0}, {"S4", 2.0}});
    trip = make_trip(reg, {4.0, 5.0, 6.0});
    prob = make_prob(reg, {{"S1", {1, 1}}, {"S2", {1, 1}}, {"S3", {1, 1}}, {"S4", {1, 1}}});
  }

  RoutingTables tables() const { return RoutingTables{&reg, &idle, &trip, &prob, {}}; }
};

}  // namespace

TEST_CASE("wait_proxy models") {
  CHECK(wait_proxy(9 * 60 + 20, 9 * 60, WaitModel::median) == doctest::Approx(10));
  CHECK(wait_proxy(9 * 60 + 20, 9 * 60, WaitModel::worst_case) == doctest::Approx(20));
  CHECK(wait_proxy(9 * 60, 9 * 60, WaitModel::median) == doctest::Approx(0));
}

TEST_CASE("optimal_second_departure finds the last non-violating start") {
  ConstantGapFixture f;
  auto tables = f.tables();
  AllocationContext context;
  context.tables = &tables;
  context.direction = Direction::outgoing;
  context.params.t_p = 0;  // all stops for both trips

  RouteProposal trip_a =
      run_pipeline(9 * 60, tables, Direction::outgoing, context.params, 0).route;

  SUBCASE("closed form on the constant-gap fixture") {
    // Max proxy is at the origin: delta/2. Limit 10 -> last good delta = 20.
    auto result = optimal_second_departure(trip_a, 10, context);
    CHECK(result.trip_b_start == doctest::Approx(9 * 60 + 20));
    CHECK(*result.violated_at == doctest::Approx(9 * 60 + 21));
    CHECK_FALSE(result.infeasible);
    CHECK_FALSE(result.capped);
    for (const StationWait& w : result.proxies) CHECK(w.proxy_minutes <= 10.0);
  }
  SUBCASE("constraint boundary: returned start passes, +1 violates") {
    auto result = optimal_second_departure(trip_a, 7, context);
    CHECK(result.trip_b_start == doctest::Approx(9 * 60 + 14));
    double max_proxy = 0;
    for (const StationWait& w : result.proxies) {
      max_proxy = std::max(max_proxy, w.proxy_minutes);
    }
    CHECK(max_proxy <= 7.0);
    CHECK(*result.violated_at - trip_a.departure_time == doctest::Approx(15));
  }
  SUBCASE("zero max wait is infeasible at +1") {
    auto result = optimal_second_departure(trip_a, 0, context);
    CHECK(result.infeasible);
    CHECK(result.trip_b_start == doctest::Approx(trip_a.departure_time));
    CHECK(*result.violated_at == doctest::Approx(trip_a.departure_time + 1));
  }
  SUBCASE("worst-case proxies double the median ones") {
    auto median_result = optimal_second_departure(trip_a, 10, context);
    context.model = WaitModel::worst_case;
    auto worst_result = optimal_second_departure(trip_a, 20, context);
    // Same start satisfies double the limit under the doubled model.
    CHECK(worst_result.trip_b_start == doctest::Approx(median_result.trip_b_start));
    REQUIRE(worst_result.proxies.size() == median_result.proxies.size());
    for (size_t i = 0; i < worst_result.proxies.size(); ++i) {
      CHECK(worst_result.proxies[i].proxy_minutes ==
            doctest::Approx(2 * median_result.proxies[i].proxy_minutes));
    }
  }
  SUBCASE("search cap flags an unbounded search") {
    context.search_cap_minutes = 15;
    auto result = optimal_second_departure(trip_a, 1000, context);
    CHECK(result.capped);
    CHECK(result.trip_b_start == doctest::Approx(trip_a.departure_time + 15));
    CHECK_FALSE(result.violated_at.has_value());
  }
  SUBCASE("monotone in the wait limit") {
    double prev = -1;
    for (double limit : {2.0, 4.0, 6.0, 8.0, 12.0}) {
      auto result = optimal_second_departure(trip_a, limit, context);
      CHECK(result.trip_b_start >= prev);
      prev = result.trip_b_start;
    }
  }
}

TEST_CASE("constraint applies only to stations stopped by both trips") {
  ConstantGapFixture f;
  // S2 extremely unlikely, S3 certain: trip B at t_p=50 skips S2.
  f.prob = make_prob(f.reg, {{"S1", {1, 1}},
                             {"S2", {1, 100}},
                             {"S3", {99, 100}},
                             {"S4", {1, 1}}});
  auto tables = f.tables();
  AllocationContext context;
  context.tables = &tables;
  context.direction = Direction::outgoing;
  context.params.t_p = 50;

  RouteProposal trip_a =
      run_pipeline(9 * 60, tables, Direction::outgoing, context.params, 0).route;
  REQUIRE_FALSE(trip_a.stops_at("S2"));

  auto result = optimal_second_departure(trip_a, 6, context);
  for (const StationWait& w : result.proxies) CHECK(w.stop_id != "S2");
}

TEST_CASE("allocation validates its inputs") {
  ConstantGapFixture f;
  auto tables = f.tables();
  AllocationContext context;
  context.tables = &tables;
  RouteProposal no_timeline;
  CHECK_THROWS_AS(optimal_second_departure(no_timeline, 10, context), Error);
  context.search_cap_minutes = 0;
  RouteProposal trip_a =
      run_pipeline(9 * 60, tables, Direction::outgoing, context.params, 0).route;
  CHECK_THROWS_AS(optimal_second_departure(trip_a, 10, context), Error);
}
