#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nomaidnc/channel.hpp"
#include "nomaidnc/rng.hpp"

using namespace nomaidnc;

TEST_CASE("path loss model") {
  CHECK(path_loss_db(1000.0) == Catch::Approx(128.1).margin(1e-12));
  CHECK(path_loss_db(100.0) == Catch::Approx(90.5).margin(1e-12));
}

TEST_CASE("thermal noise density") {
  CHECK(thermal_noise_w_per_hz() == Catch::Approx(std::pow(10.0, -20.4)).epsilon(1e-15));
}

TEST_CASE("layer capacities") {
  Receiver r{0, 100.0, 1.0, 1.0, Group::Near};

  CHECK(capacity_far(r, {12.0, 3.0}) == Catch::Approx(2.0).margin(1e-12));
  CHECK(capacity_far(r, {0.0, 3.0}) == 0.0);
  CHECK(capacity_far(r, {3.0, 0.0}) == Catch::Approx(2.0).margin(1e-12));

  CHECK(capacity_near(r, {1.0, 3.0}) == Catch::Approx(2.0).margin(1e-12));
  CHECK(capacity_near(r, {1.0, 0.0}) == 0.0);

  Receiver strong{1, 100.0, 4.0, 1.0, Group::Near};
  CHECK(capacity_near(strong, {0.0, 3.75}) == Catch::Approx(4.0).margin(1e-12));
}

TEST_CASE("power split conserves the single-user capacity") {
  Rng rng(11);
  double max_rel = 0.0;
  for (int i = 0; i < 2000; ++i) {
    Receiver r;
    r.gain = std::pow(10.0, rng.uniform(-14.0, -8.0));
    r.noise = std::pow(10.0, rng.uniform(-22.0, -19.0));
    const double p_total = std::pow(10.0, rng.uniform(-9.0, -6.0));
    const double frac = rng.uniform();
    const PowerAllocation p{p_total * (1.0 - frac), p_total * frac};
    const double full = single_user_capacity(r, p_total);
    max_rel = std::max(max_rel, std::abs(capacity_far(r, p) + capacity_near(r, p) - full) / full);
  }
  CHECK(max_rel <= 1e-12);
}

TEST_CASE("capacity monotonicity in the power split") {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    Receiver r;
    r.gain = std::pow(10.0, rng.uniform(-13.0, -9.0));
    r.noise = thermal_noise_w_per_hz();
    const double p_total = std::pow(10.0, rng.uniform(-8.5, -7.0));
    const double p_near = rng.uniform(0.05, 0.9) * p_total;
    const double p_far = p_total - p_near;
    const double step = p_total * 1e-3;

    CHECK(capacity_far(r, {p_far + step, p_near}) > capacity_far(r, {p_far, p_near}));
    CHECK(capacity_far(r, {p_far, p_near + step}) < capacity_far(r, {p_far, p_near}));
    CHECK(capacity_near(r, {p_far, p_near + step}) > capacity_near(r, {p_far, p_near}));
  }
}

TEST_CASE("the weakest receiver is the same under any fixed split") {
  // The receiver minimizing the full-power rate also minimizes the base-layer
  // rate at any fixed near power: both orders follow gain/noise.
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    CellConfig cell;
    cell.num_receivers = rng.uniform_int(2, 12);
    const Topology topo = generate_topology(cell, rng.bits());
    const double p_near = rng.uniform(0.0, 0.9) * topo.p_max;
    const PowerAllocation p{topo.p_max - p_near, p_near};

    int argmin_full = 0, argmin_far = 0, argmin_ratio = 0;
    for (int m = 1; m < topo.num_receivers(); ++m) {
      const Receiver& r = topo.receivers[m];
      if (single_user_capacity(r, topo.p_max) <
          single_user_capacity(topo.receivers[argmin_full], topo.p_max))
        argmin_full = m;
      if (capacity_far(r, p) < capacity_far(topo.receivers[argmin_far], p)) argmin_far = m;
      if (r.gain / r.noise <
          topo.receivers[argmin_ratio].gain / topo.receivers[argmin_ratio].noise)
        argmin_ratio = m;
    }
    CHECK(argmin_full == argmin_ratio);
    CHECK(argmin_far == argmin_ratio);
  }
}

TEST_CASE("hexagon membership") {
  const double r = 500.0;
  const double apothem = r * std::sqrt(3.0) / 2.0;
  CHECK(point_in_hexagon(0.0, 0.0, r));
  CHECK(point_in_hexagon(0.99 * r, 0.0, r));         // toward a vertex
  CHECK_FALSE(point_in_hexagon(1.01 * r, 0.0, r));
  // perpendicular to an edge: the apothem is the limit
  const double ex = std::cos(std::numbers::pi / 6.0), ey = std::sin(std::numbers::pi / 6.0);
  CHECK(point_in_hexagon(0.99 * apothem * ex, 0.99 * apothem * ey, r));
  CHECK_FALSE(point_in_hexagon(1.01 * apothem * ex, 1.01 * apothem * ey, r));
}

TEST_CASE("topology generation") {
  CellConfig cell;
  cell.num_receivers = 40;

  const Topology a = generate_topology(cell, 42);
  const Topology b = generate_topology(cell, 42);
  REQUIRE(a.receivers.size() == 40);
  for (int m = 0; m < 40; ++m) {
    CHECK(a.receivers[m].id == m);
    CHECK(a.receivers[m].distance_m == b.receivers[m].distance_m);
    CHECK(a.receivers[m].gain == b.receivers[m].gain);
    CHECK(a.receivers[m].noise == b.receivers[m].noise);
    CHECK(a.receivers[m].group == b.receivers[m].group);

    CHECK(a.receivers[m].distance_m >= cell.d_min_m);
    CHECK(a.receivers[m].distance_m <= cell.cell_radius_m);
    CHECK(a.receivers[m].gain > 0.0);
    CHECK(a.receivers[m].noise == thermal_noise_w_per_hz());
    CHECK((a.receivers[m].group == Group::Near) ==
          (a.receivers[m].distance_m < cell.cell_radius_m / 2.0));
  }

  const Topology c = generate_topology(cell, 43);
  bool any_difference = false;
  for (int m = 0; m < 40; ++m) any_difference |= a.receivers[m].gain != c.receivers[m].gain;
  CHECK(any_difference);
}

TEST_CASE("topology generation rejects bad configs") {
  CellConfig cell;
  cell.num_receivers = 0;
  CHECK_THROWS_AS(generate_topology(cell, 1), ConfigError);
  cell.num_receivers = 4;
  cell.cell_radius_m = -1.0;
  CHECK_THROWS_AS(generate_topology(cell, 1), ConfigError);
  cell.cell_radius_m = 500.0;
  cell.d_min_m = 500.0;  // beyond the apothem
  CHECK_THROWS_AS(generate_topology(cell, 1), ConfigError);
}
