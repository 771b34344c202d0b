#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nomaidnc/power.hpp"
#include "nomaidnc/rng.hpp"

using namespace nomaidnc;

TEST_CASE("bottleneck extraction") {
  Topology topo;
  topo.receivers = {
      {0, 100.0, 1.0, 1.0, Group::Near},  // inv snr 1
      {1, 100.0, 2.0, 1.0, Group::Near},  // inv snr 0.5
      {2, 100.0, 0.5, 1.0, Group::Far},   // inv snr 2
  };
  topo.p_max = 10.0;

  const std::vector<int> far{0, 1};
  const std::vector<int> near{1};
  const Bottleneck b = bottlenecks(far, near, topo);
  CHECK(b.inv_snr_far == 1.0);
  CHECK(b.inv_snr_near == 0.5);

  const Bottleneck single = bottlenecks(std::vector<int>{2}, near, topo);
  CHECK(single.inv_snr_far == 2.0);

  CHECK_THROWS_AS(bottlenecks(std::vector<int>{}, near, topo), ContractError);
}

TEST_CASE("feasibility threshold") {
  const Bottleneck b{1.0, 1.0};
  CHECK(power_split_feasible(b, 0.0, 0.0));
  CHECK(power_split_feasible(b, 1.0, 3.0));
  CHECK_FALSE(power_split_feasible(b, 1.0, 2.999));
}

TEST_CASE("near-power interval") {
  const Bottleneck b{1.0, 1.0};

  const PowerBounds at_zero = near_power_bounds(b, 0.0, 7.0);
  CHECK(at_zero.low == 0.0);
  CHECK(at_zero.up == 7.0);

  const PowerBounds pinch = near_power_bounds(b, 1.0, 3.0);
  CHECK(pinch.low == Catch::Approx(1.0).margin(1e-12));
  CHECK(pinch.up == Catch::Approx(1.0).margin(1e-12));

  const PowerBounds open = near_power_bounds(b, 1.0, 4.0);
  CHECK(open.low == Catch::Approx(1.0).margin(1e-12));
  CHECK(open.up == Catch::Approx(1.5).margin(1e-12));
}

TEST_CASE("feasibility matches interval emptiness") {
  Rng rng(51);
  for (int i = 0; i < 2000; ++i) {
    Bottleneck b;
    b.inv_snr_far = std::pow(10.0, rng.uniform(-12.0, -7.0));
    b.inv_snr_near = std::pow(10.0, rng.uniform(-13.0, -8.0));
    const double r_min = rng.uniform(0.0, 2.0);
    const double p_max = std::pow(10.0, rng.uniform(-9.0, -6.0));
    CHECK(power_split_feasible(b, r_min, p_max) ==
          near_power_bounds(b, r_min, p_max).feasible());
  }
}

TEST_CASE("split objective endpoints") {
  const Bottleneck b{1.0, 2.0};
  const double p_max = 10.0;
  CHECK(split_objective(0.0, 3, 2, b, p_max) ==
        Catch::Approx(3.0 * std::log2(1.0 + p_max / b.inv_snr_far)).epsilon(1e-12));

  // without a near layer the objective only loses from diverting power
  double prev = split_objective(0.0, 3, 0, b, p_max);
  for (double p = 0.5; p <= 5.0; p += 0.5) {
    const double now = split_objective(p, 3, 0, b, p_max);
    CHECK(now < prev);
    prev = now;
  }
}

TEST_CASE("closed-form derivative matches central differences") {
  Rng rng(52);
  for (int i = 0; i < 500; ++i) {
    Bottleneck b;
    b.inv_snr_far = std::pow(10.0, rng.uniform(-11.0, -8.0));
    b.inv_snr_near = std::pow(10.0, rng.uniform(-12.0, -9.0));
    const int n_far = rng.uniform_int(1, 10);
    const int n_near = rng.uniform_int(1, 6);
    const double p_max = std::pow(10.0, rng.uniform(-8.3, -7.3));
    const double p = rng.uniform(0.05, 0.8) * p_max;
    const double h = p_max * 1e-7;

    const double fd = (split_objective(p + h, n_far, n_near, b, p_max) -
                       split_objective(p - h, n_far, n_near, b, p_max)) /
                      (2.0 * h);
    const double an = split_objective_derivative(p, n_far, n_near, b, p_max);
    const double scale =
        kInvLn2 * (n_far / (p + b.inv_snr_far) + n_near / (p + b.inv_snr_near));
    CHECK(std::abs(fd - an) <= 1e-6 * std::max({std::abs(an), std::abs(fd), 1e-6 * scale}));
  }
}

TEST_CASE("fixed-point optimizer degenerate directions") {
  const Bottleneck b{2e-10, 5e-11};
  const double p_max = 5e-8;
  const PowerBounds pb = near_power_bounds(b, 0.4, p_max);
  REQUIRE(pb.feasible());
  REQUIRE(pb.low > 0.0);

  CHECK(ife_optimize(4, 0, b, pb, p_max, 0.5 * (pb.low + pb.up)) == pb.low);
  CHECK(ife_optimize(0, 3, b, pb, p_max, 0.5 * (pb.low + pb.up)) == pb.up);
  CHECK_THROWS_AS(ife_optimize(4, 2, b, PowerBounds{2.0, 1.0}, p_max, 1.5), ContractError);
  CHECK_THROWS_AS(ife_optimize(4, 2, b, pb, p_max, pb.up * 2.0), ContractError);
}

TEST_CASE("grid search degenerate directions") {
  const Bottleneck b{2e-10, 5e-11};
  const double p_max = 5e-8;
  const PowerBounds pb = near_power_bounds(b, 0.4, p_max);
  CHECK(grid_search_near_power(4, 0, b, pb, p_max, 1000) == pb.low);
  const PowerBounds collapsed{1e-9, 1e-9};
  CHECK(grid_search_near_power(3, 2, b, collapsed, p_max, 1000) == 1e-9);
}

TEST_CASE("fixed point against the grid reference") {
  Rng rng(53);
  int value_hits = 0, arg_hits = 0, total = 0;
  while (total < 150) {
    Bottleneck b;
    b.inv_snr_far = std::pow(10.0, rng.uniform(-11.0, -8.0));
    b.inv_snr_near = std::pow(10.0, rng.uniform(-12.0, -9.0));
    const int n_far = rng.uniform_int(1, 10);
    const int n_near = rng.uniform_int(1, 6);
    const double p_max = std::pow(10.0, rng.uniform(-8.3, -7.3));
    const double r_min = 0.4;
    if (!power_split_feasible(b, r_min, p_max)) continue;
    const PowerBounds pb = near_power_bounds(b, r_min, p_max);
    ++total;

    std::vector<double> trace;
    const double p_ife =
        ife_optimize(n_far, n_near, b, pb, p_max, 0.5 * (pb.low + pb.up), 1e-9, 1000, &trace);
    for (double it : trace) {
      CHECK(it >= pb.low - 1e-18);
      CHECK(it <= pb.up + 1e-18);
    }

    // stationarity at interior converged points; outward slope on the bounds
    const double span = pb.up - pb.low;
    const double deriv = split_objective_derivative(p_ife, n_far, n_near, b, p_max);
    const double scale =
        kInvLn2 * (n_far / (p_ife + b.inv_snr_far) + n_near / (p_ife + b.inv_snr_near));
    const bool converged =
        trace.size() >= 2 && std::abs(trace.back() - trace[trace.size() - 2]) <= 1e-9 * p_max;
    if (p_ife > pb.low + 1e-6 * span && p_ife < pb.up - 1e-6 * span) {
      if (converged) CHECK(std::abs(deriv) <= 1e-6 * scale);
    } else if (p_ife <= pb.low + 1e-6 * span) {
      CHECK(deriv <= 1e-6 * scale);
    } else {
      CHECK(deriv >= -1e-6 * scale);
    }

    const double p_grid = grid_search_near_power(n_far, n_near, b, pb, p_max, 100000);
    const double v_ife = split_objective(p_ife, n_far, n_near, b, p_max);
    const double v_grid = split_objective(p_grid, n_far, n_near, b, p_max);
    value_hits += v_ife >= v_grid - 1e-6 ? 1 : 0;
    arg_hits += std::abs(p_ife - p_grid) <= 1e-4 * p_max ? 1 : 0;
  }
  CHECK(value_hits >= 147);  // 98%
  CHECK(arg_hits >= 142);    // 95%
}
