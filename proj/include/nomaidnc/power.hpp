#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "nomaidnc/channel.hpp"
#include "nomaidnc/errors.hpp"

namespace nomaidnc {

/// Worst-case inverse SNR (noise/gain, W/Hz) over each layer's target set.
/// These two receivers pin the layer rates, so the power split is a
/// one-dimensional problem in them alone.
struct Bottleneck {
  double inv_snr_far = 0.0;
  double inv_snr_near = 0.0;
};

/// Feasible near-layer power interval [low, up]; empty when low > up.
struct PowerBounds {
  double low = 0.0;
  double up = 0.0;

  bool feasible() const { return low <= up; }
};

inline double inv_snr(const Receiver& r) { return r.noise / r.gain; }

inline Bottleneck bottlenecks(std::span<const int> targets_far, std::span<const int> targets_near,
                              const Topology& topo) {
  require(!targets_far.empty() && !targets_near.empty(),
          "bottlenecks: target sets must be non-empty");
  Bottleneck b;
  for (int m : targets_far) {
    require(m >= 0 && m < topo.num_receivers(), "bottlenecks: receiver id out of range");
    b.inv_snr_far = std::max(b.inv_snr_far, inv_snr(topo.receivers[m]));
  }
  for (int m : targets_near) {
    require(m >= 0 && m < topo.num_receivers(), "bottlenecks: receiver id out of range");
    b.inv_snr_near = std::max(b.inv_snr_near, inv_snr(topo.receivers[m]));
  }
  return b;
}

/// True when some power split sustains r_min on both layers' bottleneck
/// receivers within the total budget.
inline bool power_split_feasible(const Bottleneck& b, double r_min, double p_max) {
  const double growth = std::exp2(r_min) - 1.0;
  return p_max >= b.inv_snr_far * growth + b.inv_snr_near * std::exp2(r_min) * growth;
}

/// Near-layer power interval on which both layers can sustain r_min, with the
/// base layer taking all remaining power.
inline PowerBounds near_power_bounds(const Bottleneck& b, double r_min, double p_max) {
  const double shrink = std::exp2(-r_min);
  PowerBounds pb;
  pb.low = b.inv_snr_near * (std::exp2(r_min) - 1.0);
  pb.up = p_max * shrink - b.inv_snr_far * (1.0 - shrink);
  return pb;
}

/// Combined throughput of both layers as a function of the near power, the
/// base layer taking all remaining power, each layer pinned to its
/// bottleneck receiver.
inline double split_objective(double p_near, int n_far, int n_near, const Bottleneck& b,
                              double p_max) {
  const double far_term = log2_1p((p_max - p_near) / (p_near + b.inv_snr_far));
  const double near_term = log2_1p(p_near / b.inv_snr_near);
  return n_far * far_term + n_near * near_term;
}

/// Exact derivative of split_objective with respect to the near power.
inline double split_objective_derivative(double p_near, int n_far, int n_near, const Bottleneck& b,
                                         double p_max) {
  (void)p_max;  // the base-layer log collapses to log2(p_max + inv_snr) - log2(p_near + inv_snr)
  return kInvLn2 * (n_near / (p_near + b.inv_snr_near) - n_far / (p_near + b.inv_snr_far));
}

/// Fixed-point iteration on the stationarity condition of split_objective,
/// projected onto [low, up] each step, stopping once the step falls below
/// tol * p_max. The converged point can be a stationary minimum or sit on a
/// bound, so the better interval endpoint is returned whenever it beats the
/// converged point.
inline double ife_optimize(int n_far, int n_near, const Bottleneck& b, const PowerBounds& bounds,
                           double p_max, double init, double tol = 1e-9, int max_iter = 1000,
                           std::vector<double>* iterate_trace = nullptr) {
  require(bounds.feasible(), "ife_optimize: infeasible power bounds");
  require(init >= bounds.low && init <= bounds.up, "ife_optimize: init outside bounds");
  require(n_far >= 0 && n_near >= 0, "ife_optimize: target counts must be >= 0");
  require(tol > 0.0 && max_iter >= 1, "ife_optimize: bad tolerance or iteration cap");

  const auto record = [&](double p) {
    if (iterate_trace) iterate_trace->push_back(p);
  };
  const auto project = [&](double p) { return std::clamp(p, bounds.low, bounds.up); };

  double p = init;
  record(p);
  if (n_near == 0) {
    p = bounds.low;
    record(p);
  } else if (n_far == 0) {
    p = bounds.up;
    record(p);
  } else {
    for (int it = 0; it < max_iter; ++it) {
      const double sinr_near = p / b.inv_snr_near;
      const double sinr_far = (p_max - p) / (p + b.inv_snr_far);
      const double numer = n_near * sinr_near / (1.0 + sinr_near);
      const double denom = n_far * sinr_far * sinr_far / (1.0 + sinr_far) / (p_max + b.inv_snr_far);
      const double next = project(denom > 0.0 ? numer / denom : bounds.up);
      record(next);
      const bool converged = std::abs(next - p) <= tol * p_max;
      p = next;
      if (converged) break;
    }
  }

  double best = p;
  double best_value = split_objective(p, n_far, n_near, b, p_max);
  for (double candidate : {bounds.low, bounds.up}) {
    const double value = split_objective(candidate, n_far, n_near, b, p_max);
    if (value > best_value) {
      best = candidate;
      best_value = value;
    }
  }
  return best;
}

/// Uniform-grid reference maximizer of split_objective over [low, up]:
/// `steps` intervals, both endpoints included. Ties keep the lowest power.
inline double grid_search_near_power(int n_far, int n_near, const Bottleneck& b,
                                     const PowerBounds& bounds, double p_max, long steps) {
  require(bounds.feasible(), "grid_search_near_power: infeasible power bounds");
  require(steps >= 1, "grid_search_near_power: steps must be >= 1");
  double best = bounds.low;
  double best_value = split_objective(bounds.low, n_far, n_near, b, p_max);
  const double span = bounds.up - bounds.low;
  for (long i = 1; i <= steps; ++i) {
    const double p = bounds.low + span * static_cast<double>(i) / static_cast<double>(steps);
    const double value = split_objective(p, n_far, n_near, b, p_max);
    if (value > best_value) {
      best = p;
      best_value = value;
    }
  }
  return best;
}

}  // namespace nomaidnc
