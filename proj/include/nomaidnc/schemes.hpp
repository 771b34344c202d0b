#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string_view>

#include "nomaidnc/clique_search.hpp"
#include "nomaidnc/power.hpp"

namespace nomaidnc {

enum class Scheme {
  NomaIdncMwv,
  NomaIdncMwpMwv,
  RIdncMwv,
  RIdncMwpMwv,
  IdncMwv,
  IdncMwpMwv,
  Rlnc,
  NomaRlnc,
};

inline constexpr std::array<Scheme, 8> kAllSchemes = {
    Scheme::NomaIdncMwv, Scheme::NomaIdncMwpMwv, Scheme::RIdncMwv, Scheme::RIdncMwpMwv,
    Scheme::IdncMwv,     Scheme::IdncMwpMwv,     Scheme::Rlnc,     Scheme::NomaRlnc,
};

inline std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::NomaIdncMwv: return "NOMA-IDNC-MWV";
    case Scheme::NomaIdncMwpMwv: return "NOMA-IDNC-MWP-MWV";
    case Scheme::RIdncMwv: return "R-IDNC-MWV";
    case Scheme::RIdncMwpMwv: return "R-IDNC-MWP-MWV";
    case Scheme::IdncMwv: return "IDNC-MWV";
    case Scheme::IdncMwpMwv: return "IDNC-MWP-MWV";
    case Scheme::Rlnc: return "RLNC";
    case Scheme::NomaRlnc: return "NOMA-RLNC";
  }
  return "?";
}

inline std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes)
    if (scheme_name(s) == name) return s;
  return std::nullopt;
}

struct SchedulerOptions {
  double ao_tol = 1e-6;     ///< relative throughput change that stops the alternation
  int max_ao_iter = 20;
  double init_beta = 0.2;   ///< initial near-layer share of the power budget
  double ftpa_alpha = 0.4;  ///< FTPA decay exponent
  bool strict_sic = false;
  int oracle_cap = kDefaultOracleCap;
};

struct SchemeResult {
  Scheme scheme = Scheme::Rlnc;
  double throughput = 0.0;  ///< bps/Hz
  int ao_iterations = 1;
  std::optional<ScheduleDecision> decision;  ///< absent for the summary-only RLNC schemes
};

namespace detail {

inline std::vector<double> full_power_capacities(const Topology& topo) {
  std::vector<double> caps(topo.receivers.size());
  for (const Receiver& r : topo.receivers) caps[r.id] = single_user_capacity(r, topo.p_max);
  return caps;
}

inline int num_wanting(const SideInfo& wants, std::span<const int> ids) {
  int n = 0;
  for (int m : ids) n += wants.wants[m].any() ? 1 : 0;
  return n;
}

inline double min_capacity_over(std::span<const int> ids, std::span<const double> caps) {
  double r = std::numeric_limits<double>::infinity();
  for (int m : ids) r = std::min(r, caps[m]);
  return r;
}

/// Re-derives a layer at new capacities: the rate drops to the worst previous
/// target's new capacity, then the audience is recomputed from the decode
/// conditions (it can grow or shrink).
inline ScheduleLayer revalidate_layer(const ScheduleLayer& layer, std::span<const double> caps,
                                      const SideInfo& wants, std::span<const int> eligible) {
  if (layer.absent() || layer.targets.empty()) return {};
  ScheduleLayer out;
  out.rate = min_capacity_over(layer.targets, caps);
  out.targets = targeted_receivers(*layer.packet, out.rate, caps, wants, eligible);
  out.packet = layer.packet;
  return out;
}

/// Re-derives a full decision at a new power split, keeping the packets but
/// re-minimizing rates and re-validating both audiences in sequence.
inline ScheduleDecision revalidate_decision(const Topology& topo, const SideInfo& wants,
                                            const TwoStageSchedule& sched,
                                            const PowerAllocation& p,
                                            const SchedulerOptions& opts) {
  ScheduleDecision d;
  d.power = p;
  const std::vector<int> all = topo.all_ids();
  const std::vector<double> caps_far = far_capacities(topo, p);
  d.far_layer = revalidate_layer(sched.far_layer, caps_far, wants, all);

  SideInfo updated = wants;
  if (!d.far_layer.absent())
    updated = update_wants(wants, *d.far_layer.packet, d.far_layer.targets);

  std::vector<int> eligible = topo.near_ids();
  if (opts.strict_sic && !d.far_layer.absent())
    std::erase_if(eligible, [&](int m) { return caps_far[m] < d.far_layer.rate; });

  const std::vector<double> caps_near = near_capacities(topo, p);
  d.near_layer = revalidate_layer(sched.near_layer, caps_near, updated, eligible);
  return d;
}

/// Single-layer rate-aware schedule at full power; shared by R-IDNC and the
/// degenerate alternation cases.
inline ScheduleDecision single_layer_schedule(const Topology& topo, const SideInfo& wants,
                                              SearchMethod method, int oracle_cap) {
  const std::vector<int> all = topo.all_ids();
  const std::vector<double> caps = full_power_capacities(topo);
  const IdncGraph g = build_graph(wants, caps, all);
  const Clique k = find_max_weight_clique(g, method, oracle_cap);
  ScheduleDecision d;
  d.power = {topo.p_max, 0.0};
  d.far_layer = clique_to_layer(g, k, wants, caps, all);
  return d;
}

}  // namespace detail

/// Rate-aware single-layer schedule: one clique search on the full-power
/// coding graph.
inline SchemeResult r_idnc(const Topology& topo, const SideInfo& wants, SearchMethod method,
                           const SchedulerOptions& opts = {}) {
  SchemeResult res;
  res.scheme = method == SearchMethod::MwpMwv ? Scheme::RIdncMwpMwv : Scheme::RIdncMwv;
  const ScheduleDecision d = detail::single_layer_schedule(topo, wants, method, opts.oracle_cap);
  res.throughput = throughput(d);
  res.decision = d;
  return res;
}

/// Physical-layer-blind schedule: the coded packet is picked on a unit-weight
/// coding graph (capacity never enters the selection), broadcast at full
/// power, and the rate falls to the worst capacity among every receiver the
/// packet can serve.
inline SchemeResult idnc_plain(const Topology& topo, const SideInfo& wants, SearchMethod method,
                               const SchedulerOptions& opts = {}) {
  SchemeResult res;
  res.scheme = method == SearchMethod::MwpMwv ? Scheme::IdncMwpMwv : Scheme::IdncMwv;
  const std::vector<int> all = topo.all_ids();
  const std::vector<double> unit(topo.receivers.size(), 1.0);
  const IdncGraph g = build_graph(wants, unit, all);
  const Clique k = find_max_weight_clique(g, method, opts.oracle_cap);

  ScheduleDecision d;
  d.power = {topo.p_max, 0.0};
  if (!k.empty()) {
    IdncPacket q{DynamicBitset(static_cast<std::size_t>(wants.num_packets))};
    for (int v : k) q.members.set(g.vertex(v).packet);
    const std::vector<double> caps = detail::full_power_capacities(topo);
    // rate 0 disables the capacity test: the decode condition alone picks the audience
    std::vector<int> targets = targeted_receivers(q, 0.0, caps, wants, all);
    const double rate = detail::min_capacity_over(targets, caps);
    d.far_layer = ScheduleLayer{std::move(q), rate, std::move(targets)};
  }
  res.throughput = throughput(d);
  res.decision = d;
  return res;
}

/// Random linear coding baseline: every receiver with outstanding packets is
/// served, at the rate of the weakest receiver in the whole cell.
inline SchemeResult rlnc(const Topology& topo, const SideInfo& wants) {
  SchemeResult res;
  res.scheme = Scheme::Rlnc;
  const std::vector<int> all = topo.all_ids();
  const std::vector<double> caps = detail::full_power_capacities(topo);
  const double rate = detail::min_capacity_over(all, caps);
  res.throughput = detail::num_wanting(wants, all) * rate;
  return res;
}

/// Two-layer random linear coding: the budget is split by fractional power
/// allocation keyed to each layer's worst full-power SNR, and each layer runs
/// at its group's minimum capacity. Falls back to plain RLNC when no receiver
/// can run SIC.
inline SchemeResult noma_rlnc(const Topology& topo, const SideInfo& wants,
                              double ftpa_alpha = 0.4) {
  require(ftpa_alpha >= 0.0, "noma_rlnc: ftpa_alpha must be >= 0");
  const std::vector<int> near = topo.near_ids();
  if (near.empty()) {
    SchemeResult res = rlnc(topo, wants);
    res.scheme = Scheme::NomaRlnc;
    return res;
  }

  double snr_all = std::numeric_limits<double>::infinity();
  double snr_near = std::numeric_limits<double>::infinity();
  for (const Receiver& r : topo.receivers) {
    const double snr = topo.p_max * r.gain / r.noise;
    snr_all = std::min(snr_all, snr);
    if (r.group == Group::Near) snr_near = std::min(snr_near, snr);
  }
  const double w_far = std::pow(snr_all, -ftpa_alpha);
  const double w_near = std::pow(snr_near, -ftpa_alpha);

  PowerAllocation p;
  p.p_far = topo.p_max * w_far / (w_far + w_near);
  p.p_near = topo.p_max - p.p_far;

  const std::vector<int> all = topo.all_ids();
  const std::vector<double> caps_far = far_capacities(topo, p);
  const std::vector<double> caps_near = near_capacities(topo, p);
  const double r_far = detail::min_capacity_over(all, caps_far);
  const double r_near = detail::min_capacity_over(near, caps_near);

  SchemeResult res;
  res.scheme = Scheme::NomaRlnc;
  res.throughput =
      detail::num_wanting(wants, all) * r_far + detail::num_wanting(wants, near) * r_near;
  return res;
}

/// Alternates between the two-pass clique schedule at the current power split
/// and the power split optimized for the resulting target sets, re-minimizing
/// rates and re-validating audiences after every power move. The best
/// decision seen wins: the alternation is not guaranteed monotone.
inline SchemeResult noma_idnc(const Topology& topo, const SideInfo& wants, SearchMethod method,
                              const SchedulerOptions& opts = {}) {
  require(opts.init_beta > 0.0 && opts.init_beta < 1.0, "noma_idnc: init_beta must be in (0, 1)");
  require(opts.max_ao_iter >= 1, "noma_idnc: max_ao_iter must be >= 1");
  require(opts.ao_tol > 0.0, "noma_idnc: ao_tol must be > 0");

  SchemeResult res;
  res.scheme = method == SearchMethod::MwpMwv ? Scheme::NomaIdncMwpMwv : Scheme::NomaIdncMwv;

  if (topo.near_ids().empty()) {
    // no SIC-capable receivers: the two-layer problem collapses to R-IDNC
    const ScheduleDecision d = detail::single_layer_schedule(topo, wants, method, opts.oracle_cap);
    res.throughput = throughput(d);
    res.decision = d;
    res.ao_iterations = 1;
    return res;
  }

  const TwoStageOptions ts{opts.strict_sic, opts.oracle_cap};
  PowerAllocation p{topo.p_max * (1.0 - opts.init_beta), topo.p_max * opts.init_beta};

  ScheduleDecision best;
  best.power = p;
  double best_tp = -1.0;
  double prev_tp = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;

  while (iterations < opts.max_ao_iter) {
    ++iterations;
    const TwoStageSchedule sched = two_stage_schedule(topo, wants, p, method, ts);

    ScheduleDecision d;
    if (sched.far_layer.targets.empty() && sched.near_layer.targets.empty()) {
      d.power = p;  // nothing schedulable at any power split
      if (throughput(d) > best_tp) {
        best_tp = throughput(d);
        best = d;
      }
      break;
    }

    bool two_layers = !sched.far_layer.targets.empty() && !sched.near_layer.targets.empty();
    if (two_layers) {
      const Bottleneck b = bottlenecks(sched.far_layer.targets, sched.near_layer.targets, topo);
      if (power_split_feasible(b, topo.r_min, topo.p_max)) {
        const PowerBounds pb = near_power_bounds(b, topo.r_min, topo.p_max);
        const double p_near =
            ife_optimize(static_cast<int>(sched.far_layer.targets.size()),
                         static_cast<int>(sched.near_layer.targets.size()), b, pb, topo.p_max,
                         0.5 * (pb.low + pb.up));
        p = {topo.p_max - p_near, p_near};
        d = detail::revalidate_decision(topo, wants, sched, p, opts);
      } else {
        two_layers = false;
      }
    }
    if (!two_layers) {
      // no viable near layer: hand the whole budget to the base layer
      p = {topo.p_max, 0.0};
      d = detail::revalidate_decision(topo, wants, TwoStageSchedule{sched.far_layer, {}}, p, opts);
    }

    const double tp = throughput(d);
    if (tp > best_tp) {
      best_tp = tp;
      best = d;
    }
    if (!std::isnan(prev_tp) &&
        std::abs(tp - prev_tp) <= opts.ao_tol * std::max(std::abs(tp), std::abs(prev_tp)))
      break;
    prev_tp = tp;
  }

  res.throughput = std::max(best_tp, 0.0);
  res.decision = best;
  res.ao_iterations = iterations;
  return res;
}

inline SchemeResult run_scheme(Scheme scheme, const Topology& topo, const SideInfo& wants,
                               const SchedulerOptions& opts = {}) {
  SchemeResult res;
  switch (scheme) {
    case Scheme::NomaIdncMwv: res = noma_idnc(topo, wants, SearchMethod::Mwv, opts); break;
    case Scheme::NomaIdncMwpMwv: res = noma_idnc(topo, wants, SearchMethod::MwpMwv, opts); break;
    case Scheme::RIdncMwv: res = r_idnc(topo, wants, SearchMethod::Mwv, opts); break;
    case Scheme::RIdncMwpMwv: res = r_idnc(topo, wants, SearchMethod::MwpMwv, opts); break;
    case Scheme::IdncMwv: res = idnc_plain(topo, wants, SearchMethod::Mwv, opts); break;
    case Scheme::IdncMwpMwv: res = idnc_plain(topo, wants, SearchMethod::MwpMwv, opts); break;
    case Scheme::Rlnc: res = rlnc(topo, wants); break;
    case Scheme::NomaRlnc: res = noma_rlnc(topo, wants, opts.ftpa_alpha); break;
  }
  res.scheme = scheme;
  return res;
}

}  // namespace nomaidnc
