#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "nomaidnc/graph.hpp"

namespace nomaidnc {

enum class SearchMethod { Mwv, MwpMwv, Exact };

inline constexpr int kDefaultOracleCap = 64;

/// Greedy clique growth scored by own weight times the summed weight of
/// surviving neighbors, recomputed against the survivors each round. When
/// every candidate scores zero (edgeless survivor set) the heaviest raw
/// weight is taken instead. Ties go to the lowest vertex index, i.e. the
/// lowest (rate, receiver, packet).
inline Clique mwv_search(const IdncGraph& g) {
  const int n = g.vertex_count();
  if (n == 0) return {};

  // First pick over the whole vertex set; all neighbor weights survive.
  int first = -1;
  double first_score = 0.0;
  for (int v = 0; v < n; ++v) {
    // weights are uniform within a rate block, so the neighbor sum is rate * degree
    const double score =
        g.weight_of(v) * g.block_rate(g.block_of(v)) * static_cast<double>(g.degree(v));
    if (score > first_score) {
      first = v;
      first_score = score;
    }
  }
  if (first < 0) {  // every score is zero: fall back to the heaviest vertex
    first = 0;
    for (int v = 1; v < n; ++v)
      if (g.weight_of(v) > g.weight_of(first)) first = v;
  }

  Clique clique{first};
  const int b = g.block_of(first);
  const int lo = g.block_range(b).first;
  const double rate = g.block_rate(b);
  DynamicBitset survivors = g.neighbors_in_block(first);
  while (survivors.any()) {
    int pick = -1;
    double pick_score = 0.0;
    survivors.for_each_set([&](int local) {
      const int v = lo + local;
      const double score =
          g.weight_of(v) * rate * static_cast<double>(g.neighbor_count_in(v, survivors));
      if (score > pick_score) {
        pick = local;
        pick_score = score;
      }
    });
    if (pick < 0) pick = survivors.find_first();  // zero scores; weights tie within the block
    clique.push_back(lo + pick);
    g.intersect_neighbors(lo + pick, survivors);
  }
  std::sort(clique.begin(), clique.end());
  return clique;
}

/// Greedy path through the running common neighborhood of the picks so far,
/// starting from `start`; the walk stops when the common neighborhood is
/// empty, so the result is always a maximal clique containing `start`.
inline Clique mwp_path(const IdncGraph& g, int start) {
  require(start >= 0 && start < g.vertex_count(), "mwp_path: start vertex out of range");
  Clique path{start};
  const int lo = g.block_range(g.block_of(start)).first;
  DynamicBitset common = g.neighbors_in_block(start);
  while (common.any()) {
    int pick = -1;
    double w = -1.0;
    common.for_each_set([&](int local) {
      const double wv = g.weight_of(lo + local);
      if (wv > w) {
        pick = local;
        w = wv;
      }
    });
    path.push_back(lo + pick);
    g.intersect_neighbors(lo + pick, common);
  }
  std::sort(path.begin(), path.end());
  return path;
}

/// Scores every vertex by the total weight of its greedy path, then returns
/// the best-scoring path. Ties go to the lowest starting vertex.
inline Clique mwp_mwv_search(const IdncGraph& g) {
  const int n = g.vertex_count();
  if (n == 0) return {};
  Clique best;
  double best_score = -1.0;
  for (int v = 0; v < n; ++v) {
    Clique path = mwp_path(g, v);
    const double score = clique_weight(g, path);
    if (score > best_score) {
      best = std::move(path);
      best_score = score;
    }
  }
  return best;
}

/// Exhaustive branch-and-bound maximum-weight clique, explored block by block
/// as increasing vertex sequences. Equal-weight ties keep the first clique in
/// depth-first order. Refuses graphs above `max_vertices`; the cap keeps this
/// reference search fast.
inline Clique exact_max_weight_clique(const IdncGraph& g, int max_vertices = kDefaultOracleCap) {
  const int n = g.vertex_count();
  if (n > max_vertices)
    throw OracleRefusedError("exact_max_weight_clique: " + std::to_string(n) +
                             " vertices exceeds cap " + std::to_string(max_vertices));
  if (n == 0) return {};

  Clique best;
  double best_weight = -1.0;
  Clique current;

  for (int b = 0; b < g.block_count(); ++b) {
    const auto [lo, hi] = g.block_range(b);
    const int size = hi - lo;
    if (size == 0) continue;
    const double rate = g.block_rate(b);
    if (rate * size <= best_weight) continue;  // block cannot beat the incumbent

    auto expand = [&](auto&& self, DynamicBitset cands, double weight) -> void {
      if (cands.none()) {
        if (weight > best_weight) {
          best_weight = weight;
          best = current;
        }
        return;
      }
      while (cands.any()) {
        if (weight + rate * static_cast<double>(cands.count()) <= best_weight) return;
        const int local = cands.find_first();
        cands.reset(local);
        current.push_back(lo + local);
        DynamicBitset next = cands;
        g.intersect_neighbors(lo + local, next);
        self(self, std::move(next), weight + g.weight_of(lo + local));
        current.pop_back();
      }
    };
    expand(expand, DynamicBitset(static_cast<std::size_t>(size), true), 0.0);
  }
  std::sort(best.begin(), best.end());
  return best;
}

inline Clique find_max_weight_clique(const IdncGraph& g, SearchMethod method,
                                     int oracle_cap = kDefaultOracleCap) {
  switch (method) {
    case SearchMethod::Mwv:
      return mwv_search(g);
    case SearchMethod::MwpMwv:
      return mwp_mwv_search(g);
    case SearchMethod::Exact:
      return exact_max_weight_clique(g, oracle_cap);
  }
  throw ContractError("find_max_weight_clique: unknown method");
}

struct TwoStageOptions {
  bool strict_sic = false;  ///< near-layer receivers must also withstand the base-layer rate
  int oracle_cap = kDefaultOracleCap;
};

struct TwoStageSchedule {
  ScheduleLayer far_layer;
  ScheduleLayer near_layer;
};

inline std::vector<double> far_capacities(const Topology& topo, const PowerAllocation& p) {
  std::vector<double> caps(topo.receivers.size());
  for (const Receiver& r : topo.receivers) caps[r.id] = capacity_far(r, p);
  return caps;
}

inline std::vector<double> near_capacities(const Topology& topo, const PowerAllocation& p) {
  std::vector<double> caps(topo.receivers.size());
  for (const Receiver& r : topo.receivers) caps[r.id] = capacity_near(r, p);
  return caps;
}

/// Two-pass schedule at a fixed power split: pick the base-layer clique over
/// all receivers, strike its members' decoded packets from their Wants sets,
/// then pick the near clique over the near group against the updated state.
inline TwoStageSchedule two_stage_schedule(const Topology& topo, const SideInfo& wants,
                                           const PowerAllocation& p, SearchMethod method,
                                           const TwoStageOptions& opts = {}) {
  TwoStageSchedule out;
  const std::vector<int> all = topo.all_ids();
  const std::vector<double> caps_far = far_capacities(topo, p);
  const IdncGraph g_far = build_graph(wants, caps_far, all);
  const Clique k_far = find_max_weight_clique(g_far, method, opts.oracle_cap);
  out.far_layer = clique_to_layer(g_far, k_far, wants, caps_far, all);

  SideInfo updated = wants;
  if (!out.far_layer.absent())
    updated = update_wants(wants, *out.far_layer.packet, clique_receivers(g_far, k_far));

  std::vector<int> eligible = topo.near_ids();
  if (opts.strict_sic && !out.far_layer.absent())
    std::erase_if(eligible, [&](int m) { return caps_far[m] < out.far_layer.rate; });

  const std::vector<double> caps_near = near_capacities(topo, p);
  const IdncGraph g_near = build_graph(updated, caps_near, eligible);
  const Clique k_near = find_max_weight_clique(g_near, method, opts.oracle_cap);
  out.near_layer = clique_to_layer(g_near, k_near, updated, caps_near, eligible);
  return out;
}

}  // namespace nomaidnc
