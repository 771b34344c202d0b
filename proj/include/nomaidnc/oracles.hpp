#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "nomaidnc/graph.hpp"
#include "nomaidnc/idnc.hpp"

namespace nomaidnc {

/// Result of the exhaustive single-stage search over every packet/rate pair.
struct StageOptimum {
  double value = 0.0;  ///< |targets| * rate
  std::uint32_t packet_mask = 0;
  double rate = 0.0;
  std::vector<int> targets;
};

/// Brute-force reference for one scheduling stage: every non-empty packet
/// combination against every candidate rate (the distinct capacities of the
/// eligible receivers), with the decode conditions evaluated directly from
/// their definition. Exponential in the packet count; reference checks only.
inline StageOptimum exhaustive_stage_optimum(const SideInfo& wants,
                                             std::span<const double> capacities,
                                             std::span<const int> eligible) {
  const int num_packets = wants.num_packets;
  require(num_packets >= 0 && num_packets <= 20, "exhaustive_stage_optimum: too many packets");

  std::vector<double> rates;
  rates.reserve(eligible.size());
  for (int m : eligible) rates.push_back(capacities[m]);
  std::sort(rates.begin(), rates.end());
  rates.erase(std::unique(rates.begin(), rates.end()), rates.end());

  std::vector<std::uint32_t> want_masks;
  want_masks.reserve(eligible.size());
  for (int m : eligible) {
    std::uint32_t mask = 0;
    wants.wants[m].for_each_set([&](int l) { mask |= 1u << l; });
    want_masks.push_back(mask);
  }

  StageOptimum best;
  if (num_packets == 0 || eligible.empty()) return best;
  for (std::uint32_t packet = 1; packet < (1u << num_packets); ++packet) {
    for (double r : rates) {
      std::vector<int> targets;
      for (std::size_t i = 0; i < eligible.size(); ++i) {
        const int m = eligible[i];
        if (r <= capacities[m] && std::popcount(packet & want_masks[i]) == 1) targets.push_back(m);
      }
      const double value = static_cast<double>(targets.size()) * r;
      if (value > best.value) {
        best.value = value;
        best.packet_mask = packet;
        best.rate = r;
        best.targets = std::move(targets);
      }
    }
  }
  return best;
}

/// All-subsets reference for maximum-weight cliques on tiny graphs.
inline double subset_max_clique_weight(const IdncGraph& g) {
  const int n = g.vertex_count();
  require(n <= 20, "subset_max_clique_weight: too many vertices");
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
      if (mask & (1u << v)) members.push_back(v);
    if (!is_clique(g, members)) continue;
    best = std::max(best, clique_weight(g, members));
  }
  return best;
}

/// Exhaustive maximality check: no outside vertex may extend the set.
inline bool brute_force_is_maximal(const IdncGraph& g, std::span<const int> s) {
  if (!is_clique(g, s)) return false;
  for (int u = 0; u < g.vertex_count(); ++u) {
    if (std::find(s.begin(), s.end(), u) != s.end()) continue;
    bool extends = true;
    for (int v : s)
      if (!g.adjacent(u, v)) {
        extends = false;
        break;
      }
    if (extends) return false;
  }
  return true;
}

}  // namespace nomaidnc
