#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nomaidnc/bitset.hpp"
#include "nomaidnc/channel.hpp"
#include "nomaidnc/errors.hpp"

namespace nomaidnc {

/// Per-receiver reception state over a block of packets. A packet is either
/// still wanted or already buffered; the Has set is the complement of Wants.
struct SideInfo {
  int num_packets = 0;
  std::vector<DynamicBitset> wants;  ///< indexed by receiver id

  int num_receivers() const { return static_cast<int>(wants.size()); }
  bool has(int receiver, int packet) const { return !wants[receiver].test(packet); }
  bool wants_nothing(int receiver) const { return wants[receiver].none(); }
};

/// An XOR combination of source packets.
struct IdncPacket {
  DynamicBitset members;
};

/// One transmission layer: the coded packet, its rate, and the receivers that
/// can both receive it at that rate and decode a new packet from it.
struct ScheduleLayer {
  std::optional<IdncPacket> packet;
  double rate = 0.0;          ///< bps/Hz
  std::vector<int> targets;   ///< sorted receiver ids

  bool absent() const { return !packet.has_value(); }
};

/// Full per-transmission decision: both layers plus the power split.
struct ScheduleDecision {
  ScheduleLayer far_layer;
  ScheduleLayer near_layer;
  PowerAllocation power;
};

/// Receivers in `eligible` that decode a new packet from q at `rate`: the
/// rate fits their capacity and exactly one member of q is still wanted.
/// `capacities` is indexed by receiver id.
inline std::vector<int> targeted_receivers(const IdncPacket& q, double rate,
                                           std::span<const double> capacities,
                                           const SideInfo& wants,
                                           std::span<const int> eligible) {
  std::vector<int> out;
  for (int m : eligible) {
    require(m >= 0 && m < wants.num_receivers(), "targeted_receivers: receiver id out of range");
    require(static_cast<std::size_t>(m) < capacities.size(),
            "targeted_receivers: capacity missing for receiver");
    if (rate <= capacities[m] && DynamicBitset::and_count(q.members, wants.wants[m]) == 1)
      out.push_back(m);
  }
  return out;
}

/// Removes the decoded member of q from each targeted receiver's Wants set.
/// Every target must decode exactly one packet.
inline SideInfo update_wants(SideInfo wants, const IdncPacket& q, std::span<const int> targets) {
  for (int m : targets) {
    require(m >= 0 && m < wants.num_receivers(), "update_wants: receiver id out of range");
    require(DynamicBitset::and_count(q.members, wants.wants[m]) == 1,
            "update_wants: target does not decode exactly one packet");
    wants.wants[m].and_not(q.members);
  }
  return wants;
}

inline double layer_throughput(const ScheduleLayer& layer) {
  return static_cast<double>(layer.targets.size()) * layer.rate;
}

/// Objective value of a decision: served receivers times rate, per layer.
inline double throughput(const ScheduleDecision& d) {
  return layer_throughput(d.far_layer) + layer_throughput(d.near_layer);
}

/// Throughput margin of the two-layer schedule over the single-layer schedule
/// it was built from, when both use the same near-layer power: the near
/// layer's contribution minus the rate the base layer gives up to the split.
/// A positive value certifies that adding the near layer pays off.
inline double noma_over_ridnc_gain(int near_targets, double min_near_capacity,
                                   int single_layer_targets,
                                   double min_single_capacity_at_near_power) {
  require(near_targets >= 0 && single_layer_targets >= 0,
          "noma_over_ridnc_gain: target counts must be >= 0");
  require(min_near_capacity >= 0.0 && min_single_capacity_at_near_power >= 0.0,
          "noma_over_ridnc_gain: rates must be >= 0");
  return near_targets * min_near_capacity -
         single_layer_targets * min_single_capacity_at_near_power;
}

}  // namespace nomaidnc
