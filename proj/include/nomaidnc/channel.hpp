#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "nomaidnc/errors.hpp"
#include "nomaidnc/rng.hpp"

namespace nomaidnc {

/// Near receivers sit inside half the cell radius and can run SIC; far ones
/// decode the base layer only.
enum class Group { Near, Far };

/// One downlink receiver with its block-fading channel realization. The fade
/// is drawn once per topology and held constant for the transmission.
struct Receiver {
  int id = 0;
  double distance_m = 0.0;
  double gain = 0.0;   ///< linear power gain |h|^2 (path loss x Rayleigh fade)
  double noise = 0.0;  ///< linear noise power density sigma^2, W/Hz
  Group group = Group::Far;
};

/// Transmit power split between the two superposed layers, in W/Hz.
struct PowerAllocation {
  double p_far = 0.0;
  double p_near = 0.0;

  double total() const { return p_far + p_near; }
};

struct Topology {
  std::vector<Receiver> receivers;
  double p_max = 0.0;  ///< W/Hz
  double r_min = 0.0;  ///< bps/Hz
  double cell_radius_m = 0.0;

  int num_receivers() const { return static_cast<int>(receivers.size()); }

  std::vector<int> all_ids() const {
    std::vector<int> ids(receivers.size());
    for (std::size_t i = 0; i < receivers.size(); ++i) ids[i] = receivers[i].id;
    return ids;
  }

  std::vector<int> group_ids(Group g) const {
    std::vector<int> ids;
    for (const Receiver& r : receivers)
      if (r.group == g) ids.push_back(r.id);
    return ids;
  }

  std::vector<int> near_ids() const { return group_ids(Group::Near); }
};

inline constexpr double kInvLn2 = 1.4426950408889634074;

/// log2(1 + x) with full relative precision even at tiny x.
inline double log2_1p(double x) { return std::log1p(x) * kInvLn2; }

inline double dbm_per_hz_to_w_per_hz(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Thermal noise density, -174 dBm/Hz, in linear W/Hz.
inline double thermal_noise_w_per_hz() { return dbm_per_hz_to_w_per_hz(-174.0); }

/// Urban-macro distance-dependent loss in dB; distance in meters.
inline double path_loss_db(double distance_m) {
  return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
}

/// Regular hexagon centered at the origin with a vertex on the +x axis.
inline bool point_in_hexagon(double x, double y, double circumradius) {
  const double apothem = circumradius * std::sqrt(3.0) / 2.0;
  for (int k = 0; k < 6; ++k) {
    const double a = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
    if (x * std::cos(a) + y * std::sin(a) > apothem) return false;
  }
  return true;
}

struct CellConfig {
  int num_receivers = 0;
  double cell_radius_m = 500.0;
  double p_max = dbm_per_hz_to_w_per_hz(-42.6);  ///< W/Hz
  double r_min = 0.4;                            ///< bps/Hz
  double d_min_m = 10.0;  ///< keeps receivers off the path-loss singularity at the BS
};

/// Drops receivers uniformly in the hexagonal cell (rejection sampling from
/// the bounding circle), at least d_min from the base station, draws one
/// unit-mean exponential power fade each, and assigns groups by the
/// half-radius rule. Deterministic for a given seed.
inline Topology generate_topology(const CellConfig& cfg, std::uint64_t seed) {
  if (cfg.num_receivers < 1) throw ConfigError("num_receivers must be >= 1");
  if (!(cfg.cell_radius_m > 0.0)) throw ConfigError("cell_radius_m must be > 0");
  if (!(cfg.p_max > 0.0)) throw ConfigError("p_max must be > 0");
  if (cfg.r_min < 0.0) throw ConfigError("r_min must be >= 0");
  const double apothem = cfg.cell_radius_m * std::sqrt(3.0) / 2.0;
  if (cfg.d_min_m < 0.0 || cfg.d_min_m >= apothem)
    throw ConfigError("d_min_m must lie in [0, cell apothem)");

  Topology topo;
  topo.p_max = cfg.p_max;
  topo.r_min = cfg.r_min;
  topo.cell_radius_m = cfg.cell_radius_m;
  topo.receivers.reserve(cfg.num_receivers);

  Rng rng(seed);
  const double noise = thermal_noise_w_per_hz();
  for (int id = 0; id < cfg.num_receivers; ++id) {
    double dist = 0.0;
    bool placed = false;
    for (long attempt = 0; attempt < 1000000; ++attempt) {
      const double r = cfg.cell_radius_m * std::sqrt(rng.uniform());
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      const double x = r * std::cos(theta);
      const double y = r * std::sin(theta);
      if (r >= cfg.d_min_m && point_in_hexagon(x, y, cfg.cell_radius_m)) {
        dist = r;
        placed = true;
        break;
      }
    }
    if (!placed) throw ConfigError("could not place receiver; d_min_m leaves no room");

    Receiver rc;
    rc.id = id;
    rc.distance_m = dist;
    rc.gain = std::pow(10.0, -path_loss_db(dist) / 10.0) * rng.exponential();
    rc.noise = noise;
    rc.group = dist < cfg.cell_radius_m / 2.0 ? Group::Near : Group::Far;
    topo.receivers.push_back(rc);
  }
  return topo;
}

/// Achievable rate of the base-layer signal at r: the superposed near-layer
/// power is interference.
inline double capacity_far(const Receiver& r, const PowerAllocation& p) {
  return log2_1p(p.p_far * r.gain / (p.p_near * r.gain + r.noise));
}

/// Achievable rate of the near-layer signal once the base layer has been
/// cancelled.
inline double capacity_near(const Receiver& r, const PowerAllocation& p) {
  return log2_1p(p.p_near * r.gain / r.noise);
}

inline double single_user_capacity(const Receiver& r, double p_total) {
  return log2_1p(p_total * r.gain / r.noise);
}

}  // namespace nomaidnc
