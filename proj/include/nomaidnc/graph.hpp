#pragma once

#include <algorithm>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "nomaidnc/bitset.hpp"
#include "nomaidnc/idnc.hpp"
#include "nomaidnc/textio.hpp"

namespace nomaidnc {

/// Sorted vertex indices forming a pairwise-adjacent set.
using Clique = std::vector<int>;

/// Explicit vertex description for assembling a graph without reception state.
struct VertexSpec {
  int receiver = 0;
  int packet = 0;
  double rate = 0.0;
};

/// Rate-annotated coding graph. A vertex (m, l, r) proposes serving receiver m
/// with packet l at rate r; an edge joins two proposals that one coded
/// transmission can satisfy simultaneously: equal rates, distinct receivers,
/// and each vertex's packet either identical to the other's or already held
/// by the other's receiver. The vertex weight is its rate.
///
/// Equal-rate adjacency means no edge can cross rates, so adjacency is stored
/// per rate block: packed bit rows up to kDenseBlockLimit vertices per block,
/// sorted adjacency lists beyond.
class IdncGraph {
 public:
  struct Vertex {
    int receiver = 0;
    int packet = 0;
    int rate_index = 0;
  };

  static constexpr int kDenseBlockLimit = 20000;
  static constexpr double kRateMergeTolerance = 1e-12;  ///< relative

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  bool empty() const { return vertices_.empty(); }

  const Vertex& vertex(int v) const {
    check_vertex(v);
    return vertices_[v];
  }
  double rate_of(int v) const {
    check_vertex(v);
    return rate_set_[vertices_[v].rate_index];
  }
  /// The weight of a vertex is the rate it proposes.
  double weight_of(int v) const { return rate_of(v); }

  const std::vector<double>& rate_set() const { return rate_set_; }
  std::size_t edge_count() const { return edge_count_; }

  int block_count() const { return static_cast<int>(rate_set_.size()); }
  int block_of(int v) const {
    check_vertex(v);
    return vertices_[v].rate_index;
  }
  std::pair<int, int> block_range(int b) const {
    require(b >= 0 && b < block_count(), "IdncGraph: block index out of range");
    return {block_start_[b], block_start_[b + 1]};
  }
  int block_size(int b) const {
    auto [lo, hi] = block_range(b);
    return hi - lo;
  }
  double block_rate(int b) const {
    require(b >= 0 && b < block_count(), "IdncGraph: block index out of range");
    return rate_set_[b];
  }

  bool adjacent(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    if (u == v) return false;
    const int b = vertices_[u].rate_index;
    if (b != vertices_[v].rate_index) return false;
    if (block_dense_[b]) return dense_rows_[u].test(v - block_start_[b]);
    const auto& row = list_rows_[u];
    return std::binary_search(row.begin(), row.end(), v - block_start_[b]);
  }

  std::size_t degree(int v) const {
    check_vertex(v);
    return block_dense_[vertices_[v].rate_index] ? dense_rows_[v].count() : list_rows_[v].size();
  }

  /// Block-local neighborhood: bit i stands for vertex block_start + i.
  DynamicBitset neighbors_in_block(int v) const {
    check_vertex(v);
    const int b = vertices_[v].rate_index;
    if (block_dense_[b]) return dense_rows_[v];
    DynamicBitset out(static_cast<std::size_t>(block_size(b)));
    for (int u : list_rows_[v]) out.set(u);
    return out;
  }

  /// survivors &= neighbors(v); survivors indexes v's block locally.
  void intersect_neighbors(int v, DynamicBitset& survivors) const {
    check_vertex(v);
    const int b = vertices_[v].rate_index;
    require(survivors.size() == static_cast<std::size_t>(block_size(b)),
            "intersect_neighbors: survivor set size mismatch");
    if (block_dense_[b]) {
      survivors &= dense_rows_[v];
      return;
    }
    DynamicBitset out(survivors.size());
    for (int u : list_rows_[v])
      if (survivors.test(u)) out.set(u);
    survivors = std::move(out);
  }

  /// |neighbors(v) ∩ s| for a block-local set s in v's block.
  std::size_t neighbor_count_in(int v, const DynamicBitset& s) const {
    check_vertex(v);
    const int b = vertices_[v].rate_index;
    require(s.size() == static_cast<std::size_t>(block_size(b)),
            "neighbor_count_in: set size mismatch");
    if (block_dense_[b]) return DynamicBitset::and_count(dense_rows_[v], s);
    std::size_t n = 0;
    for (int u : list_rows_[v]) n += s.test(u) ? 1 : 0;
    return n;
  }

  /// Debug dump: one `m l rate` line per vertex, then one `i j` line per edge
  /// (i, j vertex indices, i < j).
  void dump(std::ostream& os) const {
    for (const Vertex& v : vertices_)
      os << v.receiver << ' ' << v.packet << ' ' << format_double(rate_set_[v.rate_index]) << '\n';
    for (int b = 0; b < block_count(); ++b) {
      const auto [lo, hi] = block_range(b);
      for (int i = lo; i < hi; ++i)
        for (int j = i + 1; j < hi; ++j)
          if (adjacent(i, j)) os << i << ' ' << j << '\n';
    }
  }

  friend IdncGraph build_graph(const SideInfo& wants, std::span<const double> capacities,
                               std::span<const int> eligible);
  friend IdncGraph make_graph(std::span<const VertexSpec> vertices,
                              std::span<const std::pair<int, int>> edges);

 private:
  void check_vertex(int v) const {
    require(v >= 0 && v < vertex_count(), "IdncGraph: vertex index out of range");
  }

  void init_blocks() {
    const int blocks = block_count();
    block_dense_.assign(blocks, true);
    dense_rows_.assign(vertices_.size(), DynamicBitset());
    list_rows_.assign(vertices_.size(), {});
    for (int b = 0; b < blocks; ++b) {
      const int n = block_start_[b + 1] - block_start_[b];
      if (n == 0) continue;
      const bool dense = n <= kDenseBlockLimit;
      block_dense_[b] = dense;
      if (dense)
        for (int v = block_start_[b]; v < block_start_[b + 1]; ++v)
          dense_rows_[v] = DynamicBitset(static_cast<std::size_t>(n));
    }
  }

  void add_edge(int i, int j) {  // i < j, same block
    const int b = vertices_[i].rate_index;
    const int lo = block_start_[b];
    ++edge_count_;
    if (block_dense_[b]) {
      dense_rows_[i].set(j - lo);
      dense_rows_[j].set(i - lo);
    } else {
      list_rows_[i].push_back(j - lo);
      list_rows_[j].push_back(i - lo);
    }
  }

  void sort_list_rows() {
    for (auto& row : list_rows_) std::sort(row.begin(), row.end());
  }

  std::vector<Vertex> vertices_;
  std::vector<double> rate_set_;
  std::vector<int> block_start_;  ///< size rate_set_.size() + 1
  std::vector<bool> block_dense_;
  std::vector<DynamicBitset> dense_rows_;      ///< block-local rows
  std::vector<std::vector<int>> list_rows_;    ///< block-local sorted neighbor ids
  std::size_t edge_count_ = 0;
};

/// Builds the coding graph over `eligible` receivers (sorted, distinct ids).
/// Candidate rates are the receivers' own capacities, deduplicated to a
/// relative tolerance keeping the smallest value of each run; a vertex exists
/// for every (receiver, wanted packet, candidate rate within capacity).
/// Vertices are ordered by (rate index, receiver, packet).
inline IdncGraph build_graph(const SideInfo& wants, std::span<const double> capacities,
                             std::span<const int> eligible) {
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    const int m = eligible[i];
    require(m >= 0 && m < wants.num_receivers(), "build_graph: receiver id out of range");
    require(static_cast<std::size_t>(m) < capacities.size(), "build_graph: capacity missing");
    require(std::isfinite(capacities[m]) && capacities[m] >= 0.0,
            "build_graph: capacities must be finite and >= 0");
    require(i == 0 || eligible[i - 1] < m, "build_graph: eligible ids must be sorted and distinct");
  }

  IdncGraph g;
  std::vector<double> caps;
  caps.reserve(eligible.size());
  for (int m : eligible) caps.push_back(capacities[m]);
  std::sort(caps.begin(), caps.end());
  for (double c : caps)
    if (g.rate_set_.empty() || c > g.rate_set_.back() * (1.0 + IdncGraph::kRateMergeTolerance))
      g.rate_set_.push_back(c);

  const int blocks = g.block_count();
  g.block_start_.assign(blocks + 1, 0);
  for (int b = 0; b < blocks; ++b) {
    g.block_start_[b] = static_cast<int>(g.vertices_.size());
    const double r = g.rate_set_[b];
    for (int m : eligible) {
      if (r > capacities[m]) continue;
      wants.wants[m].for_each_set([&](int l) { g.vertices_.push_back({m, l, b}); });
    }
  }
  g.block_start_[blocks] = static_cast<int>(g.vertices_.size());

  g.init_blocks();
  for (int b = 0; b < blocks; ++b) {
    const auto [lo, hi] = g.block_range(b);
    for (int i = lo; i < hi; ++i) {
      const IdncGraph::Vertex& vi = g.vertices_[i];
      for (int j = i + 1; j < hi; ++j) {
        const IdncGraph::Vertex& vj = g.vertices_[j];
        if (vi.receiver == vj.receiver) continue;
        if (vi.packet == vj.packet ||
            (wants.has(vi.receiver, vj.packet) && wants.has(vj.receiver, vi.packet)))
          g.add_edge(i, j);
      }
    }
  }
  g.sort_list_rows();
  return g;
}

/// Assembles a graph from explicit vertices and edges. Vertices are reordered
/// by (rate, receiver, packet); edge endpoints refer to the input order and
/// must join equal-rate vertices. For tools and tests; build_graph is the
/// semantic constructor.
inline IdncGraph make_graph(std::span<const VertexSpec> vertices,
                            std::span<const std::pair<int, int>> edges) {
  IdncGraph g;
  std::vector<double> rates;
  for (const VertexSpec& v : vertices) {
    require(std::isfinite(v.rate) && v.rate >= 0.0, "make_graph: rates must be finite and >= 0");
    rates.push_back(v.rate);
  }
  std::sort(rates.begin(), rates.end());
  for (double r : rates)
    if (g.rate_set_.empty() || r > g.rate_set_.back() * (1.0 + IdncGraph::kRateMergeTolerance))
      g.rate_set_.push_back(r);

  auto rate_index = [&](double r) {
    for (int b = 0; b < g.block_count(); ++b)
      if (r <= g.rate_set_[b] * (1.0 + IdncGraph::kRateMergeTolerance)) return b;
    throw ContractError("make_graph: rate lookup failed");
  };

  const int n = static_cast<int>(vertices.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<int> block_of(n);
  for (int i = 0; i < n; ++i) block_of[i] = rate_index(vertices[i].rate);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto ka = std::tuple(block_of[a], vertices[a].receiver, vertices[a].packet);
    const auto kb = std::tuple(block_of[b], vertices[b].receiver, vertices[b].packet);
    return ka < kb;
  });
  std::vector<int> new_index(n);
  for (int pos = 0; pos < n; ++pos) new_index[order[pos]] = pos;

  g.block_start_.assign(g.block_count() + 1, 0);
  for (int pos = 0; pos < n; ++pos) {
    const VertexSpec& v = vertices[order[pos]];
    const int b = block_of[order[pos]];
    require(pos == 0 ||
                std::tuple(g.vertices_.back().rate_index, g.vertices_.back().receiver,
                           g.vertices_.back().packet) != std::tuple(b, v.receiver, v.packet),
            "make_graph: duplicate vertex");
    g.vertices_.push_back({v.receiver, v.packet, b});
  }
  for (int b = 0; b < g.block_count(); ++b) {
    int count = 0;
    for (int i = 0; i < n; ++i) count += block_of[i] == b ? 1 : 0;
    g.block_start_[b + 1] = g.block_start_[b] + count;
  }

  g.init_blocks();
  for (const auto& [a, b] : edges) {
    require(a >= 0 && a < n && b >= 0 && b < n && a != b, "make_graph: bad edge endpoint");
    int i = new_index[a], j = new_index[b];
    require(g.vertices_[i].rate_index == g.vertices_[j].rate_index,
            "make_graph: edge joins different rates");
    if (i > j) std::swap(i, j);
    if (!g.adjacent(i, j)) g.add_edge(i, j);
  }
  g.sort_list_rows();
  return g;
}

inline double clique_weight(const IdncGraph& g, const Clique& k) {
  double total = 0.0;
  for (int v : k) total += g.weight_of(v);
  return total;
}

/// Sorted distinct receiver ids across the clique's vertices.
inline std::vector<int> clique_receivers(const IdncGraph& g, const Clique& k) {
  std::vector<int> out;
  out.reserve(k.size());
  for (int v : k) out.push_back(g.vertex(v).receiver);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// True iff the vertices (taken as a set) are pairwise adjacent.
inline bool is_clique(const IdncGraph& g, std::span<const int> s) {
  std::vector<int> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (!g.adjacent(v[i], v[j])) return false;
  return true;
}

/// True iff s is a clique and no outside vertex is adjacent to all of s.
inline bool is_maximal_clique(const IdncGraph& g, std::span<const int> s) {
  if (!is_clique(g, s)) return false;
  if (s.empty()) return g.vertex_count() == 0;
  const int b = g.block_of(s[0]);
  const auto [lo, hi] = g.block_range(b);
  DynamicBitset common(static_cast<std::size_t>(hi - lo));
  bool first = true;
  for (int v : s) {
    if (first) {
      common = g.neighbors_in_block(v);
      first = false;
    } else {
      g.intersect_neighbors(v, common);
    }
  }
  return common.none();
}

/// Converts a clique into a transmission layer: the packet XORs the distinct
/// packet indices, the rate is the clique's shared rate, and the audience is
/// recomputed from the decode conditions (never taken as the clique members).
inline ScheduleLayer clique_to_layer(const IdncGraph& g, const Clique& k, const SideInfo& wants,
                                     std::span<const double> capacities,
                                     std::span<const int> eligible) {
  ScheduleLayer layer;
  if (k.empty()) return layer;
  require(is_clique(g, k), "clique_to_layer: vertex set is not a clique");
  IdncPacket q{DynamicBitset(static_cast<std::size_t>(wants.num_packets))};
  for (int v : k) {
    const auto& vx = g.vertex(v);
    require(vx.packet >= 0 && vx.packet < wants.num_packets,
            "clique_to_layer: packet index out of range");
    q.members.set(vx.packet);
  }
  layer.rate = g.rate_of(k.front());
  layer.targets = targeted_receivers(q, layer.rate, capacities, wants, eligible);
  layer.packet = std::move(q);
  return layer;
}

}  // namespace nomaidnc
