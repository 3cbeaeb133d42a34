#pragma once

// The partial Steiner system process: r-sets arrive in a uniformly random order
// and each is kept iff none of its ell-subsets is already covered.
//
// The random order is realized lazily. Drawing i.i.d. uniform r-sets and keeping
// only first occurrences yields a sequence whose distinct elements appear in a
// uniformly random order: by exchangeability every ordering of the first k
// distinct r-sets is equally likely, so the processed sequence is distributed as
// a prefix of a uniform permutation of all C(n, r) r-sets. This avoids
// materializing the permutation (C(5000, 3) is about 2e10).

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "steiner/combinatorics.hpp"
#include "steiner/hypergraph.hpp"

namespace steiner {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n) + 1), rank_(static_cast<std::size_t>(n) + 1, 0), count_(n) {
    std::iota(parent_.begin(), parent_.end(), Vertex{0});
  }

  Vertex find(Vertex v) {
    Vertex root = v;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[v] != root) {
      const Vertex next = parent_[v];
      parent_[v] = root;
      v = next;
    }
    return root;
  }

  bool unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --count_;
    return true;
  }

  int component_count() const { return count_; }

 private:
  std::vector<Vertex> parent_;
  std::vector<int> rank_;
  int count_;
};

inline void union_edge(UnionFind& uf, const RSet& e) {
  for (std::size_t i = 1; i < e.size(); ++i) uf.unite(e[0], e[i]);
}

struct StopRule {
  enum class Kind { AtConnectivity, AtEdgeCount, AtSaturation };
  Kind kind = Kind::AtConnectivity;
  std::int64_t m = 0;

  static StopRule at_connectivity() { return {Kind::AtConnectivity, 0}; }
  static StopRule at_edge_count(std::int64_t m) { return {Kind::AtEdgeCount, m}; }
  static StopRule at_saturation() { return {Kind::AtSaturation, 0}; }
};

struct ProcessOptions {
  /// Record every distinct r-set in the order it was examined.
  bool record_examined = false;
};

struct ProcessTrace {
  Params params;
  std::uint64_t seed = 0;
  std::vector<RSet> accepted;
  /// Hitting times in accepted-edge time; nullopt when unreached.
  std::optional<std::int64_t> tau_o;
  std::optional<std::int64_t> tau_c;
  std::uint64_t draws_total = 0;
  std::uint64_t rejections = 0;
  std::uint64_t duplicates_skipped = 0;
  /// Every r-set of [n] was examined before the stop rule fired.
  bool saturated = false;
  std::vector<RSet> examined;
};

/// Saturation is only attempted when C(n, r) is at most this.
inline constexpr std::uint64_t kMaxSaturationRsets = 10'000'000;

inline ProcessTrace run_process(const Params& p, std::uint64_t seed, StopRule stop, ProcessOptions opts = {}) {
  p.validate();
  std::optional<std::uint64_t> total;  // C(n, r) when it fits in 64 bits
  try {
    total = p.num_rsets();
  } catch (const std::overflow_error&) {
  }
  if (stop.kind == StopRule::Kind::AtEdgeCount) {
    if (stop.m < 0) throw std::domain_error("run_process: negative edge count");
    if (total && static_cast<std::uint64_t>(stop.m) > *total)
      throw std::domain_error("run_process: AtEdgeCount(" + std::to_string(stop.m) + ") exceeds C(n,r)");
  }
  if (stop.kind == StopRule::Kind::AtSaturation && (!total || *total > kMaxSaturationRsets))
    throw std::domain_error("run_process: AtSaturation needs C(n,r) <= 1e7");

  ProcessTrace trace;
  trace.params = p;
  trace.seed = seed;
  Rng rng(seed);
  PartialSystem sys(p);
  UnionFind uf(p.n);
  std::unordered_set<SubsetKey, SubsetKeyHash> seen;
  std::vector<Vertex> buf;

  auto done = [&]() {
    switch (stop.kind) {
      case StopRule::Kind::AtConnectivity: return trace.tau_c.has_value();
      case StopRule::Kind::AtEdgeCount: return static_cast<std::int64_t>(trace.accepted.size()) >= stop.m;
      case StopRule::Kind::AtSaturation: return false;
    }
    return false;
  };

  while (!done()) {
    if (total && seen.size() == *total) {
      trace.saturated = true;
      break;
    }
    sample_sorted_subset(p.n, p.r, rng, buf);
    ++trace.draws_total;
    if (!seen.insert(make_key(buf, p.n)).second) {
      ++trace.duplicates_skipped;
      continue;
    }
    RSet e(buf);
    if (opts.record_examined) trace.examined.push_back(e);
    if (!sys.try_add(e)) {
      ++trace.rejections;
      continue;
    }
    union_edge(uf, e);
    trace.accepted.push_back(std::move(e));
    const auto m = static_cast<std::int64_t>(trace.accepted.size());
    if (!trace.tau_o && sys.zero_degree_count() == 0) trace.tau_o = m;
    if (!trace.tau_c && uf.component_count() == 1) trace.tau_c = m;
  }
  if (trace.tau_c && (!trace.tau_o || *trace.tau_o > *trace.tau_c))
    throw std::logic_error("run_process: connectivity reached before the last isolated vertex vanished");
  return trace;
}

/// The system formed by the first m accepted edges.
inline PartialSystem stage_snapshot(const ProcessTrace& trace, std::int64_t m) {
  if (m < 0 || static_cast<std::size_t>(m) > trace.accepted.size())
    throw std::domain_error("stage_snapshot: stage " + std::to_string(m) + " beyond " +
                            std::to_string(trace.accepted.size()) + " accepted edges");
  return PartialSystem::from_edges(trace.params,
                                   std::span<const RSet>(trace.accepted.data(), static_cast<std::size_t>(m)));
}

}  // namespace steiner
