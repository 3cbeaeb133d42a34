#pragma once

// Forward/reverse cluster switchings between S+(t) and S+(t-1), and the
// e_i-displacement / e_i-replacement moves, with exact counters.
//
// A forward switching from H in S+(t) removes a cluster {e, f}, then inserts an
// r-set a with no ell vertices inside any remaining edge, then an r-set b with no
// ell vertices inside any edge of the result (ordered insertions). A reverse
// switching from H'' in S+(t-1) removes two cluster-free edges in order, picks a
// (2r - ell)-set T with no ell vertices inside any remaining edge, and places a
// cluster inside T. Re-inserting a just-removed edge is permitted.
//
// Counts are reported twice: `local` counts every move satisfying the
// constraints above; `exact` counts only moves whose result lies in the target
// class. The exact counts are the ones related by double counting.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "steiner/clusters.hpp"
#include "steiner/combinatorics.hpp"
#include "steiner/exact.hpp"
#include "steiner/hypergraph.hpp"

namespace steiner {

using KeySet = std::unordered_set<SubsetKey, SubsetKeyHash>;

/// Calls f(X) for every r-set X of [n] with |X & a| >= ell (a itself included).
template <typename F>
void for_each_rset_meeting(std::span<const Vertex> a, int n, int r, int ell, F&& f) {
  std::vector<Vertex> outside;
  for (Vertex v = 1; v <= static_cast<Vertex>(n); ++v)
    if (!std::binary_search(a.begin(), a.end(), v)) outside.push_back(v);
  std::vector<Vertex> x;
  for (int j = ell; j <= std::min<int>(r, static_cast<int>(a.size())); ++j) {
    if (r - j > static_cast<int>(outside.size())) continue;
    for_each_subset(a, static_cast<std::size_t>(j), [&](std::span<const Vertex> inside) {
      for_each_subset(outside, static_cast<std::size_t>(r - j), [&](std::span<const Vertex> rest) {
        x.assign(inside.begin(), inside.end());
        x.insert(x.end(), rest.begin(), rest.end());
        std::sort(x.begin(), x.end());
        f(std::span<const Vertex>(x));
        return true;
      });
      return true;
    });
  }
}

/// True when no ell vertices of x lie inside a single one of `edges`.
inline bool avoids_ell_collision(std::span<const Vertex> x, std::span<const RSet> edges, int ell) {
  for (const auto& h : edges)
    if (intersection_size(x, h.span()) >= static_cast<std::size_t>(ell)) return false;
  return true;
}

/// Number of ways to place a cluster (two r-sets sharing exactly ell vertices)
/// with union equal to a fixed (2r - ell)-set: C(2r-ell, ell) C(2r-2ell, r-ell) / 2.
inline std::uint64_t cluster_placements(int r, int ell) {
  return binomial_u64(2 * r - ell, ell) * binomial_u64(2 * r - 2 * ell, r - ell) / 2;
}

/// Every unordered cluster {e, f} with e | f = T (T of size 2r - ell).
inline std::vector<std::pair<RSet, RSet>> enumerate_cluster_placements(std::span<const Vertex> T, int r, int ell) {
  std::vector<std::pair<RSet, RSet>> out;
  for_each_subset(T, static_cast<std::size_t>(ell), [&](std::span<const Vertex> shared) {
    std::vector<Vertex> rest;
    for (Vertex v : T)
      if (!std::binary_search(shared.begin(), shared.end(), v)) rest.push_back(v);
    for_each_subset(rest, static_cast<std::size_t>(r - ell), [&](std::span<const Vertex> half) {
      std::vector<Vertex> e(shared.begin(), shared.end()), f(shared.begin(), shared.end());
      e.insert(e.end(), half.begin(), half.end());
      for (Vertex v : rest)
        if (!std::binary_search(half.begin(), half.end(), v)) f.push_back(v);
      RSet re(e), rf(f);
      if (re < rf) out.emplace_back(std::move(re), std::move(rf));
      return true;
    });
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Count of r-sets avoiding ell-collisions

struct PrCount {
  std::uint64_t exact = 0;
  double predicted = 0.0;
  /// Bonferroni bounds from single and pairwise (edge, ell-set) terms.
  double lower = 0.0;
  double upper = 0.0;
  bool enumerated = false;  // true: full scan of all r-sets; false: union of collision sets
};

inline constexpr std::uint64_t kMaxScanRsets = 1'000'000;
inline constexpr std::uint64_t kMaxCollisionWork = 50'000'000;

inline double predicted_free_rsets(const Params& p, std::int64_t m) {
  return static_cast<double>(p.num_rsets()) -
         static_cast<double>(binomial_u64(p.r, p.ell)) * static_cast<double>(m) * static_cast<double>(binomial_u64(p.n - p.ell, p.r - p.ell));
}

/// |P_r|: r-sets distinct from e_i with no ell vertices inside any single edge of
/// `edges`. Exact either way: by scanning all r-sets when C(n, r) <= 1e6, else as
/// N minus the size of the union of the per-edge collision sets.
inline PrCount count_Pr(std::span<const RSet> edges, const Params& p, const RSet& e_i, std::int64_t m_for_prediction) {
  check_rset(p, e_i);
  const std::uint64_t N = p.num_rsets();
  PrCount out;
  out.predicted = predicted_free_rsets(p, m_for_prediction);

  if (N <= kMaxScanRsets) {
    out.enumerated = true;
    std::vector<Vertex> ground(static_cast<std::size_t>(p.n));
    std::iota(ground.begin(), ground.end(), Vertex{1});
    for_each_subset(ground, static_cast<std::size_t>(p.r), [&](std::span<const Vertex> x) {
      if (!std::equal(x.begin(), x.end(), e_i.begin()) && avoids_ell_collision(x, edges, p.ell)) ++out.exact;
      return true;
    });
  } else {
    const double per_edge = static_cast<double>(binomial_u64(p.r, p.ell)) * static_cast<double>(binomial_u64(p.n, p.r - p.ell));
    if (per_edge * static_cast<double>(edges.size()) > static_cast<double>(kMaxCollisionWork))
      throw InfeasibleError("count_Pr: collision-set enumeration exceeds budget");
    KeySet bad;
    for (const auto& h : edges)
      for_each_rset_meeting(h.span(), p.n, p.r, p.ell, [&](std::span<const Vertex> x) { bad.insert(make_key(x, p.n)); });
    bad.insert(make_key(e_i.span(), p.n));
    out.exact = N - bad.size();
  }

  // Bonferroni: singles over (edge, ell-subset) pairs, pairwise intersections exact.
  std::vector<std::vector<Vertex>> ell_sets;
  for (const auto& h : edges)
    for (auto& s : ell_subsets(h, p.ell)) ell_sets.push_back(std::move(s));
  const double singles = static_cast<double>(ell_sets.size()) * static_cast<double>(binomial_u64(p.n - p.ell, p.r - p.ell));
  double pairs = 0.0;
  for (std::size_t i = 0; i < ell_sets.size(); ++i) {
    for (std::size_t j = i + 1; j < ell_sets.size(); ++j) {
      const auto u = static_cast<int>(2 * p.ell - static_cast<int>(intersection_size(ell_sets[i], ell_sets[j])));
      if (u <= p.r) pairs += static_cast<double>(binomial_u64(p.n - u, p.r - u));
    }
  }
  out.lower = static_cast<double>(N) - 1.0 - singles;
  out.upper = static_cast<double>(N) - singles + pairs;
  return out;
}

inline PrCount count_Pr(const GeneralGraph& g, const RSet& e_i) {
  return count_Pr(g.edges(), g.params(), e_i, static_cast<std::int64_t>(g.edge_count()));
}

inline PrCount count_Pr(const PartialSystem& g, const RSet& e_i) {
  return count_Pr(g.edges(), g.params(), e_i, static_cast<std::int64_t>(g.edge_count()));
}

// ---------------------------------------------------------------------------
// Forward and reverse switchings

struct SwitchingCount {
  std::uint64_t exact = 0;
  std::uint64_t local = 0;
  double predicted = 0.0;
  std::size_t t = 0;  // class index of the input graph
};

namespace detail {

inline ClassLabel require_class(const GeneralGraph& g, std::int64_t M, const char* who) {
  ClassLabel label = classify_splus(g, M);
  if (!label.in_class()) throw std::domain_error(std::string(who) + ": graph is not in any S+ class (" + label.reason + ")");
  return label;
}

inline std::vector<RSet> all_rsets_checked(const Params& p, const char* who) {
  if (p.num_rsets() > kMaxScanRsets) throw InfeasibleError(std::string(who) + ": C(n,r) exceeds the 1e6 scan budget");
  return all_rsets(p.n, p.r);
}

/// Sum over a in S of |{b in S : |a & b| < ell}|.
inline std::uint64_t ordered_compatible_pairs(const std::vector<const RSet*>& S, const Params& p) {
  KeySet keys;
  for (const RSet* x : S) keys.insert(make_key(x->span(), p.n));
  std::uint64_t total = 0;
  for (const RSet* a : S) {
    std::uint64_t meeting = 0;
    for_each_rset_meeting(a->span(), p.n, p.r, p.ell, [&](std::span<const Vertex> x) {
      if (keys.count(make_key(x, p.n))) ++meeting;
    });
    total += S.size() - meeting;
  }
  return total;
}

}  // namespace detail

inline SwitchingCount count_forward_switchings(const GeneralGraph& g, std::int64_t M) {
  const Params& p = g.params();
  const ClassLabel label = detail::require_class(g, M, "count_forward_switchings");
  SwitchingCount out;
  out.t = label.t;
  const double N = static_cast<double>(p.num_rsets());
  out.predicted = static_cast<double>(label.t) * N * N;
  if (label.t == 0) return out;

  const auto rsets = detail::all_rsets_checked(p, "count_forward_switchings");
  const ClusterCensus census = cluster_census(g);
  const auto ell = static_cast<std::size_t>(p.ell);
  for (std::size_t ci = 0; ci < census.clusters.size(); ++ci) {
    const auto& c = census.clusters[ci];
    std::vector<RSet> rest;
    for (EdgeId id = 0; id < g.edge_count(); ++id)
      if (id != c[0] && id != c[1]) rest.push_back(g.edge(id));
    std::vector<std::vector<Vertex>> other_unions;
    for (std::size_t cj = 0; cj < census.clusters.size(); ++cj)
      if (cj != ci) other_unions.push_back(vertex_union(g.edges(), census.clusters[cj]));

    std::vector<const RSet*> local, valid;
    for (const auto& x : rsets) {
      if (!avoids_ell_collision(x.span(), rest, p.ell)) continue;
      local.push_back(&x);
      bool keeps_class = true;
      for (const auto& u : other_unions)
        if (intersection_size(x.span(), u) >= ell) keeps_class = false;
      if (keeps_class) valid.push_back(&x);
    }
    out.local += detail::ordered_compatible_pairs(local, p);
    out.exact += detail::ordered_compatible_pairs(valid, p);
  }
  return out;
}

inline SwitchingCount count_forward_switchings(const GeneralGraph& g) {
  return count_forward_switchings(g, capacity_M(g.params(), static_cast<std::int64_t>(g.edge_count())));
}

inline constexpr std::uint64_t kMaxReverseScan = 10'000'000;

/// Predicted (2r-ell)! / (ell! (r-ell)!^2) C(m - 2s, 2) C(n, 2r-ell) for a graph with s clusters.
inline double predicted_reverse_switchings(const Params& p, std::int64_t m, std::int64_t s) {
  const double free_edges = static_cast<double>(m - 2 * s);
  if (free_edges < 2) return 0.0;
  const double coeff = factorial_real(2 * p.r - p.ell) / (factorial_real(p.ell) * factorial_real(p.r - p.ell) * factorial_real(p.r - p.ell));
  return coeff * free_edges * (free_edges - 1) / 2.0 * std::exp(log_binomial(p.n, 2 * p.r - p.ell).log_magnitude());
}

inline SwitchingCount count_reverse_switchings(const GeneralGraph& g, std::int64_t M) {
  const Params& p = g.params();
  const ClassLabel label = detail::require_class(g, M, "count_reverse_switchings");
  SwitchingCount out;
  out.t = label.t;
  const auto m = static_cast<std::int64_t>(g.edge_count());
  out.predicted = predicted_reverse_switchings(p, m, static_cast<std::int64_t>(label.t));

  const ClusterCensus census = cluster_census(g);
  std::vector<bool> in_cluster(g.edge_count(), false);
  std::vector<std::vector<Vertex>> unions;
  for (const auto& c : census.clusters) {
    for (EdgeId id : c) in_cluster[id] = true;
    unions.push_back(vertex_union(g.edges(), c));
  }
  std::vector<EdgeId> free_ids;
  for (EdgeId id = 0; id < g.edge_count(); ++id)
    if (!in_cluster[id]) free_ids.push_back(id);
  const std::uint64_t f = free_ids.size();
  if (f < 2) return out;

  const int tsize = 2 * p.r - p.ell;
  if (binomial_u64(p.n, tsize) > kMaxReverseScan) throw InfeasibleError("count_reverse_switchings: C(n, 2r-ell) exceeds budget");
  const bool room_for_cluster = static_cast<std::int64_t>(label.t) + 1 <= M;
  const std::uint64_t placements = cluster_placements(p.r, p.ell);
  const auto ell = static_cast<std::size_t>(p.ell);

  std::vector<Vertex> ground(static_cast<std::size_t>(p.n));
  std::iota(ground.begin(), ground.end(), Vertex{1});
  for_each_subset(ground, static_cast<std::size_t>(tsize), [&](std::span<const Vertex> T) {
    // T is usable for the ordered pair (a, b) iff every edge meeting T in >= ell
    // vertices is a or b.
    std::size_t blockers = 0;
    bool cluster_blocks = false;
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
      if (intersection_size(T, g.edge(id).span()) >= ell) {
        if (in_cluster[id]) cluster_blocks = true;
        ++blockers;
      }
    }
    if (cluster_blocks || blockers > 2) return true;
    std::uint64_t pairs = 0;
    if (blockers == 0) pairs = f * (f - 1);
    else if (blockers == 1) pairs = 2 * (f - 1);
    else pairs = 2;
    out.local += pairs * placements;
    bool keeps_class = room_for_cluster;
    for (const auto& u : unions)
      if (intersection_size(T, u) > 1) keeps_class = false;
    if (keeps_class) out.exact += pairs * placements;
    return true;
  });
  return out;
}

inline SwitchingCount count_reverse_switchings(const GeneralGraph& g) {
  return count_reverse_switchings(g, capacity_M(g.params(), static_cast<std::int64_t>(g.edge_count())));
}

// ---------------------------------------------------------------------------
// Moves

struct SwitchingMove {
  enum class Kind { Forward, Reverse, Displacement, Replacement };
  Kind kind = Kind::Forward;
  /// Forward: the cluster {e, f}. Reverse: (a, b) in removal order.
  /// Displacement: {e_i}. Replacement: the edge taken out.
  std::vector<RSet> removed;
  /// Forward: (a, b) in insertion order. Reverse: the new cluster {e, f}.
  /// Displacement: the new position of e_i. Replacement: {e_i}.
  std::vector<RSet> inserted;
  /// Replacement only: edges e_1..e_{i-1} that may not be taken out.
  std::vector<RSet> protected_edges;
};

namespace detail {

inline EdgeId find_edge_or_throw(const GeneralGraph& g, const RSet& e, const char* what) {
  for (EdgeId id = 0; id < g.edge_count(); ++id)
    if (g.edge(id) == e) return id;
  throw std::invalid_argument(std::string(what) + ": {" + e.to_string() + "} is not an edge");
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument("apply_switching: " + msg);
}

inline GeneralGraph without(const GeneralGraph& g, std::vector<RSet> removed) {
  GeneralGraph out(g.params());
  for (const auto& e : g.edges())
    if (std::find(removed.begin(), removed.end(), e) == removed.end()) out.add_edge(e);
  return out;
}

}  // namespace detail

/// Applies a move after checking its constraints; throws std::invalid_argument
/// naming the first failed one. Forward/Reverse also require the result to land
/// in S+(t-1) / S+(t+1) (with M computed from the edge count).
inline GeneralGraph apply_switching(const GeneralGraph& g, const SwitchingMove& mv) {
  const Params& p = g.params();
  for (const auto& e : mv.inserted) check_rset(p, e);
  const std::int64_t M = capacity_M(p, static_cast<std::int64_t>(g.edge_count()));
  using K = SwitchingMove::Kind;
  switch (mv.kind) {
    case K::Forward: {
      detail::require(mv.removed.size() == 2 && mv.inserted.size() == 2, "forward move removes a cluster and inserts two edges");
      const ClassLabel label = classify_splus(g, M);
      detail::require(label.in_class() && label.t >= 1, "forward move needs a graph in S+(t), t >= 1");
      const EdgeId ie = detail::find_edge_or_throw(g, mv.removed[0], "apply_switching");
      const EdgeId jf = detail::find_edge_or_throw(g, mv.removed[1], "apply_switching");
      const ClusterCensus census = cluster_census(g);
      std::vector<EdgeId> pair{std::min(ie, jf), std::max(ie, jf)};
      detail::require(std::find(census.clusters.begin(), census.clusters.end(), pair) != census.clusters.end(),
                      "removed edges are not a cluster");
      GeneralGraph h = detail::without(g, mv.removed);
      detail::require(avoids_ell_collision(mv.inserted[0].span(), h.edges(), p.ell), "first inserted edge has ell vertices inside an edge");
      h.add_edge(mv.inserted[0]);
      detail::require(avoids_ell_collision(mv.inserted[1].span(), h.edges(), p.ell), "second inserted edge has ell vertices inside an edge");
      h.add_edge(mv.inserted[1]);
      detail::require(classify_splus(h, M).in_class(label.t - 1), "result is not in S+(t-1)");
      return h;
    }
    case K::Reverse: {
      detail::require(mv.removed.size() == 2 && mv.inserted.size() == 2, "reverse move removes two edges and inserts a cluster");
      const ClassLabel label = classify_splus(g, M);
      detail::require(label.in_class(), "reverse move needs a graph in some S+(t)");
      const ClusterCensus census = cluster_census(g);
      for (const auto& e : mv.removed) {
        const EdgeId id = detail::find_edge_or_throw(g, e, "apply_switching");
        for (const auto& c : census.clusters)
          detail::require(std::find(c.begin(), c.end(), id) == c.end(), "removed edge contains a link");
      }
      detail::require(mv.removed[0] != mv.removed[1], "removed edges must be distinct");
      detail::require(linked(mv.inserted[0], mv.inserted[1], p.ell), "inserted edges do not form a cluster");
      GeneralGraph h = detail::without(g, mv.removed);
      std::vector<RSet> pair{mv.inserted[0], mv.inserted[1]};
      std::vector<EdgeId> both{0, 1};
      const auto T = vertex_union(pair, both);
      detail::require(avoids_ell_collision(T, h.edges(), p.ell), "cluster set T has ell vertices inside a remaining edge");
      h.add_edge(mv.inserted[0]);
      h.add_edge(mv.inserted[1]);
      detail::require(classify_splus(h, M).in_class(label.t + 1), "result is not in S+(t+1)");
      return h;
    }
    case K::Displacement: {
      detail::require(mv.removed.size() == 1 && mv.inserted.size() == 1, "displacement moves one edge");
      detail::find_edge_or_throw(g, mv.removed[0], "apply_switching");
      detail::require(mv.inserted[0] != mv.removed[0], "displaced edge must move to a different r-set");
      GeneralGraph h = detail::without(g, mv.removed);
      detail::require(avoids_ell_collision(mv.inserted[0].span(), h.edges(), p.ell), "new position has ell vertices inside an edge");
      h.add_edge(mv.inserted[0]);
      return h;
    }
    case K::Replacement: {
      detail::require(mv.removed.size() == 1 && mv.inserted.size() == 1, "replacement swaps one edge");
      detail::find_edge_or_throw(g, mv.removed[0], "apply_switching");
      detail::require(!g.has_edge(mv.inserted[0]), "replacement target is already an edge");
      detail::require(std::find(mv.protected_edges.begin(), mv.protected_edges.end(), mv.removed[0]) == mv.protected_edges.end(),
                      "removed edge is protected");
      GeneralGraph h = detail::without(g, mv.removed);
      h.add_edge(mv.inserted[0]);
      detail::require(is_partial_steiner(h), "replacement is illegal (ell-collision)");
      return h;
    }
  }
  throw std::logic_error("apply_switching: unknown move kind");
}

// ---------------------------------------------------------------------------
// e_i-displacements and replacements

/// Number of e_i-displacements from g (which contains e_i): |P_r| of g - e_i.
/// The prediction uses m = |g|.
inline PrCount count_ei_displacements(const GeneralGraph& g, const RSet& e_i) {
  if (!g.has_edge(e_i)) throw std::invalid_argument("count_ei_displacements: e_i is not an edge");
  std::vector<RSet> rest;
  for (const auto& e : g.edges())
    if (e != e_i) rest.push_back(e);
  return count_Pr(rest, g.params(), e_i, static_cast<std::int64_t>(g.edge_count()));
}

/// Edges of g' outside `protected_edges` whose removal lets e_i in without an
/// ell-collision.
inline std::uint64_t count_legal_ei_replacements(const GeneralGraph& g, const RSet& e_i, const std::vector<RSet>& protected_edges) {
  const Params& p = g.params();
  check_rset(p, e_i);
  if (g.has_edge(e_i)) throw std::invalid_argument("count_legal_ei_replacements: e_i is already an edge");
  for (const auto& e : protected_edges)
    if (!g.has_edge(e)) throw std::invalid_argument("count_legal_ei_replacements: protected edge {" + e.to_string() + "} absent");
  std::vector<EdgeId> conflicts;
  for (EdgeId id = 0; id < g.edge_count(); ++id)
    if (intersection_size(g.edge(id), e_i) >= static_cast<std::size_t>(p.ell)) conflicts.push_back(id);
  auto is_protected = [&](EdgeId id) {
    return std::find(protected_edges.begin(), protected_edges.end(), g.edge(id)) != protected_edges.end();
  };
  if (conflicts.empty()) return g.edge_count() - protected_edges.size();
  if (conflicts.size() == 1 && !is_protected(conflicts[0])) return 1;
  return 0;
}

/// Expected number of legal e_i-replacements: (m-i+1)(1 - (m-i+1) C(r,ell) C(n-r,r-ell) / N).
inline double predicted_legal_replacements(const Params& p, std::int64_t m, std::int64_t i) {
  const double free_edges = static_cast<double>(m - i + 1);
  const double q = static_cast<double>(binomial_u64(p.r, p.ell)) * static_cast<double>(binomial_u64(p.n - p.r, p.r - p.ell)) /
                   static_cast<double>(p.num_rsets());
  return free_edges * (1.0 - free_edges * q);
}

// ---------------------------------------------------------------------------
// Exhaustive double counting on tiny instances

struct DoubleCountingCheck {
  std::size_t t = 0;
  std::uint64_t forward_total = 0;  // sum over S+(t) of forward moves
  std::uint64_t reverse_total = 0;  // sum over S+(t-1) of reverse moves
  std::map<std::size_t, std::uint64_t> class_sizes;
  std::uint64_t outside = 0;  // graphs in no S+ class
};

/// Classifies every m-edge r-graph on [n] with M = capacity_M(p, m) and sums the
/// exact forward counts over S+(t) and reverse counts over S+(t-1).
inline DoubleCountingCheck double_counting_check(const Params& p, std::int64_t m, std::size_t t, const ExactBudget& budget = {}) {
  if (t < 1) throw std::domain_error("double_counting_check: t must be >= 1");
  DoubleCountingCheck out;
  out.t = t;
  const std::int64_t M = capacity_M(p, m);
  for_each_general_graph(
      p, m,
      [&](const std::vector<RSet>& edges) {
        GeneralGraph g(p, edges);
        const ClassLabel label = classify_splus(g, M);
        if (!label.in_class()) {
          ++out.outside;
          return;
        }
        ++out.class_sizes[label.t];
        if (label.t == t) out.forward_total += count_forward_switchings(g, M).exact;
        if (label.t + 1 == t) out.reverse_total += count_reverse_switchings(g, M).exact;
      },
      budget);
  return out;
}

}  // namespace steiner
