#pragma once

// Brute-force ground truth on tiny instances. Nothing here is clever: systems are
// enumerated by depth-first search over r-sets in a fixed order, each unordered
// system visited exactly once, under an explicit work budget.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "steiner/combinatorics.hpp"
#include "steiner/formulas.hpp"
#include "steiner/hypergraph.hpp"
#include "steiner/process.hpp"

namespace steiner {

struct ExactBudget {
  std::uint64_t max_rsets = 10'000;
  /// Upper bound on DFS nodes, estimated as sum_{j<=m} C(N, j).
  double max_nodes = 1e9;
};

/// All r-subsets of [n] in lexicographic order.
inline std::vector<RSet> all_rsets(int n, int r) {
  std::vector<Vertex> ground(static_cast<std::size_t>(n));
  std::iota(ground.begin(), ground.end(), Vertex{1});
  std::vector<RSet> out;
  for_each_subset(ground, static_cast<std::size_t>(r), [&](std::span<const Vertex> s) {
    out.emplace_back(std::vector<Vertex>(s.begin(), s.end()));
    return true;
  });
  return out;
}

inline double estimated_search_nodes(std::uint64_t num_rsets, std::int64_t m) {
  LogNumber total = LogNumber::zero();
  for (std::int64_t j = 0; j <= std::min<std::int64_t>(m, static_cast<std::int64_t>(num_rsets)); ++j)
    total = total + log_binomial(static_cast<std::int64_t>(num_rsets), j);
  return total.to_double();
}

inline void check_budget(const Params& p, std::int64_t m, const ExactBudget& budget) {
  p.validate();
  if (m < 0) throw std::domain_error("exact oracle: negative m");
  std::uint64_t N = 0;
  try {
    N = p.num_rsets();
  } catch (const std::overflow_error&) {
    throw InfeasibleError("exact oracle: C(n,r) overflows");
  }
  if (N > budget.max_rsets)
    throw InfeasibleError("exact oracle: C(n,r)=" + std::to_string(N) + " exceeds budget " + std::to_string(budget.max_rsets));
  const double nodes = estimated_search_nodes(N, m);
  if (nodes > budget.max_nodes)
    throw InfeasibleError("exact oracle: estimated " + std::to_string(nodes) + " search nodes exceeds budget");
}

namespace detail {

inline bool compatible_with(const RSet& e, std::span<const RSet* const> chosen, std::size_t ell) {
  for (const RSet* f : chosen)
    if (intersection_size(e, *f) >= ell) return false;
  return true;
}

/// Visits every set of `need` further r-sets from candidates[start..] that are
/// pairwise compatible and compatible with `chosen`. Visits in increasing
/// candidate index, so each set is seen once.
template <typename F>
void dfs_systems(std::span<const RSet> candidates, std::size_t start, std::int64_t need, std::size_t ell,
                 std::vector<const RSet*>& chosen, F&& visit) {
  if (need == 0) {
    visit(std::span<const RSet* const>(chosen));
    return;
  }
  for (std::size_t i = start; i + static_cast<std::size_t>(need) <= candidates.size(); ++i) {
    if (!compatible_with(candidates[i], chosen, ell)) continue;
    chosen.push_back(&candidates[i]);
    dfs_systems(candidates, i + 1, need - 1, ell, chosen, visit);
    chosen.pop_back();
  }
}

inline std::uint64_t dfs_count(std::span<const RSet> candidates, std::size_t start, std::int64_t need, std::size_t ell,
                               std::vector<const RSet*>& chosen) {
  if (need == 0) return 1;
  std::uint64_t total = 0;
  for (std::size_t i = start; i + static_cast<std::size_t>(need) <= candidates.size(); ++i) {
    if (!compatible_with(candidates[i], chosen, ell)) continue;
    if (need == 1) {
      ++total;
      continue;
    }
    chosen.push_back(&candidates[i]);
    total += dfs_count(candidates, i + 1, need - 1, ell, chosen);
    chosen.pop_back();
  }
  return total;
}

}  // namespace detail

/// |S(n, r, ell; m)|. `order_seed` != 0 shuffles the r-set order first; the count
/// must not depend on it.
inline BigInt count_systems(const Params& p, std::int64_t m, const ExactBudget& budget = {}, std::uint64_t order_seed = 0) {
  check_budget(p, m, budget);
  auto rsets = all_rsets(p.n, p.r);
  if (order_seed != 0) {
    Rng rng(order_seed);
    for (std::size_t i = rsets.size(); i > 1; --i) std::swap(rsets[i - 1], rsets[rng.below(i)]);
  }
  std::vector<const RSet*> chosen;
  return BigInt(detail::dfs_count(rsets, 0, m, static_cast<std::size_t>(p.ell), chosen));
}

/// Number of ordered sequences of m distinct, pairwise compatible r-sets. An
/// independent route: no canonical ordering, every permutation visited.
inline BigInt count_ordered_sequences(const Params& p, std::int64_t m, const ExactBudget& budget = {}) {
  check_budget(p, m, budget);
  const auto rsets = all_rsets(p.n, p.r);
  std::vector<bool> used(rsets.size(), false);
  std::vector<const RSet*> chosen;
  std::function<std::uint64_t(std::int64_t)> rec = [&](std::int64_t need) -> std::uint64_t {
    if (need == 0) return 1;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < rsets.size(); ++i) {
      if (used[i] || !detail::compatible_with(rsets[i], chosen, static_cast<std::size_t>(p.ell))) continue;
      used[i] = true;
      chosen.push_back(&rsets[i]);
      total += rec(need - 1);
      chosen.pop_back();
      used[i] = false;
    }
    return total;
  };
  return BigInt(rec(m));
}

/// Calls visit(edges) for every system in S(n, r, ell; m), edges in lexicographic order.
inline void for_each_system(const Params& p, std::int64_t m, const std::function<void(const std::vector<RSet>&)>& visit,
                            const ExactBudget& budget = {}) {
  check_budget(p, m, budget);
  const auto rsets = all_rsets(p.n, p.r);
  std::vector<const RSet*> chosen;
  std::vector<RSet> edges;
  detail::dfs_systems(rsets, 0, m, static_cast<std::size_t>(p.ell), chosen, [&](std::span<const RSet* const> sel) {
    edges.clear();
    for (const RSet* e : sel) edges.push_back(*e);
    visit(edges);
  });
}

/// Calls visit(edges) for every m-subset of r-sets (no ell-constraint).
inline void for_each_general_graph(const Params& p, std::int64_t m, const std::function<void(const std::vector<RSet>&)>& visit,
                                   const ExactBudget& budget = {}) {
  check_budget(p, m, budget);
  const auto rsets = all_rsets(p.n, p.r);
  std::vector<RSet> edges;
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t start, std::int64_t need) {
    if (need == 0) {
      visit(edges);
      return;
    }
    for (std::size_t i = start; i + static_cast<std::size_t>(need) <= rsets.size(); ++i) {
      edges.push_back(rsets[i]);
      rec(i + 1, need - 1);
      edges.pop_back();
    }
  };
  rec(0, m);
}

// ---------------------------------------------------------------------------
// Uniform sampling by rejection

struct SamplerStats {
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;

  double acceptance_rate() const { return attempts ? static_cast<double>(accepted) / static_cast<double>(attempts) : 0.0; }
};

inline constexpr double kMinPredictedAcceptance = 1e-6;

/// Predicted acceptance probability of the rejection sampler, exp(E) from the count formula.
inline double predicted_acceptance(const Params& p, std::int64_t m) {
  return log_partial_steiner_probability(p, m).value.to_double();
}

/// Uniform m-subset of all r-sets: m sequential uniform draws, resampling any
/// draw that repeats an earlier one (a repeat happens with probability about m^2 / 2N).
/// The edges are returned in draw order.
inline std::vector<RSet> sample_uniform_msubset(const Params& p, std::int64_t m, Rng& rng) {
  std::vector<RSet> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::vector<Vertex> buf;
  while (static_cast<std::int64_t>(edges.size()) < m) {
    sample_sorted_subset(p.n, p.r, rng, buf);
    RSet e(buf);
    if (std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(std::move(e));
  }
  return edges;
}

/// Draws a uniform m-subset; returns it iff it is a partial Steiner system.
/// Stops drawing at the first ell-collision, which decides the same event.
inline std::optional<std::vector<RSet>> try_sample_system(const Params& p, std::int64_t m, Rng& rng) {
  std::vector<RSet> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::vector<Vertex> buf;
  const auto ell = static_cast<std::size_t>(p.ell);
  const auto r = static_cast<std::size_t>(p.r);
  while (static_cast<std::int64_t>(edges.size()) < m) {
    sample_sorted_subset(p.n, p.r, rng, buf);
    bool duplicate = false, collision = false;
    for (const auto& f : edges) {
      const std::size_t s = intersection_size(std::span<const Vertex>(buf), f.span());
      if (s == r) {
        duplicate = true;
        break;
      }
      if (s >= ell) collision = true;
    }
    if (duplicate) continue;
    if (collision) return std::nullopt;
    edges.emplace_back(buf);
  }
  return edges;
}

/// Uniform element of S(n, r, ell; m) by rejection from uniform m-subsets.
/// Refuses (InfeasibleError) when the predicted acceptance is below `floor`.
inline PartialSystem sample_uniform_system(const Params& p, std::int64_t m, Rng& rng, SamplerStats* stats = nullptr,
                                           double floor = kMinPredictedAcceptance) {
  p.validate();
  if (m < 0) throw std::domain_error("sample_uniform_system: negative m");
  if (static_cast<double>(m) > std::exp(p.log_num_rsets()))
    throw std::domain_error("sample_uniform_system: m exceeds C(n,r)");
  const double predicted = predicted_acceptance(p, m);
  if (predicted < floor)
    throw InfeasibleError("sample_uniform_system: predicted acceptance " + std::to_string(predicted) + " below floor");
  for (;;) {
    if (stats) ++stats->attempts;
    if (auto edges = try_sample_system(p, m, rng)) {
      if (stats) ++stats->accepted;
      return PartialSystem::from_edges(p, *edges);
    }
  }
}

// ---------------------------------------------------------------------------
// Exact probabilities

/// P[K subset of H] for H uniform in S(n, r, ell; m), exactly.
inline Rational exact_containment_prob(const Params& p, std::int64_t m, const std::vector<RSet>& K, const ExactBudget& budget = {}) {
  check_budget(p, m, budget);
  for (const auto& e : K) check_rset(p, e);
  if (!is_partial_steiner(K, p)) throw std::invalid_argument("exact_containment_prob: K is not a partial Steiner system");
  {
    auto sorted = K;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("exact_containment_prob: K has repeated edges");
  }
  const BigInt total = count_systems(p, m, budget);
  const auto k = static_cast<std::int64_t>(K.size());
  if (k > m || total == 0) return Rational(0);
  std::vector<RSet> rest;
  for (auto& e : all_rsets(p.n, p.r))
    if (std::find(K.begin(), K.end(), e) == K.end()) rest.push_back(std::move(e));
  std::vector<const RSet*> chosen;
  for (const auto& e : K) chosen.push_back(&e);
  const BigInt with_k(detail::dfs_count(rest, 0, m - k, static_cast<std::size_t>(p.ell), chosen));
  return Rational(with_k, total);
}

/// P[deg v_1 = ... = deg v_h = 0] = |S(n-h, r, ell; m)| / |S(n, r, ell; m)|.
inline Rational exact_deg_zero_prob(const Params& p, std::int64_t m, std::int64_t h, const ExactBudget& budget = {}) {
  check_budget(p, m, budget);
  if (h < 0 || h > p.n) throw std::domain_error("exact_deg_zero_prob: need 0 <= h <= n");
  if (h == 0 || m == 0) return Rational(1);
  const BigInt total = count_systems(p, m, budget);
  if (total == 0) throw std::domain_error("exact_deg_zero_prob: S(n,r,ell;m) is empty");
  if (p.n - h < p.r) return Rational(0);
  Params smaller = p;
  smaller.n = p.n - static_cast<int>(h);
  return Rational(count_systems(smaller, m, budget), total);
}

// ---------------------------------------------------------------------------
// Component census

struct Component {
  std::int64_t vertices = 0;  // k
  std::int64_t edges = 0;     // h
  std::int64_t excess = 0;    // (r-1) h - k

  friend auto operator<=>(const Component&, const Component&) = default;
};

struct ComponentCensus {
  /// Components with at least one edge, sorted by (k, h).
  std::vector<Component> components;
  std::int64_t isolated = 0;
};

inline ComponentCensus component_census(const PartialSystem& sys) {
  const Params& p = sys.params();
  UnionFind uf(p.n);
  for (const auto& e : sys.edges()) union_edge(uf, e);
  std::map<Vertex, Component> by_root;
  ComponentCensus census;
  for (Vertex v = 1; v <= static_cast<Vertex>(p.n); ++v) {
    if (sys.degree(v) == 0) {
      ++census.isolated;
      continue;
    }
    ++by_root[uf.find(v)].vertices;
  }
  for (const auto& e : sys.edges()) ++by_root[uf.find(e[0])].edges;
  for (auto& [root, c] : by_root) {
    c.excess = excess(p.r, c.edges, c.vertices);
    census.components.push_back(c);
  }
  std::sort(census.components.begin(), census.components.end());
  return census;
}

}  // namespace steiner
