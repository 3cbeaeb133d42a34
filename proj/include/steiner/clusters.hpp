#pragma once

// Link graph G_H (edges adjacent iff they share exactly ell vertices), cluster
// census, and classification into the switching classes S+(t).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "steiner/combinatorics.hpp"
#include "steiner/hypergraph.hpp"

namespace steiner {

inline bool linked(const RSet& e, const RSet& f, int ell) {
  return intersection_size(e, f) == static_cast<std::size_t>(ell);
}

using LinkGraph = std::vector<std::vector<EdgeId>>;

inline LinkGraph build_link_graph(std::span<const RSet> edges, int ell) {
  LinkGraph adj(edges.size());
  for (EdgeId i = 0; i < edges.size(); ++i) {
    for (EdgeId j = i + 1; j < edges.size(); ++j) {
      if (linked(edges[i], edges[j], ell)) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  return adj;
}

inline LinkGraph build_link_graph(const GeneralGraph& g) { return build_link_graph(g.edges(), g.params().ell); }

struct ClusterCensus {
  std::size_t t = 0;
  /// Non-trivial components of the link graph, each sorted; ordered by first id.
  std::vector<std::vector<EdgeId>> clusters;
  /// Linked pairs (i, j) with i < j, lexicographic.
  std::vector<std::pair<EdgeId, EdgeId>> link_pairs;
};

inline ClusterCensus cluster_census(std::span<const RSet> edges, int ell) {
  ClusterCensus census;
  const LinkGraph adj = build_link_graph(edges, ell);
  for (EdgeId i = 0; i < adj.size(); ++i)
    for (EdgeId j : adj[i])
      if (i < j) census.link_pairs.emplace_back(i, j);

  std::vector<bool> seen(adj.size(), false);
  for (EdgeId s = 0; s < adj.size(); ++s) {
    if (seen[s] || adj[s].empty()) continue;
    std::vector<EdgeId> comp{s};
    seen[s] = true;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (EdgeId nb : adj[comp[head]]) {
        if (!seen[nb]) {
          seen[nb] = true;
          comp.push_back(nb);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    census.clusters.push_back(std::move(comp));
  }
  census.t = census.clusters.size();
  return census;
}

inline ClusterCensus cluster_census(const GeneralGraph& g) { return cluster_census(g.edges(), g.params().ell); }

/// M = ceil(log n + 3^(ell+2) r^(2 ell) m^2 / (ell! n^ell)).
inline std::int64_t capacity_M(const Params& p, std::int64_t m) {
  const long double n = p.n;
  long double ell_fact = 1;
  for (int i = 2; i <= p.ell; ++i) ell_fact *= i;
  const long double second = std::pow(3.0L, p.ell + 2) * std::pow(static_cast<long double>(p.r), 2 * p.ell) *
                             static_cast<long double>(m) * static_cast<long double>(m) / (ell_fact * std::pow(n, p.ell));
  return static_cast<std::int64_t>(std::ceil(std::log(n) + second));
}

/// Union of the vertex sets of a list of edges, sorted.
inline std::vector<Vertex> vertex_union(std::span<const RSet> edges, std::span<const EdgeId> ids) {
  std::vector<Vertex> u;
  for (EdgeId id : ids) u.insert(u.end(), edges[id].begin(), edges[id].end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

struct ClassLabel {
  enum class Kind { InClass, ViolatesA, ViolatesB, ViolatesC };
  Kind kind = Kind::InClass;
  /// Cluster count (for InClass, and for ViolatesC the offending count).
  std::size_t t = 0;
  /// Up to four edge ids that exhibit the violation.
  std::vector<EdgeId> witness;
  std::string reason;

  bool in_class() const { return kind == Kind::InClass; }
  bool in_class(std::size_t tt) const { return kind == Kind::InClass && t == tt; }
};

inline const char* to_string(ClassLabel::Kind k) {
  switch (k) {
    case ClassLabel::Kind::InClass: return "InClass";
    case ClassLabel::Kind::ViolatesA: return "ViolatesA";
    case ClassLabel::Kind::ViolatesB: return "ViolatesB";
    case ClassLabel::Kind::ViolatesC: return "ViolatesC";
  }
  return "?";
}

/// Membership in S+(t):
///  (a) every two edges share at most ell vertices;
///  (b) every cluster is exactly two edges {e, f} (so |e & f| = ell), every other
///      edge meets e | f in at most ell - 1 vertices, and the vertex sets of two
///      distinct clusters share at most one vertex;
///  (c) t <= M.
/// The first violated property is reported, checked in the order (a), (b), (c).
inline ClassLabel classify_splus(std::span<const RSet> edges, const Params& p, std::int64_t M) {
  ClassLabel label;
  const auto ell = static_cast<std::size_t>(p.ell);
  for (EdgeId i = 0; i < edges.size(); ++i) {
    for (EdgeId j = i + 1; j < edges.size(); ++j) {
      if (intersection_size(edges[i], edges[j]) > ell) {
        label.kind = ClassLabel::Kind::ViolatesA;
        label.witness = {i, j};
        label.reason = "edges share more than ell vertices";
        return label;
      }
    }
  }

  const ClusterCensus census = cluster_census(edges, p.ell);
  const LinkGraph adj = build_link_graph(edges, p.ell);
  std::vector<std::vector<Vertex>> unions;
  for (const auto& c : census.clusters) {
    if (c.size() != 2) {
      // A link-graph path of length two inside the oversized cluster.
      for (EdgeId mid : c) {
        if (adj[mid].size() >= 2) {
          label.witness = {adj[mid][0], mid, adj[mid][1]};
          break;
        }
      }
      label.kind = ClassLabel::Kind::ViolatesB;
      label.reason = "cluster with " + std::to_string(c.size()) + " edges";
      return label;
    }
    unions.push_back(vertex_union(edges, c));
  }
  for (std::size_t ci = 0; ci < census.clusters.size(); ++ci) {
    const auto& c = census.clusters[ci];
    for (EdgeId h = 0; h < edges.size(); ++h) {
      if (h == c[0] || h == c[1]) continue;
      if (intersection_size(edges[h].span(), unions[ci]) >= ell) {
        label.kind = ClassLabel::Kind::ViolatesB;
        label.witness = {c[0], c[1], h};
        label.reason = "edge meets a cluster in ell or more vertices";
        return label;
      }
    }
    for (std::size_t cj = ci + 1; cj < census.clusters.size(); ++cj) {
      if (intersection_size(unions[ci], unions[cj]) > 1) {
        const auto& d = census.clusters[cj];
        label.kind = ClassLabel::Kind::ViolatesB;
        label.witness = {c[0], c[1], d[0], d[1]};
        label.reason = "two clusters share more than one vertex";
        return label;
      }
    }
  }

  label.t = census.t;
  if (static_cast<std::int64_t>(census.t) > M) {
    label.kind = ClassLabel::Kind::ViolatesC;
    label.reason = "more than M clusters";
    return label;
  }
  label.kind = ClassLabel::Kind::InClass;
  return label;
}

inline ClassLabel classify_splus(const GeneralGraph& g, std::int64_t M) { return classify_splus(g.edges(), g.params(), M); }

inline ClassLabel classify_splus(const GeneralGraph& g) {
  return classify_splus(g, capacity_M(g.params(), static_cast<std::int64_t>(g.edge_count())));
}

}  // namespace steiner
