#pragma once

// r-uniform hypergraph state: r-sets, the partial Steiner system with its
// ell-subset occupancy index, unconstrained graphs, and the edge-list text format.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "steiner/combinatorics.hpp"

namespace steiner {

using EdgeId = std::size_t;

/// A strictly increasing list of distinct 1-based vertex labels.
class RSet {
 public:
  RSet() = default;
  RSet(std::initializer_list<Vertex> vs) : RSet(std::vector<Vertex>(vs)) {}
  explicit RSet(std::vector<Vertex> vs) : v_(std::move(vs)) {
    std::sort(v_.begin(), v_.end());
    if (std::adjacent_find(v_.begin(), v_.end()) != v_.end())
      throw std::invalid_argument("RSet: repeated vertex");
    if (!v_.empty() && v_.front() == 0) throw std::invalid_argument("RSet: labels are 1-based");
  }

  std::size_t size() const { return v_.size(); }
  Vertex operator[](std::size_t i) const { return v_[i]; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }
  std::span<const Vertex> span() const { return v_; }
  const std::vector<Vertex>& vertices() const { return v_; }

  bool contains(Vertex x) const { return std::binary_search(v_.begin(), v_.end(), x); }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(v_[i]);
    }
    return s;
  }

  friend auto operator<=>(const RSet&, const RSet&) = default;
  friend bool operator==(const RSet&, const RSet&) = default;

 private:
  std::vector<Vertex> v_;
};

/// Uniform r-set of [n] (sorted, duplicate free).
inline RSet sample_uniform_rset(const Params& p, Rng& rng) {
  std::vector<Vertex> v;
  sample_sorted_subset(p.n, p.r, rng, v);
  return RSet(std::move(v));
}

inline std::size_t intersection_size(std::span<const Vertex> a, std::span<const Vertex> b) {
  std::size_t i = 0, j = 0, count = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

inline std::size_t intersection_size(const RSet& a, const RSet& b) { return intersection_size(a.span(), b.span()); }

inline bool is_subset(std::span<const Vertex> small, std::span<const Vertex> big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

/// Calls f(subset) for every k-subset of `set` in lexicographic order. Stops
/// early when f returns false.
template <typename F>
void for_each_subset(std::span<const Vertex> set, std::size_t k, F&& f) {
  const std::size_t n = set.size();
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::vector<Vertex> buf(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) buf[i] = set[idx[i]];
    if (!f(std::span<const Vertex>(buf))) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// All C(r, ell) ell-subsets of e, sorted, in lexicographic order.
inline std::vector<std::vector<Vertex>> ell_subsets(const RSet& e, int ell) {
  if (ell < 0 || static_cast<std::size_t>(ell) > e.size()) throw std::invalid_argument("ell_subsets: ell > r");
  std::vector<std::vector<Vertex>> out;
  for_each_subset(e.span(), static_cast<std::size_t>(ell), [&](std::span<const Vertex> s) {
    out.emplace_back(s.begin(), s.end());
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Subset keys
//
// Key format for a sorted vertex list v_0 < v_1 < ... < v_{k-1} on [n]:
//   compact (n < 2^16 and k <= 4): packed = sum_i v_i << (16 i), wide empty;
//   otherwise: wide = the labels as 4-byte big-endian words, packed = 0.

struct SubsetKey {
  std::uint64_t packed = 0;
  std::string wide;

  friend bool operator==(const SubsetKey&, const SubsetKey&) = default;
};

struct SubsetKeyHash {
  std::size_t operator()(const SubsetKey& k) const noexcept {
    if (k.wide.empty()) return static_cast<std::size_t>(splitmix64(k.packed));
    return std::hash<std::string>{}(k.wide);
  }
};

inline bool key_is_compact(int n, std::size_t k) { return n < (1 << 16) && k <= 4; }

inline SubsetKey make_key(std::span<const Vertex> sorted, int n) {
  SubsetKey key;
  if (key_is_compact(n, sorted.size())) {
    for (std::size_t i = 0; i < sorted.size(); ++i) key.packed |= static_cast<std::uint64_t>(sorted[i]) << (16 * i);
  } else {
    key.wide.reserve(4 * sorted.size());
    for (Vertex v : sorted) {
      key.wide.push_back(static_cast<char>((v >> 24) & 0xFF));
      key.wide.push_back(static_cast<char>((v >> 16) & 0xFF));
      key.wide.push_back(static_cast<char>((v >> 8) & 0xFF));
      key.wide.push_back(static_cast<char>(v & 0xFF));
    }
  }
  return key;
}

inline void check_rset(const Params& p, const RSet& e) {
  if (e.size() != static_cast<std::size_t>(p.r))
    throw std::invalid_argument("edge {" + e.to_string() + "} does not have r=" + std::to_string(p.r) + " vertices");
  if (e.size() && e.vertices().back() > static_cast<Vertex>(p.n))
    throw std::invalid_argument("edge {" + e.to_string() + "} has a label outside [1," + std::to_string(p.n) + "]");
}

// ---------------------------------------------------------------------------
// PartialSystem

/// Result of PartialSystem::try_add. On rejection `witness` is the
/// lexicographically first ell-subset of the candidate that is already covered.
struct AddOutcome {
  bool added = false;
  EdgeId id = 0;
  std::vector<Vertex> witness;

  explicit operator bool() const { return added; }
};

/// An r-graph on [n] in which every ell-subset lies in at most one edge.
/// Edge ids are positions in edges(); removing an edge shifts later ids down.
class PartialSystem {
 public:
  explicit PartialSystem(Params p) : params_(p), degree_(static_cast<std::size_t>(p.n) + 1, 0), zero_degree_(p.n) {
    p.validate();
  }

  const Params& params() const { return params_; }
  std::span<const RSet> edges() const { return edges_; }
  const RSet& edge(EdgeId id) const { return edges_.at(id); }
  std::size_t edge_count() const { return edges_.size(); }
  int degree(Vertex v) const { return degree_.at(v); }
  int zero_degree_count() const { return zero_degree_; }
  std::size_t index_size() const { return index_.size(); }

  /// The edge covering a sorted ell-set, if any.
  std::optional<EdgeId> covering_edge(std::span<const Vertex> ell_set) const {
    auto it = index_.find(make_key(ell_set, params_.n));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// True when no ell-subset of e is covered yet (e itself must be valid).
  bool compatible(const RSet& e) const {
    bool ok = true;
    for_each_subset(e.span(), static_cast<std::size_t>(params_.ell), [&](std::span<const Vertex> s) {
      if (index_.count(make_key(s, params_.n))) ok = false;
      return ok;
    });
    return ok;
  }

  AddOutcome try_add(const RSet& e) {
    check_rset(params_, e);
    AddOutcome out;
    for_each_subset(e.span(), static_cast<std::size_t>(params_.ell), [&](std::span<const Vertex> s) {
      auto it = index_.find(make_key(s, params_.n));
      if (it == index_.end()) return true;
      if (edges_[it->second] == e) throw std::invalid_argument("try_add: {" + e.to_string() + "} is already an edge");
      out.witness.assign(s.begin(), s.end());
      return false;
    });
    if (!out.witness.empty()) return out;

    const EdgeId id = edges_.size();
    for_each_subset(e.span(), static_cast<std::size_t>(params_.ell), [&](std::span<const Vertex> s) {
      index_.emplace(make_key(s, params_.n), id);
      return true;
    });
    for (Vertex v : e) {
      if (degree_[v]++ == 0) --zero_degree_;
    }
    edges_.push_back(e);
    out.added = true;
    out.id = id;
    return out;
  }

  void remove_edge(EdgeId id) {
    if (id >= edges_.size()) throw std::invalid_argument("remove_edge: unknown edge id " + std::to_string(id));
    const RSet e = edges_[id];
    for_each_subset(e.span(), static_cast<std::size_t>(params_.ell), [&](std::span<const Vertex> s) {
      index_.erase(make_key(s, params_.n));
      return true;
    });
    for (Vertex v : e) {
      if (--degree_[v] == 0) ++zero_degree_;
    }
    edges_.erase(edges_.begin() + static_cast<std::ptrdiff_t>(id));
    if (id != edges_.size()) {
      for (auto& [key, eid] : index_)
        if (eid > id) --eid;
    }
  }

  std::optional<EdgeId> find_edge(const RSet& e) const {
    if (e.size() != static_cast<std::size_t>(params_.r)) return std::nullopt;
    std::vector<Vertex> first(e.begin(), e.begin() + params_.ell);
    auto id = covering_edge(first);
    if (id && edges_[*id] == e) return id;
    return std::nullopt;
  }

  /// Rebuilds every derived field from an edge list (all edges must be compatible).
  static PartialSystem from_edges(Params p, std::span<const RSet> edges) {
    PartialSystem sys(p);
    for (const auto& e : edges) {
      if (!sys.try_add(e)) throw std::invalid_argument("from_edges: {" + e.to_string() + "} violates the ell-constraint");
    }
    return sys;
  }

  friend bool operator==(const PartialSystem& a, const PartialSystem& b) {
    return a.params_ == b.params_ && a.edges_ == b.edges_ && a.degree_ == b.degree_ &&
           a.zero_degree_ == b.zero_degree_ && a.index_ == b.index_;
  }

 private:
  Params params_;
  std::vector<RSet> edges_;
  std::unordered_map<SubsetKey, EdgeId, SubsetKeyHash> index_;
  std::vector<int> degree_;
  int zero_degree_;
};

// ---------------------------------------------------------------------------
// GeneralGraph

/// An r-graph with pairwise distinct edges and no ell-constraint.
class GeneralGraph {
 public:
  explicit GeneralGraph(Params p) : params_(p) { p.validate(); }
  GeneralGraph(Params p, std::vector<RSet> edges) : GeneralGraph(p) {
    for (auto& e : edges) add_edge(std::move(e));
  }

  static GeneralGraph from(const PartialSystem& sys) {
    GeneralGraph g(sys.params());
    g.edges_.assign(sys.edges().begin(), sys.edges().end());
    return g;
  }

  const Params& params() const { return params_; }
  std::span<const RSet> edges() const { return edges_; }
  const RSet& edge(EdgeId id) const { return edges_.at(id); }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_edge(const RSet& e) const { return std::find(edges_.begin(), edges_.end(), e) != edges_.end(); }

  EdgeId add_edge(RSet e) {
    check_rset(params_, e);
    if (has_edge(e)) throw std::invalid_argument("GeneralGraph: duplicate edge {" + e.to_string() + "}");
    edges_.push_back(std::move(e));
    return edges_.size() - 1;
  }

  void remove_edge(EdgeId id) {
    if (id >= edges_.size()) throw std::invalid_argument("GeneralGraph: unknown edge id " + std::to_string(id));
    edges_.erase(edges_.begin() + static_cast<std::ptrdiff_t>(id));
  }

  /// Same edge set, ignoring order.
  bool same_edge_set(const GeneralGraph& other) const {
    if (other.params_ != params_ || other.edges_.size() != edges_.size()) return false;
    auto a = edges_, b = other.edges_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }

  std::vector<RSet> sorted_edges() const {
    auto a = edges_;
    std::sort(a.begin(), a.end());
    return a;
  }

 private:
  Params params_;
  std::vector<RSet> edges_;
};

// ---------------------------------------------------------------------------
// Queries

inline std::size_t codegree(std::span<const RSet> edges, std::span<const Vertex> u_sorted) {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [&](const RSet& e) { return is_subset(u_sorted, e.span()); }));
}

inline std::size_t codegree(const GeneralGraph& g, std::vector<Vertex> u) {
  std::sort(u.begin(), u.end());
  return codegree(g.edges(), u);
}

inline std::size_t codegree(const PartialSystem& g, std::vector<Vertex> u) {
  std::sort(u.begin(), u.end());
  return codegree(g.edges(), u);
}

/// ex = (r - 1) m - n over a universe of `universe` vertices.
inline std::int64_t excess(int r, std::int64_t m, std::int64_t universe) { return (r - 1) * m - universe; }

inline std::int64_t excess(const GeneralGraph& g) {
  return excess(g.params().r, static_cast<std::int64_t>(g.edge_count()), g.params().n);
}

inline std::int64_t excess(const PartialSystem& g) {
  return excess(g.params().r, static_cast<std::int64_t>(g.edge_count()), g.params().n);
}

inline std::vector<Vertex> isolated_vertices(const PartialSystem& sys) {
  std::vector<Vertex> out;
  for (Vertex v = 1; v <= static_cast<Vertex>(sys.params().n); ++v)
    if (sys.degree(v) == 0) out.push_back(v);
  return out;
}

inline int isolated_count(const PartialSystem& sys) { return sys.zero_degree_count(); }

/// True iff every ell-set lies in at most one edge.
inline bool is_partial_steiner(std::span<const RSet> edges, const Params& p) {
  std::unordered_set<SubsetKey, SubsetKeyHash> seen;
  bool ok = true;
  for (const auto& e : edges) {
    for_each_subset(e.span(), static_cast<std::size_t>(p.ell), [&](std::span<const Vertex> s) {
      ok = seen.insert(make_key(s, p.n)).second;
      return ok;
    });
    if (!ok) return false;
  }
  return true;
}

inline bool is_partial_steiner(const GeneralGraph& g) { return is_partial_steiner(g.edges(), g.params()); }

// ---------------------------------------------------------------------------
// Edge-list text format
//
//   n r ell m
//   v_1 v_2 ... v_r        (m lines, ascending labels, single spaces)

struct EdgeList {
  Params params;
  std::vector<RSet> edges;
};

inline void write_edge_list(std::ostream& os, const Params& p, std::span<const RSet> edges) {
  os << p.n << ' ' << p.r << ' ' << p.ell << ' ' << edges.size() << '\n';
  for (const auto& e : edges) os << e.to_string() << '\n';
}

inline std::string edge_list_string(const Params& p, std::span<const RSet> edges) {
  std::ostringstream os;
  write_edge_list(os, p, edges);
  return os.str();
}

inline EdgeList read_edge_list(std::istream& is) {
  EdgeList out;
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw std::invalid_argument("edge list: missing header line 'n r ell m'");
  std::istringstream header(line);
  long long m = -1;
  if (!(header >> out.params.n >> out.params.r >> out.params.ell >> m) || m < 0)
    throw std::invalid_argument("edge list: malformed header '" + line + "'");
  out.params.validate();
  for (long long i = 0; i < m; ++i) {
    if (!next_line()) throw std::invalid_argument("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    std::istringstream row(line);
    std::vector<Vertex> vs;
    long long v;
    while (row >> v) {
      if (v < 1 || v > out.params.n) throw std::invalid_argument("edge list: label out of range in '" + line + "'");
      vs.push_back(static_cast<Vertex>(v));
    }
    if (!std::is_sorted(vs.begin(), vs.end())) throw std::invalid_argument("edge list: labels not ascending in '" + line + "'");
    RSet e(std::move(vs));
    check_rset(out.params, e);
    out.edges.push_back(std::move(e));
  }
  return out;
}

}  // namespace steiner
