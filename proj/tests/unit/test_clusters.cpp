#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "steiner/clusters.hpp"
#include "steiner/exact.hpp"

using namespace steiner;

namespace {

std::size_t span_size(const std::vector<const RSet*>& es) {
  std::set<Vertex> u;
  for (const RSet* e : es) u.insert(e->begin(), e->end());
  return u.size();
}

}  // namespace

TEST(Linked, Examples) {
  EXPECT_TRUE(linked({1, 2, 3}, {2, 3, 4}, 2));
  EXPECT_FALSE(linked({1, 2, 3}, {3, 4, 5}, 2));
  EXPECT_FALSE(linked({1, 2, 3, 4}, {1, 2, 3, 5}, 2));
}

TEST(LinkGraph, Examples) {
  const Params p{8, 3, 2};
  const LinkGraph two = build_link_graph(GeneralGraph(p, {RSet{1, 2, 3}, RSet{2, 3, 4}}));
  EXPECT_EQ(two, (LinkGraph{{1}, {0}}));

  const LinkGraph none = build_link_graph(GeneralGraph(p, {RSet{1, 2, 3}, RSet{3, 4, 5}, RSet{1, 4, 6}}));
  for (const auto& adj : none) EXPECT_TRUE(adj.empty());

  // {1,2,3}, {1,2,4}, {1,3,4}: every pair shares exactly two vertices.
  const LinkGraph tri = build_link_graph(GeneralGraph(p, {RSet{1, 2, 3}, RSet{1, 2, 4}, RSet{1, 3, 4}}));
  EXPECT_EQ(tri, (LinkGraph{{1, 2}, {0, 2}, {0, 1}}));
}

TEST(LinkGraph, PermutationInvariant) {
  const Params p{9, 3, 2};
  Rng rng(4);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<RSet> edges;
    while (edges.size() < 6) {
      RSet e = sample_uniform_rset(p, rng);
      if (std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(e);
    }
    std::vector<std::size_t> perm(edges.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(iter));
    std::vector<RSet> shuffled;
    for (auto i : perm) shuffled.push_back(edges[i]);
    const LinkGraph a = build_link_graph(edges, 2), b = build_link_graph(shuffled, 2);
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = 0; j < perm.size(); ++j) {
        const bool ab = std::count(b[i].begin(), b[i].end(), j) > 0;
        const bool aa = std::count(a[perm[i]].begin(), a[perm[i]].end(), perm[j]) > 0;
        EXPECT_EQ(ab, aa);
      }
  }
}

TEST(ClusterCensus, Examples) {
  const Params p{8, 3, 2};
  const ClusterCensus one = cluster_census(GeneralGraph(p, {RSet{1, 2, 3}, RSet{2, 3, 4}}));
  EXPECT_EQ(one.t, 1u);
  EXPECT_EQ(one.clusters, (std::vector<std::vector<EdgeId>>{{0, 1}}));
  EXPECT_EQ(cluster_census(GeneralGraph(p)).t, 0u);
  EXPECT_EQ(cluster_census(GeneralGraph(p, {RSet{1, 2, 3}, RSet{4, 5, 6}})).t, 0u);
}

TEST(CapacityM, Examples) {
  EXPECT_EQ(capacity_M({100, 3, 2}, 0), static_cast<std::int64_t>(std::ceil(std::log(100.0))));
  // log 100 + 3^4 3^4 100 / (2 * 10^4) = 4.60517... + 32.805
  EXPECT_EQ(capacity_M({100, 3, 2}, 10), 38);
  std::int64_t prev = 0;
  for (std::int64_t m = 0; m < 200; ++m) {
    const auto M = capacity_M({50, 4, 3}, m);
    EXPECT_GE(M, prev);
    prev = M;
  }
}

TEST(Classify, Examples) {
  const Params p{8, 3, 2};
  PartialSystem sys(p);
  ASSERT_TRUE(sys.try_add({1, 2, 3}));
  ASSERT_TRUE(sys.try_add({3, 4, 5}));
  EXPECT_TRUE(classify_splus(GeneralGraph::from(sys)).in_class(0));

  EXPECT_TRUE(classify_splus(GeneralGraph(p, {RSet{1, 2, 3}, RSet{2, 3, 4}}), 1).in_class(1));

  const ClassLabel a = classify_splus(GeneralGraph({8, 4, 2}, {RSet{1, 2, 3, 4}, RSet{1, 2, 3, 5}}), 5);
  EXPECT_EQ(a.kind, ClassLabel::Kind::ViolatesA);
  EXPECT_EQ(a.witness, (std::vector<EdgeId>{0, 1}));
}

TEST(Classify, ViolationsOfB) {
  const Params p{9, 3, 2};
  // Three edges on a path in the link graph.
  const ClassLabel path = classify_splus(GeneralGraph(p, {RSet{1, 2, 3}, RSet{2, 3, 4}, RSet{3, 4, 5}}), 10);
  EXPECT_EQ(path.kind, ClassLabel::Kind::ViolatesB);
  EXPECT_EQ(path.witness.size(), 3u);

  // A third edge meeting the cluster's vertex set {1,2,3,4} in two vertices.
  const ClassLabel meet = classify_splus(GeneralGraph(p, {RSet{1, 2, 3}, RSet{2, 3, 4}, RSet{1, 4, 5}}), 10);
  EXPECT_EQ(meet.kind, ClassLabel::Kind::ViolatesB);

  // Two clusters whose vertex sets share two vertices.
  const ClassLabel two = classify_splus(
      GeneralGraph(p, {RSet{1, 2, 3}, RSet{1, 2, 4}, RSet{3, 5, 6}, RSet{4, 5, 6}}), 10);
  EXPECT_EQ(two.kind, ClassLabel::Kind::ViolatesB);
  EXPECT_EQ(two.witness.size(), 4u);

  const ClassLabel ok = classify_splus(
      GeneralGraph(p, {RSet{1, 2, 3}, RSet{1, 2, 4}, RSet{4, 5, 6}, RSet{4, 5, 7}}), 10);
  EXPECT_TRUE(ok.in_class(2));
}

TEST(Classify, ViolationOfC) {
  const Params p{9, 3, 2};
  const GeneralGraph g(p, {RSet{1, 2, 3}, RSet{1, 2, 4}, RSet{4, 5, 6}, RSet{4, 5, 7}});
  const ClassLabel c = classify_splus(g, 1);
  EXPECT_EQ(c.kind, ClassLabel::Kind::ViolatesC);
  EXPECT_EQ(c.t, 2u);
}

TEST(Classify, InClassMatchesCensusAndSteinerProperty) {
  Rng rng(12);
  const Params p{10, 3, 2};
  int in_class = 0;
  for (int iter = 0; iter < 3000; ++iter) {
    const auto m = 1 + rng.below(6);
    GeneralGraph g(p, sample_uniform_msubset(p, static_cast<std::int64_t>(m), rng));
    const ClassLabel label = classify_splus(g, 100);
    if (!label.in_class()) continue;
    ++in_class;
    EXPECT_EQ(label.t, cluster_census(g).t);
    EXPECT_EQ(is_partial_steiner(g), label.t == 0);
  }
  EXPECT_GT(in_class, 1000);
}

// Exhaustive on r = 3, ell = 2: every three edges of a graph in S+(t), t >= 1,
// span at least 3r - 2ell + 1 vertices and every four at least 4r - 2ell - 1.
TEST(Classify, SpanBoundsExhaustiveLinear) {
  const Params p{7, 3, 2};
  for (std::int64_t m = 3; m <= 4; ++m) {
    std::uint64_t checked = 0;
    for_each_general_graph(p, m, [&](const std::vector<RSet>& edges) {
      const ClassLabel label = classify_splus(edges, p, 100);
      if (!label.in_class() || label.t == 0) return;
      ++checked;
      for (std::size_t a = 0; a < edges.size(); ++a)
        for (std::size_t b = a + 1; b < edges.size(); ++b)
          for (std::size_t c = b + 1; c < edges.size(); ++c) {
            ASSERT_GE(span_size({&edges[a], &edges[b], &edges[c]}), 3u * 3 - 4 + 1);
            for (std::size_t d = c + 1; d < edges.size(); ++d)
              ASSERT_GE(span_size({&edges[a], &edges[b], &edges[c], &edges[d]}), 4u * 3 - 4 - 1);
          }
    });
    EXPECT_GT(checked, 0u);
  }
}

// For ell >= 3 the bounds are checked on configurations built around clusters:
// a cluster plus one edge (exhaustive), and two clusters (random pairs of linked edges).
TEST(Classify, SpanBoundsAroundClusters) {
  const std::size_t r = 4, ell = 3;
  {
    const Params p{7, 4, 3};
    std::uint64_t triples = 0;
    for_each_general_graph(p, 3, [&](const std::vector<RSet>& edges) {
      const ClassLabel label = classify_splus(edges, p, 100);
      if (!label.in_class() || label.t == 0) return;
      const auto c = cluster_census(edges, p.ell).clusters.at(0);
      for (EdgeId h = 0; h < edges.size(); ++h) {
        if (h == c[0] || h == c[1]) continue;
        ++triples;
        ASSERT_GE(span_size({&edges[c[0]], &edges[c[1]], &edges[h]}), 3 * r - 2 * ell + 1);
      }
    });
    EXPECT_GT(triples, 0u);
  }
  const Params p{10, 4, 3};
  Rng rng(21);
  auto linked_pair = [&]() {
    const RSet e = sample_uniform_rset(p, rng);
    for (;;) {
      const RSet f = sample_uniform_rset(p, rng);
      if (f != e && linked(e, f, p.ell)) return std::vector<RSet>{e, f};
    }
  };
  std::uint64_t quads = 0;
  for (int iter = 0; iter < 200000; ++iter) {
    std::vector<RSet> edges = linked_pair();
    const auto second = linked_pair();
    edges.insert(edges.end(), second.begin(), second.end());
    if (edges[2] == edges[0] || edges[2] == edges[1] || edges[3] == edges[0] || edges[3] == edges[1]) continue;
    if (!classify_splus(edges, p, 100).in_class(2)) continue;
    ++quads;
    std::vector<const RSet*> all{&edges[0], &edges[1], &edges[2], &edges[3]};
    ASSERT_GE(span_size(all), 4 * r - 2 * ell - 1);
  }
  EXPECT_GT(quads, 100u);
}
