#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "pbcat/caterpillar.hpp"
#include "pbcat/error.hpp"
#include "pbcat/oracle.hpp"
#include "pbcat/tree.hpp"
#include "test_util.hpp"

using namespace pbcat;

namespace {

Tree relabel(const Tree& t, const std::vector<int>& perm) {
  std::vector<Edge> edges;
  for (auto [u, v] : t.edges) edges.push_back({perm[u], perm[v]});
  return Tree(t.m, edges);
}

bool embedding_is_valid(const Tree& t, const Embedding& e) {
  if (static_cast<int>(e.labels.size()) != t.m) return false;
  std::set<std::uint64_t> used;
  for (const auto& l : e.labels) {
    if (l.dim != e.dim || l.bits >> e.dim) return false;
    if (!used.insert(l.bits).second) return false;
  }
  for (auto [u, v] : t.edges)
    if (!adjacent(e.labels[u], e.labels[v])) return false;
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("oracle");

TEST_CASE("canonical_form is an isomorphism invariant") {
  Tree fig = load_fixture("cat16.edges");
  std::vector<int> perm(fig.m);
  for (int v = 0; v < fig.m; ++v) perm[v] = (5 * v + 3) % fig.m;
  CHECK(canonical_form(fig) == canonical_form(relabel(fig, perm)));

  CHECK(canonical_form(make_path(4)).key !=
        canonical_form(Tree(4, {{0, 1}, {0, 2}, {0, 3}})).key);

  SUBCASE("to_canonical maps isomorphic trees onto one representative") {
    auto ca = canonical_form(fig);
    auto cb = canonical_form(relabel(fig, perm));
    std::set<std::pair<int, int>> ea, eb;
    for (auto [u, v] : fig.edges) {
      int cu = ca.to_canonical[u], cv = ca.to_canonical[v];
      ea.insert({std::min(cu, cv), std::max(cu, cv)});
    }
    Tree fig_b = relabel(fig, perm);
    for (auto [u, v] : fig_b.edges) {
      int cu = cb.to_canonical[u], cv = cb.to_canonical[v];
      eb.insert({std::min(cu, cv), std::max(cu, cv)});
    }
    CHECK(ea == eb);
  }
}

TEST_CASE("enumeration counts trees with maximum degree three") {
  // Regression constants derived by exhaustive generation; the m <= 16
  // series 1,1,1,2,2,4,6,11,18,37,66,135,265,552,1132,2410 agrees with the
  // published count of unlabeled trees of maximum degree three.
  const std::vector<std::size_t> expect = {1,  1,  1,   2,   2,   4,    6,   11,
                                           18, 37, 66, 135, 265, 552, 1132, 2410};
  for (int m = 1; m <= 16; ++m)
    CHECK(enumerate_trees_max_deg3(m).size() == expect[static_cast<std::size_t>(m - 1)]);
  CHECK_THROWS_AS(enumerate_trees_max_deg3(17), Error);
  CHECK_THROWS_AS(enumerate_trees_max_deg3(0), Error);
}

TEST_CASE("enumeration counts perfectly balanced 2-caterpillars") {
  // 1 + 1 + 4 classes for m <= 8; 319 classes at m = 16 (frozen after first
  // derivation, cross-checked by an independent definitional classifier).
  const std::vector<std::size_t> expect = {1, 1, 2, 4, 11, 30, 96, 319};
  for (int m = 2; m <= 16; m += 2) {
    auto classes = enumerate_pb_2cats(m);
    CHECK(classes.size() == expect[static_cast<std::size_t>(m / 2 - 1)]);
    std::ignore = classes;
  }
  CHECK_THROWS_AS(enumerate_pb_2cats(7), Error);
  CHECK_THROWS_AS(enumerate_pb_2cats(18), Error);
}

TEST_CASE("enumeration output is filtered, deduplicated and ordered") {
  auto classes = enumerate_pb_2cats(12);
  std::vector<std::string> keys;
  for (const auto& t : classes) {
    CHECK(perfect_matching(t).has_value());
    auto k = classify(t);
    REQUIRE(k.has_value());
    CHECK(*k <= 2);
    keys.push_back(canonical_form(t).key);
  }
  for (std::size_t i = 1; i < keys.size(); ++i) CHECK(keys[i - 1] < keys[i]);

  SUBCASE("the 16-vertex fixture's class is enumerated") {
    auto fig_key = canonical_form(load_fixture("cat16.edges")).key;
    bool found = false;
    for (const auto& t : enumerate_pb_2cats(16))
      if (canonical_form(t).key == fig_key) found = true;
    CHECK(found);
  }
}

TEST_CASE("smallest strictly deeper caterpillars") {
  // Derived minima, frozen: the first strictly 2-caterpillar appears at
  // order 10 and the first perfectly balanced one at order 14 (counts per
  // order: 1,2,8,24,72,197,542 for m=10..16; balanced: 2 at 14, 17 at 16).
  auto strictly2 = [](int m) {
    int cnt = 0, pb = 0;
    for (const auto& t : enumerate_trees_max_deg3(m))
      if (classify(t) == 2) {
        ++cnt;
        if (perfect_matching(t).has_value()) ++pb;
      }
    return std::pair<int, int>{cnt, pb};
  };
  for (int m = 2; m <= 9; ++m) CHECK(strictly2(m).first == 0);
  CHECK(strictly2(10) == std::pair<int, int>{1, 0});
  CHECK(strictly2(11) == std::pair<int, int>{2, 0});
  CHECK(strictly2(12) == std::pair<int, int>{8, 0});
  CHECK(strictly2(13) == std::pair<int, int>{24, 0});
  CHECK(strictly2(14) == std::pair<int, int>{72, 2});
}

TEST_CASE("brute force embedder finds and refutes embeddings") {
  SUBCASE("three vertices do not fit in two labels") {
    CHECK(!brute_force_embed(make_path(3), 1).has_value());
  }
  SUBCASE("six vertices do not fit in four labels") {
    Tree six(6, {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {2, 5}});
    CHECK(!brute_force_embed(six, 2).has_value());
  }
  SUBCASE("every balanced 8-vertex class embeds into dimension three") {
    auto classes = enumerate_pb_2cats(8);
    REQUIRE(classes.size() == 4);
    for (const auto& t : classes) {
      auto e = brute_force_embed(t, 3);
      REQUIRE(e.has_value());
      CHECK(embedding_is_valid(t, *e));
    }
  }
  SUBCASE("deterministic and symmetry-broken") {
    Tree t = enumerate_pb_2cats(8)[2];
    auto e1 = brute_force_embed(t, 3);
    auto e2 = brute_force_embed(t, 3);
    REQUIRE(e1.has_value());
    REQUIRE(e2.has_value());
    for (int v = 0; v < t.m; ++v) CHECK(e1->labels[v].bits == e2->labels[v].bits);

    auto p2 = brute_force_embed(make_path(2), 1);
    REQUIRE(p2.has_value());
    CHECK(p2->labels[0].bits == 0);
    CHECK(p2->labels[1].bits == 1);
  }
  SUBCASE("desk limit is enforced") {
    CHECK_THROWS_AS(brute_force_embed(make_path(2), 7), Error);
    CHECK_NOTHROW(brute_force_embed(make_path(2), 7, std::nullopt, 8));
  }
}

TEST_CASE("anchored brute force seeds the pattern") {
  SUBCASE("path anchored as a three-vertex path") {
    AnchorConstraint a;
    a.x = 0;
    a.y = 1;
    a.z = 2;
    a.required_pattern = AnchorPattern::P3_XYZ;
    auto e = brute_force_embed(make_path(4), 2, a);
    REQUIRE(e.has_value());
    CHECK(embedding_is_valid(make_path(4), *e));
    CHECK(e->labels[0].bits == 0b00);
    CHECK(e->labels[1].bits == 0b01);
    CHECK(e->labels[2].bits == 0b11);
  }
  SUBCASE("claw needs dimension three") {
    Tree star(4, {{0, 1}, {0, 2}, {0, 3}});
    AnchorConstraint a;
    a.x = 1;
    a.y = 2;
    a.z = 3;
    a.alpha = 0;
    a.required_pattern = AnchorPattern::CLAW_ALPHA_CENTER;
    CHECK(!brute_force_embed(star, 2, a).has_value());
    auto e = brute_force_embed(star, 3, a);
    REQUIRE(e.has_value());
    CHECK(e->labels[0].bits == 0b000);
    CHECK(e->labels[1].bits == 0b001);
    CHECK(e->labels[2].bits == 0b010);
    CHECK(e->labels[3].bits == 0b100);
  }
  SUBCASE("coincident anchor roles are rejected") {
    AnchorConstraint a;
    a.x = 0;
    a.y = 0;
    a.z = 2;
    a.required_pattern = AnchorPattern::P3_XYZ;
    CHECK_THROWS_AS(brute_force_embed(make_path(4), 2, a), Error);
  }
  SUBCASE("parity obstruction is a negative result, not an error") {
    // x and z anchored at Hamming distance 2 but joined by a tree path of
    // odd length cannot be embedded.
    AnchorConstraint a;
    a.x = 0;
    a.y = 1;
    a.z = 3;
    a.required_pattern = AnchorPattern::P3_XYZ;
    CHECK(!brute_force_embed(make_path(4), 2, a).has_value());
  }
}

TEST_CASE("multi-pin search handles simultaneous pattern constraints") {
  auto edge_ok = [](const Embedding& e, int u, int v) {
    return adjacent(e.label_of(u), e.label_of(v));
  };
  SUBCASE("two edge pins at opposite ends of a path") {
    Tree p8 = make_path(8);
    std::vector<PinnedPattern> pins = {{PatternKind::EDGE, {0, 3}},
                                       {PatternKind::EDGE, {4, 7}}};
    auto e = brute_force_embed_pins(p8, 3, pins);
    REQUIRE(e.has_value());
    CHECK(edge_ok(*e, 0, 3));
    CHECK(edge_ok(*e, 4, 7));
    for (auto [u, v] : p8.edges) CHECK(edge_ok(*e, u, v));
  }
  SUBCASE("pin between vertices at even tree distance is infeasible") {
    std::vector<PinnedPattern> pins = {{PatternKind::EDGE, {0, 2}}};
    CHECK(!brute_force_embed_pins(make_path(8), 3, pins).has_value());
  }
  SUBCASE("a P3 pin mixing a tree edge and a chord") {
    std::vector<PinnedPattern> pins = {{PatternKind::P3, {0, 1, 4}}};
    auto e = brute_force_embed_pins(make_path(8), 3, pins);
    REQUIRE(e.has_value());
    CHECK(edge_ok(*e, 0, 1));
    CHECK(edge_ok(*e, 1, 4));
  }
  SUBCASE("two chords forcing faces that share one vertex are infeasible") {
    // Positions 0..3 and 3..6 would both close 4-cycles; two faces of the
    // 3-cube never meet in exactly one vertex.
    std::vector<PinnedPattern> pins = {{PatternKind::P3, {0, 3, 6}}};
    CHECK(!brute_force_embed_pins(make_path(8), 3, pins).has_value());
  }
  SUBCASE("pattern needing more dimensions than available is absent") {
    std::vector<PinnedPattern> pins = {{PatternKind::CLAW, {0, 1, 2, 3}}};
    CHECK(!brute_force_embed_pins(make_path(4), 2, pins).has_value());
  }
  SUBCASE("duplicate roles within one pin are rejected") {
    std::vector<PinnedPattern> pins = {{PatternKind::EDGE, {1, 1}}};
    CHECK_THROWS_AS(brute_force_embed_pins(make_path(4), 2, pins), Error);
  }
  SUBCASE("an empty pin list matches the unanchored search") {
    auto a = brute_force_embed_pins(make_path(8), 3, {});
    auto b = brute_force_embed(make_path(8), 3);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    for (int v = 0; v < 8; ++v)
      CHECK(a->label_of(v).bits == b->label_of(v).bits);
  }
}

TEST_CASE("random generator produces valid instances") {
  for (int m : {2, 4, 8, 16, 32}) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      Tree t = generate_random_pb_2cat(m, seed);
      CHECK(t.m == m);
      CHECK(perfect_matching(t).has_value());
      auto k = classify(t);
      REQUIRE(k.has_value());
      CHECK(*k <= 2);
    }
  }
  SUBCASE("deterministic per seed, varied across seeds") {
    Tree a = generate_random_pb_2cat(32, 7);
    Tree b = generate_random_pb_2cat(32, 7);
    CHECK(a.edges == b.edges);
    std::set<std::string> shapes;
    for (std::uint64_t seed = 0; seed < 25; ++seed)
      shapes.insert(canonical_form(generate_random_pb_2cat(32, seed)).key);
    CHECK(shapes.size() >= 5);
  }
}

TEST_SUITE_END();
