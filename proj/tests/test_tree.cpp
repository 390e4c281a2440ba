#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "pbcat/error.hpp"
#include "pbcat/tree.hpp"
#include "test_util.hpp"

using namespace pbcat;

TEST_SUITE_BEGIN("tree");

TEST_CASE("parse and serialize round-trip") {
  Tree t = load_fixture("cat16.edges");
  CHECK(t.m == 16);
  CHECK(t.edges.size() == 15);
  std::string text = serialize_tree(t, "round-trip");
  Tree again = parse_tree(text);
  CHECK(again.m == t.m);
  auto norm = [](std::vector<Edge> es) {
    for (auto& e : es)
      if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(es.begin(), es.end());
    return es;
  };
  CHECK(norm(again.edges) == norm(t.edges));
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse_tree(""), Error);
  CHECK_THROWS_AS(parse_tree("0\n"), Error);
  CHECK_THROWS_AS(parse_tree("2\n"), Error);              // missing edge
  CHECK_THROWS_AS(parse_tree("2\n0 0\n"), Error);         // self loop
  CHECK_THROWS_AS(parse_tree("2\n0 2\n"), Error);         // out of range
  CHECK_THROWS_AS(parse_tree("3\n0 1\n0 1\n"), Error);    // duplicate edge
  CHECK_THROWS_AS(parse_tree("4\n0 1\n2 3\n1 2\n0 2\n"), Error);  // extra edge
  CHECK_THROWS_AS(parse_tree("2\n0 1\nleftover\n"), Error);
  try {
    parse_tree("2\n0 9\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_input);
  }
  CHECK(parse_tree("1\n").m == 1);
  CHECK(parse_tree("# comment\n \n2\n0 1\n").m == 2);
}

TEST_CASE("adjacency structure") {
  Tree t = load_fixture("cat16.edges");
  CHECK(t.degree(1) == 3);
  CHECK(t.degree(4) == 1);
  CHECK(t.has_edge(0, 1));
  CHECK(t.has_edge(1, 0));
  CHECK(!t.has_edge(0, 2));
  CHECK(std::is_sorted(t.adj[1].begin(), t.adj[1].end()));
  for (int v = 0; v < t.m; ++v)
    for (std::size_t i = 0; i < t.adj[v].size(); ++i) {
      int e = t.adj_edge[v][i];
      int u = t.adj[v][i];
      CHECK(((t.edges[e].first == v && t.edges[e].second == u) ||
             (t.edges[e].first == u && t.edges[e].second == v)));
    }
}

TEST_CASE("perfect matching by leaf stripping") {
  Tree t = load_fixture("cat16.edges");
  auto m = perfect_matching(t);
  REQUIRE(m.has_value());
  std::vector<Edge> expect = {{0, 1}, {2, 11}, {3, 4},   {5, 6},
                              {7, 8}, {9, 10}, {12, 15}, {13, 14}};
  CHECK(m->pairs == expect);
  for (auto [u, v] : m->pairs) {
    CHECK(m->mate[u] == v);
    CHECK(m->mate[v] == u);
  }

  CHECK(perfect_matching(make_path(4))->pairs ==
        std::vector<Edge>{{0, 1}, {2, 3}});
  CHECK(perfect_matching(make_path(2))->pairs == std::vector<Edge>{{0, 1}});
  CHECK(!perfect_matching(make_path(1)).has_value());
  CHECK(!perfect_matching(make_path(5)).has_value());
  Tree claw(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(!perfect_matching(claw).has_value());
}

TEST_CASE("path between vertices") {
  Tree t = load_fixture("cat16.edges");
  CHECK(path_between(t, 4, 15) ==
        std::vector<int>{4, 3, 0, 1, 2, 11, 12, 15});
  CHECK(path_between(t, 7, 7) == std::vector<int>{7});
  CHECK(path_between(t, 6, 4) == std::vector<int>{6, 5, 3, 4});
}

TEST_CASE("split on non-matching edge") {
  Tree t = load_fixture("cat16.edges");
  auto m = perfect_matching(t);
  REQUIRE(m.has_value());
  SplitResult s = split_on_edge(t, {1, 2}, &*m);
  CHECK(s.first.m == 10);
  CHECK(s.second.m == 6);
  CHECK(perfect_matching(s.first).has_value());
  CHECK(perfect_matching(s.second).has_value());
  // index maps round-trip
  for (int v = 0; v < s.first.m; ++v) CHECK(s.to_first[s.from_first[v]] == v);
  for (int v = 0; v < s.second.m; ++v)
    CHECK(s.to_second[s.from_second[v]] == v);
  CHECK(s.to_first[2] == -1);
  CHECK(s.to_second[1] == -1);
  // matching edge refused
  CHECK_THROWS_AS(split_on_edge(t, {0, 1}, &*m), Error);
  // non-edges refused
  CHECK_THROWS_AS(split_on_edge(t, {0, 2}, &*m), Error);
}

TEST_CASE("induced subtree") {
  Tree t = load_fixture("cat16.edges");
  std::vector<int> sub = {0, 1, 2, 3};
  std::vector<int> from_new, to_new;
  Tree s = induced_subtree(t, sub, &from_new, &to_new);
  CHECK(s.m == 4);
  CHECK(s.edges.size() == 3);
  for (int v = 0; v < s.m; ++v) CHECK(to_new[from_new[v]] == v);
  // disconnected subset rejected
  CHECK_THROWS_AS(induced_subtree(t, {0, 2}, nullptr, nullptr), Error);
}

TEST_SUITE_END();
