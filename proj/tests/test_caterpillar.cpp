#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <memory>

#include "doctest.h"
#include "pbcat/caterpillar.hpp"
#include "pbcat/error.hpp"
#include "test_util.hpp"

using namespace pbcat;

namespace {
std::shared_ptr<const Tree> fixture16() {
  return std::make_shared<const Tree>(load_fixture("cat16.edges"));
}
}  // namespace

TEST_SUITE_BEGIN("caterpillar");

TEST_CASE("classify recognizes caterpillar depth") {
  CHECK(classify(Tree(1, {})) == 0);
  CHECK(classify(make_path(2)) == 0);
  CHECK(classify(make_path(8)) == 0);
  Tree star3(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(classify(star3) == 1);
  // spine 0-1-2-3 with pendants at 1 and 2
  Tree spine(6, {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {2, 5}});
  CHECK(classify(spine) == 1);
  CHECK(classify(*fixture16()) == 2);
  Tree star4(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  CHECK(!classify(star4).has_value());
}

TEST_CASE("classify on vertex subsets") {
  auto t = fixture16();
  std::vector<char> allowed(16, 0);
  for (int v : {1, 7, 8, 9, 10}) allowed[v] = 1;
  CHECK(classify_subset(*t, allowed) == 1);
  allowed.assign(16, 0);
  for (int v : {2, 11, 12, 13, 14, 15}) allowed[v] = 1;
  CHECK(classify_subset(*t, allowed) == 1);
  allowed.assign(16, 0);
  allowed[5] = allowed[6] = 1;
  CHECK(classify_subset(*t, allowed) == 0);
}

TEST_CASE("decompose reduces a maximal backbone to short end legs") {
  auto t = fixture16();
  auto d = decompose(t, 2);
  CHECK(d.backbone == std::vector<int>{0, 1, 2});
  CHECK(d.order() == 16);
  CHECK(d.backbone_order() == 3);
  CHECK(d.leg_order(1) == 5);
  CHECK(d.leg_order(2) == 5);
  CHECK(d.leg_order(3) == 6);
  CHECK(d.leg_set(1) == std::vector<int>{0, 3, 4, 5, 6});
  CHECK(d.leg_set(2) == std::vector<int>{1, 7, 8, 9, 10});
  CHECK(d.leg_set(3) == std::vector<int>{2, 11, 12, 13, 14, 15});
  CHECK(d.depth == 1);
  CHECK(d.witnessed_k() == 2);
  validate_decomposition(d);

  CHECK_THROWS_AS(decompose(t, 1), Error);

  auto p = decompose(std::make_shared<const Tree>(make_path(8)), 0);
  CHECK(p.backbone == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(p.witnessed_k() == 0);
  for (int q = 1; q <= 8; ++q) CHECK(p.leg_order(q) == 1);
}

TEST_CASE("nested leg decompositions") {
  auto d = decompose(fixture16(), 2);
  const auto& leg1 = d.leg(1);
  CHECK(leg1.backbone == std::vector<int>{0, 3, 4});
  CHECK(leg1.leg_set(2) == std::vector<int>{3, 5, 6});
  CHECK(d.leg_rooted_depth(1) == 1);
  CHECK(d.leg_rooted_depth(2) == 1);
  CHECK(d.leg_rooted_depth(3) == 1);
  const auto& leg3 = d.leg(3);
  CHECK(leg3.backbone == std::vector<int>{2, 11, 12, 15});
}

TEST_CASE("extend and reduce are inverse at the ends") {
  auto d = decompose(fixture16(), 2);
  auto ext = extend_backbone(d, BackboneEnd::first);
  CHECK(ext.backbone == std::vector<int>{4, 3, 0, 1, 2});
  auto back = reduce_backbone(ext, BackboneEnd::first);
  CHECK(back.backbone == d.backbone);

  auto ext2 = extend_backbone(d, BackboneEnd::last);
  CHECK(ext2.backbone == std::vector<int>{0, 1, 2, 11, 12, 15});
  auto back2 = reduce_backbone(ext2, BackboneEnd::last);
  CHECK(back2.backbone == d.backbone);

  auto p = decompose(std::make_shared<const Tree>(make_path(8)), 0);
  CHECK_THROWS_AS(extend_backbone(p, BackboneEnd::first), Error);
  CHECK_THROWS_AS(reduce_backbone(p, BackboneEnd::first), Error);
}

TEST_CASE("leg prefix orders and split location") {
  auto d = decompose(fixture16(), 2);
  CHECK(leg_prefix_order(d, 1) == 5);
  CHECK(leg_prefix_order(d, 2) == 10);
  CHECK(leg_prefix_order(d, 3) == 16);
  CHECK(find_split(d, 8) == 2);
  CHECK_THROWS_AS(leg_prefix_order(d, 0), Error);
  CHECK_THROWS_AS(leg_prefix_order(d, 4), Error);

  auto p = decompose(std::make_shared<const Tree>(make_path(8)), 0);
  for (int l = 1; l <= 8; ++l) CHECK(leg_prefix_order(p, l) == l);
  CHECK(find_split(p, 4) == 4);

  // a two-vertex backbone violates the precondition
  auto host = std::make_shared<const Tree>(make_path(4));
  BackboneDecomposition two(host, {0, 1, 2, 3}, {1, 2});
  CHECK_THROWS_AS(find_split(two, 2), Error);
}

TEST_CASE("reverse_labels flips the backbone order") {
  auto d = decompose(fixture16(), 2);
  auto r = reverse_labels(d);
  CHECK(r.backbone == std::vector<int>{2, 1, 0});
  CHECK(r.leg_order(1) == 6);
  CHECK(r.leg_order(2) == 5);
  CHECK(r.leg_order(3) == 5);
  auto rr = reverse_labels(r);
  CHECK(rr.backbone == d.backbone);
}

TEST_CASE("first even-order leg after an index") {
  auto d = decompose(fixture16(), 2);
  CHECK(first_even_order_leg(d, 1) == 3);
  CHECK(first_even_order_leg(d, 2) == 3);
  CHECK(!first_even_order_leg(d, 3).has_value());
  auto r = reverse_labels(d);
  CHECK(!first_even_order_leg(r, 1).has_value());
}

TEST_CASE("parity_backbone reaches both parities on a path") {
  auto host = std::make_shared<const Tree>(make_path(4));
  auto d = decompose(host, 1);
  auto odd = parity_backbone(d, Parity::odd);
  CHECK(odd.backbone == std::vector<int>{0, 1});
  CHECK(odd.backbone[0] == d.backbone[0]);
  validate_decomposition(odd);
  auto even = parity_backbone(d, Parity::even);
  CHECK(even.backbone == std::vector<int>{0, 1, 2});
  validate_decomposition(even);
}

TEST_CASE("parity_backbone from an interior start vertex") {
  auto host = std::make_shared<const Tree>(make_path(4));
  BackboneDecomposition d(host, {0, 1, 2, 3}, {1, 2, 3});
  auto even = parity_backbone(d, Parity::even);
  CHECK(even.backbone == std::vector<int>{1, 2, 3});
  auto odd = parity_backbone(d, Parity::odd);
  CHECK(odd.backbone == std::vector<int>{1, 2});
}

TEST_CASE("parity_backbone on the smallest legs") {
  auto host = std::make_shared<const Tree>(make_path(2));
  auto d = decompose(host, 0);
  auto odd = parity_backbone(d, Parity::odd);
  CHECK(odd.backbone_order() == 2);
  CHECK_THROWS_AS(parity_backbone(d, Parity::even), Error);

  // an odd-order leg is not perfectly balanced
  auto host3 = std::make_shared<const Tree>(make_path(3));
  auto d3 = decompose(host3, 0);
  CHECK_THROWS_AS(parity_backbone(d3, Parity::odd), Error);
}

TEST_CASE("decomposition invariants are enforced") {
  auto t = fixture16();
  CHECK_THROWS_AS(BackboneDecomposition(t, {0, 1, 2}, {0, 2}), Error);
  CHECK_THROWS_AS(BackboneDecomposition(t, {0, 1}, {0, 1, 2}), Error);
  std::vector<int> all(16);
  for (int i = 0; i < 16; ++i) all[i] = i;
  // backbone that strands vertices in no leg is fine (they join legs);
  // a backbone repeating a vertex is not
  CHECK_THROWS_AS(BackboneDecomposition(t, all, {0, 1, 0}), Error);
}

TEST_SUITE_END();
