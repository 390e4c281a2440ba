#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "doctest.h"
#include "pbcat/caterpillar.hpp"
#include "pbcat/embedding.hpp"
#include "pbcat/oracle.hpp"
#include "pbcat/tree.hpp"
#include "pbcat/verify.hpp"
#include "test_util.hpp"

using namespace pbcat;

namespace {

Embedding make_embedding(int dim, std::vector<std::uint64_t> bits) {
  Embedding e;
  e.dim = dim;
  for (auto b : bits) e.labels.push_back(Label(b, dim));
  return e;
}

bool has_kind(const CheckReport& r, CheckKind k) {
  for (const auto& v : r.violations)
    if (v.kind == k) return true;
  return false;
}

}  // namespace

TEST_SUITE_BEGIN("verify");

TEST_CASE("check_embedding accepts a gray code path") {
  auto e = make_embedding(2, {0b00, 0b01, 0b11, 0b10});
  auto r = check_embedding(make_path(4), e, true);
  CHECK(r.ok);
  CHECK(r.violations.empty());
}

TEST_CASE("check_embedding reports each defect kind") {
  SUBCASE("duplicate label") {
    auto e = make_embedding(2, {0b00, 0b01, 0b11, 0b01});
    auto r = check_embedding(make_path(4), e, false);
    CHECK(!r.ok);
    CHECK(has_kind(r, CheckKind::NOT_INJECTIVE));
  }
  SUBCASE("non-adjacent edge image") {
    auto e = make_embedding(2, {0b00, 0b01, 0b10, 0b11});
    auto r = check_embedding(make_path(4), e, false);
    CHECK(has_kind(r, CheckKind::EDGE_NOT_ADJACENT));
    // the offending edge is the middle one, 01 vs 10
    REQUIRE(!r.violations.empty());
    CHECK(r.violations[0].witness.find("(1,2)") != std::string::npos);
  }
  SUBCASE("label out of range") {
    auto e = make_embedding(2, {0b00, 0b01, 0b11, 0b10});
    e.labels[3].bits = 0b111;  // bypasses the constructor's invariant
    CHECK(has_kind(check_embedding(make_path(4), e, false),
                   CheckKind::LABEL_OUT_OF_RANGE));
  }
  SUBCASE("wrong label width") {
    auto e = make_embedding(2, {0b00, 0b01, 0b11, 0b10});
    e.labels[3] = Label(0b10, 3);
    CHECK(has_kind(check_embedding(make_path(4), e, false),
                   CheckKind::LABEL_OUT_OF_RANGE));
  }
  SUBCASE("not spanning") {
    auto e = make_embedding(2, {0b00, 0b01, 0b11});
    auto r = check_embedding(make_path(3), e, true);
    CHECK(has_kind(r, CheckKind::NOT_SPANNING));
    CHECK(check_embedding(make_path(3), e, false).ok);
  }
  SUBCASE("vertex count mismatch") {
    auto e = make_embedding(2, {0b00, 0b01, 0b11});
    CHECK(!check_embedding(make_path(4), e, false).ok);
  }
}

TEST_CASE("check_pattern validates role adjacency") {
  auto e = make_embedding(3, {0b000, 0b001, 0b011, 0b111, 0b010, 0b100});

  AnchorConstraint a;
  a.x = 0;
  a.y = 1;
  a.z = 2;
  a.required_pattern = AnchorPattern::P3_XYZ;
  CHECK(check_pattern(e, a).ok);

  SUBCASE("role order matters") {
    a.required_pattern = AnchorPattern::P3_YXZ;
    auto r = check_pattern(e, a);
    CHECK(has_kind(r, CheckKind::PATTERN_MISMATCH));
  }
  SUBCASE("claw centered at alpha") {
    AnchorConstraint c;
    c.alpha = 0;  // 000
    c.x = 1;      // 001
    c.y = 4;      // 010
    c.z = 5;      // 100
    c.required_pattern = AnchorPattern::CLAW_ALPHA_CENTER;
    CHECK(check_pattern(e, c).ok);
    c.z = 3;  // 111 is not adjacent to the center
    CHECK(has_kind(check_pattern(e, c), CheckKind::PATTERN_MISMATCH));
    c.z = 5;
    c.alpha.reset();
    CHECK(has_kind(check_pattern(e, c), CheckKind::PATTERN_MISMATCH));
  }
  SUBCASE("four cycle in role order") {
    AnchorConstraint c;
    c.x = 0;      // 000
    c.alpha = 1;  // 001
    c.y = 2;      // 011
    c.z = 4;      // 010
    c.required_pattern = AnchorPattern::C4_X_ALPHA_Y_Z;
    CHECK(check_pattern(e, c).ok);
    std::swap(c.y, c.z);  // breaks the cyclic order
    CHECK(has_kind(check_pattern(e, c), CheckKind::PATTERN_MISMATCH));
  }
  SUBCASE("coincident roles reported, not thrown") {
    a.y = 0;
    auto r = check_pattern(e, a);
    CHECK(has_kind(r, CheckKind::PATTERN_MISMATCH));
  }
  SUBCASE("anchor outside the embedding reported, not thrown") {
    a.z = 99;
    CHECK(has_kind(check_pattern(e, a), CheckKind::PATTERN_MISMATCH));
  }
}

TEST_CASE("check_pb_2cat recognizes balanced shallow caterpillars") {
  CHECK(check_pb_2cat(load_fixture("cat16.edges")).ok);
  CHECK(check_pb_2cat(make_path(2)).ok);
  CHECK(check_pb_2cat(make_path(8)).ok);

  SUBCASE("odd order is unbalanced") {
    auto r = check_pb_2cat(make_path(3));
    CHECK(has_kind(r, CheckKind::NOT_PERFECTLY_BALANCED));
    CHECK(!has_kind(r, CheckKind::NOT_2CAT));
  }
  SUBCASE("high degree is rejected") {
    Tree star4(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    CHECK(has_kind(check_pb_2cat(star4), CheckKind::NOT_2CAT));
  }
  SUBCASE("depth-three tree is rejected") {
    // center 0 carrying three branches, each a stem into a full binary
    // bush: every backbone leaves one whole bush hanging, which no path
    // from its attachment can flatten.
    std::vector<Edge> edges;
    for (int i = 0; i < 3; ++i) {
      int b = 1 + 8 * i;
      edges.insert(edges.end(), {{0, b},
                                 {b, b + 1},
                                 {b + 1, b + 2},
                                 {b + 1, b + 3},
                                 {b + 2, b + 4},
                                 {b + 2, b + 5},
                                 {b + 3, b + 6},
                                 {b + 3, b + 7}});
    }
    Tree deep(25, edges);
    CHECK(classify(deep) == 3);
    auto r = check_pb_2cat(deep);
    CHECK(has_kind(r, CheckKind::NOT_2CAT));
  }
  SUBCASE("agrees with the construction-side classifier on all small trees") {
    for (int m = 2; m <= 12; ++m) {
      for (const auto& t : enumerate_trees_max_deg3(m)) {
        auto k = classify(t);
        bool is2 = k.has_value() && *k <= 2;
        bool pb = perfect_matching(t).has_value();
        auto r = check_pb_2cat(t);
        CHECK(has_kind(r, CheckKind::NOT_2CAT) == !is2);
        CHECK(has_kind(r, CheckKind::NOT_PERFECTLY_BALANCED) == !pb);
        CHECK(r.ok == (is2 && pb));
      }
    }
  }
}

TEST_CASE("verifier accepts oracle output") {
  for (int m : {4, 8, 16}) {
    for (const auto& t : enumerate_pb_2cats(m)) {
      int n = 2;
      while ((1 << n) < m) ++n;
      auto e = brute_force_embed(t, n);
      REQUIRE(e.has_value());
      CHECK(check_embedding(t, *e, true).ok);
    }
  }
}

TEST_SUITE_END();
