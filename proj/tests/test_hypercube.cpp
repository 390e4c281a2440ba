#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "pbcat/error.hpp"
#include "pbcat/hypercube.hpp"

using namespace pbcat;

namespace {
Label L(const std::string& s) { return Label::parse(s); }
}  // namespace

TEST_SUITE_BEGIN("hypercube");

TEST_CASE("labels parse and print most-significant bit first") {
  Label a = L("100");
  CHECK(a.dim == 3);
  CHECK(a.bits == 4);
  CHECK(a.to_string() == "100");
  CHECK(L("0001").bits == 1);
  CHECK(L("0001").to_string() == "0001");
  CHECK_THROWS_AS(Label::parse(""), Error);
  CHECK_THROWS_AS(Label::parse("01x"), Error);
  CHECK_THROWS_AS(Label::parse(std::string(65, '0')), Error);
}

TEST_CASE("adjacency is Hamming distance one") {
  CHECK(adjacent(L("000"), L("001")));
  CHECK(!adjacent(L("000"), L("011")));
  CHECK(adjacent(L("101"), L("100")));
  CHECK(!adjacent(L("101"), L("101")));
  CHECK_THROWS_AS(adjacent(L("00"), L("000")), Error);
}

TEST_CASE("automorphism application") {
  auto id3 = Automorphism::identity(3);
  CHECK(apply(id3, L("101")) == L("101"));

  Automorphism comp = id3;
  comp.mask = 0b111;
  CHECK(apply(comp, L("000")) == L("111"));

  Automorphism swap01{{1, 0}, 0, 2};
  CHECK(apply(swap01, L("01")) == L("10"));
  CHECK_THROWS_AS(apply(swap01, L("011")), Error);
}

TEST_CASE("compose and invert satisfy the group laws") {
  Automorphism a{{2, 0, 1}, 0b011, 3};
  Automorphism b{{1, 2, 0}, 0b101, 3};
  auto ab = compose(a, b);
  for (uint64_t v = 0; v < 8; ++v) {
    Label x(v, 3);
    CHECK(apply(ab, x) == apply(a, apply(b, x)));
    CHECK(apply(invert(a), apply(a, x)) == x);
    CHECK(apply(compose(a, invert(a)), x) == x);
  }
  auto assoc_lhs = compose(compose(a, b), a);
  auto assoc_rhs = compose(a, compose(b, a));
  for (uint64_t v = 0; v < 8; ++v)
    CHECK(apply(assoc_lhs, Label(v, 3)) == apply(assoc_rhs, Label(v, 3)));
}

TEST_CASE("pattern metadata") {
  CHECK(pattern_arity(PatternKind::VERTEX) == 1);
  CHECK(pattern_arity(PatternKind::EDGE) == 2);
  CHECK(pattern_arity(PatternKind::P3) == 3);
  CHECK(pattern_arity(PatternKind::CLAW) == 4);
  CHECK(pattern_arity(PatternKind::C4) == 4);
  CHECK(pattern_min_dim(PatternKind::VERTEX) == 1);
  CHECK(pattern_min_dim(PatternKind::EDGE) == 1);
  CHECK(pattern_min_dim(PatternKind::P3) == 2);
  CHECK(pattern_min_dim(PatternKind::CLAW) == 3);
  CHECK(pattern_min_dim(PatternKind::C4) == 2);
}

TEST_CASE("align maps pattern tuples role for role") {
  SUBCASE("edge in the square") {
    auto a = align(PatternKind::EDGE, {L("00"), L("01")}, {L("00"), L("10")});
    CHECK(apply(a, L("00")) == L("00"));
    CHECK(apply(a, L("01")) == L("10"));
    CHECK(a.mask == 0);
  }
  SUBCASE("claw to its complement") {
    std::vector<Label> src = {L("000"), L("001"), L("010"), L("100")};
    std::vector<Label> dst = {L("111"), L("110"), L("101"), L("011")};
    auto a = align(PatternKind::CLAW, src, dst);
    CHECK(a.mask == 0b111);
    for (std::size_t i = 0; i < 4; ++i) CHECK(apply(a, src[i]) == dst[i]);
  }
  SUBCASE("path of three vertices") {
    std::vector<Label> src = {L("000"), L("001"), L("011")};
    std::vector<Label> dst = {L("000"), L("100"), L("110")};
    auto a = align(PatternKind::P3, src, dst);
    CHECK(a.mask == 0);  // pure coordinate permutation
    for (std::size_t i = 0; i < 3; ++i) CHECK(apply(a, src[i]) == dst[i]);
  }
  SUBCASE("single vertex") {
    auto a = align(PatternKind::VERTEX, {L("0")}, {L("1")});
    CHECK(apply(a, L("0")) == L("1"));
  }
  SUBCASE("four-cycle") {
    std::vector<Label> src = {L("000"), L("001"), L("011"), L("010")};
    std::vector<Label> dst = {L("000"), L("010"), L("011"), L("001")};
    auto a = align(PatternKind::C4, src, dst);
    for (std::size_t i = 0; i < 4; ++i) CHECK(apply(a, src[i]) == dst[i]);
  }
  SUBCASE("rejects tuples that do not induce the pattern") {
    CHECK_THROWS_AS(
        align(PatternKind::P3, {L("000"), L("011"), L("111")},
              {L("000"), L("001"), L("011")}),
        Error);
    CHECK_THROWS_AS(
        align(PatternKind::EDGE, {L("00"), L("11")}, {L("00"), L("01")}),
        Error);
    CHECK_THROWS_AS(align(PatternKind::CLAW,
                          {L("00"), L("01"), L("10"), L("11")},
                          {L("00"), L("01"), L("10"), L("11")}),
                    Error);
    // four-cycle roles must close up
    CHECK_THROWS_AS(align(PatternKind::C4,
                          {L("000"), L("001"), L("011"), L("111")},
                          {L("000"), L("001"), L("011"), L("010")}),
                    Error);
  }
}

TEST_CASE("alignment preserves adjacency globally") {
  std::vector<Label> src = {L("0000"), L("0001"), L("0011")};
  std::vector<Label> dst = {L("1010"), L("1000"), L("1100")};
  auto a = align(PatternKind::P3, src, dst);
  for (std::size_t i = 0; i < 3; ++i) CHECK(apply(a, src[i]) == dst[i]);
  for (uint64_t u = 0; u < 16; ++u)
    for (uint64_t v = 0; v < 16; ++v) {
      Label lu(u, 4), lv(v, 4);
      CHECK(adjacent(lu, lv) == adjacent(apply(a, lu), apply(a, lv)));
    }
}

TEST_SUITE_END();
