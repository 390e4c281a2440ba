#include "pbcat/hypercube.hpp"

#include <algorithm>
#include <bit>

namespace pbcat {

namespace {

std::uint64_t full_mask(int dim) {
  return dim >= 64 ? ~0ull : ((1ull << dim) - 1);
}

}  // namespace

Label::Label(std::uint64_t b, int n) : bits(b), dim(n) {
  if (n < 1 || n > 64) fail_invalid("label dimension must be in 1..64");
  if ((b & ~full_mask(n)) != 0)
    fail_invalid("label value does not fit in " + std::to_string(n) + " bits");
}

std::string Label::to_string() const {
  std::string s(dim, '0');
  for (int i = 0; i < dim; ++i)
    if (bits >> i & 1) s[dim - 1 - i] = '1';
  return s;
}

Label Label::parse(const std::string& s) {
  if (s.empty() || s.size() > 64)
    fail_invalid("label string must have 1..64 characters");
  std::uint64_t bits = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c != '0' && c != '1') fail_invalid("label string must be binary");
    if (c == '1') bits |= 1ull << (s.size() - 1 - i);
  }
  return Label(bits, static_cast<int>(s.size()));
}

bool adjacent(const Label& a, const Label& b) {
  if (a.dim != b.dim) fail_invalid("adjacency requires equal dimensions");
  return std::popcount(a.bits ^ b.bits) == 1;
}

Automorphism Automorphism::identity(int n) {
  Automorphism a;
  a.dim = n;
  a.perm.resize(n);
  for (int i = 0; i < n; ++i) a.perm[i] = i;
  return a;
}

namespace {

std::uint64_t permute_bits(const std::vector<int>& perm, std::uint64_t v) {
  std::uint64_t out = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    if (v >> i & 1) out |= 1ull << perm[i];
  return out;
}

void check_perm(const Automorphism& a) {
  if (static_cast<int>(a.perm.size()) != a.dim)
    fail_invalid("automorphism permutation size mismatch");
  std::uint64_t seen = 0;
  for (int p : a.perm) {
    if (p < 0 || p >= a.dim || (seen >> p & 1))
      fail_invalid("automorphism permutation is not a bijection");
    seen |= 1ull << p;
  }
}

}  // namespace

Label apply(const Automorphism& a, const Label& v) {
  if (a.dim != v.dim) fail_invalid("automorphism/label dimension mismatch");
  check_perm(a);
  return Label((permute_bits(a.perm, v.bits) ^ a.mask) & full_mask(a.dim),
               a.dim);
}

Automorphism compose(const Automorphism& a, const Automorphism& b) {
  if (a.dim != b.dim) fail_invalid("composing automorphisms of unequal dims");
  check_perm(a);
  check_perm(b);
  Automorphism c;
  c.dim = a.dim;
  c.perm.resize(a.dim);
  for (int i = 0; i < a.dim; ++i) c.perm[i] = a.perm[b.perm[i]];
  c.mask = permute_bits(a.perm, b.mask) ^ a.mask;
  return c;
}

Automorphism invert(const Automorphism& a) {
  check_perm(a);
  Automorphism inv;
  inv.dim = a.dim;
  inv.perm.resize(a.dim);
  for (int i = 0; i < a.dim; ++i) inv.perm[a.perm[i]] = i;
  inv.mask = permute_bits(inv.perm, a.mask);
  return inv;
}

int pattern_arity(PatternKind kind) {
  switch (kind) {
    case PatternKind::VERTEX: return 1;
    case PatternKind::EDGE: return 2;
    case PatternKind::P3: return 3;
    case PatternKind::CLAW: return 4;
    case PatternKind::C4: return 4;
  }
  fail_internal("unknown pattern kind");
}

int pattern_min_dim(PatternKind kind) {
  switch (kind) {
    case PatternKind::VERTEX: return 1;
    case PatternKind::EDGE: return 1;
    case PatternKind::P3: return 2;
    case PatternKind::CLAW: return 3;
    case PatternKind::C4: return 2;
  }
  fail_internal("unknown pattern kind");
}

namespace {

// Role pairs whose single difference bit pins one coordinate of the
// permutation.  For C4 the two cycle edges at role 0 and 1 pin the plane.
std::vector<std::pair<int, int>> pattern_pin_edges(PatternKind kind) {
  switch (kind) {
    case PatternKind::VERTEX: return {};
    case PatternKind::EDGE: return {{0, 1}};
    case PatternKind::P3: return {{0, 1}, {1, 2}};
    case PatternKind::CLAW: return {{0, 1}, {0, 2}, {0, 3}};
    case PatternKind::C4: return {{0, 1}, {1, 2}};
  }
  fail_internal("unknown pattern kind");
}

void validate_tuple(PatternKind kind, const std::vector<Label>& tuple,
                    const char* which) {
  int arity = pattern_arity(kind);
  if (static_cast<int>(tuple.size()) != arity)
    fail_invalid(std::string(which) + " tuple has wrong arity");
  int dim = tuple[0].dim;
  for (auto& l : tuple)
    if (l.dim != dim) fail_invalid("tuple mixes label dimensions");
  if (dim < pattern_min_dim(kind))
    fail_invalid("dimension below the pattern's minimum");
  auto need_adjacent = [&](int i, int j) {
    if (!adjacent(tuple[i], tuple[j]))
      fail_invalid(std::string(which) + " tuple does not induce the pattern");
  };
  switch (kind) {
    case PatternKind::VERTEX:
      break;
    case PatternKind::EDGE:
      need_adjacent(0, 1);
      break;
    case PatternKind::P3:
      need_adjacent(0, 1);
      need_adjacent(1, 2);
      if (tuple[0] == tuple[2])
        fail_invalid(std::string(which) + " tuple does not induce the pattern");
      break;
    case PatternKind::CLAW: {
      need_adjacent(0, 1);
      need_adjacent(0, 2);
      need_adjacent(0, 3);
      if (tuple[1] == tuple[2] || tuple[1] == tuple[3] || tuple[2] == tuple[3])
        fail_invalid(std::string(which) + " tuple does not induce the pattern");
      break;
    }
    case PatternKind::C4: {
      need_adjacent(0, 1);
      need_adjacent(1, 2);
      need_adjacent(2, 3);
      need_adjacent(3, 0);
      if ((tuple[0].bits ^ tuple[1].bits) != (tuple[3].bits ^ tuple[2].bits))
        fail_invalid(std::string(which) + " tuple does not induce the pattern");
      break;
    }
  }
}

}  // namespace

Automorphism align(PatternKind kind, const std::vector<Label>& source,
                   const std::vector<Label>& target) {
  validate_tuple(kind, source, "source");
  validate_tuple(kind, target, "target");
  int dim = source[0].dim;
  if (dim != target[0].dim) fail_invalid("source/target dimension mismatch");

  std::vector<int> perm(dim, -1);
  std::uint64_t used_targets = 0;
  for (auto [i, j] : pattern_pin_edges(kind)) {
    int bit_s = std::countr_zero(source[i].bits ^ source[j].bits);
    int bit_t = std::countr_zero(target[i].bits ^ target[j].bits);
    if (perm[bit_s] == -1) {
      if (used_targets >> bit_t & 1)
        fail_internal("align: conflicting coordinate pins");
      perm[bit_s] = bit_t;
      used_targets |= 1ull << bit_t;
    } else if (perm[bit_s] != bit_t) {
      fail_internal("align: conflicting coordinate pins");
    }
  }
  int next_target = 0;
  for (int i = 0; i < dim; ++i) {
    if (perm[i] != -1) continue;
    while (used_targets >> next_target & 1) ++next_target;
    perm[i] = next_target;
    used_targets |= 1ull << next_target;
  }

  Automorphism a;
  a.dim = dim;
  a.perm = std::move(perm);
  a.mask = permute_bits(a.perm, source[0].bits) ^ target[0].bits;
  for (size_t r = 0; r < source.size(); ++r)
    if (!(apply(a, source[r]) == target[r]))
      fail_internal("align postcondition failed");
  return a;
}

}  // namespace pbcat
