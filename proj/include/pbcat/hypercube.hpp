// Hypercube labels and automorphisms.  A label is an n-bit word; an
// automorphism is a coordinate permutation followed by an XOR translation.
// align() constructively produces an automorphism moving one pattern tuple
// onto another (vertex, edge, P3, claw, 4-cycle) in O(n).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pbcat/error.hpp"

namespace pbcat {

struct Label {
  std::uint64_t bits = 0;
  int dim = 0;

  Label() = default;
  Label(std::uint64_t b, int n);

  bool operator==(const Label& o) const = default;
  std::string to_string() const;                 // MSB-first, exactly dim chars
  static Label parse(const std::string& s);      // inverse of to_string
};

bool adjacent(const Label& a, const Label& b);

struct Automorphism {
  std::vector<int> perm;   // coordinate i of the input feeds coordinate perm[i]
  std::uint64_t mask = 0;  // XOR applied after permuting
  int dim = 0;

  static Automorphism identity(int n);
};

Label apply(const Automorphism& a, const Label& v);
// compose(a, b) acts like a after b: apply(compose(a,b), v) == apply(a, apply(b, v)).
Automorphism compose(const Automorphism& a, const Automorphism& b);
Automorphism invert(const Automorphism& a);

enum class PatternKind { VERTEX, EDGE, P3, CLAW, C4 };

int pattern_arity(PatternKind kind);    // 1, 2, 3, 4, 4
int pattern_min_dim(PatternKind kind);  // 1, 1, 2, 3, 2

// Automorphism mapping the source tuple onto the target tuple role-for-role.
// Role order: P3 as a path a-b-c; CLAW as (center, leaf, leaf, leaf); C4 in
// cyclic order.  Both tuples must induce the pattern.
Automorphism align(PatternKind kind, const std::vector<Label>& source,
                   const std::vector<Label>& target);

}  // namespace pbcat
