// Independent checking of embeddings, anchor patterns and balanced
// 2-caterpillar structure.  Every verdict here is recomputed from raw data:
// hypercube adjacency from bit operations, matchings by own leaf stripping,
// caterpillar structure by exhaustive backbone search.  Only the document
// types (Tree, Label, Embedding, AnchorConstraint) are shared with the
// construction side, none of its algorithms.
#pragma once

#include <string>
#include <vector>

#include "pbcat/embedding.hpp"
#include "pbcat/tree.hpp"

namespace pbcat {

enum class CheckKind {
  NOT_INJECTIVE,
  EDGE_NOT_ADJACENT,
  LABEL_OUT_OF_RANGE,
  NOT_SPANNING,
  PATTERN_MISMATCH,
  NOT_PERFECTLY_BALANCED,
  NOT_2CAT,
};

const char* check_kind_name(CheckKind k);

struct Violation {
  CheckKind kind;
  std::string witness;
};

struct CheckReport {
  bool ok = true;
  std::vector<Violation> violations;

  void add(CheckKind kind, std::string witness) {
    ok = false;
    violations.push_back({kind, std::move(witness)});
  }
};

// Injectivity, label range/width, one hypercube edge per tree edge, and --
// when spanning_required -- surjectivity onto all 2^dim labels (with
// injectivity and m = 2^dim this follows by counting, which is what makes
// the check viable for dim up to 64).
CheckReport check_embedding(const Tree& t, const Embedding& e,
                            bool spanning_required);

// The images of the anchor vertices induce exactly the required pattern:
// P3 role paths, claw centered at alpha, or the 4-cycle x-alpha-y-z.
// Coincident or out-of-range anchors are reported, never thrown.
CheckReport check_pattern(const Embedding& e, const AnchorConstraint& a);

// Perfect matching existence (own leaf stripping) and 2-caterpillar
// recognition by exhaustive search over leaf-to-leaf backbones, where a leg
// passes when some path from its attachment vertex covers every vertex of
// degree three inside the leg.  Quadratic in the leaf count; intended for
// desk-scale audits, not for the 2^16-vertex performance runs.
CheckReport check_pb_2cat(const Tree& t);

}  // namespace pbcat
