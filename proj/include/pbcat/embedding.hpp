#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pbcat/error.hpp"
#include "pbcat/hypercube.hpp"

namespace pbcat {

// Pattern the images of the anchor vertices must induce, together with the
// role order used when aligning:
//   P3_XYZ          path  x - y - z
//   P3_YXZ          path  y - x - z
//   CLAW_ALPHA_CENTER  claw with alpha central, leaves x, y, z
//   C4_X_ALPHA_Y_Z  four-cycle x - alpha - y - z - x
enum class AnchorPattern { P3_XYZ, P3_YXZ, CLAW_ALPHA_CENTER, C4_X_ALPHA_Y_Z };

const char* anchor_pattern_name(AnchorPattern p);
AnchorPattern anchor_pattern_from_name(const std::string& name);

// Tree vertices whose images are constrained to induce required_pattern.
struct AnchorConstraint {
  int x = -1;
  int y = -1;
  int z = -1;
  std::optional<int> alpha;
  AnchorPattern required_pattern = AnchorPattern::P3_XYZ;

  bool needs_alpha() const {
    return required_pattern == AnchorPattern::CLAW_ALPHA_CENTER ||
           required_pattern == AnchorPattern::C4_X_ALPHA_Y_Z;
  }
  // Distinct tree vertices taking part in the pattern.  Coincident roles
  // (degenerate anchors) are listed once.
  std::vector<int> vertices() const;
};

struct Embedding {
  int dim = 0;
  std::vector<Label> labels;  // indexed by tree vertex

  const Label& label_of(int v) const {
    if (v < 0 || v >= static_cast<int>(labels.size()))
      fail_invalid("vertex out of range in embedding lookup");
    return labels[static_cast<std::size_t>(v)];
  }
};

struct CaseTrace {
  int n = 0;
  std::string case_id;
  bool fallback_used = false;
  std::vector<CaseTrace> children;

  int depth() const {
    int best = -1;
    for (const auto& c : children) best = std::max(best, c.depth());
    return best + 1;  // a leaf has depth 0
  }
};

// Hypercube pattern corresponding to an anchor pattern, plus the role order
// of the anchor vertices inside that pattern.
PatternKind pattern_kind_of(AnchorPattern p);
std::vector<int> anchor_role_vertices(const AnchorConstraint& a);

// A pattern constraint in its raw form: the images of roles[i] must induce
// the pattern, with roles listed in the role order align() expects.  This is
// the normalized currency of the recursive embedder; an AnchorConstraint is
// one way to spell a PinnedPattern.
struct PinnedPattern {
  PatternKind kind = PatternKind::VERTEX;
  std::vector<int> roles;
};

// Role pairs whose images must be hypercube edges, by pattern kind.
std::vector<std::pair<int, int>> pattern_edge_pairs(PatternKind kind);

}  // namespace pbcat
