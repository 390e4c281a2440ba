#include "pbcat/embedding.hpp"

#include <algorithm>

namespace pbcat {

const char* anchor_pattern_name(AnchorPattern p) {
  switch (p) {
    case AnchorPattern::P3_XYZ:
      return "P3_XYZ";
    case AnchorPattern::P3_YXZ:
      return "P3_YXZ";
    case AnchorPattern::CLAW_ALPHA_CENTER:
      return "CLAW_ALPHA_CENTER";
    case AnchorPattern::C4_X_ALPHA_Y_Z:
      return "C4_X_ALPHA_Y_Z";
  }
  fail_internal("unknown anchor pattern");
}

AnchorPattern anchor_pattern_from_name(const std::string& name) {
  if (name == "P3_XYZ") return AnchorPattern::P3_XYZ;
  if (name == "P3_YXZ") return AnchorPattern::P3_YXZ;
  if (name == "CLAW_ALPHA_CENTER") return AnchorPattern::CLAW_ALPHA_CENTER;
  if (name == "C4_X_ALPHA_Y_Z") return AnchorPattern::C4_X_ALPHA_Y_Z;
  fail_invalid("unknown anchor pattern name: " + name);
}

PatternKind pattern_kind_of(AnchorPattern p) {
  switch (p) {
    case AnchorPattern::P3_XYZ:
    case AnchorPattern::P3_YXZ:
      return PatternKind::P3;
    case AnchorPattern::CLAW_ALPHA_CENTER:
      return PatternKind::CLAW;
    case AnchorPattern::C4_X_ALPHA_Y_Z:
      return PatternKind::C4;
  }
  fail_internal("unknown anchor pattern");
}

std::vector<int> anchor_role_vertices(const AnchorConstraint& a) {
  if (a.needs_alpha() && !a.alpha)
    fail_invalid("anchor pattern requires the alpha vertex");
  switch (a.required_pattern) {
    case AnchorPattern::P3_XYZ:
      return {a.x, a.y, a.z};
    case AnchorPattern::P3_YXZ:
      return {a.y, a.x, a.z};
    case AnchorPattern::CLAW_ALPHA_CENTER:
      return {*a.alpha, a.x, a.y, a.z};
    case AnchorPattern::C4_X_ALPHA_Y_Z:
      return {a.x, *a.alpha, a.y, a.z};
  }
  fail_internal("unknown anchor pattern");
}

std::vector<std::pair<int, int>> pattern_edge_pairs(PatternKind kind) {
  switch (kind) {
    case PatternKind::VERTEX:
      return {};
    case PatternKind::EDGE:
      return {{0, 1}};
    case PatternKind::P3:
      return {{0, 1}, {1, 2}};
    case PatternKind::CLAW:
      return {{0, 1}, {0, 2}, {0, 3}};
    case PatternKind::C4:
      return {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  }
  fail_internal("unknown pattern kind");
}

std::vector<int> AnchorConstraint::vertices() const {
  std::vector<int> out = {x, y, z};
  if (alpha) out.push_back(*alpha);
  std::vector<int> dedup;
  for (int v : out)
    if (std::find(dedup.begin(), dedup.end(), v) == dedup.end())
      dedup.push_back(v);
  return dedup;
}

}  // namespace pbcat
