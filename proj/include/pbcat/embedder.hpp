// Constructive embedder: partitions a perfectly balanced 2-caterpillar on
// 2^(n+1) vertices into two perfectly balanced 2-caterpillars on 2^n
// vertices, embeds both halves recursively, aligns the images of the cut
// vertices with a hypercube automorphism, and combines the halves with a
// fresh prefix bit.  Small instances are settled by the exhaustive search.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pbcat/caterpillar.hpp"
#include "pbcat/embedding.hpp"
#include "pbcat/tree.hpp"

namespace pbcat {

// One balanced partition step.  part_X keeps the cut vertices named 1 in
// the construction; part_Y keeps those named 2 plus the glue edges that
// reconnect it.  align_X / align_Y list the vertices whose images must
// coincide after alignment, in the role order of align_kind; pins_X /
// pins_Y carry the pattern obligations each half must realize (tree edges
// of the halves already force the rest of the patterns).
struct PartitionPlan {
  std::string case_id;
  std::vector<Edge> deleted_edges;  // role-1 endpoint first
  std::vector<Edge> added_edges;
  std::vector<int> part_X;  // host vertex ids, ascending
  std::vector<int> part_Y;
  std::optional<AnchorConstraint> anchors_X;
  std::optional<AnchorConstraint> anchors_Y;
  PatternKind align_kind = PatternKind::VERTEX;
  std::vector<int> align_X;  // host ids in part_X
  std::vector<int> align_Y;  // host ids in part_Y, role-matched to align_X
  std::vector<PinnedPattern> pins_X;  // host ids
  std::vector<PinnedPattern> pins_Y;
  bool fallback_used = false;
};

// Spanning embedding of a perfectly balanced 2-caterpillar on 2^n vertices
// into Q_n, with the trace of partition cases taken.
std::pair<Embedding, CaseTrace> embed_spanning(const Tree& t);

// Same, with the images of the anchor vertices required to induce the
// anchor pattern somewhere in the cube.  The anchor must name a first
// backbone vertex x, a backbone vertex y of the leg at x, the end z of the
// pendant path at y (z == y when that pendant is empty), alpha the
// predecessor of y on the leg backbone when the pattern needs it, and a
// pattern matching the parities of the [x,y]- and [y,z]-paths.
std::pair<Embedding, CaseTrace> embed_constrained(const Tree& t,
                                                  const AnchorConstraint& a);

// One partition step for |t| = 2^(n+1), n >= 5, using the supplied perfect
// matching and backbone decomposition (backbone order >= 3, end legs of
// order < |t|/2).  Throws when no case applies after the fallback search.
PartitionPlan plan_partition(const Tree& t, const Matching& m,
                             const BackboneDecomposition& d);

// Interleaves two aligned half-embeddings: part labels gain a prefix bit
// (0 for X, 1 for Y) and every deleted edge must join coincident labels.
// eX / eY are indexed by position in plan.part_X / plan.part_Y.
Embedding combine(const Embedding& eX, const Embedding& eY,
                  const PartitionPlan& plan);

// Exhaustive-search base case for n <= 5, shared catalog across calls.
Embedding base_case_embed(const Tree& t,
                          const std::optional<AnchorConstraint>& a = std::nullopt);

// Appends a path of 2^ceil(lg m) - m vertices to the last backbone vertex,
// extending the backbone; the result is perfectly balanced again and the
// original vertex ids are preserved.
Tree pad_to_power(const Tree& t);

}  // namespace pbcat
