// Recursive caterpillar machinery: recognition of the minimal caterpillar
// class of a binary tree, backbone decompositions with lazily materialized
// nested leg decompositions, backbone extension/reduction/reversal, leg
// prefix orders, the balanced split index, and re-choosing a leg backbone
// with a requested end-path parity.
//
// A 0-caterpillar is a path; a k-caterpillar is a binary tree consisting of
// a backbone path with (k-1)-caterpillar legs hanging from backbone
// vertices.  A leg contains its backbone vertex, and the leg's own backbone
// starts at that vertex.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "pbcat/tree.hpp"

namespace pbcat {

enum class BackboneEnd { first, last };
enum class Parity { even, odd };

class BackboneDecomposition {
 public:
  std::shared_ptr<const Tree> host;  // tree the decomposition lives in
  std::vector<int> vertices;         // covered vertex subset, ascending
  std::vector<int> backbone;         // path within the subset, in order
  int depth = 0;  // smallest j such that every leg, rooted at its backbone
                  // vertex, is a j-caterpillar

  BackboneDecomposition() = default;
  BackboneDecomposition(std::shared_ptr<const Tree> host_tree,
                        std::vector<int> vertex_subset,
                        std::vector<int> backbone_path);

  int order() const { return static_cast<int>(vertices.size()); }
  int backbone_order() const { return static_cast<int>(backbone.size()); }

  // 1-based leg accessors (leg q hangs at backbone vertex q).
  const std::vector<int>& leg_set(int q) const;       // vertices, ascending
  int leg_order(int q) const;
  int leg_rooted_depth(int q) const;                  // depth from attachment
  const BackboneDecomposition& leg(int q) const;      // nested, lazy, cached

  // 0 when the backbone covers every vertex (a path), else depth + 1.
  int witnessed_k() const;

 private:
  struct Cache;
  std::shared_ptr<Cache> cache_;
  void build_leg_sets();
};

// Minimal k such that t is a k-caterpillar; nullopt when max degree > 3.
std::optional<int> classify(const Tree& t);

// Same, restricted to a connected vertex subset given as a mask.
std::optional<int> classify_subset(const Tree& t,
                                   const std::vector<char>& allowed);

// Deterministic decomposition witnessing t as a k-caterpillar: start from a
// maximal backbone (both end legs of order one) and reduce at both ends
// while possible, keeping end legs of order < m/2 when m > 2.
BackboneDecomposition decompose(const Tree& t, int k);
BackboneDecomposition decompose(std::shared_ptr<const Tree> host, int k);

// Decomposition of a connected subset.  start >= 0 forces the backbone to
// begin at that vertex (used for legs); start == -1 picks the best leaf.
// The backbone is maximal; no reduction is applied.
BackboneDecomposition decompose_within(std::shared_ptr<const Tree> host,
                                       const std::vector<int>& subset,
                                       int start, int k);

BackboneDecomposition extend_backbone(const BackboneDecomposition& d,
                                      BackboneEnd end);
BackboneDecomposition reduce_backbone(const BackboneDecomposition& d,
                                      BackboneEnd end);

// f_B(l): total order of the first l legs, 1-based.
int leg_prefix_order(const BackboneDecomposition& d, int l);

// The unique q with f(q) >= target and f(q-1) < target.  Requires N >= 3
// and both end legs of order < target.
int find_split(const BackboneDecomposition& d, int target);

// The decomposition traversed from the other end.
BackboneDecomposition reverse_labels(const BackboneDecomposition& d);

// Minimal leg index q > j of even order; absent when all later legs are odd.
std::optional<int> first_even_order_leg(const BackboneDecomposition& d, int j);

// For a perfectly balanced 1-caterpillar leg with fixed first backbone
// vertex x: a decomposition of the same leg whose backbone path from x has
// the requested length parity.  Every order >= 4 admits both parities; an
// order-2 leg admits only odd.
BackboneDecomposition parity_backbone(const BackboneDecomposition& leg,
                                      Parity parity);

// Internal consistency check; throws on violation.  Used by tests and after
// every decomposition-producing operation.
void validate_decomposition(const BackboneDecomposition& d);

}  // namespace pbcat
