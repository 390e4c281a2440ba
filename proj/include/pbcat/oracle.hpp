#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pbcat/embedding.hpp"
#include "pbcat/tree.hpp"

namespace pbcat {

// Total-order key for tree isomorphism classes, plus the vertex relabeling
// old-id -> canonical-id that realizes the class representative.
struct CanonicalCode {
  std::string key;
  std::vector<int> to_canonical;

  friend bool operator==(const CanonicalCode& a, const CanonicalCode& b) {
    return a.key == b.key;
  }
  friend bool operator<(const CanonicalCode& a, const CanonicalCode& b) {
    return a.key < b.key;
  }
};

CanonicalCode canonical_form(const Tree& t);

constexpr int kDefaultDeskLimit = 6;

// Exhaustive backtracking search for a (anchored) spanning-or-partial
// embedding of t into Q_n.  Returns absent when no embedding exists (also
// when m > 2^n).  Deterministic: vertices in DFS order from the centroid
// (or from the anchor x), candidate labels ascending, symmetry broken by
// pinning the first vertex to label 0 and its first neighbor to label 1
// (unanchored) or by seeding the anchor pattern at canonical labels.
std::optional<Embedding> brute_force_embed(
    const Tree& t, int n,
    const std::optional<AnchorConstraint>& a = std::nullopt,
    int desk_limit = kDefaultDeskLimit);

// Generalized entry: any number of simultaneous pattern constraints.  The
// largest pattern is seeded at canonical labels (breaking the symmetry);
// the remaining pins become adjacency constraints between role images.
// root_hint, when valid, fixes the DFS placement root.  max_steps > 0
// bounds the search; a bounded search that gives up returns absent without
// recording a verdict.
std::optional<Embedding> brute_force_embed_pins(
    const Tree& t, int n, const std::vector<PinnedPattern>& pins,
    int desk_limit = kDefaultDeskLimit, int root_hint = -1,
    long long max_steps = 0);

// All isomorphism classes of trees with maximum degree <= 3 on m vertices,
// generated by leaf augmentation with canonical-code isomorph rejection.
std::vector<Tree> enumerate_trees_max_deg3(int m, int limit = 16);

// All isomorphism classes of perfectly balanced 2-caterpillars on m
// vertices, canonically ordered.
std::vector<Tree> enumerate_pb_2cats(int m, int limit = 16);

// Seeded random perfectly balanced 2-caterpillar on m vertices: a backbone
// assembled from internally matched pieces (single vertices carrying
// even-order legs, and backbone pairs carrying odd-order legs), each leg a
// spine with even pendant paths.  Deterministic per seed.
Tree generate_random_pb_2cat(int m, std::uint64_t seed);

}  // namespace pbcat
