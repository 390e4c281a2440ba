// Recursive construction of spanning hypercube embeddings.  Each level cuts
// the tree into two perfectly balanced halves along at most three edges,
// embeds both halves, aligns the images of the cut endpoints with a cube
// automorphism, and rejoins the halves with a fresh prefix bit.  Every
// candidate partition is validated by recomputation (sizes, connectivity,
// balance, caterpillar class, pattern parities) before it is trusted, and a
// ladder of alternative decompositions plus an exhaustive-search rescue at
// small orders backs up the canonical choice.
#include "pbcat/embedder.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pbcat/caterpillar.hpp"
#include "pbcat/error.hpp"
#include "pbcat/oracle.hpp"
#include "pbcat/verify.hpp"

namespace pbcat {
namespace {

constexpr int kMaxPlansPerNode = 32;
constexpr int kMaxDecompositions = 12;
constexpr int kMaxLeafAlternates = 4;
constexpr int kRescueMaxDim = 6;
constexpr long long kRescueStepBudget = 4'000'000;

int exact_log2(int m) {
  if (m <= 0 || (m & (m - 1)) != 0) return -1;
  int n = 0;
  while ((1 << n) < m) ++n;
  return n;
}

std::vector<int> all_vertices(int m) {
  std::vector<int> v(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) v[static_cast<size_t>(i)] = i;
  return v;
}

// BFS distances and parents from root, restricted to in_subset vertices.
void bfs_subset(const Tree& t, const std::vector<char>& in_subset, int root,
                std::vector<int>& dist, std::vector<int>& parent) {
  dist.assign(static_cast<size_t>(t.m), -1);
  parent.assign(static_cast<size_t>(t.m), -1);
  dist[static_cast<size_t>(root)] = 0;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : t.adj[static_cast<size_t>(v)]) {
      if (!in_subset[static_cast<size_t>(w)] || dist[static_cast<size_t>(w)] != -1)
        continue;
      dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
      parent[static_cast<size_t>(w)] = v;
      queue.push_back(w);
    }
  }
}

// Component of nb in t with root removed.
std::vector<int> branch_vertices(const Tree& t, int root, int nb) {
  std::vector<char> seen(static_cast<size_t>(t.m), 0);
  seen[static_cast<size_t>(root)] = 1;
  seen[static_cast<size_t>(nb)] = 1;
  std::vector<int> out{nb};
  std::deque<int> queue{nb};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : t.adj[static_cast<size_t>(v)])
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = 1;
        out.push_back(w);
        queue.push_back(w);
      }
  }
  return out;
}

// A re-chosen backbone of a one-caterpillar branch, given as the vertex
// chain from the fixed root to the new end.
struct EndChoice {
  std::vector<int> chain;
  int end() const { return chain.back(); }
  int dist() const { return static_cast<int>(chain.size()) - 1; }
};

// All ways to re-choose the backbone of the branch hanging at root so that
// the path from root to the new backbone end has the requested parity.
// Positions with non-trivial pendants further out cannot end the backbone;
// diving into a pendant is allowed when everything beyond is bare.
std::vector<EndChoice> leg_end_candidates(const std::shared_ptr<const Tree>& host,
                                          const std::vector<int>& subset,
                                          int root, Parity want) {
  std::vector<EndChoice> out;
  if (subset.size() <= 1) return out;
  BackboneDecomposition d;
  try {
    d = decompose_within(host, subset, root, 1);
  } catch (const Error&) {
    return out;
  }
  const auto& spine = d.backbone;
  const int len = static_cast<int>(spine.size());
  std::vector<std::vector<int>> pend(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) {
    const auto& nested = d.leg(i + 1).backbone;
    pend[static_cast<size_t>(i)].assign(nested.begin() + 1, nested.end());
  }
  std::vector<char> bare_after(static_cast<size_t>(len), 1);
  for (int i = len - 2; i >= 0; --i)
    bare_after[static_cast<size_t>(i)] =
        bare_after[static_cast<size_t>(i + 1)] &&
        pend[static_cast<size_t>(i + 1)].empty();
  const int want_bit = (want == Parity::odd) ? 1 : 0;
  for (int i = 1; i < len && static_cast<int>(out.size()) < 8; ++i) {
    const bool tail_empty = (i == len - 1);
    if (!tail_empty && !bare_after[static_cast<size_t>(i)]) continue;
    const auto& pi = pend[static_cast<size_t>(i)];
    if ((pi.empty() || tail_empty) && (i % 2) == want_bit) {
      EndChoice c;
      c.chain.assign(spine.begin(), spine.begin() + i + 1);
      out.push_back(std::move(c));
    }
    for (int r = 1; r <= static_cast<int>(pi.size()); ++r) {
      if (((i + r) % 2) != want_bit) continue;
      EndChoice c;
      c.chain.assign(spine.begin(), spine.begin() + i + 1);
      c.chain.insert(c.chain.end(), pi.begin(), pi.begin() + r);
      out.push_back(std::move(c));
      if (static_cast<int>(out.size()) >= 8) break;
    }
  }
  return out;
}

AnchorPattern pattern_for_parities(bool xy_odd, bool yz_odd) {
  if (xy_odd) return yz_odd ? AnchorPattern::P3_XYZ : AnchorPattern::P3_YXZ;
  return yz_odd ? AnchorPattern::C4_X_ALPHA_Y_Z
                : AnchorPattern::CLAW_ALPHA_CENTER;
}

std::optional<AnchorConstraint> make_anchor(int x, int y, int z,
                                            std::optional<int> alpha,
                                            bool xy_odd, bool yz_odd) {
  AnchorConstraint a;
  a.x = x;
  a.y = y;
  a.z = z;
  a.required_pattern = pattern_for_parities(xy_odd, yz_odd);
  if (a.needs_alpha()) {
    if (!alpha) return std::nullopt;
    a.alpha = alpha;
  }
  return a;
}

std::vector<int> leg_union(const BackboneDecomposition& d, int a, int b) {
  std::vector<int> v;
  for (int j = a; j <= b; ++j) {
    const auto& s = d.leg_set(j);
    v.insert(v.end(), s.begin(), s.end());
  }
  std::sort(v.begin(), v.end());
  return v;
}

// Fills part_X / part_Y from the Y-side vertex set.
void finish_parts(PartitionPlan& plan, int m, const std::vector<int>& y_side) {
  std::vector<char> in_y(static_cast<size_t>(m), 0);
  for (int v : y_side) in_y[static_cast<size_t>(v)] = 1;
  plan.part_Y = y_side;
  std::sort(plan.part_Y.begin(), plan.part_Y.end());
  plan.part_X.clear();
  plan.part_X.reserve(static_cast<size_t>(m) - y_side.size());
  for (int v = 0; v < m; ++v)
    if (!in_y[static_cast<size_t>(v)]) plan.part_X.push_back(v);
}

bool plan_has_added_edge(const PartitionPlan& plan, int u, int v) {
  for (const auto& [a, b] : plan.added_edges)
    if ((a == u && b == v) || (a == v && b == u)) return true;
  return false;
}

// An image edge (u,v) is free when the part already realizes it as a tree
// edge (host edge or glue); otherwise it must be pinned.
bool part_edge(const Tree& host, const PartitionPlan& plan, int u, int v) {
  return host.has_edge(u, v) || plan_has_added_edge(plan, u, v);
}

void push_edge_pin(const Tree& host, const PartitionPlan& plan,
                   std::vector<PinnedPattern>& pins, int a, int b) {
  if (!part_edge(host, plan, a, b))
    pins.push_back({PatternKind::EDGE, {a, b}});
}

// Pin for the two image edges (a,b) and (b,c), dropping whatever the part
// already realizes.
void push_path_pin(const Tree& host, const PartitionPlan& plan,
                   std::vector<PinnedPattern>& pins, int a, int b, int c) {
  const bool ab = part_edge(host, plan, a, b);
  const bool bc = part_edge(host, plan, b, c);
  if (ab && bc) return;
  if (ab)
    pins.push_back({PatternKind::EDGE, {b, c}});
  else if (bc)
    pins.push_back({PatternKind::EDGE, {a, b}});
  else
    pins.push_back({PatternKind::P3, {a, b, c}});
}

// ---------------------------------------------------------------------------
// Case plans.  Positions are 1-based along the backbone; q is the balanced
// split index of find_split, target the half order.  Every plan stores host
// vertex ids; deleted edges list the X-side endpoint first.

void append_case1(const std::shared_ptr<const Tree>& host,
                  const BackboneDecomposition& d, const Matching& M, int q,
                  std::vector<PartitionPlan>& out) {
  const auto& bb = d.backbone;
  const int x1 = bb[static_cast<size_t>(q)];      // position q+1
  const int x2 = bb[static_cast<size_t>(q - 1)];  // position q
  if (M.covers(x1, x2)) return;  // both halves would go odd
  PartitionPlan plan;
  plan.case_id = "1";
  plan.deleted_edges = {{x1, x2}};
  plan.align_kind = PatternKind::VERTEX;
  plan.align_X = {x1};
  plan.align_Y = {x2};
  finish_parts(plan, host->m, leg_union(d, 1, q));
  out.push_back(std::move(plan));
}

void append_case2(const std::shared_ptr<const Tree>& host,
                  const BackboneDecomposition& d, const Matching& M, int q,
                  std::vector<PartitionPlan>& out) {
  const auto& bb = d.backbone;
  const int N = d.backbone_order();
  const int x1 = bb[static_cast<size_t>(q - 1)];
  const int x2 = bb[static_cast<size_t>(q)];
  if (!M.covers(x1, x2)) return;  // the crossing edge must be matched here
  const auto& leg_q = d.leg_set(q);
  std::vector<char> in_leg(static_cast<size_t>(host->m), 0);
  for (int v : leg_q) in_leg[static_cast<size_t>(v)] = 1;
  std::vector<int> dist, parent;
  bfs_subset(*host, in_leg, x1, dist, parent);
  auto leg_degree = [&](int v) {
    int deg = 0;
    for (int w : host->adj[static_cast<size_t>(v)])
      if (in_leg[static_cast<size_t>(w)]) ++deg;
    return deg;
  };
  // Leaves of the leg at even distance >= 2 from x1.  A re-chosen backbone
  // end comes first; the remaining leaves follow by distance as alternates.
  std::vector<int> zs;
  auto push_z = [&](int v) {
    if (std::find(zs.begin(), zs.end(), v) == zs.end() &&
        static_cast<int>(zs.size()) < kMaxLeafAlternates)
      zs.push_back(v);
  };
  for (const auto& c : leg_end_candidates(host, leg_q, x1, Parity::even))
    if (c.dist() >= 2 && leg_degree(c.end()) == 1) push_z(c.end());
  std::vector<int> leaves;
  for (int v : leg_q)
    if (v != x1 && leg_degree(v) == 1 && dist[static_cast<size_t>(v)] >= 2 &&
        dist[static_cast<size_t>(v)] % 2 == 0)
      leaves.push_back(v);
  std::sort(leaves.begin(), leaves.end(), [&](int a, int b) {
    if (dist[static_cast<size_t>(a)] != dist[static_cast<size_t>(b)])
      return dist[static_cast<size_t>(a)] < dist[static_cast<size_t>(b)];
    return a < b;
  });
  for (int v : leaves) push_z(v);

  // Attachment data for descriptive anchors: the canonical leg backbone and
  // the pendant position of each vertex.
  const BackboneDecomposition& L = d.leg(q);
  std::vector<int> spine_pos(static_cast<size_t>(host->m), -1);
  for (int i = 0; i < L.backbone_order(); ++i)
    spine_pos[static_cast<size_t>(L.backbone[static_cast<size_t>(i)])] = i;

  for (int z2 : zs) {
    const int z1 = parent[static_cast<size_t>(z2)];
    PartitionPlan plan;
    plan.case_id = "2";
    plan.deleted_edges = {{x1, x2}, {z1, z2}};
    plan.added_edges = {{x2, z2}};
    plan.align_kind = PatternKind::EDGE;
    plan.align_X = {x1, z1};
    plan.align_Y = {x2, z2};
    push_edge_pin(*host, plan, plan.pins_X, x1, z1);
    // Descriptive anchors: z1's attachment on the canonical leg backbone.
    int y_attach = z1;
    while (y_attach != -1 && spine_pos[static_cast<size_t>(y_attach)] < 0)
      y_attach = parent[static_cast<size_t>(y_attach)];
    if (y_attach != -1) {
      const int sp = spine_pos[static_cast<size_t>(y_attach)];
      std::optional<int> alpha;
      if (sp >= 1) alpha = L.backbone[static_cast<size_t>(sp - 1)];
      plan.anchors_X = make_anchor(
          x1, y_attach, z1, alpha, dist[static_cast<size_t>(y_attach)] % 2 == 1,
          (dist[static_cast<size_t>(z1)] - dist[static_cast<size_t>(y_attach)]) %
                  2 ==
              1);
    }
    plan.anchors_Y = make_anchor(x2, z2, z2, std::nullopt, true, false);
    std::vector<int> y_side = leg_union(d, q + 1, N);
    y_side.push_back(z2);
    finish_parts(plan, host->m, y_side);
    out.push_back(std::move(plan));
  }
}

struct Case3Common {
  int q = 0;          // leg holding the cut; 1 when cutting inside a heavy
                      // first leg of a pinned instance
  int x1 = -1, x2 = -1;
  int x2_leg = 0;     // leg index whose end re-choices serve the x2 side
  std::vector<int> other_set;  // everything outside the leg at q and beyond x1
  int other_order = 0;
  int i = 0;       // 1-based backbone position of y1 inside the leg at q
  int y1 = -1, y2 = -1;
  std::vector<int> y2_suffix;  // vertices of the branch cut off behind y2
};

void append_case31(const std::shared_ptr<const Tree>& host,
                   const BackboneDecomposition& d, const Case3Common& c,
                   std::vector<PartitionPlan>& out) {
  const BackboneDecomposition& L = d.leg(c.q);
  PartitionPlan plan;
  plan.deleted_edges = {{c.x1, c.x2}, {c.y1, c.y2}};
  const bool xy_even = (c.i % 2 == 1);  // path x1..y1 has i-1 edges
  if (!xy_even) {
    plan.case_id = "3.1.1";
    plan.added_edges = {{c.x2, c.y2}};
    plan.align_kind = PatternKind::EDGE;
    plan.align_X = {c.x1, c.y1};
    plan.align_Y = {c.x2, c.y2};
    push_edge_pin(*host, plan, plan.pins_X, c.x1, c.y1);
    plan.anchors_X =
        make_anchor(c.x1, c.y1, c.y1, std::nullopt, true, false);
    plan.anchors_Y =
        make_anchor(c.x2, c.y2, c.y2, std::nullopt, true, false);
  } else {
    const int alpha1 = L.backbone[static_cast<size_t>(c.i - 2)];
    const int ox2 = d.leg_order(c.x2_leg);
    int alpha2 = -1;
    if (ox2 == 1) {
      plan.case_id = "3.1.2i";
      auto ends = leg_end_candidates(host, c.y2_suffix, c.y2, Parity::odd);
      if (ends.empty()) return;
      const auto& choice = ends.front();
      plan.added_edges = {{c.x2, choice.end()}};
      alpha2 = choice.chain[1];
    } else {
      plan.case_id = "3.1.2ii";
      auto ends =
          leg_end_candidates(host, d.leg_set(c.x2_leg), c.x2, Parity::odd);
      if (ends.empty()) return;
      const int w2 = ends.front().end();
      plan.added_edges = {{w2, c.y2}};
      alpha2 = w2;
    }
    plan.align_kind = PatternKind::P3;
    plan.align_X = {c.x1, alpha1, c.y1};
    plan.align_Y = {c.x2, alpha2, c.y2};
    push_edge_pin(*host, plan, plan.pins_X, c.x1, alpha1);
    push_edge_pin(*host, plan, plan.pins_Y, c.x2, alpha2);
    plan.anchors_X = make_anchor(c.x1, c.y1, c.y1, alpha1, false, false);
    plan.anchors_Y = make_anchor(c.x2, c.y2, c.y2, std::nullopt, true, false);
  }
  std::vector<int> y_side = c.other_set;
  y_side.insert(y_side.end(), c.y2_suffix.begin(), c.y2_suffix.end());
  finish_parts(plan, host->m, y_side);
  out.push_back(std::move(plan));
}

void append_case32(const std::shared_ptr<const Tree>& host,
                   const BackboneDecomposition& d, const Matching& M,
                   const Case3Common& c, int t,
                   std::vector<PartitionPlan>& out) {
  const BackboneDecomposition& L = d.leg(c.q);
  const auto& pp = L.leg(c.i).backbone;  // y1 then its pendant path
  const int k = static_cast<int>(pp.size()) - 1;
  const int z1 = pp[static_cast<size_t>(k - t)];
  const int z2 = pp[static_cast<size_t>(k - t + 1)];
  const int pk = pp[static_cast<size_t>(k)];
  const int mate = M.mate[static_cast<size_t>(c.y1)];
  const int ox2 = d.leg_order(c.x2_leg);
  const int oy2 = static_cast<int>(c.y2_suffix.size());
  const bool i_odd = (c.i % 2 == 1);  // path x1..y1 even

  PartitionPlan plan;
  plan.deleted_edges = {{c.x1, c.x2}, {c.y1, c.y2}, {z1, z2}};

  if (mate == c.y2) {
    if (t % 2 == 0) return;  // the pendant tail must flip the matching
    if (i_odd) {
      plan.case_id = "3.2.1i";
      plan.added_edges = {{c.y2, z2}, {c.x2, z2}};
      plan.align_kind = PatternKind::P3;
      plan.align_X = {c.x1, z1, c.y1};
      plan.align_Y = {c.x2, z2, c.y2};
      push_path_pin(*host, plan, plan.pins_X, c.x1, z1, c.y1);
    } else {
      plan.align_kind = PatternKind::P3;
      plan.align_X = {c.x1, c.y1, z1};
      plan.align_Y = {c.x2, c.y2, z2};
      if (ox2 > 1) {
        plan.case_id = "3.2.1ii_a";
        auto ends =
            leg_end_candidates(host, d.leg_set(c.x2_leg), c.x2, Parity::odd);
        if (ends.empty()) return;
        plan.added_edges = {{c.y2, z2}, {ends.front().end(), pk}};
      } else {
        plan.case_id = "3.2.1ii_b";
        if (oy2 == 1) {
          plan.added_edges = {{c.y2, z2}, {c.x2, c.y2}};
        } else {
          auto ends = leg_end_candidates(host, c.y2_suffix, c.y2, Parity::even);
          if (ends.empty()) return;
          plan.added_edges = {{c.y2, z2}, {c.x2, ends.front().end()}};
        }
      }
      push_path_pin(*host, plan, plan.pins_X, c.x1, c.y1, z1);
      push_edge_pin(*host, plan, plan.pins_Y, c.x2, c.y2);
    }
  } else if (mate == pp[1]) {
    if (t % 2 == 1) return;
    if (i_odd) {
      plan.case_id = "3.2.2i";
      plan.added_edges = {{c.y2, z2}, {c.x2, z2}};
      plan.align_kind = PatternKind::P3;
      plan.align_X = {c.x1, z1, c.y1};
      plan.align_Y = {c.x2, z2, c.y2};
      push_path_pin(*host, plan, plan.pins_X, c.x1, z1, c.y1);
    } else {
      plan.align_kind = PatternKind::P3;
      plan.align_X = {c.x1, c.y1, z1};
      plan.align_Y = {c.x2, c.y2, z2};
      if (ox2 > 1) {
        plan.case_id = "3.2.2ii_a";
        auto ends2 =
            leg_end_candidates(host, d.leg_set(c.x2_leg), c.x2, Parity::odd);
        auto endsY = leg_end_candidates(host, c.y2_suffix, c.y2, Parity::odd);
        if (ends2.empty() || endsY.empty()) return;
        plan.added_edges = {{c.y2, z2}, {ends2.front().end(), endsY.front().end()}};
      } else {
        plan.case_id = "3.2.2ii_b";
        plan.added_edges = {{c.y2, z2}, {c.x2, pk}};
      }
      push_path_pin(*host, plan, plan.pins_X, c.x1, c.y1, z1);
      push_edge_pin(*host, plan, plan.pins_Y, c.x2, c.y2);
    }
  } else if (mate == L.backbone[static_cast<size_t>(c.i - 2)]) {
    if (t % 2 == 1) return;
    if (oy2 % 2 == 1) return;  // the suffix stays self-matched here
    if (i_odd) {
      const int alpha1 = L.backbone[static_cast<size_t>(c.i - 2)];
      int alpha2 = -1;
      if (ox2 > 1 && oy2 > 2) {
        plan.case_id = "3.2.3i_a";
        auto ends2 =
            leg_end_candidates(host, d.leg_set(c.x2_leg), c.x2, Parity::odd);
        auto endsY = leg_end_candidates(host, c.y2_suffix, c.y2, Parity::even);
        if (ends2.empty() || endsY.empty()) return;
        plan.added_edges = {{c.y2, pk}, {ends2.front().end(), endsY.front().end()}};
        alpha2 = endsY.front().chain[1];
      } else if (ox2 > 1) {
        plan.case_id = "3.2.3i_b";
        auto ends2 =
            leg_end_candidates(host, d.leg_set(c.x2_leg), c.x2, Parity::odd);
        if (ends2.empty()) return;
        const int w2 = ends2.front().end();
        plan.added_edges = {{c.y2, pk}, {w2, c.y2}};
        alpha2 = w2;
      } else {
        plan.case_id = "3.2.3i_c";
        auto endsY = leg_end_candidates(host, c.y2_suffix, c.y2, Parity::odd);
        if (endsY.empty()) return;
        plan.added_edges = {{c.y2, pk}, {c.x2, endsY.front().end()}};
        alpha2 = endsY.front().chain[1];
      }
      plan.align_kind = PatternKind::CLAW;
      plan.align_X = {alpha1, c.x1, c.y1, z1};
      plan.align_Y = {alpha2, c.x2, c.y2, z2};
      push_path_pin(*host, plan, plan.pins_X, c.x1, alpha1, z1);
      push_path_pin(*host, plan, plan.pins_Y, c.x2, alpha2, z2);
      plan.anchors_X =
          make_anchor(c.x1, c.y1, z1, alpha1, false, (k - t) % 2 == 1);
      plan.anchors_Y = make_anchor(c.x2, c.y2, z2, alpha2, true, t % 2 == 1);
    } else {
      if (ox2 > 1) {
        plan.case_id = "3.2.3ii_a";
        auto ends2 =
            leg_end_candidates(host, d.leg_set(c.x2_leg), c.x2, Parity::odd);
        auto endsY = leg_end_candidates(host, c.y2_suffix, c.y2, Parity::odd);
        if (ends2.empty() || endsY.empty()) return;
        plan.added_edges = {{c.y2, pk}, {ends2.front().end(), endsY.front().end()}};
      } else {
        plan.case_id = "3.2.3ii_b";
        plan.added_edges = {{c.y2, pk}, {c.x2, z2}};
      }
      plan.align_kind = PatternKind::P3;
      plan.align_X = {c.y1, c.x1, z1};
      plan.align_Y = {c.y2, c.x2, z2};
      push_path_pin(*host, plan, plan.pins_X, c.y1, c.x1, z1);
      push_path_pin(*host, plan, plan.pins_Y, c.y2, c.x2, z2);
    }
  } else {
    return;
  }

  if (!plan.anchors_X) {
    std::optional<int> alpha1;
    if (c.i >= 3) alpha1 = L.backbone[static_cast<size_t>(c.i - 2)];
    plan.anchors_X =
        make_anchor(c.x1, c.y1, z1, alpha1, c.i % 2 == 0, (k - t) % 2 == 1);
  }
  if (!plan.anchors_Y)
    plan.anchors_Y =
        make_anchor(c.x2, c.y2, z2, std::nullopt, true, t % 2 == 1);

  std::vector<int> y_side = c.other_set;
  y_side.insert(y_side.end(), c.y2_suffix.begin(), c.y2_suffix.end());
  for (int j = k - t + 1; j <= k; ++j)
    y_side.push_back(pp[static_cast<size_t>(j)]);
  finish_parts(plan, host->m, y_side);
  out.push_back(std::move(plan));
}

void scan_case3_leg(const std::shared_ptr<const Tree>& host,
                    const BackboneDecomposition& d, const Matching& M,
                    Case3Common& c, int target,
                    std::vector<PartitionPlan>& out) {
  const BackboneDecomposition& L = d.leg(c.q);
  const int Ls = L.backbone_order();
  const int Lord = L.order();
  for (int i = 2; i <= Ls - 1; ++i) {
    const int rest = Lord - leg_prefix_order(L, i);
    c.i = i;
    c.y1 = L.backbone[static_cast<size_t>(i - 1)];
    c.y2 = L.backbone[static_cast<size_t>(i)];
    if (c.other_order + rest == target) {
      c.y2_suffix = leg_union(L, i + 1, Ls);
      append_case31(host, d, c, out);
      continue;
    }
    const int t = target - c.other_order - rest;
    const int k = L.leg_order(i) - 1;
    if (t >= 1 && t <= k - 1) {
      c.y2_suffix = leg_union(L, i + 1, Ls);
      append_case32(host, d, M, c, t, out);
    }
  }
}

void append_case3(const std::shared_ptr<const Tree>& host,
                  const BackboneDecomposition& d, const Matching& M, int q,
                  std::vector<PartitionPlan>& out, int target) {
  const auto& bb = d.backbone;
  Case3Common c;
  c.q = q;
  c.x1 = bb[static_cast<size_t>(q - 1)];
  c.x2 = bb[static_cast<size_t>(q - 2)];
  if (M.covers(c.x1, c.x2)) return;  // no valid cut from this end
  c.x2_leg = q - 1;
  c.other_set = leg_union(d, 1, q - 1);
  c.other_order = leg_prefix_order(d, q - 1);
  scan_case3_leg(host, d, M, c, target, out);
}

// Mirror of the deep cut for a first leg that holds at least half the
// vertices.  The legs after the first play the role the prefix plays in the
// interior cut; everything else maps one-to-one.
void append_front_case3(const std::shared_ptr<const Tree>& host,
                        const BackboneDecomposition& d, const Matching& M,
                        std::vector<PartitionPlan>& out, int target) {
  const auto& bb = d.backbone;
  Case3Common c;
  c.q = 1;
  c.x1 = bb[0];
  c.x2 = bb[1];
  if (M.covers(c.x1, c.x2)) return;
  c.x2_leg = 2;
  c.other_set = leg_union(d, 2, d.backbone_order());
  c.other_order = host->m - d.leg_order(1);
  scan_case3_leg(host, d, M, c, target, out);
}

// Single-leaf crossing generalized to a deeper carve: when the prefix
// overshoots the half order by t >= 2, the t-tail of one pendant chain moves
// across the cut instead of a lone leaf.  The tail hangs off x2 by the added
// edge, so both deleted edges cross the cut exactly as in the one-leaf shape.
// This keeps the prefix spine intact, which matters when fixed vertices sit
// at both ends of a heavy leg and every spine cut would separate them.
void append_case2_carve(const std::shared_ptr<const Tree>& host,
                        const BackboneDecomposition& d, const Matching& M,
                        int x1, int x2, int jhi, int t,
                        const std::vector<int>& y_base,
                        std::vector<PartitionPlan>& out) {
  if (t < 2) return;
  if ((t % 2 == 1) != M.covers(x1, x2)) return;  // prefix parity must agree
  std::vector<char> in_pre(static_cast<size_t>(host->m), 1);
  for (int v : y_base) in_pre[static_cast<size_t>(v)] = 0;
  std::vector<int> dist, parent;
  bfs_subset(*host, in_pre, x1, dist, parent);
  int added = 0;
  for (int j = 1; j <= jhi && added < kMaxLeafAlternates; ++j) {
    const BackboneDecomposition& Lj = d.leg(j);
    for (int i = 1; i <= Lj.backbone_order() && added < kMaxLeafAlternates;
         ++i) {
      const auto& pp = Lj.leg(i).backbone;
      const int k = static_cast<int>(pp.size()) - 1;
      if (k < t) continue;
      const int z1 = pp[static_cast<size_t>(k - t)];
      const int z2 = pp[static_cast<size_t>(k - t + 1)];
      if (dist[static_cast<size_t>(z1)] < 0 ||
          dist[static_cast<size_t>(z1)] % 2 == 0)
        continue;
      if (t % 2 == 1) {
        if (M.mate[static_cast<size_t>(z1)] != z2) continue;
      } else {
        if (M.covers(z1, z2)) continue;
      }
      PartitionPlan plan;
      plan.case_id = "2";
      plan.deleted_edges = {{x1, x2}, {z1, z2}};
      plan.added_edges = {{x2, z2}};
      plan.align_kind = PatternKind::EDGE;
      plan.align_X = {x1, z1};
      plan.align_Y = {x2, z2};
      push_edge_pin(*host, plan, plan.pins_X, x1, z1);
      plan.anchors_X = make_anchor(x1, z1, z1, std::nullopt, true, false);
      plan.anchors_Y = make_anchor(x2, z2, z2, std::nullopt, true, false);
      std::vector<int> y_side = y_base;
      for (int jj = k - t + 1; jj <= k; ++jj)
        y_side.push_back(pp[static_cast<size_t>(jj)]);
      finish_parts(plan, host->m, y_side);
      out.push_back(std::move(plan));
      ++added;
    }
  }
}

void append_case_plans(const std::shared_ptr<const Tree>& host,
                       const BackboneDecomposition& d, const Matching& M,
                       int target, std::vector<PartitionPlan>& out) {
  const int N = d.backbone_order();
  const auto& bb = d.backbone;
  // A first leg already holding half the vertices admits no interior
  // crossing.  This arises for constrained instances whose fixed vertices
  // span a heavy branch: the cut must then fall inside that leg, with the
  // remaining legs collectively standing in for the prefix.
  if (N >= 2 && d.leg_order(1) >= target) {
    const int o1 = d.leg_order(1);
    try {
      if (o1 == target)
        append_case1(host, d, M, 1, out);
      else if (o1 == target + 1)
        append_case2(host, d, M, 1, out);
      else {
        append_front_case3(host, d, M, out, target);
        append_case2_carve(host, d, M, bb.front(), bb[1], 1, o1 - target,
                           leg_union(d, 2, N), out);
      }
    } catch (const Error&) {
    }
    return;
  }
  int q = 0;
  try {
    q = find_split(d, target);
  } catch (const Error&) {
    return;
  }
  if (q < 2 || q > N - 1) return;
  const int fq = leg_prefix_order(d, q);
  try {
    if (fq == target)
      append_case1(host, d, M, q, out);
    else if (fq == target + 1)
      append_case2(host, d, M, q, out);
    else {
      append_case3(host, d, M, q, out, target);
      append_case2_carve(host, d, M, bb[static_cast<size_t>(q - 1)],
                         bb[static_cast<size_t>(q)], q, fq - target,
                         leg_union(d, q + 1, N), out);
    }
  } catch (const Error&) {
    // A broken candidate never aborts the ladder.
  }
}

// ---------------------------------------------------------------------------
// Decomposition ladder.  Unpinned nodes start from the canonical reduced
// decomposition; pinned nodes start from backbones rooted at the pins so the
// constrained vertices stay inside an end leg.

struct RootOption {
  int root = -1;
  long weight = 0;                // total order of branches holding other roles
  std::vector<int> free_branches;  // neighbors whose branch is role-free
};

std::vector<RootOption> pin_root_options(const Tree& t,
                                         const PinnedPattern& pin) {
  std::set<int> roles(pin.roles.begin(), pin.roles.end());
  std::vector<RootOption> opts;
  for (int r : roles) {
    RootOption o;
    o.root = r;
    std::vector<std::pair<long, int>> free_sized;
    for (int nb : t.adj[static_cast<size_t>(r)]) {
      auto branch = branch_vertices(t, r, nb);
      bool holds_role = false;
      for (int v : branch)
        if (v != r && roles.count(v)) {
          holds_role = true;
          break;
        }
      if (holds_role)
        o.weight += static_cast<long>(branch.size());
      else
        free_sized.emplace_back(-static_cast<long>(branch.size()), nb);
    }
    if (free_sized.empty()) continue;
    std::sort(free_sized.begin(), free_sized.end());
    for (auto& [sz, nb] : free_sized) o.free_branches.push_back(nb);
    opts.push_back(std::move(o));
  }
  std::sort(opts.begin(), opts.end(), [](const RootOption& a, const RootOption& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.root < b.root;
  });
  if (opts.size() > 2) opts.resize(2);
  return opts;
}

void push_decomp(std::vector<BackboneDecomposition>& out,
                 BackboneDecomposition d) {
  for (const auto& e : out)
    if (e.backbone == d.backbone) return;
  if (static_cast<int>(out.size()) < kMaxDecompositions)
    out.push_back(std::move(d));
}

// When the balance point falls deep inside one huge leg, that leg's spine
// may skip past every valid cut (its pendants make the prefix order jump).
// Re-routing the backbone into the leg exposes those pendants as top-level
// legs with finer granularity; the old suffix folds into the leg at the turn
// (which may witness depth 2 -- harmless, plan instantiation revalidates the
// actual parts).
std::optional<BackboneDecomposition> descend_into_crossing(
    const std::shared_ptr<const Tree>& t, const BackboneDecomposition& d,
    int target) {
  try {
    const int q = find_split(d, target);
    if (leg_prefix_order(d, q) <= target + 1) return std::nullopt;
    const BackboneDecomposition& L = d.leg(q);
    if (L.backbone_order() < 2) return std::nullopt;
    std::vector<int> bb(d.backbone.begin(), d.backbone.begin() + q);
    bb.insert(bb.end(), L.backbone.begin() + 1, L.backbone.end());
    return BackboneDecomposition(t, all_vertices(t->m), std::move(bb));
  } catch (const Error&) {
    return std::nullopt;
  }
}

void descend_closure(const std::shared_ptr<const Tree>& t,
                     std::vector<BackboneDecomposition>& out) {
  for (size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out.size()) >= kMaxDecompositions) break;
    if (auto deeper = descend_into_crossing(t, out[i], t->m / 2))
      push_decomp(out, std::move(*deeper));
  }
}

// A full decomposition whose backbone starts at root and immediately leaves
// into the branch at nb, so everything else hangs inside the first leg.
void push_rooted(const std::shared_ptr<const Tree>& t,
                 std::vector<BackboneDecomposition>& out, int root, int nb) {
  try {
    std::vector<int> subset = branch_vertices(*t, root, nb);
    subset.push_back(root);
    std::sort(subset.begin(), subset.end());
    auto within = decompose_within(t, subset, root, 2);
    BackboneDecomposition full(t, all_vertices(t->m), within.backbone);
    if (full.witnessed_k() <= 2) push_decomp(out, std::move(full));
  } catch (const Error&) {
  }
}

std::vector<BackboneDecomposition> derive_decompositions(
    const std::shared_ptr<const Tree>& t,
    const std::vector<PinnedPattern>& pins) {
  std::vector<BackboneDecomposition> out;
  if (pins.empty()) {
    try {
      auto d0 = decompose(t, 2);
      push_decomp(out, d0);
      push_decomp(out, reverse_labels(d0));
      descend_closure(t, out);
      for (auto end : {BackboneEnd::first, BackboneEnd::last}) {
        try {
          auto ext = extend_backbone(d0, end);
          push_decomp(out, ext);
          push_decomp(out, reverse_labels(ext));
        } catch (const Error&) {
        }
      }
      descend_closure(t, out);
    } catch (const Error&) {
    }
    return out;
  }
  auto roots0 = pin_root_options(*t, pins[0]);
  if (pins.size() == 1) {
    for (const auto& r : roots0)
      for (int nb : r.free_branches) push_rooted(t, out, r.root, nb);
  } else {
    auto roots1 = pin_root_options(*t, pins[1]);
    for (const auto& ra : roots0)
      for (const auto& rb : roots1) {
        try {
          auto bb = path_between(*t, ra.root, rb.root);
          BackboneDecomposition full(t, all_vertices(t->m), bb);
          if (full.witnessed_k() <= 2) push_decomp(out, std::move(full));
        } catch (const Error&) {
        }
      }
    for (const auto& r : roots0)
      for (int nb : r.free_branches) push_rooted(t, out, r.root, nb);
  }
  try {
    auto d0 = decompose(t, 2);
    push_decomp(out, d0);
    push_decomp(out, reverse_labels(d0));
  } catch (const Error&) {
  }
  descend_closure(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Candidate validation by recomputation, and the recursion itself.

struct PartData {
  std::shared_ptr<const Tree> tree;
  std::vector<int> from_local;  // local id -> host id
  std::vector<int> to_local;    // host id -> local id, -1 outside
  std::vector<PinnedPattern> pins;  // local ids
};

struct Instantiated {
  PartData X, Y;
};

int odd_path_or_fail(const Tree& part, int u, int v) {
  const int len = static_cast<int>(path_between(part, u, v).size()) - 1;
  if (len % 2 == 0)
    fail_internal("pattern edge with even tree distance in a partition candidate");
  return len;
}

std::optional<Instantiated> instantiate(const std::shared_ptr<const Tree>& host,
                                        const PartitionPlan& plan,
                                        const std::vector<PinnedPattern>& inherited,
                                        int target) {
  try {
    if (static_cast<int>(plan.part_X.size()) != target ||
        static_cast<int>(plan.part_Y.size()) != target)
      return std::nullopt;
    std::vector<Edge> add_X, add_Y;
    {
      std::vector<char> in_x(static_cast<size_t>(host->m), 0);
      for (int v : plan.part_X) in_x[static_cast<size_t>(v)] = 1;
      for (const auto& e : plan.added_edges) {
        if (in_x[static_cast<size_t>(e.first)] &&
            in_x[static_cast<size_t>(e.second)])
          add_X.push_back(e);
        else
          add_Y.push_back(e);
      }
    }
    Instantiated inst;
    inst.X.tree = std::make_shared<const Tree>(induced_subtree(
        *host, plan.part_X, &inst.X.from_local, &inst.X.to_local, &add_X));
    inst.Y.tree = std::make_shared<const Tree>(induced_subtree(
        *host, plan.part_Y, &inst.Y.from_local, &inst.Y.to_local, &add_Y));
    const bool dbg = std::getenv("PBCAT_DEBUG_FAILS") != nullptr;
    for (const PartData* p : {&inst.X, &inst.Y}) {
      if (!perfect_matching(*p->tree)) { if (dbg) std::fprintf(stderr, "(inst: %s not PB)", p == &inst.X ? "X" : "Y"); return std::nullopt; }
      auto k = classify(*p->tree);
      if (!k || *k > 2) { if (dbg) std::fprintf(stderr, "(inst: %s not 2cat)", p == &inst.X ? "X" : "Y"); return std::nullopt; }
    }
    auto localize = [&](const PinnedPattern& pin,
                        PartData& part) -> bool {
      PinnedPattern local{pin.kind, {}};
      for (int role : pin.roles) {
        const int lv = part.to_local[static_cast<size_t>(role)];
        if (lv < 0) return false;
        local.roles.push_back(lv);
      }
      for (auto [r1, r2] : pattern_edge_pairs(pin.kind))
        odd_path_or_fail(*part.tree, local.roles[static_cast<size_t>(r1)],
                         local.roles[static_cast<size_t>(r2)]);
      part.pins.push_back(std::move(local));
      return true;
    };
    for (const auto& pin : plan.pins_X)
      if (!localize(pin, inst.X)) { if (dbg) std::fprintf(stderr, "(inst: case pin X)"); return std::nullopt; }
    for (const auto& pin : plan.pins_Y)
      if (!localize(pin, inst.Y)) { if (dbg) std::fprintf(stderr, "(inst: case pin Y)"); return std::nullopt; }
    for (const auto& pin : inherited) {
      bool in_x = true, in_y = true;
      for (int role : pin.roles) {
        if (inst.X.to_local[static_cast<size_t>(role)] < 0) in_x = false;
        if (inst.Y.to_local[static_cast<size_t>(role)] < 0) in_y = false;
      }
      if (in_x && !localize(pin, inst.X)) { if (dbg) std::fprintf(stderr, "(inst: inherited in X bad)"); return std::nullopt; }
      if (!in_x && in_y && !localize(pin, inst.Y)) { if (dbg) std::fprintf(stderr, "(inst: inherited in Y bad)"); return std::nullopt; }
      if (!in_x && !in_y) { if (dbg) std::fprintf(stderr, "(inst: pin straddles)"); return std::nullopt; }
    }
    // The alignment tuples must have pattern parity inside their parts.
    if (plan.align_X.size() != plan.align_Y.size() ||
        static_cast<int>(plan.align_X.size()) != pattern_arity(plan.align_kind))
      return std::nullopt;
    for (auto [r1, r2] : pattern_edge_pairs(plan.align_kind)) {
      odd_path_or_fail(*inst.X.tree,
                       inst.X.to_local[static_cast<size_t>(
                           plan.align_X[static_cast<size_t>(r1)])],
                       inst.X.to_local[static_cast<size_t>(
                           plan.align_X[static_cast<size_t>(r2)])]);
      odd_path_or_fail(*inst.Y.tree,
                       inst.Y.to_local[static_cast<size_t>(
                           plan.align_Y[static_cast<size_t>(r1)])],
                       inst.Y.to_local[static_cast<size_t>(
                           plan.align_Y[static_cast<size_t>(r2)])]);
    }
    for (int v : plan.align_X)
      if (inst.X.to_local[static_cast<size_t>(v)] < 0) return std::nullopt;
    for (int v : plan.align_Y)
      if (inst.Y.to_local[static_cast<size_t>(v)] < 0) return std::nullopt;
    return inst;
  } catch (const Error& err) {
    if (std::getenv("PBCAT_DEBUG_FAILS")) std::fprintf(stderr, "(inst throw: %s)", err.what());
    return std::nullopt;
  }
}

struct RecResult {
  Embedding emb;
  CaseTrace trace;
};

std::optional<RecResult> embed_rec(const std::shared_ptr<const Tree>& t,
                                   const std::vector<PinnedPattern>& pins) {
  const int m = t->m;
  const int n = exact_log2(m);
  if (n < 0) return std::nullopt;
  if (n <= 5) {
    auto e = brute_force_embed_pins(*t, n, pins, kDefaultDeskLimit);
    if (!e) return std::nullopt;
    return RecResult{std::move(*e), CaseTrace{n, "base", false, {}}};
  }
  auto M = perfect_matching(*t);
  if (!M) return std::nullopt;
  const int target = m / 2;
  std::vector<PartitionPlan> plans;
  for (const auto& d : derive_decompositions(t, pins)) {
    append_case_plans(t, d, *M, target, plans);
    if (static_cast<int>(plans.size()) >= kMaxPlansPerNode) break;
  }
  if (static_cast<int>(plans.size()) > kMaxPlansPerNode)
    plans.resize(kMaxPlansPerNode);
  for (size_t idx = 0; idx < plans.size(); ++idx) {
    const PartitionPlan& plan = plans[idx];
    auto inst = instantiate(t, plan, pins, target);
    if (!inst) continue;
    auto rx = embed_rec(inst->X.tree, inst->X.pins);
    if (!rx) continue;
    auto ry = embed_rec(inst->Y.tree, inst->Y.pins);
    if (!ry) continue;
    try {
      std::vector<Label> src, tgt;
      for (size_t r = 0; r < plan.align_X.size(); ++r) {
        tgt.push_back(rx->emb.label_of(
            inst->X.to_local[static_cast<size_t>(plan.align_X[r])]));
        src.push_back(ry->emb.label_of(
            inst->Y.to_local[static_cast<size_t>(plan.align_Y[r])]));
      }
      const Automorphism pi = align(plan.align_kind, src, tgt);
      Embedding aligned = ry->emb;
      for (auto& lb : aligned.labels) lb = apply(pi, lb);
      Embedding full = combine(rx->emb, aligned, plan);
      CaseTrace trace{n, plan.case_id, idx > 0,
                      {std::move(rx->trace), std::move(ry->trace)}};
      return RecResult{std::move(full), std::move(trace)};
    } catch (const Error&) {
      continue;
    }
  }
  if (n <= kRescueMaxDim) {
    auto e = brute_force_embed_pins(*t, n, pins, kRescueMaxDim, -1,
                                    kRescueStepBudget);
    if (e) return RecResult{std::move(*e), CaseTrace{n, "base", true, {}}};
  }
  if (std::getenv("PBCAT_DEBUG_FAILS")) {
    std::fprintf(stderr, "[embed_rec fail] n=%d pins=%zu plans_tried=%zu\n", n,
                 pins.size(), plans.size());
    for (const auto& pin : pins) {
      std::fprintf(stderr, "  pin kind=%d roles=", static_cast<int>(pin.kind));
      for (int r : pin.roles) std::fprintf(stderr, " %d", r);
      std::fprintf(stderr, "\n");
    }
    for (const auto& d : derive_decompositions(t, pins)) {
      std::fprintf(stderr, "  decomp N=%d legs:", d.backbone_order());
      for (int q = 1; q <= d.backbone_order() && q <= 20; ++q)
        std::fprintf(stderr, " %d", d.leg_order(q));
      std::vector<PartitionPlan> ps;
      append_case_plans(t, d, *M, target, ps);
      std::fprintf(stderr, " -> %zu plans:", ps.size());
      for (const auto& p : ps)
        std::fprintf(stderr, " %s%s", p.case_id.c_str(),
                     instantiate(t, p, pins, target) ? "+" : "-");
      std::fprintf(stderr, "\n");
    }
    std::fprintf(stderr, "%s", serialize_tree(*t).c_str());
  }
  return std::nullopt;
}

int validate_premise(const Tree& t) {
  const int n = exact_log2(t.m);
  if (n < 0)
    fail_invalid("vertex count " + std::to_string(t.m) +
                 " is not a power of two");
  if (!perfect_matching(t))
    fail_invalid("tree has no perfect matching, so it is not perfectly balanced");
  auto k = classify(t);
  if (!k) fail_invalid("tree has a vertex of degree greater than three");
  if (*k > 2) fail_invalid("tree is not a 2-caterpillar");
  return n;
}

void check_result(const Tree& t, const Embedding& e) {
  auto report = check_embedding(t, e, true);
  if (!report.ok)
    fail_internal("constructed embedding failed verification: " +
                  report.violations.front().witness);
}

}  // namespace

std::pair<Embedding, CaseTrace> embed_spanning(const Tree& t) {
  const int n = validate_premise(t);
  if (n <= 5) {
    Embedding e = base_case_embed(t);
    return {std::move(e), CaseTrace{n, "base", false, {}}};
  }
  auto r = embed_rec(std::make_shared<const Tree>(t), {});
  if (!r)
    fail_internal("construction failed: no case applies after fallback search");
  check_result(t, r->emb);
  return {std::move(r->emb), std::move(r->trace)};
}

std::pair<Embedding, CaseTrace> embed_constrained(const Tree& t,
                                                  const AnchorConstraint& a) {
  const int n = validate_premise(t);
  for (int v : a.vertices())
    if (!t.valid_vertex(v)) fail_invalid("anchor vertex out of range");
  auto host = std::make_shared<const Tree>(t);
  BackboneDecomposition d;
  try {
    d = decompose_within(host, all_vertices(t.m), a.x, 2);
  } catch (const Error&) {
    fail_invalid("x cannot start a backbone of the tree");
  }
  const BackboneDecomposition& L1 = d.leg(1);
  int j = -1;
  for (int idx = 0; idx < L1.backbone_order(); ++idx)
    if (L1.backbone[static_cast<size_t>(idx)] == a.y) {
      j = idx;
      break;
    }
  if (j < 1)
    fail_invalid("y must lie on the backbone of the leg at x, after x");
  const auto& pendant = L1.leg(j + 1).backbone;  // y then its pendant path
  const int yz = static_cast<int>(pendant.size()) - 1;
  if (yz == 0) {
    if (a.z != a.y)
      fail_invalid("z must equal y when y carries no pendant");
  } else if (a.z != pendant.back()) {
    fail_invalid("z is not the end of the pendant at y");
  }
  const AnchorPattern want = pattern_for_parities(j % 2 == 1, yz % 2 == 1);
  if (a.required_pattern != want)
    fail_invalid("required pattern does not match the anchor parities");
  if (a.needs_alpha()) {
    if (!a.alpha) fail_invalid("pattern requires an alpha vertex");
    if (*a.alpha != L1.backbone[static_cast<size_t>(j - 1)])
      fail_invalid("alpha is not the backbone predecessor of y");
  }
  if (n <= 5) {
    auto e = brute_force_embed(t, n, a, kDefaultDeskLimit);
    if (!e)
      fail_negative("exhaustive search found no embedding for the anchored instance");
    return {std::move(*e), CaseTrace{n, "base", false, {}}};
  }
  PinnedPattern pin{pattern_kind_of(a.required_pattern),
                    anchor_role_vertices(a)};
  auto r = embed_rec(host, {pin});
  if (!r)
    fail_internal("construction failed: no case applies after fallback search");
  check_result(t, r->emb);
  std::set<int> distinct(pin.roles.begin(), pin.roles.end());
  if (static_cast<int>(distinct.size()) == pattern_arity(pin.kind)) {
    auto rep = check_pattern(r->emb, a);
    if (!rep.ok) fail_internal("constructed embedding violates the anchor pattern");
  }
  return {std::move(r->emb), std::move(r->trace)};
}

PartitionPlan plan_partition(const Tree& t, const Matching& m,
                             const BackboneDecomposition& d) {
  const int n1 = exact_log2(t.m);
  if (n1 < 0 || t.m < 64)
    fail_invalid("partition requires a tree on 2^(n+1) vertices with n >= 5");
  if (static_cast<int>(m.mate.size()) != t.m ||
      static_cast<int>(m.pairs.size()) * 2 != t.m)
    fail_invalid("matching does not cover the tree");
  for (const auto& [u, v] : m.pairs)
    if (!t.has_edge(u, v) || m.mate[static_cast<size_t>(u)] != v ||
        m.mate[static_cast<size_t>(v)] != u)
      fail_invalid("matching is not a perfect matching of the tree");
  if (!d.host || d.host->m != t.m || d.order() != t.m)
    fail_invalid("decomposition does not cover the tree");
  {
    auto normalize = [](const std::vector<Edge>& edges) {
      std::vector<Edge> out;
      out.reserve(edges.size());
      for (auto [u, v] : edges) out.emplace_back(std::min(u, v), std::max(u, v));
      std::sort(out.begin(), out.end());
      return out;
    };
    if (normalize(d.host->edges) != normalize(t.edges))
      fail_invalid("decomposition belongs to a different tree");
  }
  const int N = d.backbone_order();
  if (N < 3) fail_invalid("decomposition backbone has fewer than three legs");
  const int target = t.m / 2;
  if (d.leg_order(1) >= target || d.leg_order(N) >= target)
    fail_invalid("decomposition end legs must stay below half the order");
  std::vector<PartitionPlan> plans;
  append_case_plans(d.host, d, m, target, plans);
  append_case_plans(d.host, reverse_labels(d), m, target, plans);
  for (size_t idx = 0; idx < plans.size(); ++idx) {
    if (instantiate(d.host, plans[idx], {}, target)) {
      plans[idx].fallback_used = idx > 0;
      return std::move(plans[idx]);
    }
  }
  fail_internal("no case applies after fallback search");
}

Embedding combine(const Embedding& eX, const Embedding& eY,
                  const PartitionPlan& plan) {
  const int n = eX.dim;
  if (eY.dim != n)
    fail_invalid("part embeddings have different dimensions");
  if (n < 0 || n >= 63) fail_invalid("dimension out of range for combining");
  if (eX.labels.size() != plan.part_X.size() ||
      eY.labels.size() != plan.part_Y.size())
    fail_invalid("part embedding sizes do not match the plan");
  const int total = static_cast<int>(plan.part_X.size() + plan.part_Y.size());
  auto local = [](const std::vector<int>& part, int host_v) {
    auto it = std::lower_bound(part.begin(), part.end(), host_v);
    if (it == part.end() || *it != host_v)
      fail_invalid("plan vertex missing from its part");
    return static_cast<int>(it - part.begin());
  };
  if (plan.align_X.size() != plan.align_Y.size() || plan.align_X.empty())
    fail_invalid("plan alignment tuples are malformed");
  for (size_t r = 0; r < plan.align_X.size(); ++r) {
    const Label& lx = eX.label_of(local(plan.part_X, plan.align_X[r]));
    const Label& ly = eY.label_of(local(plan.part_Y, plan.align_Y[r]));
    if (!(lx == ly)) fail_invalid("anchor images not coincident");
  }
  for (const Embedding* e : {&eX, &eY}) {
    std::unordered_set<std::uint64_t> seen;
    for (const Label& lb : e->labels) {
      if (lb.dim != n) fail_invalid("part embedding label width mismatch");
      if (!seen.insert(lb.bits).second)
        fail_invalid("label collision inside a part embedding");
    }
  }
  Embedding out;
  out.dim = n + 1;
  out.labels.assign(static_cast<size_t>(total), Label(0, n + 1));
  std::vector<char> filled(static_cast<size_t>(total), 0);
  auto place = [&](const std::vector<int>& part, const Embedding& e,
                   std::uint64_t prefix) {
    for (size_t i = 0; i < part.size(); ++i) {
      const int host_v = part[i];
      if (host_v < 0 || host_v >= total || filled[static_cast<size_t>(host_v)])
        fail_invalid("plan parts do not partition the tree");
      filled[static_cast<size_t>(host_v)] = 1;
      out.labels[static_cast<size_t>(host_v)] =
          Label(e.labels[i].bits | (prefix << n), n + 1);
    }
  };
  place(plan.part_X, eX, 0);
  place(plan.part_Y, eY, 1);
  for (const auto& [a, b] : plan.deleted_edges)
    if (!adjacent(out.labels[static_cast<size_t>(a)],
                  out.labels[static_cast<size_t>(b)]))
      fail_internal("deleted edge does not become a hypercube edge after combining");
  return out;
}

Embedding base_case_embed(const Tree& t,
                          const std::optional<AnchorConstraint>& a) {
  const int n = exact_log2(t.m);
  if (n < 0)
    fail_invalid("vertex count " + std::to_string(t.m) +
                 " is not a power of two");
  if (n > 5) fail_invalid("the base case covers at most 32 vertices");
  auto e = brute_force_embed(t, n, a, kDefaultDeskLimit);
  if (!e) fail_negative("exhaustive search found no spanning embedding");
  return std::move(*e);
}

Tree pad_to_power(const Tree& t) {
  if (t.m <= 0) fail_invalid("cannot pad an empty tree");
  if (t.m % 2 == 1)
    fail_invalid("vertex count is odd; padding cannot keep the tree perfectly balanced");
  if (!perfect_matching(t))
    fail_invalid("tree has no perfect matching, so it is not perfectly balanced");
  auto k = classify(t);
  if (!k) fail_invalid("tree has a vertex of degree greater than three");
  if (*k > 2) fail_invalid("tree is not a 2-caterpillar");
  int n = 0;
  while ((1 << n) < t.m) ++n;
  const int total = 1 << n;
  if (total == t.m) return t;
  auto d = decompose(t, 2);
  int attach = d.backbone.back();
  std::vector<Edge> edges = t.edges;
  for (int v = t.m; v < total; ++v) {
    edges.emplace_back(attach, v);
    attach = v;
  }
  return Tree(total, std::move(edges));
}

}  // namespace pbcat
