#include "pbcat/caterpillar.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <mutex>

namespace pbcat {

namespace {

constexpr int kInfDepth = 1 << 28;

// A connected vertex subset of a tree.  allowed == nullptr means the whole
// tree.  All caterpillar computations run on views so nested legs never
// need reindexed copies.
struct View {
  const Tree* t;
  const std::vector<char>* allowed;

  bool has(int v) const { return !allowed || (*allowed)[v] != 0; }
  int deg(int v) const {
    if (!allowed) return t->degree(v);
    int d = 0;
    for (int w : t->adj[v])
      if ((*allowed)[w]) ++d;
    return d;
  }
};

// Rooted caterpillar depth for directed edges of a view: rd(u -> p) is the
// minimal j such that the component of u away from p is a j-caterpillar
// whose backbone starts at u.  Leaf: 0.  One child c: rd(c -> u) (the
// backbone continues).  Two children: the backbone continues into one child
// and the other hangs as a leg, one level deeper.
struct DepthDP {
  View view;
  std::vector<int> rd;

  explicit DepthDP(const View& v)
      : view(v), rd(2 * std::max<std::size_t>(v.t->edges.size(), 1), -1) {}

  int slot(int u, int i) const {  // directed edge u -> adj[u][i]
    int e = view.t->adj_edge[u][i];
    // Slot parity encodes which endpoint is the "away" side u.
    return 2 * e + (view.t->edges[e].first == u ? 0 : 1);
  }

  int combine2(int a, int b) const {
    return std::min(std::max(a, b + 1), std::max(b, a + 1));
  }

  // Depth of the component hanging at u away from p (p == -1: everything).
  // Requires the child slots to be computed; see ensure().
  int combine(int u, int p) const {
    std::array<int, 3> child{};
    int count = 0;
    const auto& nbrs = view.t->adj[u];
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      int c = nbrs[i];
      if (c == p || !view.has(c)) continue;
      if (count == 3) return kInfDepth;
      int s = slot(c, index_of(c, u));
      child[count++] = rd[s];
    }
    if (count == 0) return 0;
    if (count == 1) return child[0];
    if (count == 2) return combine2(child[0], child[1]);
    return kInfDepth;
  }

  int index_of(int u, int w) const {
    const auto& nbrs = view.t->adj[u];
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      if (nbrs[i] == w) return static_cast<int>(i);
    fail_internal("neighbor lookup failed");
  }

  // Iteratively computes rd for (u -> p) and all its dependencies.
  void ensure(int u, int p) {
    std::vector<std::pair<int, int>> stack{{u, p}};
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      int s = slot(a, index_of(a, b));
      if (rd[s] >= 0) {
        stack.pop_back();
        continue;
      }
      bool ready = true;
      const auto& nbrs = view.t->adj[a];
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        int c = nbrs[i];
        if (c == b || !view.has(c)) continue;
        int cs = slot(c, index_of(c, a));
        if (rd[cs] < 0) {
          stack.push_back({c, a});
          ready = false;
        }
      }
      if (ready) {
        rd[s] = combine(a, b);
        stack.pop_back();
      }
    }
  }

  int rooted_depth(int u, int p) {
    if (p >= 0) {
      ensure(u, p);
      return rd[slot(u, index_of(u, p))];
    }
    const auto& nbrs = view.t->adj[u];
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      int c = nbrs[i];
      if (!view.has(c)) continue;
      ensure(c, u);
    }
    return combine(u, -1);
  }
};

std::vector<int> view_vertices(const View& view) {
  std::vector<int> out;
  for (int v = 0; v < view.t->m; ++v)
    if (view.has(v)) out.push_back(v);
  return out;
}

// Deterministic maximal backbone realizing the rooted depth from start: at
// every fork continue into the child whose choice minimizes the witnessed
// depth, ties toward the smaller vertex id.
std::vector<int> walk_backbone(DepthDP& dp, int start) {
  std::vector<int> bb{start};
  int prev = -1, u = start;
  while (true) {
    int c0 = -1, c1 = -1;
    for (int c : dp.view.t->adj[u]) {
      if (c == prev || !dp.view.has(c)) continue;
      (c0 < 0 ? c0 : c1) = c;
      if (c1 >= 0) break;
    }
    if (c0 < 0) break;
    int next = c0;
    if (c1 >= 0) {
      int r0 = dp.rooted_depth(c0, u);
      int r1 = dp.rooted_depth(c1, u);
      int v0 = std::max(r0, r1 + 1);
      int v1 = std::max(r1, r0 + 1);
      next = (v1 < v0) ? c1 : c0;  // tie keeps c0, the smaller id
    }
    bb.push_back(next);
    prev = u;
    u = next;
  }
  return bb;
}

std::vector<char> mask_of(int m, const std::vector<int>& subset) {
  std::vector<char> mask(m, 0);
  for (int v : subset) mask[v] = 1;
  return mask;
}

}  // namespace

struct BackboneDecomposition::Cache {
  std::vector<std::vector<int>> leg_sets;  // index q-1
  std::vector<int> leg_rooted;
  std::vector<long long> prefix;  // prefix[l] = f(l), prefix[0] = 0
  std::mutex mutex;
  std::vector<std::unique_ptr<BackboneDecomposition>> nested;
};

BackboneDecomposition::BackboneDecomposition(
    std::shared_ptr<const Tree> host_tree, std::vector<int> vertex_subset,
    std::vector<int> backbone_path)
    : host(std::move(host_tree)),
      vertices(std::move(vertex_subset)),
      backbone(std::move(backbone_path)) {
  if (!host) fail_invalid("decomposition requires a host tree");
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
    fail_invalid("duplicate vertex in decomposition subset");
  for (int v : vertices)
    if (!host->valid_vertex(v)) fail_invalid("subset vertex out of range");
  if (backbone.empty()) fail_invalid("backbone must be non-empty");
  auto mask = mask_of(host->m, vertices);
  for (int v : backbone)
    if (!host->valid_vertex(v) || !mask[v])
      fail_invalid("backbone vertex outside the subset");
  for (std::size_t i = 0; i + 1 < backbone.size(); ++i)
    if (!host->has_edge(backbone[i], backbone[i + 1]))
      fail_invalid("backbone is not a path in the host");
  {
    auto sorted_bb = backbone;
    std::sort(sorted_bb.begin(), sorted_bb.end());
    if (std::adjacent_find(sorted_bb.begin(), sorted_bb.end()) !=
        sorted_bb.end())
      fail_invalid("backbone repeats a vertex");
  }
  build_leg_sets();
}

void BackboneDecomposition::build_leg_sets() {
  cache_ = std::make_shared<Cache>();
  auto mask = mask_of(host->m, vertices);
  std::vector<char> is_backbone(host->m, 0);
  for (int v : backbone) is_backbone[v] = 1;

  int n = backbone_order();
  cache_->leg_sets.resize(n);
  cache_->leg_rooted.assign(n, 0);
  cache_->nested.resize(n);
  std::size_t covered = 0;
  View view{host.get(), &mask};
  DepthDP dp(view);
  for (int q = 0; q < n; ++q) {
    int root = backbone[q];
    std::vector<int> set{root};
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : host->adj[v]) {
        if (!mask[w] || is_backbone[w]) continue;
        if (std::find(set.begin(), set.end(), w) != set.end()) continue;
        set.push_back(w);
        queue.push_back(w);
      }
    }
    // BFS above only leaves root's backbone neighbors out via is_backbone;
    // everything else reachable without touching other backbone vertices
    // belongs to this leg.
    std::sort(set.begin(), set.end());
    covered += set.size();

    // Rooted depth of the leg from its attachment: combine the depths of
    // root's non-backbone children within the subset.
    std::array<int, 3> child{};
    int count = 0;
    for (int w : host->adj[root]) {
      if (!mask[w] || is_backbone[w]) continue;
      if (count == 3) {
        count = 4;
        break;
      }
      dp.ensure(w, root);
      child[count++] = dp.rd[dp.slot(w, dp.index_of(w, root))];
    }
    int rooted = 0;
    if (count == 1) rooted = child[0];
    else if (count == 2) rooted = dp.combine2(child[0], child[1]);
    else if (count > 2) rooted = kInfDepth;
    if (rooted >= kInfDepth)
      fail_invalid("leg exceeds the binary-tree degree bound");
    cache_->leg_rooted[q] = rooted;
    cache_->leg_sets[q] = std::move(set);
  }
  if (covered != vertices.size())
    fail_invalid("legs do not partition the subset (backbone not spanning?)");

  cache_->prefix.assign(n + 1, 0);
  for (int q = 0; q < n; ++q)
    cache_->prefix[q + 1] =
        cache_->prefix[q] + static_cast<long long>(cache_->leg_sets[q].size());

  depth = 0;
  for (int q = 0; q < n; ++q) depth = std::max(depth, cache_->leg_rooted[q]);
}

const std::vector<int>& BackboneDecomposition::leg_set(int q) const {
  if (q < 1 || q > backbone_order()) fail_invalid("leg index out of range");
  return cache_->leg_sets[q - 1];
}

int BackboneDecomposition::leg_order(int q) const {
  return static_cast<int>(leg_set(q).size());
}

int BackboneDecomposition::leg_rooted_depth(int q) const {
  if (q < 1 || q > backbone_order()) fail_invalid("leg index out of range");
  return cache_->leg_rooted[q - 1];
}

const BackboneDecomposition& BackboneDecomposition::leg(int q) const {
  if (q < 1 || q > backbone_order()) fail_invalid("leg index out of range");
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto& slot = cache_->nested[q - 1];
  if (!slot) {
    slot = std::make_unique<BackboneDecomposition>(decompose_within(
        host, cache_->leg_sets[q - 1], backbone[q - 1], leg_rooted_depth(q)));
  }
  return *slot;
}

int BackboneDecomposition::witnessed_k() const {
  if (backbone_order() == order()) return 0;
  return depth + 1;
}

std::optional<int> classify_subset(const Tree& t,
                                   const std::vector<char>& allowed) {
  View view{&t, &allowed};
  std::vector<int> verts = view_vertices(view);
  if (verts.empty()) fail_invalid("classify on empty subset");
  if (verts.size() == 1) return 0;
  for (int v : verts)
    if (view.deg(v) > 3) return std::nullopt;
  DepthDP dp(view);
  int best = kInfDepth;
  for (int v : verts) {
    if (view.deg(v) != 1) continue;
    best = std::min(best, dp.rooted_depth(v, -1));
  }
  if (best >= kInfDepth) return std::nullopt;
  return best;
}

std::optional<int> classify(const Tree& t) {
  std::vector<char> all(t.m, 1);
  return classify_subset(t, all);
}

BackboneDecomposition decompose_within(std::shared_ptr<const Tree> host,
                                       const std::vector<int>& subset,
                                       int start, int k) {
  auto mask = mask_of(host->m, subset);
  View view{host.get(), &mask};
  if (subset.size() == 1) {
    if (start >= 0 && start != subset[0])
      fail_invalid("start vertex outside subset");
    return BackboneDecomposition(host, subset, {subset[0]});
  }
  DepthDP dp(view);
  int begin = start;
  if (begin < 0) {
    int best = kInfDepth;
    for (int v : subset) {
      if (view.deg(v) != 1) continue;
      int d = dp.rooted_depth(v, -1);
      if (d < best) {
        best = d;
        begin = v;
      }
    }
    if (begin < 0 || best > k)
      fail_invalid("subset is not a " + std::to_string(k) + "-caterpillar");
  } else {
    if (!view.has(begin)) fail_invalid("start vertex outside subset");
    if (dp.rooted_depth(begin, -1) > k)
      fail_invalid("subset is not a " + std::to_string(k) +
                   "-caterpillar from the requested start");
  }
  auto bb = walk_backbone(dp, begin);
  return BackboneDecomposition(host, subset, std::move(bb));
}

namespace {

// Single reduction step: move the chosen end inward to the farthest vertex v
// of degree 2 (within the subset) such that every leg cut off is at most a
// (k-2)-caterpillar, undoing a prior extension at the same end.  The bound,
// when given, additionally requires the merged end leg to stay below it.
std::optional<BackboneDecomposition> try_reduce(const BackboneDecomposition& d,
                                                BackboneEnd end,
                                                std::optional<int> bound) {
  int n = d.backbone_order();
  if (n < 3) return std::nullopt;
  int kw = d.witnessed_k();
  auto mask = mask_of(d.host->m, d.vertices);
  View view{d.host.get(), &mask};

  // Single scan inward from the end: cut_sum accumulates the orders of the
  // legs that would be cut off, and the merged end-leg order is monotone in
  // the number of steps, so both stop conditions are hard stops.
  long long cut_sum = 0;
  int found = -1;
  for (int steps = 1; steps <= n - 2; ++steps) {
    int prev_pos = (end == BackboneEnd::first) ? steps - 1 : n - steps;
    int pos = (end == BackboneEnd::first) ? steps : n - 1 - steps;
    if (d.leg_rooted_depth(prev_pos + 1) > kw - 2) break;
    cut_sum += d.leg_order(prev_pos + 1);
    long long merged = cut_sum + d.leg_order(pos + 1);
    if (bound && merged >= *bound) break;
    if (view.deg(d.backbone[pos]) == 2) found = pos;
  }
  if (found < 0) return std::nullopt;
  std::vector<int> bb;
  if (end == BackboneEnd::first)
    bb.assign(d.backbone.begin() + found, d.backbone.end());
  else
    bb.assign(d.backbone.begin(), d.backbone.begin() + found + 1);
  return BackboneDecomposition(d.host, d.vertices, std::move(bb));
}

}  // namespace

BackboneDecomposition decompose(std::shared_ptr<const Tree> host, int k) {
  auto c = classify(*host);
  if (!c || *c > k)
    fail_invalid("tree is not a " + std::to_string(k) + "-caterpillar");
  auto d = decompose_within(host, view_vertices({host.get(), nullptr}), -1, k);
  if (host->m <= 2) return d;
  // Reduce both ends to their fixpoints.  A reduction only merges legs of
  // its own side into the new end leg (kept below m/2), so the two ends are
  // independent and each fixpoint is the farthest reachable stop.
  int n = d.backbone_order();
  int kw = d.witnessed_k();
  long long half = host->m / 2;
  View view{host.get(), nullptr};
  int best_lo = 0;
  {
    long long covered = d.leg_order(1);
    for (int pos = 1; pos <= n - 2; ++pos) {
      if (d.leg_rooted_depth(pos) > kw - 2) break;
      covered += d.leg_order(pos + 1);
      if (covered >= half) break;
      if (view.deg(d.backbone[pos]) == 2) best_lo = pos;
    }
  }
  int best_hi = n - 1;
  {
    long long covered = d.leg_order(n);
    for (int pos = n - 2; pos >= 1; --pos) {
      if (d.leg_rooted_depth(pos + 2) > kw - 2) break;
      covered += d.leg_order(pos + 1);
      if (covered >= half) break;
      if (view.deg(d.backbone[pos]) == 2) best_hi = pos;
    }
  }
  if (best_lo >= best_hi) fail_internal("backbone reduction crossed itself");
  if (best_lo == 0 && best_hi == n - 1) return d;
  std::vector<int> bb(d.backbone.begin() + best_lo,
                      d.backbone.begin() + best_hi + 1);
  return BackboneDecomposition(host, view_vertices(view), std::move(bb));
}

BackboneDecomposition decompose(const Tree& t, int k) {
  return decompose(std::make_shared<const Tree>(t), k);
}

BackboneDecomposition extend_backbone(const BackboneDecomposition& d,
                                      BackboneEnd end) {
  int n = d.backbone_order();
  int q = (end == BackboneEnd::first) ? 1 : n;
  if (d.leg_order(q) <= 1)
    fail_invalid("end leg already has order one; cannot extend");
  const auto& nested = d.leg(q);
  std::vector<int> bb;
  if (end == BackboneEnd::first) {
    bb.assign(nested.backbone.rbegin(), nested.backbone.rend());
    bb.insert(bb.end(), d.backbone.begin() + 1, d.backbone.end());
  } else {
    bb = d.backbone;
    bb.insert(bb.end(), nested.backbone.begin() + 1, nested.backbone.end());
  }
  return BackboneDecomposition(d.host, d.vertices, std::move(bb));
}

BackboneDecomposition reduce_backbone(const BackboneDecomposition& d,
                                      BackboneEnd end) {
  auto r = try_reduce(d, end, std::nullopt);
  if (!r)
    fail_invalid("no reduction available at this end (degree or leg bound)");
  return std::move(*r);
}

int leg_prefix_order(const BackboneDecomposition& d, int l) {
  if (l < 1 || l > d.backbone_order()) fail_invalid("leg index out of range");
  long long sum = 0;
  for (int q = 1; q <= l; ++q) sum += d.leg_order(q);
  return static_cast<int>(sum);
}

int find_split(const BackboneDecomposition& d, int target) {
  int n = d.backbone_order();
  if (d.order() <= 2) fail_invalid("find_split requires order > 2");
  if (n < 3) fail_invalid("find_split requires backbone order >= 3");
  if (d.leg_order(1) >= target || d.leg_order(n) >= target)
    fail_invalid("end legs must have order below the split target");
  long long f = 0;
  for (int q = 1; q <= n; ++q) {
    f += d.leg_order(q);
    if (f >= target) return q;
  }
  fail_invalid("split target exceeds the caterpillar order");
}

BackboneDecomposition reverse_labels(const BackboneDecomposition& d) {
  std::vector<int> bb(d.backbone.rbegin(), d.backbone.rend());
  return BackboneDecomposition(d.host, d.vertices, std::move(bb));
}

std::optional<int> first_even_order_leg(const BackboneDecomposition& d,
                                        int j) {
  if (j < 1 || j > d.backbone_order()) fail_invalid("leg index out of range");
  std::vector<int> from_new, to_new;
  Tree covered = induced_subtree(*d.host, d.vertices, &from_new, &to_new);
  if (!perfect_matching(covered))
    fail_invalid("first_even_order_leg requires a perfectly balanced host");
  for (int q = j + 1; q <= d.backbone_order(); ++q)
    if (d.leg_order(q) % 2 == 0) return q;
  return std::nullopt;
}

BackboneDecomposition parity_backbone(const BackboneDecomposition& leg,
                                      Parity parity) {
  int o = leg.order();
  if (o < 2) fail_invalid("parity_backbone requires order >= 2");
  {
    std::vector<int> from_new, to_new;
    Tree covered = induced_subtree(*leg.host, leg.vertices, &from_new, &to_new);
    if (!perfect_matching(covered))
      fail_invalid("parity_backbone requires a perfectly balanced leg");
  }
  auto mask = mask_of(leg.host->m, leg.vertices);
  auto cls = classify_subset(*leg.host, mask);
  if (!cls || *cls > 1)
    fail_invalid("parity_backbone requires a 1-caterpillar leg");
  int x = leg.backbone[0];
  if (o == 2) {
    if (parity == Parity::even)
      fail_invalid("an order-2 leg only has the odd backbone");
    int other = leg.vertices[0] == x ? leg.vertices[1] : leg.vertices[0];
    return BackboneDecomposition(leg.host, leg.vertices, {x, other});
  }

  // Canonical spine-with-pendants form from x.
  auto base = decompose_within(leg.host, leg.vertices, x, 1);
  int spine_len = base.backbone_order();
  // Ordered pendant path at each spine vertex.
  std::vector<std::vector<int>> pendant(spine_len);
  for (int i = 0; i < spine_len; ++i) {
    int s = base.backbone[i];
    const auto& set = base.leg_set(i + 1);
    if (set.size() == 1) continue;
    std::vector<char> in_leg(leg.host->m, 0);
    for (int v : set) in_leg[v] = 1;
    int prev = s, cur = -1;
    for (int w : leg.host->adj[s])
      if (in_leg[w]) {
        cur = w;
        break;
      }
    while (cur != -1) {
      pendant[i].push_back(cur);
      int next = -1;
      for (int w : leg.host->adj[cur])
        if (in_leg[w] && w != prev) {
          next = w;
          break;
        }
      prev = cur;
      cur = next;
    }
  }
  // bare_beyond[i]: no pendants strictly after spine position i.
  std::vector<char> bare_beyond(spine_len, 1);
  for (int i = spine_len - 2; i >= 0; --i)
    bare_beyond[i] =
        bare_beyond[i + 1] && pendant[i + 1].empty() ? 1 : 0;

  int want = (parity == Parity::even) ? 0 : 1;
  for (int i = 0; i < spine_len; ++i) {
    if (!bare_beyond[i]) continue;
    bool tail_empty = (i == spine_len - 1);
    // r = 0: end the backbone at the spine vertex itself.
    if ((pendant[i].empty() || tail_empty) && i % 2 == want && i > 0) {
      std::vector<int> bb(base.backbone.begin(), base.backbone.begin() + i + 1);
      return BackboneDecomposition(leg.host, leg.vertices, std::move(bb));
    }
    // r >= 1: dive into the pendant at this spine vertex.
    for (int r = 1; r <= static_cast<int>(pendant[i].size()); ++r) {
      if ((i + r) % 2 != want) continue;
      std::vector<int> bb(base.backbone.begin(), base.backbone.begin() + i + 1);
      bb.insert(bb.end(), pendant[i].begin(), pendant[i].begin() + r);
      return BackboneDecomposition(leg.host, leg.vertices, std::move(bb));
    }
  }
  fail_invalid("no backbone from the fixed first vertex has the requested parity");
}

void validate_decomposition(const BackboneDecomposition& d) {
  // The constructor enforces path/partition invariants; revalidate the
  // nested structures: every leg's backbone starts at its attachment and
  // covers the leg.
  BackboneDecomposition rebuilt(d.host, d.vertices, d.backbone);
  if (rebuilt.depth != d.depth) fail_internal("decomposition depth drifted");
  for (int q = 1; q <= d.backbone_order(); ++q) {
    const auto& nested = d.leg(q);
    if (nested.backbone.empty() || nested.backbone[0] != d.backbone[q - 1])
      fail_internal("nested leg backbone does not start at its attachment");
    if (nested.vertices != d.leg_set(q))
      fail_internal("nested leg covers the wrong vertex set");
  }
}

}  // namespace pbcat
