#include "pbcat/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>

#include "pbcat/caterpillar.hpp"

namespace pbcat {

namespace {

std::vector<int> tree_centers(const Tree& t) {
  if (t.m == 1) return {0};
  std::vector<int> deg(t.m);
  std::deque<int> frontier;
  for (int v = 0; v < t.m; ++v) {
    deg[v] = t.degree(v);
    if (deg[v] == 1) frontier.push_back(v);
  }
  int remaining = t.m;
  while (remaining > 2) {
    std::deque<int> next;
    remaining -= static_cast<int>(frontier.size());
    for (int v : frontier)
      for (int w : t.adj[v])
        if (--deg[w] == 1) next.push_back(w);
    frontier = std::move(next);
  }
  std::vector<int> out(frontier.begin(), frontier.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Rooted canonical code: "(" + sorted child codes + ")".
std::string rooted_code(const Tree& t, int root, std::vector<int>* order_out) {
  std::vector<std::string> code(t.m);
  std::vector<int> parent(t.m, -2), post;
  post.reserve(t.m);
  std::vector<int> stack{root};
  parent[root] = -1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    post.push_back(v);
    for (int w : t.adj[v])
      if (parent[w] == -2) {
        parent[w] = v;
        stack.push_back(w);
      }
  }
  std::vector<std::vector<std::pair<std::string, int>>> kids(t.m);
  for (auto it = post.rbegin(); it != post.rend(); ++it) {
    int v = *it;
    auto& ks = kids[v];
    std::sort(ks.begin(), ks.end());
    std::string c = "(";
    for (auto& [kc, kv] : ks) c += kc;
    c += ")";
    code[v] = c;
    if (parent[v] >= 0) kids[parent[v]].push_back({c, v});
  }
  if (order_out) {
    // Code-directed DFS assigning canonical ids in visit order.
    order_out->assign(t.m, -1);
    int next_id = 0;
    std::vector<int> dfs{root};
    while (!dfs.empty()) {
      int v = dfs.back();
      dfs.pop_back();
      (*order_out)[v] = next_id++;
      // push children in reverse sorted order so smaller codes pop first
      for (auto it2 = kids[v].rbegin(); it2 != kids[v].rend(); ++it2)
        dfs.push_back(it2->second);
    }
  }
  return code[root];
}

uint64_t popcount64(uint64_t x) { return static_cast<uint64_t>(std::popcount(x)); }

struct Search {
  const Tree& t;
  int n;
  uint64_t label_count;
  std::vector<int> order;             // placement order (DFS)
  std::vector<int> order_parent;      // parent of order[i] in the DFS
  std::vector<uint64_t> label;        // current assignment
  std::vector<char> has_label;
  uint64_t used = 0;
  std::vector<std::vector<int>> dist;  // tree distances
  std::vector<std::vector<int>> extra_adj;  // image-adjacency constraints
  std::vector<int> color;              // depth parity from order[0]
  int base_parity = 0;                 // label parity of color-0 vertices
  int free_parity[2] = {0, 0};         // unused labels by parity
  int need_parity[2] = {0, 0};         // unplaced vertices by required parity

  Search(const Tree& tree, int dim) : t(tree), n(dim) {
    label_count = uint64_t{1} << n;
    label.assign(t.m, 0);
    has_label.assign(t.m, 0);
    extra_adj.assign(t.m, {});
    dist.assign(t.m, std::vector<int>(t.m, 0));
    for (int s = 0; s < t.m; ++s) {
      std::vector<int> d(t.m, -1);
      std::deque<int> q{s};
      d[s] = 0;
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : t.adj[v])
          if (d[w] < 0) {
            d[w] = d[v] + 1;
            q.push_back(w);
          }
      }
      for (int v = 0; v < t.m; ++v) dist[s][v] = d[v];
    }
  }

  void build_order(int root) {
    order.clear();
    order_parent.clear();
    std::vector<char> seen(t.m, 0);
    std::vector<std::pair<int, int>> stack{{root, -1}};
    seen[root] = 1;
    while (!stack.empty()) {
      auto [v, p] = stack.back();
      stack.pop_back();
      order.push_back(v);
      order_parent.push_back(p);
      for (auto it = t.adj[v].rbegin(); it != t.adj[v].rend(); ++it)
        if (!seen[*it]) {
          seen[*it] = 1;
          stack.push_back({*it, v});
        }
    }
    color.assign(t.m, 0);
    for (std::size_t i = 1; i < order.size(); ++i)
      color[order[i]] = color[order_parent[i]] ^ 1;
  }

  bool consistent(int v, uint64_t cand) const {
    for (int w = 0; w < t.m; ++w) {
      if (!has_label[w] || w == v) continue;
      int hd = static_cast<int>(popcount64(cand ^ label[w]));
      int dt = dist[v][w];
      if (hd > dt || ((hd ^ dt) & 1)) return false;
    }
    for (int w : extra_adj[v])
      if (has_label[w] && popcount64(cand ^ label[w]) != 1) return false;
    return true;
  }

  void place(int v, uint64_t c) {
    label[v] = c;
    has_label[v] = 1;
    used |= uint64_t{1} << c;
    --free_parity[popcount64(c) & 1];
    --need_parity[color[v] ^ base_parity];
  }

  void unplace(int v) {
    uint64_t c = label[v];
    has_label[v] = 0;
    used &= ~(uint64_t{1} << c);
    ++free_parity[popcount64(c) & 1];
    ++need_parity[color[v] ^ base_parity];
  }

  bool feasible_counts() const {
    return free_parity[0] >= need_parity[0] && free_parity[1] >= need_parity[1];
  }

  long long steps_left = -1;  // negative: unlimited

  bool dfs(std::size_t i) {
    if (steps_left == 0) return false;
    if (steps_left > 0) --steps_left;
    if (i == order.size()) return true;
    int v = order[i];
    int p = order_parent[i];
    if (has_label[v]) {
      if (p >= 0 && popcount64(label[v] ^ label[p]) != 1) return false;
      return dfs(i + 1);
    }
    uint64_t plabel = label[p];
    uint64_t cands[64];
    for (int b = 0; b < n; ++b) cands[b] = plabel ^ (uint64_t{1} << b);
    std::sort(cands, cands + n);
    for (int b = 0; b < n; ++b) {
      uint64_t c = cands[b];
      if (used & (uint64_t{1} << c)) continue;
      if (!consistent(v, c)) continue;
      place(v, c);
      if (feasible_counts() && dfs(i + 1)) return true;
      unplace(v);
    }
    return false;
  }
};

// Canonical seed labels per pattern, in role order.
std::vector<uint64_t> canonical_seed(PatternKind kind) {
  switch (kind) {
    case PatternKind::VERTEX:
      return {0};
    case PatternKind::EDGE:
      return {0, 1};
    case PatternKind::P3:
      return {0, 1, 3};
    case PatternKind::CLAW:
      return {0, 1, 2, 4};
    case PatternKind::C4:
      return {0, 1, 3, 2};
  }
  fail_internal("unknown pattern kind");
}

struct CatalogKey {
  std::string tree_key;
  int n;
  // Flattened sorted pin encodings: per pin, [kind, canonical role ids...],
  // prefixed with the pin length.  Empty when unanchored.
  std::vector<int> pins;

  bool operator<(const CatalogKey& other) const {
    return std::tie(tree_key, n, pins) <
           std::tie(other.tree_key, other.n, other.pins);
  }
};

std::map<CatalogKey, std::optional<std::vector<uint64_t>>>& catalog() {
  static std::map<CatalogKey, std::optional<std::vector<uint64_t>>> c;
  return c;
}

std::mutex& catalog_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

CanonicalCode canonical_form(const Tree& t) {
  auto centers = tree_centers(t);
  std::string best;
  int best_center = -1;
  for (int c : centers) {
    std::string code = rooted_code(t, c, nullptr);
    if (best_center < 0 || code < best) {
      best = code;
      best_center = c;
    }
  }
  CanonicalCode out;
  out.key = best;
  rooted_code(t, best_center, &out.to_canonical);
  return out;
}

std::vector<Tree> enumerate_trees_max_deg3(int m, int limit) {
  if (m < 1) fail_invalid("tree order must be positive");
  if (m > limit)
    fail_invalid("enumeration order " + std::to_string(m) +
                 " exceeds the limit " + std::to_string(limit));
  std::vector<std::pair<std::string, Tree>> reps = {
      {canonical_form(Tree(1, {})).key, Tree(1, {})}};
  for (int k = 2; k <= m; ++k) {
    std::map<std::string, Tree> next;
    for (const auto& [key, t] : reps) {
      for (int v = 0; v < t.m; ++v) {
        if (t.degree(v) >= 3) continue;
        auto edges = t.edges;
        edges.push_back({v, k - 1});
        Tree grown(k, edges);
        auto code = canonical_form(grown);
        next.emplace(code.key, std::move(grown));
      }
    }
    reps.assign(std::make_move_iterator(next.begin()),
                std::make_move_iterator(next.end()));
  }
  std::vector<Tree> out;
  out.reserve(reps.size());
  for (auto& [key, t] : reps) out.push_back(std::move(t));
  return out;
}

std::vector<Tree> enumerate_pb_2cats(int m, int limit) {
  if (m % 2 != 0) fail_invalid("perfectly balanced trees have even order");
  std::vector<Tree> out;
  for (auto& t : enumerate_trees_max_deg3(m, limit)) {
    if (!perfect_matching(t)) continue;
    auto k = classify(t);
    if (!k || *k > 2) continue;
    out.push_back(std::move(t));
  }
  return out;
}

std::optional<Embedding> brute_force_embed(
    const Tree& t, int n, const std::optional<AnchorConstraint>& a,
    int desk_limit) {
  std::vector<PinnedPattern> pins;
  int root_hint = -1;
  if (a) {
    auto role_vertices = anchor_role_vertices(*a);
    for (int v : role_vertices)
      if (!t.valid_vertex(v)) fail_invalid("anchor vertex out of range");
    std::set<int> uniq(role_vertices.begin(), role_vertices.end());
    if (uniq.size() != role_vertices.size())
      fail_invalid("anchor roles must name distinct vertices");
    pins.push_back({pattern_kind_of(a->required_pattern), role_vertices});
    root_hint = a->x;
  }
  return brute_force_embed_pins(t, n, pins, desk_limit, root_hint);
}

std::optional<Embedding> brute_force_embed_pins(
    const Tree& t, int n, const std::vector<PinnedPattern>& pins,
    int desk_limit, int root_hint, long long max_steps) {
  if (n < 1) fail_invalid("dimension must be positive");
  if (n > desk_limit)
    fail_invalid("dimension " + std::to_string(n) +
                 " exceeds the exhaustive-search limit " +
                 std::to_string(desk_limit));
  if (static_cast<uint64_t>(t.m) > (uint64_t{1} << n)) return std::nullopt;
  for (const auto& pin : pins) {
    if (static_cast<int>(pin.roles.size()) != pattern_arity(pin.kind))
      fail_invalid("pin role count does not match the pattern arity");
    for (int v : pin.roles)
      if (!t.valid_vertex(v)) fail_invalid("anchor vertex out of range");
    std::set<int> uniq(pin.roles.begin(), pin.roles.end());
    if (uniq.size() != pin.roles.size())
      fail_invalid("anchor roles must name distinct vertices");
    if (n < pattern_min_dim(pin.kind)) return std::nullopt;
  }

  auto code = canonical_form(t);
  // Canonical pin order: arity descending so the seeded pin is the largest,
  // then by encoded roles for determinism.
  std::vector<std::size_t> pin_order(pins.size());
  std::iota(pin_order.begin(), pin_order.end(), std::size_t{0});
  auto encode = [&](const PinnedPattern& pin) {
    std::vector<int> pc{static_cast<int>(pin.kind)};
    for (int v : pin.roles) pc.push_back(code.to_canonical[v]);
    return pc;
  };
  std::vector<std::vector<int>> encoded;
  encoded.reserve(pins.size());
  for (const auto& pin : pins) encoded.push_back(encode(pin));
  std::sort(pin_order.begin(), pin_order.end(),
            [&](std::size_t i, std::size_t j) {
              int ai = pattern_arity(pins[i].kind);
              int aj = pattern_arity(pins[j].kind);
              if (ai != aj) return ai > aj;
              return encoded[i] < encoded[j];
            });

  CatalogKey key{code.key, n, {}};
  for (std::size_t i : pin_order) {
    key.pins.push_back(static_cast<int>(encoded[i].size()));
    key.pins.insert(key.pins.end(), encoded[i].begin(), encoded[i].end());
  }
  {
    std::lock_guard<std::mutex> lock(catalog_mutex());
    auto it = catalog().find(key);
    if (it != catalog().end()) {
      if (!it->second) return std::nullopt;
      Embedding emb;
      emb.dim = n;
      emb.labels.reserve(t.m);
      for (int v = 0; v < t.m; ++v)
        emb.labels.push_back(Label((*it->second)[code.to_canonical[v]], n));
      return emb;
    }
  }

  Search s(t, n);
  s.steps_left = max_steps > 0 ? max_steps : -1;
  bool found = false;
  if (pins.empty()) {
    // centroid: minimize the largest component after removal, ties to the
    // smaller id
    int centroid = 0, best = t.m + 1;
    for (int v = 0; v < t.m; ++v) {
      int worst = 0;
      std::vector<char> seen(t.m, 0);
      seen[v] = 1;
      for (int w : t.adj[v]) {
        if (seen[w]) continue;
        int size = 0;
        std::deque<int> q{w};
        seen[w] = 1;
        while (!q.empty()) {
          int u = q.front();
          q.pop_front();
          ++size;
          for (int x : t.adj[u])
            if (!seen[x]) {
              seen[x] = 1;
              q.push_back(x);
            }
        }
        worst = std::max(worst, size);
      }
      if (worst < best) {
        best = worst;
        centroid = v;
      }
    }
    s.build_order(centroid);
    s.base_parity = 0;  // centroid gets label 0 (even parity, color 0)
    s.free_parity[0] = static_cast<int>(s.label_count / 2);
    s.free_parity[1] = static_cast<int>(s.label_count / 2);
    for (int v = 0; v < t.m; ++v) ++s.need_parity[s.color[v]];
    s.place(centroid, 0);
    if (t.m == 1) {
      found = true;
    } else {
      int first_nbr = s.order[1];
      if (s.consistent(first_nbr, 1)) {
        s.place(first_nbr, 1);
        found = s.feasible_counts() && s.dfs(2);
        if (!found) s.unplace(first_nbr);
      }
    }
  } else {
    const PinnedPattern& seeded = pins[pin_order[0]];
    auto seeds = canonical_seed(seeded.kind);
    for (std::size_t i = 1; i < pin_order.size(); ++i) {
      const PinnedPattern& pin = pins[pin_order[i]];
      for (auto [ra, rb] : pattern_edge_pairs(pin.kind)) {
        int u = pin.roles[ra], v = pin.roles[rb];
        s.extra_adj[u].push_back(v);
        s.extra_adj[v].push_back(u);
      }
    }
    int root = seeded.roles[0];
    if (root_hint >= 0 &&
        std::find(seeded.roles.begin(), seeded.roles.end(), root_hint) !=
            seeded.roles.end())
      root = root_hint;
    s.build_order(root);
    s.free_parity[0] = static_cast<int>(s.label_count / 2);
    s.free_parity[1] = static_cast<int>(s.label_count / 2);
    s.base_parity = static_cast<int>(popcount64(seeds[0]) & 1) ^
                    s.color[seeded.roles[0]];
    for (int v = 0; v < t.m; ++v) ++s.need_parity[s.color[v] ^ s.base_parity];
    bool ok = true;
    for (std::size_t r = 0; r < seeded.roles.size() && ok; ++r) {
      int v = seeded.roles[r];
      uint64_t c = seeds[r];
      if ((s.used & (uint64_t{1} << c)) || !s.consistent(v, c)) {
        ok = false;
        break;
      }
      int want = s.color[v] ^ s.base_parity;
      if (static_cast<int>(popcount64(c) & 1) != want) {
        ok = false;
        break;
      }
      s.place(v, c);
    }
    found = ok && s.feasible_counts() && s.dfs(0);
  }

  std::optional<std::vector<uint64_t>> canonical_labels;
  std::optional<Embedding> result;
  if (found) {
    Embedding emb;
    emb.dim = n;
    for (int v = 0; v < t.m; ++v) emb.labels.push_back(Label(s.label[v], n));
    canonical_labels.emplace(t.m);
    for (int v = 0; v < t.m; ++v)
      (*canonical_labels)[code.to_canonical[v]] = s.label[v];
    result = std::move(emb);
  }
  // An aborted bounded search proves nothing; only settled verdicts are
  // worth remembering.
  if (found || s.steps_left != 0) {
    std::lock_guard<std::mutex> lock(catalog_mutex());
    catalog().emplace(key, canonical_labels);
  }
  return result;
}

Tree generate_random_pb_2cat(int m, std::uint64_t seed) {
  if (m < 2 || m % 2 != 0)
    fail_invalid("random instances require even order >= 2");
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
  };

  std::vector<Edge> edges;
  int next_id = 0;
  int backbone_tail = -1;  // last backbone vertex so far

  auto new_backbone_vertex = [&]() {
    int v = next_id++;
    if (backbone_tail >= 0) edges.push_back({backbone_tail, v});
    backbone_tail = v;
    return v;
  };

  // Attach a spine of `spine_len` extra vertices at q (the leg then has
  // order spine_len + 1 counting q), plus even pendant paths at spine
  // positions >= 2 consuming `pendant_budget` vertices.
  auto attach_leg = [&](int q, int spine_len, int pendant_budget) {
    std::vector<int> spine{q};
    for (int i = 0; i < spine_len; ++i) {
      int v = next_id++;
      edges.push_back({spine.back(), v});
      spine.push_back(v);
    }
    std::vector<int> open;  // spine vertices that may carry a pendant
    for (std::size_t i = 1; i < spine.size(); ++i)
      open.push_back(spine[i]);
    while (pendant_budget > 0) {
      if (open.empty()) fail_internal("pendant budget with no open slots");
      int slot_idx = pick(0, static_cast<int>(open.size()) - 1);
      int at = open[slot_idx];
      open.erase(open.begin() + slot_idx);
      int len = 2 * pick(1, pendant_budget / 2);
      if (open.empty()) len = pendant_budget;  // last slot absorbs the rest
      int prev = at;
      for (int i = 0; i < len; ++i) {
        int v = next_id++;
        edges.push_back({prev, v});
        prev = v;
      }
      pendant_budget -= len;
    }
  };

  int remaining = m;
  while (remaining > 0) {
    bool pair_piece = remaining == 2 || (rng() % 2 == 0);
    if (pair_piece) {
      // two matched backbone vertices, each with an odd-order leg
      int budget = remaining - 2;  // beyond the two backbone vertices
      int extra1 = 0, extra2 = 0;  // even extras per side
      if (budget > 0 && rng() % 4 != 0) {
        extra1 = 2 * pick(0, budget / 2);
        budget -= extra1;
      }
      if (budget > 0 && rng() % 4 != 0) {
        extra2 = 2 * pick(0, budget / 2);
      }
      int q1 = new_backbone_vertex();
      if (extra1 > 0) {
        int spine = 2 * pick(1, extra1 / 2);  // odd leg: q plus even spine tail
        attach_leg(q1, spine, extra1 - spine);
      }
      int q2 = new_backbone_vertex();
      if (extra2 > 0) {
        int spine = 2 * pick(1, extra2 / 2);
        attach_leg(q2, spine, extra2 - spine);
      }
      remaining -= 2 + extra1 + extra2;
    } else {
      // one backbone vertex with an even-order leg (self-matched)
      int leg_order = 2 * pick(1, remaining / 2);
      int q = new_backbone_vertex();
      // spine holds q plus an odd count of extra vertices
      int extras = leg_order - 1;
      int spine = 2 * pick(0, (extras - 1) / 2) + 1;
      attach_leg(q, spine, extras - spine);
      remaining -= leg_order;
    }
  }

  Tree t(next_id, edges);
  if (t.m != m) fail_internal("random generator missed the target order");
  auto k = classify(t);
  if (!k || *k > 2) fail_internal("random generator produced a non-2-caterpillar");
  if (!perfect_matching(t))
    fail_internal("random generator produced an unbalanced tree");
  return t;
}

}  // namespace pbcat
