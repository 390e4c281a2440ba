#include "pbcat/verify.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <vector>

namespace pbcat {
namespace {

bool hamming_one(std::uint64_t a, std::uint64_t b) {
  return std::popcount(a ^ b) == 1;
}

std::string bits_str(const Label& l) { return l.to_string(); }

// Adjacency lists rebuilt from the raw edge list.
std::vector<std::vector<int>> raw_adj(const Tree& t) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(t.m));
  for (auto [u, v] : t.edges) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  return adj;
}

struct PatternReader {
  const Embedding& e;
  CheckReport& report;
  bool usable = true;

  Label at(int v, const char* role) {
    if (v < 0 || v >= static_cast<int>(e.labels.size())) {
      report.add(CheckKind::PATTERN_MISMATCH,
                 std::string("anchor role ") + role + " is not a vertex of the embedding");
      usable = false;
      return Label(0, e.dim == 0 ? 1 : e.dim);
    }
    return e.labels[static_cast<std::size_t>(v)];
  }
};

}  // namespace

const char* check_kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::NOT_INJECTIVE: return "NOT_INJECTIVE";
    case CheckKind::EDGE_NOT_ADJACENT: return "EDGE_NOT_ADJACENT";
    case CheckKind::LABEL_OUT_OF_RANGE: return "LABEL_OUT_OF_RANGE";
    case CheckKind::NOT_SPANNING: return "NOT_SPANNING";
    case CheckKind::PATTERN_MISMATCH: return "PATTERN_MISMATCH";
    case CheckKind::NOT_PERFECTLY_BALANCED: return "NOT_PERFECTLY_BALANCED";
    case CheckKind::NOT_2CAT: return "NOT_2CAT";
  }
  return "UNKNOWN";
}

CheckReport check_embedding(const Tree& t, const Embedding& e,
                            bool spanning_required) {
  CheckReport report;
  if (e.dim < 1 || e.dim > 64) {
    report.add(CheckKind::LABEL_OUT_OF_RANGE,
               "dimension " + std::to_string(e.dim) + " outside 1..64");
    return report;
  }
  if (static_cast<int>(e.labels.size()) != t.m) {
    report.add(CheckKind::NOT_SPANNING,
               "embedding labels " + std::to_string(e.labels.size()) +
                   " vertices, tree has " + std::to_string(t.m));
    return report;
  }

  bool in_range = true;
  for (int v = 0; v < t.m; ++v) {
    const Label& l = e.labels[static_cast<std::size_t>(v)];
    bool bad = l.dim != e.dim;
    if (!bad && e.dim < 64 && (l.bits >> e.dim) != 0) bad = true;
    if (bad) {
      report.add(CheckKind::LABEL_OUT_OF_RANGE,
                 "vertex " + std::to_string(v) + " label width/value invalid for dimension " +
                     std::to_string(e.dim));
      in_range = false;
    }
  }

  bool injective = true;
  std::map<std::uint64_t, int> owner;
  for (int v = 0; v < t.m; ++v) {
    auto [it, fresh] = owner.insert({e.labels[static_cast<std::size_t>(v)].bits, v});
    if (!fresh) {
      report.add(CheckKind::NOT_INJECTIVE,
                 "vertices " + std::to_string(it->second) + " and " + std::to_string(v) +
                     " share label " + bits_str(e.labels[static_cast<std::size_t>(v)]));
      injective = false;
    }
  }

  for (auto [u, v] : t.edges) {
    const Label& a = e.labels[static_cast<std::size_t>(u)];
    const Label& b = e.labels[static_cast<std::size_t>(v)];
    if (!hamming_one(a.bits, b.bits))
      report.add(CheckKind::EDGE_NOT_ADJACENT,
                 "edge (" + std::to_string(u) + "," + std::to_string(v) + ") maps to " +
                     bits_str(a) + " and " + bits_str(b));
  }

  if (spanning_required) {
    // With injectivity and every label in range, hitting all 2^dim labels
    // is equivalent to having exactly 2^dim vertices.
    bool count_ok = e.dim < 63 && t.m == (1LL << e.dim);
    if (!count_ok)
      report.add(CheckKind::NOT_SPANNING,
                 "tree order " + std::to_string(t.m) + " != 2^" + std::to_string(e.dim));
    else if (!(injective && in_range))
      report.add(CheckKind::NOT_SPANNING, "label set does not cover the hypercube");
  }
  return report;
}

CheckReport check_pattern(const Embedding& e, const AnchorConstraint& a) {
  CheckReport report;
  PatternReader r{e, report};

  auto distinct = [&](std::vector<Label> ls) {
    for (std::size_t i = 0; i < ls.size(); ++i)
      for (std::size_t j = i + 1; j < ls.size(); ++j)
        if (ls[i].bits == ls[j].bits) {
          report.add(CheckKind::PATTERN_MISMATCH,
                     "pattern roles collapse onto label " + bits_str(ls[i]));
          return false;
        }
    return true;
  };
  auto edge = [&](const Label& p, const Label& q, const std::string& what) {
    if (!hamming_one(p.bits, q.bits))
      report.add(CheckKind::PATTERN_MISMATCH,
                 what + ": " + bits_str(p) + " and " + bits_str(q) + " not adjacent");
  };
  auto non_edge = [&](const Label& p, const Label& q, const std::string& what) {
    if (hamming_one(p.bits, q.bits))
      report.add(CheckKind::PATTERN_MISMATCH,
                 what + ": " + bits_str(p) + " and " + bits_str(q) + " unexpectedly adjacent");
  };

  switch (a.required_pattern) {
    case AnchorPattern::P3_XYZ: {
      Label x = r.at(a.x, "x"), y = r.at(a.y, "y"), z = r.at(a.z, "z");
      if (!r.usable || !distinct({x, y, z})) break;
      edge(x, y, "path x-y");
      edge(y, z, "path y-z");
      non_edge(x, z, "path ends x,z");
      break;
    }
    case AnchorPattern::P3_YXZ: {
      Label x = r.at(a.x, "x"), y = r.at(a.y, "y"), z = r.at(a.z, "z");
      if (!r.usable || !distinct({x, y, z})) break;
      edge(y, x, "path y-x");
      edge(x, z, "path x-z");
      non_edge(y, z, "path ends y,z");
      break;
    }
    case AnchorPattern::CLAW_ALPHA_CENTER: {
      if (!a.alpha) {
        report.add(CheckKind::PATTERN_MISMATCH, "claw pattern lacks alpha");
        break;
      }
      Label c = r.at(*a.alpha, "alpha"), x = r.at(a.x, "x"), y = r.at(a.y, "y"),
            z = r.at(a.z, "z");
      if (!r.usable || !distinct({c, x, y, z})) break;
      edge(c, x, "claw center-x");
      edge(c, y, "claw center-y");
      edge(c, z, "claw center-z");
      break;
    }
    case AnchorPattern::C4_X_ALPHA_Y_Z: {
      if (!a.alpha) {
        report.add(CheckKind::PATTERN_MISMATCH, "four-cycle pattern lacks alpha");
        break;
      }
      Label x = r.at(a.x, "x"), c = r.at(*a.alpha, "alpha"), y = r.at(a.y, "y"),
            z = r.at(a.z, "z");
      if (!r.usable || !distinct({x, c, y, z})) break;
      edge(x, c, "cycle x-alpha");
      edge(c, y, "cycle alpha-y");
      edge(y, z, "cycle y-z");
      edge(z, x, "cycle z-x");
      break;
    }
  }
  return report;
}

namespace {

// Is there a path starting at `root` inside the component `comp` (a set of
// vertices) covering every vertex of degree >= 3 within the component?
// Degrees are taken inside comp.  This characterizes the legs of a
// 2-caterpillar: such a path serves as the leg's own backbone, and every
// piece hanging off it is then automatically a path attached at its end.
bool leg_ok(const std::vector<std::vector<int>>& adj, const std::vector<int>& comp,
            const std::vector<char>& in_comp, int root) {
  std::vector<int> deep;
  for (int v : comp) {
    int d = 0;
    for (int w : adj[static_cast<std::size_t>(v)])
      if (in_comp[static_cast<std::size_t>(w)]) ++d;
    if (d >= 3) deep.push_back(v);
  }
  if (deep.empty()) return true;

  auto bfs = [&](int src, std::vector<int>& dist) {
    for (int v : comp) dist[static_cast<std::size_t>(v)] = -1;
    std::vector<int> q{src};
    dist[static_cast<std::size_t>(src)] = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      int u = q[i];
      for (int w : adj[static_cast<std::size_t>(u)])
        if (in_comp[static_cast<std::size_t>(w)] && dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          q.push_back(w);
        }
    }
  };
  static thread_local std::vector<int> dist_a, dist_b;
  std::size_t need = adj.size();
  if (dist_a.size() < need) { dist_a.resize(need); dist_b.resize(need); }

  // Extremes of the deep set: farthest deep vertex from an arbitrary deep
  // vertex, then farthest deep vertex from that.
  bfs(deep[0], dist_a);
  int ea = deep[0];
  for (int v : deep)
    if (dist_a[static_cast<std::size_t>(v)] > dist_a[static_cast<std::size_t>(ea)]) ea = v;
  bfs(ea, dist_a);
  int eb = deep[0];
  for (int v : deep)
    if (dist_a[static_cast<std::size_t>(v)] > dist_a[static_cast<std::size_t>(eb)]) eb = v;
  bfs(eb, dist_b);

  int span = dist_a[static_cast<std::size_t>(eb)];
  for (int v : deep)
    if (dist_a[static_cast<std::size_t>(v)] + dist_b[static_cast<std::size_t>(v)] != span)
      return false;  // deep vertices do not lie on one path
  // The root's walk must enter the deep segment at one of its two extremes.
  int ra = dist_a[static_cast<std::size_t>(root)];  // dist(ea, root)
  int rb = dist_b[static_cast<std::size_t>(root)];  // dist(eb, root)
  return ra == rb + span || rb == ra + span;
}

}  // namespace

CheckReport check_pb_2cat(const Tree& t) {
  CheckReport report;
  auto adj = raw_adj(t);

  for (int v = 0; v < t.m; ++v)
    if (adj[static_cast<std::size_t>(v)].size() > 3) {
      report.add(CheckKind::NOT_2CAT,
                 "vertex " + std::to_string(v) + " has degree " +
                     std::to_string(adj[static_cast<std::size_t>(v)].size()));
      return report;
    }

  // Perfect matching by leaf stripping.
  {
    std::vector<int> deg(static_cast<std::size_t>(t.m));
    std::vector<char> gone(static_cast<std::size_t>(t.m), 0);
    std::vector<int> leaves;
    for (int v = 0; v < t.m; ++v) {
      deg[static_cast<std::size_t>(v)] = static_cast<int>(adj[static_cast<std::size_t>(v)].size());
      if (deg[static_cast<std::size_t>(v)] <= 1) leaves.push_back(v);
    }
    int matched = 0;
    bool good = true;
    while (!leaves.empty() && good) {
      int leaf = leaves.back();
      leaves.pop_back();
      if (gone[static_cast<std::size_t>(leaf)]) continue;
      int mate = -1;
      for (int w : adj[static_cast<std::size_t>(leaf)])
        if (!gone[static_cast<std::size_t>(w)]) mate = w;
      if (mate < 0) {
        good = false;  // isolated unmatched vertex
        break;
      }
      gone[static_cast<std::size_t>(leaf)] = gone[static_cast<std::size_t>(mate)] = 1;
      matched += 2;
      for (int w : adj[static_cast<std::size_t>(mate)])
        if (!gone[static_cast<std::size_t>(w)]) {
          if (--deg[static_cast<std::size_t>(w)] == 1) leaves.push_back(w);
        }
    }
    if (!good || matched != t.m)
      report.add(CheckKind::NOT_PERFECTLY_BALANCED, "leaf stripping leaves vertices unmatched");
  }

  // 2-caterpillar recognition: some leaf-to-leaf path works as a backbone.
  if (t.m > 2) {
    std::vector<int> leaf_list;
    for (int v = 0; v < t.m; ++v)
      if (adj[static_cast<std::size_t>(v)].size() == 1) leaf_list.push_back(v);

    std::vector<int> parent(static_cast<std::size_t>(t.m));
    std::vector<char> on_path(static_cast<std::size_t>(t.m));
    std::vector<char> in_comp(static_cast<std::size_t>(t.m));
    bool found = false;
    for (std::size_t ai = 0; ai < leaf_list.size() && !found; ++ai) {
      int a = leaf_list[ai];
      std::fill(parent.begin(), parent.end(), -2);
      parent[static_cast<std::size_t>(a)] = -1;
      std::vector<int> order{a};
      for (std::size_t i = 0; i < order.size(); ++i)
        for (int w : adj[static_cast<std::size_t>(order[i])])
          if (parent[static_cast<std::size_t>(w)] == -2) {
            parent[static_cast<std::size_t>(w)] = order[i];
            order.push_back(w);
          }
      for (std::size_t bi = ai + 1; bi < leaf_list.size() && !found; ++bi) {
        int b = leaf_list[bi];
        std::fill(on_path.begin(), on_path.end(), 0);
        std::vector<int> path;
        for (int v = b; v != -1; v = parent[static_cast<std::size_t>(v)]) {
          path.push_back(v);
          on_path[static_cast<std::size_t>(v)] = 1;
        }
        bool all_ok = true;
        for (std::size_t pi = 0; pi < path.size() && all_ok; ++pi) {
          int q = path[pi];
          std::vector<int> comp{q};
          bool any = false;
          for (int w : adj[static_cast<std::size_t>(q)])
            if (!on_path[static_cast<std::size_t>(w)]) {
              any = true;
              std::vector<int> st{w};
              in_comp[static_cast<std::size_t>(w)] = 1;
              comp.push_back(w);
              while (!st.empty()) {
                int u = st.back();
                st.pop_back();
                for (int x : adj[static_cast<std::size_t>(u)])
                  if (!on_path[static_cast<std::size_t>(x)] &&
                      !in_comp[static_cast<std::size_t>(x)]) {
                    in_comp[static_cast<std::size_t>(x)] = 1;
                    comp.push_back(x);
                    st.push_back(x);
                  }
              }
            }
          if (any) {
            in_comp[static_cast<std::size_t>(q)] = 1;
            all_ok = leg_ok(adj, comp, in_comp, q);
          }
          for (int v : comp) in_comp[static_cast<std::size_t>(v)] = 0;
        }
        if (all_ok) found = true;
      }
    }
    if (!found)
      report.add(CheckKind::NOT_2CAT, "no leaf-to-leaf backbone admits path-coverable legs");
  }
  return report;
}

}  // namespace pbcat
