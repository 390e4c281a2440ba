#include "pbcat/tree.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace pbcat {

Tree::Tree(int vertex_count, std::vector<Edge> edge_list)
    : m(vertex_count), edges(std::move(edge_list)) {
  if (m <= 0) fail_invalid("tree must have at least one vertex");
  if (static_cast<int>(edges.size()) != m - 1)
    fail_invalid("tree on " + std::to_string(m) + " vertices needs " +
                 std::to_string(m - 1) + " edges, got " +
                 std::to_string(edges.size()));
  std::vector<std::vector<std::pair<int, int>>> with_ids(m);
  for (size_t k = 0; k < edges.size(); ++k) {
    auto [u, v] = edges[k];
    if (u < 0 || u >= m || v < 0 || v >= m)
      fail_invalid("edge endpoint out of range: " + std::to_string(u) + " " +
                   std::to_string(v));
    if (u == v) fail_invalid("self-loop at vertex " + std::to_string(u));
    with_ids[u].emplace_back(v, static_cast<int>(k));
    with_ids[v].emplace_back(u, static_cast<int>(k));
  }
  adj.assign(m, {});
  adj_edge.assign(m, {});
  for (int v = 0; v < m; ++v) {
    std::sort(with_ids[v].begin(), with_ids[v].end());
    for (auto& [w, id] : with_ids[v]) {
      adj[v].push_back(w);
      adj_edge[v].push_back(id);
    }
    auto& list = adj[v];
    if (std::adjacent_find(list.begin(), list.end()) != list.end())
      fail_invalid("duplicate edge at vertex " + std::to_string(v));
  }
  // Connectivity: m-1 edges + no duplicate + all reachable => tree.
  std::vector<char> seen(m, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        queue.push_back(w);
      }
  }
  if (reached != m) fail_invalid("edge list is not connected");
}

bool Tree::has_edge(int u, int v) const {
  if (!valid_vertex(u) || !valid_vertex(v)) return false;
  return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

Tree parse_tree(const std::string& document) {
  std::istringstream in(document);
  std::string line;
  int m = -1;
  std::vector<Edge> edges;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream fields(line);
    if (m < 0) {
      if (!(fields >> m) || m <= 0)
        fail_invalid("line " + std::to_string(line_no) +
                     ": expected positive vertex count");
      std::string rest;
      if (fields >> rest)
        fail_invalid("line " + std::to_string(line_no) +
                     ": trailing content after vertex count");
      continue;
    }
    int u, v;
    if (!(fields >> u >> v))
      fail_invalid("line " + std::to_string(line_no) +
                   ": expected edge 'u v'");
    std::string rest;
    if (fields >> rest)
      fail_invalid("line " + std::to_string(line_no) +
                   ": trailing content after edge");
    edges.emplace_back(u, v);
  }
  if (m < 0) fail_invalid("document contains no vertex count");
  return Tree(m, std::move(edges));
}

std::string serialize_tree(const Tree& t, const std::string& comment) {
  std::ostringstream out;
  if (!comment.empty()) {
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << "\n";
  }
  out << t.m << "\n";
  for (auto& [u, v] : t.edges) out << u << " " << v << "\n";
  return out.str();
}

std::optional<Matching> perfect_matching(const Tree& t) {
  if (t.m % 2 != 0) return std::nullopt;
  // Leaf stripping: every leaf must be matched to its support; remove the
  // pair and repeat.  A tree has at most one perfect matching.
  std::vector<int> degree(t.m);
  std::vector<char> removed(t.m, 0);
  std::deque<int> leaves;
  for (int v = 0; v < t.m; ++v) {
    degree[v] = t.degree(v);
    if (degree[v] == 1) leaves.push_back(v);
  }
  if (t.m == 1) return std::nullopt;
  Matching result;
  result.mate.assign(t.m, -1);
  int matched = 0;
  while (!leaves.empty()) {
    int leaf = leaves.front();
    leaves.pop_front();
    if (removed[leaf]) continue;
    int support = -1;
    for (int w : t.adj[leaf])
      if (!removed[w]) {
        support = w;
        break;
      }
    if (support < 0) return std::nullopt;  // leaf's support already taken
    removed[leaf] = removed[support] = 1;
    result.mate[leaf] = support;
    result.mate[support] = leaf;
    result.pairs.emplace_back(std::min(leaf, support), std::max(leaf, support));
    matched += 2;
    for (int w : t.adj[support])
      if (!removed[w] && --degree[w] == 1) leaves.push_back(w);
  }
  if (matched != t.m) return std::nullopt;
  std::sort(result.pairs.begin(), result.pairs.end());
  return result;
}

std::vector<int> path_between(const Tree& t, int u, int v) {
  if (!t.valid_vertex(u) || !t.valid_vertex(v))
    fail_invalid("path endpoint out of range");
  std::vector<int> parent(t.m, -2);
  std::deque<int> queue{u};
  parent[u] = -1;
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    if (w == v) break;
    for (int x : t.adj[w])
      if (parent[x] == -2) {
        parent[x] = w;
        queue.push_back(x);
      }
  }
  std::vector<int> path;
  for (int w = v; w != -1; w = parent[w]) path.push_back(w);
  std::reverse(path.begin(), path.end());
  return path;
}

Tree induced_subtree(const Tree& t, const std::vector<int>& vertices,
                     std::vector<int>* from_new, std::vector<int>* to_new,
                     const std::vector<Edge>* extra_edges) {
  std::vector<int> to_sub(t.m, -1);
  for (size_t i = 0; i < vertices.size(); ++i) {
    int v = vertices[i];
    if (!t.valid_vertex(v)) fail_invalid("subset vertex out of range");
    if (to_sub[v] != -1) fail_invalid("duplicate vertex in subset");
    to_sub[v] = static_cast<int>(i);
  }
  std::vector<Edge> sub_edges;
  for (auto& [u, v] : t.edges)
    if (to_sub[u] != -1 && to_sub[v] != -1)
      sub_edges.emplace_back(to_sub[u], to_sub[v]);
  if (extra_edges)
    for (auto& [u, v] : *extra_edges) {
      if (to_sub[u] == -1 || to_sub[v] == -1)
        fail_invalid("extra edge endpoint outside subset");
      sub_edges.emplace_back(to_sub[u], to_sub[v]);
    }
  Tree sub(static_cast<int>(vertices.size()), std::move(sub_edges));
  if (from_new) *from_new = vertices;
  if (to_new) *to_new = std::move(to_sub);
  return sub;
}

SplitResult split_on_edge(const Tree& t, Edge e, const Matching* m) {
  auto [a, b] = e;
  if (!t.has_edge(a, b))
    fail_invalid("split edge (" + std::to_string(a) + "," + std::to_string(b) +
                 ") not in tree");
  if (m && m->covers(a, b))
    fail_invalid("refusing to split on a matching edge: the parts cannot both "
                 "stay perfectly balanced");
  // Collect the component containing a with the edge removed.
  std::vector<char> in_first(t.m, 0);
  std::deque<int> queue{a};
  in_first[a] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : t.adj[v]) {
      if (v == a && w == b) continue;
      if (v == b && w == a) continue;
      if (!in_first[w]) {
        in_first[w] = 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<int> first_vertices, second_vertices;
  for (int v = 0; v < t.m; ++v)
    (in_first[v] ? first_vertices : second_vertices).push_back(v);
  SplitResult result;
  result.first = induced_subtree(t, first_vertices, &result.from_first,
                                 &result.to_first);
  result.second = induced_subtree(t, second_vertices, &result.from_second,
                                  &result.to_second);
  return result;
}

}  // namespace pbcat
