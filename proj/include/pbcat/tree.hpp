// Tree primitives: parsing of the edge-list format, perfect matchings via
// leaf stripping, paths between vertices, and splitting a tree at an edge
// with translation tables between old and new vertex ids.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pbcat/error.hpp"

namespace pbcat {

using Edge = std::pair<int, int>;

struct Tree {
  int m = 0;                          // vertex count; vertices are 0..m-1
  std::vector<Edge> edges;            // exactly m-1 edges
  std::vector<std::vector<int>> adj;  // adjacency lists, ascending
  std::vector<std::vector<int>> adj_edge;  // adj_edge[v][i] = edge id of (v, adj[v][i])

  Tree() = default;
  Tree(int vertex_count, std::vector<Edge> edge_list);

  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  bool has_edge(int u, int v) const;
  bool valid_vertex(int v) const { return v >= 0 && v < m; }
};

// A perfect matching; mate[v] is v's partner.
struct Matching {
  std::vector<Edge> pairs;
  std::vector<int> mate;

  bool covers(int u, int v) const {
    return u >= 0 && u < static_cast<int>(mate.size()) && mate[u] == v;
  }
};

struct SplitResult {
  Tree first;                // component containing the split edge's first endpoint
  Tree second;               // component containing the second endpoint
  std::vector<int> to_first;   // host id -> id in first, -1 if absent
  std::vector<int> to_second;  // host id -> id in second, -1 if absent
  std::vector<int> from_first;   // id in first -> host id
  std::vector<int> from_second;  // id in second -> host id
};

// Parses the edge-list format: optional '#' comment lines, then a line with
// the vertex count m, then exactly m-1 lines "u v".
Tree parse_tree(const std::string& document);

// Serializes back to the edge-list format (one '#' comment optional).
std::string serialize_tree(const Tree& t, const std::string& comment = "");

// Unique perfect matching of a tree, or nullopt when none exists.
std::optional<Matching> perfect_matching(const Tree& t);

// Vertex sequence from u to v inclusive.
std::vector<int> path_between(const Tree& t, int u, int v);

// Removes edge e and returns both components with translation tables.
// Refuses to split on a matching edge when a matching is supplied, because
// the two sides could never both stay perfectly balanced.
SplitResult split_on_edge(const Tree& t, Edge e, const Matching* m = nullptr);

// Induced subtree on the given vertex subset (must be connected).
// Optional extra edges (within the subset) are added after induction.
Tree induced_subtree(const Tree& t, const std::vector<int>& vertices,
                     std::vector<int>* from_new = nullptr,
                     std::vector<int>* to_new = nullptr,
                     const std::vector<Edge>* extra_edges = nullptr);

}  // namespace pbcat
