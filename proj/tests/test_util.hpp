#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "pbcat/tree.hpp"

inline std::string fixture_path(const std::string& name) {
  return std::string(PBCAT_FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline pbcat::Tree load_fixture(const std::string& name) {
  return pbcat::parse_tree(slurp(fixture_path(name)));
}

inline pbcat::Tree make_path(int m) {
  std::vector<pbcat::Edge> edges;
  for (int i = 0; i + 1 < m; ++i) edges.push_back({i, i + 1});
  return pbcat::Tree(m, edges);
}
