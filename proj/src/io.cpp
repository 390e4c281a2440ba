#include "pbcat/io.hpp"

#include <sstream>

#include "json.hpp"

namespace pbcat {

using nlohmann::json;

std::string embedding_to_json(const Embedding& e) {
  json labels = json::object();
  for (std::size_t v = 0; v < e.labels.size(); ++v)
    labels[std::to_string(v)] = e.labels[v].to_string();
  json doc = {{"dim", e.dim}, {"labels", std::move(labels)}};
  return doc.dump(2) + "\n";
}

Embedding embedding_from_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    fail_invalid("embedding document is not a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer())
    fail_invalid("embedding document lacks an integer dim");
  if (!doc.contains("labels") || !doc["labels"].is_object())
    fail_invalid("embedding document lacks a labels object");

  Embedding e;
  e.dim = doc["dim"].get<int>();
  if (e.dim < 1 || e.dim > 64) fail_invalid("embedding dim outside 1..64");

  const auto& labels = doc["labels"];
  e.labels.assign(labels.size(), Label(0, e.dim));
  std::vector<char> seen(labels.size(), 0);
  for (const auto& [key, value] : labels.items()) {
    std::size_t pos = 0;
    int v = -1;
    try {
      v = std::stoi(key, &pos);
    } catch (const std::exception&) {
      fail_invalid("label key '" + key + "' is not a vertex id");
    }
    if (pos != key.size() || v < 0 || v >= static_cast<int>(labels.size()))
      fail_invalid("label key '" + key + "' is not a vertex id in range");
    if (seen[static_cast<std::size_t>(v)])
      fail_invalid("duplicate label for vertex " + key);
    seen[static_cast<std::size_t>(v)] = 1;
    if (!value.is_string())
      fail_invalid("label for vertex " + key + " is not a string");
    Label l = Label::parse(value.get<std::string>());
    if (l.dim != e.dim)
      fail_invalid("label for vertex " + key + " has width " +
                   std::to_string(l.dim) + ", expected " + std::to_string(e.dim));
    e.labels[static_cast<std::size_t>(v)] = l;
  }
  return e;
}

namespace {

json trace_to_json(const CaseTrace& t) {
  json children = json::array();
  for (const auto& c : t.children) children.push_back(trace_to_json(c));
  return json{{"n", t.n},
              {"case_id", t.case_id},
              {"fallback_used", t.fallback_used},
              {"children", std::move(children)}};
}

}  // namespace

std::string case_trace_to_json(const CaseTrace& t) {
  return trace_to_json(t).dump(2) + "\n";
}

std::string check_report_to_json(const CheckReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"kind", check_kind_name(v.kind)}, {"witness", v.witness}});
  json doc = {{"ok", r.ok}, {"violations", std::move(violations)}};
  return doc.dump(2) + "\n";
}

std::string to_dot(const Tree& t, const std::optional<Embedding>& e) {
  std::ostringstream out;
  out << "graph tree {\n";
  for (int v = 0; v < t.m; ++v) {
    out << "  " << v << " [label=\"";
    if (e)
      out << e->label_of(v).to_string();
    else
      out << v;
    out << "\"];\n";
  }
  for (auto [u, v] : t.edges) out << "  " << u << " -- " << v << ";\n";
  out << "}\n";
  return out.str();
}

std::string tree_archive_to_string(const std::vector<Tree>& trees) {
  std::ostringstream out;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (i) out << "\n";
    out << serialize_tree(trees[i]);
  }
  return out.str();
}

std::vector<Tree> tree_archive_from_string(const std::string& text) {
  std::vector<Tree> trees;
  std::istringstream in(text);
  std::string line, chunk;
  auto flush = [&]() {
    if (chunk.find_first_not_of(" \t\r\n") == std::string::npos) {
      chunk.clear();
      return;
    }
    trees.push_back(parse_tree(chunk));
    chunk.clear();
  };
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      flush();
    else
      chunk += line + "\n";
  }
  flush();
  return trees;
}

}  // namespace pbcat
