// JSON documents for embeddings, recursion traces and check reports, DOT
// export, and multi-tree archives for enumeration output.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pbcat/embedding.hpp"
#include "pbcat/tree.hpp"
#include "pbcat/verify.hpp"

namespace pbcat {

// {"dim": n, "labels": {"<vertex-id>": "<n-bit MSB-first binary>"}}
std::string embedding_to_json(const Embedding& e);
Embedding embedding_from_json(const std::string& text);

// {"n": ..., "case_id": "...", "fallback_used": ..., "children": [...]}
std::string case_trace_to_json(const CaseTrace& t);

// {"ok": ..., "violations": [{"kind": "...", "witness": "..."}]}
std::string check_report_to_json(const CheckReport& r);

// Undirected DOT document; every node carries a label attribute, the
// hypercube bit string when an embedding is supplied and the vertex id
// otherwise.
std::string to_dot(const Tree& t,
                   const std::optional<Embedding>& e = std::nullopt);

// Concatenation of edge-list documents separated by blank lines.
std::string tree_archive_to_string(const std::vector<Tree>& trees);
std::vector<Tree> tree_archive_from_string(const std::string& text);

}  // namespace pbcat
