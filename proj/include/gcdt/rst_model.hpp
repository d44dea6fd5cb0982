// Relation taxonomy and the RST constituent-tree model with structural checks.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcdt/diag.hpp"

namespace gcdt {

enum class Arity { nucleus_satellite, multinuclear, same_unit };

const char* arity_name(Arity a);

struct RelationLabel {
  std::string name;
  Arity arity = Arity::nucleus_satellite;
  std::string definition;      // one-line gloss
  std::string manual_section;  // e.g. "2.1.5"
};

// The closed inventory: 25 nucleus-satellite, 6 multinuclear, same-unit.
const std::vector<RelationLabel>& relation_inventory();
const RelationLabel* find_relation(const std::string& name);

enum class Role { nucleus, satellite };

struct EduRef {
  std::string text;
  // Sentence index range of the EDU within the source document; -1 = unknown.
  // begin != end marks an EDU crossing a sentence boundary (structural error).
  int sentence_begin = -1;
  int sentence_end = -1;
};

struct RstNode;
using RstNodePtr = std::unique_ptr<RstNode>;

struct ChildEdge {
  RstNodePtr child;
  Role role = Role::nucleus;
  // Relation name; empty for the lone nucleus under a nucleus-satellite node.
  std::string relation;
};

enum class NodeKind { leaf, span, multinuc };

struct RstNode {
  std::string id;        // informational; ignored by equality and canonical output
  NodeKind kind = NodeKind::leaf;
  int edu_index = 0;     // leaf only, 1-based
  std::vector<ChildEdge> children;  // internal only, ordered by span
};

struct RstTree {
  RstNodePtr root;
  std::vector<EduRef> edus;  // document order, 1-based indexing in spans
  // Relation name the root element carried in the source, if any. A
  // nucleus-satellite relation here means the tree hangs off a satellite.
  std::string root_attach;
};

// (first_edu, last_edu), 1-based inclusive. A leaf spans a single index.
std::pair<int, int> node_span(const RstNode& node);

// Structural well-formedness. Empty result iff all invariants hold.
// Codes: E-SPAN-GAP, E-SPAN-OVERLAP, E-ORPHAN, E-MULTINUC-ARITY,
// E-MULTINUC-MIXED, E-NS-SHAPE, E-UNKNOWN-REL, E-ROOT-SAT, E-EDU-XSENT.
std::vector<Diagnostic> validate_structure(const RstTree& tree);

// Deep structural equality ignoring node ids.
bool trees_equal(const RstTree& a, const RstTree& b);

RstTree clone_tree(const RstTree& t);
RstNodePtr clone_node(const RstNode& n);

// Convenience constructors used by tests and tools.
RstNodePtr make_leaf(int edu_index, std::string id = "");
RstNodePtr make_span(RstNodePtr nucleus, std::vector<std::pair<RstNodePtr, std::string>> satellites,
                     std::string id = "");
RstNodePtr make_multinuc(const std::string& relation, std::vector<RstNodePtr> members,
                         std::string id = "");

}  // namespace gcdt
