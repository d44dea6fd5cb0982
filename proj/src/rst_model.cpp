#include "gcdt/rst_model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace gcdt {

const char* severity_name(Severity s) {
  switch (s) {
    case Severity::error: return "error";
    case Severity::warning: return "warning";
    case Severity::advisory: return "advisory";
  }
  return "?";
}

const char* arity_name(Arity a) {
  switch (a) {
    case Arity::nucleus_satellite: return "nucleus-satellite";
    case Arity::multinuclear: return "multinuclear";
    case Arity::same_unit: return "same-unit";
  }
  return "?";
}

const std::vector<RelationLabel>& relation_inventory() {
  static const std::vector<RelationLabel> kInventory = {
      {"adversative-antithesis", Arity::nucleus_satellite,
       "the Reader finds the Nucleus more credible than the Satellite", "2.1.1"},
      {"adversative-concession", Arity::nucleus_satellite,
       "the Writer admits the Satellite but still claims the Nucleus", "2.1.2"},
      {"attribution-negative", Arity::nucleus_satellite,
       "the Satellite negates the source of information to the Nucleus", "2.1.3"},
      {"attribution-positive", Arity::nucleus_satellite,
       "the Satellite provides a positive source of information to the Nucleus", "2.1.4"},
      {"causal-cause", Arity::nucleus_satellite, "the Satellite causes the Nucleus", "2.1.5"},
      {"causal-result", Arity::nucleus_satellite,
       "the Satellite results from the Nucleus", "2.1.6"},
      {"context-background", Arity::nucleus_satellite,
       "the Reader needs to know the Satellite to understand the Nucleus", "2.1.7"},
      {"context-circumstance", Arity::nucleus_satellite,
       "the Satellite gives circumstances such as time or place of the Nucleus", "2.1.8"},
      {"contingency-condition", Arity::nucleus_satellite,
       "the Satellite is a condition for the Nucleus to happen", "2.1.9"},
      {"elaboration-additional", Arity::nucleus_satellite,
       "the Satellite provides more information about the Nucleus", "2.1.10"},
      {"elaboration-attribute", Arity::nucleus_satellite,
       "the Satellite provides more information about some phrase in the Nucleus", "2.1.11"},
      {"evaluation-comment", Arity::nucleus_satellite,
       "the Satellite gives an opinion about the Nucleus", "2.1.12"},
      {"explanation-evidence", Arity::nucleus_satellite,
       "the Satellite gives evidence that the Nucleus is true", "2.1.13"},
      {"explanation-justify", Arity::nucleus_satellite,
       "the Satellite justifies why the Writer can say the Nucleus", "2.1.14"},
      {"explanation-motivation", Arity::nucleus_satellite,
       "the Satellite motivates the Reader to do the Nucleus", "2.1.15"},
      {"mode-manner", Arity::nucleus_satellite,
       "the Satellite gives the manner of how the Nucleus happened", "2.1.16"},
      {"mode-means", Arity::nucleus_satellite,
       "the Satellite indicates means by which the Nucleus happened", "2.1.17"},
      {"organization-heading", Arity::nucleus_satellite,
       "the Satellite is graphically arranged to prepare for the Nucleus", "2.1.18"},
      {"organization-phatic", Arity::nucleus_satellite,
       "the Satellite holds the floor for the Nucleus with no semantic value", "2.1.19"},
      {"organization-preparation", Arity::nucleus_satellite,
       "the Satellite prepares the Reader for the Nucleus", "2.1.20"},
      {"purpose-attribute", Arity::nucleus_satellite,
       "only a part of the Nucleus occurs in order for the Satellite to happen", "2.1.21"},
      {"purpose-goal", Arity::nucleus_satellite,
       "the Nucleus occurs in order for the Satellite to happen", "2.1.22"},
      {"restatement-partial", Arity::nucleus_satellite,
       "the Satellite reiterates part of the Nucleus", "2.1.23"},
      {"topic-question", Arity::nucleus_satellite,
       "the Satellite requests the information in the Nucleus", "2.1.24"},
      {"topic-solutionhood", Arity::nucleus_satellite,
       "the Nucleus is the answer to a problem in the Satellite", "2.1.25"},
      {"adversative-contrast", Arity::multinuclear,
       "the Writer presents similar units with contrast", "2.2.1"},
      {"joint-disjunction", Arity::multinuclear,
       "the Writer presents a set of alternatives", "2.2.2"},
      {"joint-list", Arity::multinuclear,
       "the Writer presents coordinated and similar units", "2.2.3"},
      {"joint-sequence", Arity::multinuclear,
       "the Writer presents units of chronological sequence", "2.2.4"},
      {"joint-other", Arity::multinuclear,
       "the Writer presents unlike units with no other relation", "2.2.5"},
      {"restatement-repetition", Arity::multinuclear,
       "the Writer presents equivalent or redundant units", "2.2.6"},
      {"same-unit", Arity::same_unit, "technical device for interrupted units", "2.3"},
  };
  return kInventory;
}

const RelationLabel* find_relation(const std::string& name) {
  static const std::map<std::string, const RelationLabel*> kByName = [] {
    std::map<std::string, const RelationLabel*> m;
    for (const auto& r : relation_inventory()) m.emplace(r.name, &r);
    return m;
  }();
  auto it = kByName.find(name);
  return it == kByName.end() ? nullptr : it->second;
}

std::pair<int, int> node_span(const RstNode& node) {
  if (node.kind == NodeKind::leaf) return {node.edu_index, node.edu_index};
  int first = 0, last = 0;
  for (const auto& e : node.children) {
    auto [f, l] = node_span(*e.child);
    if (first == 0 || f < first) first = f;
    if (l > last) last = l;
  }
  return {first, last};
}

namespace {

std::string span_str(const RstNode& n) {
  auto [f, l] = node_span(n);
  std::ostringstream os;
  os << "(" << f << "," << l << ")";
  return os.str();
}

struct Validator {
  const RstTree& tree;
  std::vector<Diagnostic> out;
  std::vector<int> leaf_count;       // per EDU index
  std::vector<bool> gap_reported;    // EDUs already covered by a gap finding

  explicit Validator(const RstTree& t)
      : tree(t), leaf_count(t.edus.size() + 1, 0), gap_reported(t.edus.size() + 1, false) {}

  void add(const char* code, const std::string& locus, const std::string& msg,
           const char* section) {
    out.push_back({code, Severity::error, locus, msg, section});
  }

  void walk(const RstNode& n) {
    if (n.kind == NodeKind::leaf) {
      if (n.edu_index >= 1 && n.edu_index < static_cast<int>(leaf_count.size()))
        ++leaf_count[n.edu_index];
      else
        add("E-ORPHAN", n.id, "leaf references EDU " + std::to_string(n.edu_index) +
                                  " outside the EDU list", "2");
      if (n.edu_index >= 1 && n.edu_index <= static_cast<int>(tree.edus.size())) {
        const auto& e = tree.edus[n.edu_index - 1];
        if (e.sentence_begin >= 0 && e.sentence_end >= 0 && e.sentence_begin != e.sentence_end)
          add("E-EDU-XSENT", n.id,
              "EDU " + std::to_string(n.edu_index) + " crosses a sentence boundary", "1");
      }
      return;
    }

    // Child ordering and adjacency.
    std::vector<std::pair<int, int>> spans;
    for (const auto& e : n.children) spans.push_back(node_span(*e.child));
    auto sorted = spans;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
      const auto& a = sorted[i];
      const auto& b = sorted[i + 1];
      if (b.first <= a.second) {
        add("E-SPAN-OVERLAP", n.id,
            "children " + span_str(n) + " overlap at EDU " + std::to_string(b.first), "2");
      } else if (b.first != a.second + 1) {
        add("E-SPAN-GAP", n.id,
            "gap between child spans (" + std::to_string(a.second) + "," +
                std::to_string(b.first) + ") under node spanning " + span_str(n),
            "2");
        for (int e = a.second + 1; e < b.first; ++e)
          if (e >= 1 && e < static_cast<int>(gap_reported.size())) gap_reported[e] = true;
      }
    }

    if (n.kind == NodeKind::multinuc) {
      if (n.children.size() < 2)
        add("E-MULTINUC-ARITY", n.id, "multinuclear node with fewer than two members",
            "2.2");
      std::string rel;
      bool mixed = false;
      for (const auto& e : n.children) {
        if (e.role != Role::nucleus)
          add("E-MULTINUC-MIXED", n.id, "multinuclear member with satellite role", "2.2");
        if (rel.empty())
          rel = e.relation;
        else if (e.relation != rel)
          mixed = true;
      }
      if (mixed)
        add("E-MULTINUC-MIXED", n.id, "members carry different relations under one node",
            "2.2");
      if (!rel.empty()) {
        const RelationLabel* label = find_relation(rel);
        if (!label)
          add("E-UNKNOWN-REL", n.id, "unknown relation '" + rel + "'", "2");
        else if (label->arity == Arity::nucleus_satellite)
          add("E-MULTINUC-MIXED", n.id,
              "nucleus-satellite relation '" + rel + "' on multinuclear members", "2.2");
      }
    } else {  // span node
      int nuclei = 0, satellites = 0;
      for (const auto& e : n.children) {
        if (e.role == Role::nucleus) {
          ++nuclei;
          if (!e.relation.empty() && e.relation != "span")
            add("E-NS-SHAPE", n.id, "nucleus child carries relation '" + e.relation + "'",
                "2.1");
        } else {
          ++satellites;
          if (e.relation.empty()) {
            add("E-NS-SHAPE", n.id, "satellite child without a relation", "2.1");
          } else {
            const RelationLabel* label = find_relation(e.relation);
            if (!label)
              add("E-UNKNOWN-REL", n.id, "unknown relation '" + e.relation + "'", "2");
            else if (label->arity != Arity::nucleus_satellite)
              add("E-NS-SHAPE", n.id,
                  "satellite labeled with non nucleus-satellite relation '" + e.relation + "'",
                  "2.1");
          }
        }
      }
      if (nuclei != 1 || satellites == 0)
        add("E-NS-SHAPE", n.id,
            "span node needs exactly one nucleus and at least one satellite (has " +
                std::to_string(nuclei) + "+" + std::to_string(satellites) + ")",
            "2.1");
    }

    for (const auto& e : n.children) walk(*e.child);
  }
};

}  // namespace

std::vector<Diagnostic> validate_structure(const RstTree& tree) {
  Validator v(tree);
  if (!tree.root_attach.empty() && tree.root_attach != "span") {
    const RelationLabel* label = find_relation(tree.root_attach);
    if (label && label->arity == Arity::nucleus_satellite)
      v.add("E-ROOT-SAT", tree.root ? tree.root->id : "",
            "root attaches as a satellite ('" + tree.root_attach + "')", "2");
    else if (!label)
      v.add("E-UNKNOWN-REL", tree.root ? tree.root->id : "",
            "unknown relation '" + tree.root_attach + "' on root", "2");
  }
  if (!tree.root) {
    if (!tree.edus.empty())
      v.add("E-ORPHAN", "", "tree has EDUs but no root", "2");
    return std::move(v.out);
  }
  v.walk(*tree.root);

  auto [rf, rl] = node_span(*tree.root);
  for (int e = 1; e <= static_cast<int>(tree.edus.size()); ++e) {
    if (v.leaf_count[e] == 0 && !v.gap_reported[e] && (e < rf || e > rl))
      v.add("E-ORPHAN", "", "EDU " + std::to_string(e) + " not covered by the root span", "2");
    else if (v.leaf_count[e] == 0 && !v.gap_reported[e])
      v.add("E-ORPHAN", "", "EDU " + std::to_string(e) + " appears in no leaf", "2");
  }

  // Stable order: by code then locus then message.
  std::sort(v.out.begin(), v.out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.code, a.locus, a.message) < std::tie(b.code, b.locus, b.message);
  });
  v.out.erase(std::unique(v.out.begin(), v.out.end()), v.out.end());
  return std::move(v.out);
}

namespace {
bool nodes_equal(const RstNode& a, const RstNode& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == NodeKind::leaf) return a.edu_index == b.edu_index;
  if (a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); ++i) {
    const auto& x = a.children[i];
    const auto& y = b.children[i];
    if (x.role != y.role || x.relation != y.relation) return false;
    if (!nodes_equal(*x.child, *y.child)) return false;
  }
  return true;
}
}  // namespace

bool trees_equal(const RstTree& a, const RstTree& b) {
  if (a.edus.size() != b.edus.size()) return false;
  for (size_t i = 0; i < a.edus.size(); ++i)
    if (a.edus[i].text != b.edus[i].text) return false;
  if (static_cast<bool>(a.root) != static_cast<bool>(b.root)) return false;
  if (!a.root) return true;
  return nodes_equal(*a.root, *b.root);
}

RstNodePtr clone_node(const RstNode& n) {
  auto out = std::make_unique<RstNode>();
  out->id = n.id;
  out->kind = n.kind;
  out->edu_index = n.edu_index;
  for (const auto& e : n.children)
    out->children.push_back({clone_node(*e.child), e.role, e.relation});
  return out;
}

RstTree clone_tree(const RstTree& t) {
  RstTree out;
  out.edus = t.edus;
  out.root_attach = t.root_attach;
  if (t.root) out.root = clone_node(*t.root);
  return out;
}

RstNodePtr make_leaf(int edu_index, std::string id) {
  auto n = std::make_unique<RstNode>();
  n->kind = NodeKind::leaf;
  n->edu_index = edu_index;
  n->id = std::move(id);
  return n;
}

RstNodePtr make_span(RstNodePtr nucleus,
                     std::vector<std::pair<RstNodePtr, std::string>> satellites, std::string id) {
  auto n = std::make_unique<RstNode>();
  n->kind = NodeKind::span;
  n->id = std::move(id);
  n->children.push_back({std::move(nucleus), Role::nucleus, ""});
  for (auto& [sat, rel] : satellites)
    n->children.push_back({std::move(sat), Role::satellite, rel});
  std::sort(n->children.begin(), n->children.end(), [](const ChildEdge& a, const ChildEdge& b) {
    return node_span(*a.child) < node_span(*b.child);
  });
  return n;
}

RstNodePtr make_multinuc(const std::string& relation, std::vector<RstNodePtr> members,
                         std::string id) {
  auto n = std::make_unique<RstNode>();
  n->kind = NodeKind::multinuc;
  n->id = std::move(id);
  for (auto& m : members) n->children.push_back({std::move(m), Role::nucleus, relation});
  std::sort(n->children.begin(), n->children.end(), [](const ChildEdge& a, const ChildEdge& b) {
    return node_span(*a.child) < node_span(*b.child);
  });
  return n;
}

}  // namespace gcdt
