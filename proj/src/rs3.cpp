#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "gcdt/corpus_io.hpp"
#include "unicode.hpp"

namespace gcdt {

namespace {

struct Rs3Element {
  std::string id;
  bool is_group = false;
  std::string group_type;  // span | multinuc
  std::string parent;      // empty = root candidate
  std::string relname;
  std::string text;        // segments only
};

std::string trim_ws(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct Rs3File {
  std::map<std::string, std::string> declared;  // relname -> rst|multinuc
  std::vector<Rs3Element> elements;             // document order
  std::map<std::string, size_t> by_id;
};

Rs3File read_rs3(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(ParseError::Kind::xml_error, std::string("rs3: ") + e.what(),
                     static_cast<int>(e.line()));
  }

  Rs3File file;
  auto root = tree.get_child_optional("rst");
  if (!root) throw ParseError(ParseError::Kind::xml_error, "rs3: missing <rst> root");

  if (auto rels = root->get_child_optional("header.relations")) {
    for (const auto& [name, node] : *rels) {
      if (name != "rel") continue;
      auto rel_name = node.get<std::string>("<xmlattr>.name", "");
      auto rel_type = node.get<std::string>("<xmlattr>.type", "rst");
      file.declared[rel_name] = rel_type;
    }
  }

  auto body = root->get_child_optional("body");
  if (!body) throw ParseError(ParseError::Kind::xml_error, "rs3: missing <body>");

  for (const auto& [name, node] : *body) {
    if (name != "segment" && name != "group") continue;
    Rs3Element el;
    el.id = node.get<std::string>("<xmlattr>.id", "");
    el.parent = node.get<std::string>("<xmlattr>.parent", "");
    el.relname = node.get<std::string>("<xmlattr>.relname", "");
    el.is_group = name == "group";
    if (el.is_group)
      el.group_type = node.get<std::string>("<xmlattr>.type", "span");
    else
      el.text = trim_ws(node.get_value<std::string>());
    if (el.id.empty()) throw ParseError(ParseError::Kind::xml_error, "rs3: element without id");
    if (file.by_id.count(el.id))
      throw ParseError(ParseError::Kind::xml_error, "rs3: duplicate id " + el.id);
    file.by_id[el.id] = file.elements.size();
    file.elements.push_back(std::move(el));
  }
  return file;
}

class TreeBuilder {
 public:
  explicit TreeBuilder(const Rs3File& f) : file_(f) {}

  std::map<std::string, int> edu_index;  // segment id -> 1-based

  void classify() {
    for (const auto& el : file_.elements) {
      if (el.parent.empty()) continue;
      auto pit = file_.by_id.find(el.parent);
      if (pit == file_.by_id.end())
        throw ParseError(ParseError::Kind::dangling_parent,
                         "rs3: parent '" + el.parent + "' of '" + el.id + "' does not exist", 0,
                         el.id);
      const Rs3Element& parent = file_.elements[pit->second];

      if (el.relname == "span") {
        if (!parent.is_group || parent.group_type != "span")
          throw ParseError(ParseError::Kind::xml_error,
                           "rs3: 'span' attachment to non-span parent " + parent.id);
        if (span_child_.count(parent.id))
          throw ParseError(ParseError::Kind::xml_error,
                           "rs3: span group " + parent.id + " has two span children");
        span_child_[parent.id] = &el;
        continue;
      }
      if (el.relname.empty())
        throw ParseError(ParseError::Kind::xml_error,
                         "rs3: element " + el.id + " has a parent but no relname");

      if (!file_.declared.count(el.relname) && !find_relation(el.relname))
        throw ParseError(ParseError::Kind::unknown_relation,
                         "rs3: relation '" + el.relname + "' not declared", 0, el.relname);
      if (!find_relation(el.relname))
        throw ParseError(ParseError::Kind::unknown_relation,
                         "rs3: relation '" + el.relname + "' is not in the taxonomy", 0,
                         el.relname);

      if (parent.is_group && parent.group_type == "multinuc" && is_multinuc_rel(el.relname))
        members_[parent.id].push_back(&el);
      else
        satellites_[parent.id].push_back(&el);
    }
  }

  // The element's subtree including satellites attached to its own id.
  RstNodePtr complex_of(const Rs3Element& el) {
    if (on_stack_.count(el.id))
      throw ParseError(ParseError::Kind::cycle_detected, "rs3: cycle through " + el.id, 0, el.id);
    on_stack_.insert(el.id);
    ++visited_;
    RstNodePtr node = base(el);
    if (auto it = satellites_.find(el.id); it != satellites_.end())
      node = wrap_with_sats(std::move(node), it->second, el.id);
    on_stack_.erase(el.id);
    return node;
  }

  size_t visited() const { return visited_; }

 private:
  bool is_multinuc_rel(const std::string& name) const {
    auto it = file_.declared.find(name);
    if (it != file_.declared.end()) return it->second == "multinuc";
    const RelationLabel* rel = find_relation(name);
    return rel && rel->arity != Arity::nucleus_satellite;
  }

  RstNodePtr base(const Rs3Element& el) {
    if (!el.is_group) {
      auto leaf = std::make_unique<RstNode>();
      leaf->kind = NodeKind::leaf;
      leaf->edu_index = edu_index.at(el.id);
      leaf->id = el.id;
      return leaf;
    }
    if (el.group_type == "multinuc") {
      auto node = std::make_unique<RstNode>();
      node->kind = NodeKind::multinuc;
      node->id = el.id;
      if (auto mit = members_.find(el.id); mit != members_.end())
        for (const Rs3Element* m : mit->second)
          node->children.push_back({complex_of(*m), Role::nucleus, m->relname});
      sort_children(*node);
      return node;
    }
    auto sc = span_child_.find(el.id);
    if (sc == span_child_.end())
      throw ParseError(ParseError::Kind::xml_error,
                       "rs3: span group " + el.id + " has no span child");
    return complex_of(*sc->second);
  }

  RstNodePtr wrap_with_sats(RstNodePtr nucleus, const std::vector<const Rs3Element*>& sats,
                            const std::string& id) {
    auto node = std::make_unique<RstNode>();
    node->kind = NodeKind::span;
    node->id = id + "+sats";
    node->children.push_back({std::move(nucleus), Role::nucleus, ""});
    for (const Rs3Element* s : sats)
      node->children.push_back({complex_of(*s), Role::satellite, s->relname});
    sort_children(*node);
    return node;
  }

  static void sort_children(RstNode& n) {
    std::stable_sort(n.children.begin(), n.children.end(),
                     [](const ChildEdge& a, const ChildEdge& b) {
                       return node_span(*a.child) < node_span(*b.child);
                     });
  }

  const Rs3File& file_;
  std::map<std::string, std::vector<const Rs3Element*>> satellites_;
  std::map<std::string, std::vector<const Rs3Element*>> members_;
  std::map<std::string, const Rs3Element*> span_child_;
  std::set<std::string> on_stack_;
  size_t visited_ = 0;
};

}  // namespace

RstTree parse_rs3(const std::string& text) {
  Rs3File file = read_rs3(text);
  TreeBuilder b(file);

  RstTree tree;
  int edu = 0;
  for (const auto& el : file.elements) {
    if (el.is_group) continue;
    b.edu_index[el.id] = ++edu;
    tree.edus.push_back({el.text, -1, -1});
  }

  b.classify();

  const Rs3Element* root = nullptr;
  for (const auto& el : file.elements) {
    if (!el.parent.empty()) continue;
    if (root)
      throw ParseError(ParseError::Kind::xml_error,
                       "rs3: multiple roots (" + root->id + ", " + el.id + ")");
    root = &el;
  }
  if (!root) {
    if (file.elements.empty()) return tree;
    throw ParseError(ParseError::Kind::cycle_detected, "rs3: no root element");
  }
  tree.root_attach = root->relname;
  tree.root = b.complex_of(*root);

  // complex_of visits each element exactly once when the file is a tree; a
  // shortfall means elements hang off an unreachable cluster.
  if (b.visited() < file.elements.size())
    throw ParseError(ParseError::Kind::dangling_parent,
                     "rs3: " + std::to_string(file.elements.size() - b.visited()) +
                         " elements unreachable from the root");

  return tree;
}

namespace {

std::string xml_escape(const std::string& s, bool attr) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attr) {
          out += "&quot;";
          break;
        }
        [[fallthrough]];
      default: out.push_back(c);
    }
  }
  return out;
}

struct GroupLine {
  std::string id;
  std::string type;
  std::string parent;
  std::string relname;
};

struct Attachment {
  std::string parent;
  std::string relname;
};

struct Writer {
  const RstTree& tree;
  std::map<int, Attachment> leaf_attach;
  std::vector<GroupLine> group_lines;
  std::map<std::string, std::string> used_rels;
  int next_group_id;

  explicit Writer(const RstTree& t)
      : tree(t), next_group_id(static_cast<int>(t.edus.size()) + 1) {}

  void note_rel(const std::string& name) {
    const RelationLabel* rel = find_relation(name);
    if (!rel)
      throw ParseError(ParseError::Kind::unknown_relation,
                       "serialize_rs3: unknown relation '" + name + "'", 0, name);
    used_rels[name] = rel->arity == Arity::nucleus_satellite ? "rst" : "multinuc";
  }

  std::string fresh_group() { return std::to_string(next_group_id++); }

  // Emits the subtree and returns the id its parent should reference.
  std::string emit(const RstNode& n, const Attachment& attach) {
    if (n.kind == NodeKind::leaf) {
      leaf_attach[n.edu_index] = attach;
      return std::to_string(n.edu_index);
    }
    if (n.kind == NodeKind::multinuc) {
      std::string gid = fresh_group();
      group_lines.push_back({gid, "multinuc", attach.parent, attach.relname});
      for (const auto& e : n.children) {
        note_rel(e.relation);
        emit(*e.child, {gid, e.relation});
      }
      return gid;
    }
    const ChildEdge* nucleus = nullptr;
    for (const auto& e : n.children)
      if (e.role == Role::nucleus) nucleus = &e;
    if (!nucleus)
      throw ParseError(ParseError::Kind::invalid_tree, "serialize_rs3: span node without nucleus");
    std::string gid = fresh_group();
    group_lines.push_back({gid, "span", attach.parent, attach.relname});
    std::string nucleus_id = emit(*nucleus->child, {gid, "span"});
    for (const auto& e : n.children) {
      if (e.role == Role::nucleus) continue;
      note_rel(e.relation);
      emit(*e.child, {nucleus_id, e.relation});
    }
    return gid;
  }
};

}  // namespace

std::string serialize_rs3(const RstTree& tree) {
  auto diags = validate_structure(tree);
  if (!diags.empty()) {
    std::string codes;
    for (const auto& d : diags) {
      if (!codes.empty()) codes += ",";
      codes += d.code;
    }
    throw ParseError(ParseError::Kind::invalid_tree, "serialize_rs3: invalid tree: " + codes, 0,
                     codes);
  }

  Writer w(tree);
  if (tree.root) w.emit(*tree.root, {"", ""});

  std::ostringstream out;
  out << "<rst>\n  <header>\n    <relations>\n";
  for (const auto& [name, type] : w.used_rels)
    out << "      <rel name=\"" << xml_escape(name, true) << "\" type=\"" << type << "\"/>\n";
  out << "    </relations>\n  </header>\n  <body>\n";
  for (size_t i = 0; i < tree.edus.size(); ++i) {
    auto it = w.leaf_attach.find(static_cast<int>(i) + 1);
    out << "    <segment id=\"" << (i + 1) << "\"";
    if (it != w.leaf_attach.end() && !it->second.parent.empty())
      out << " parent=\"" << it->second.parent << "\" relname=\""
          << xml_escape(it->second.relname, true) << "\"";
    out << ">" << xml_escape(uni::nfc(tree.edus[i].text), false) << "</segment>\n";
  }
  for (const auto& g : w.group_lines) {
    out << "    <group id=\"" << g.id << "\" type=\"" << g.type << "\"";
    if (!g.parent.empty())
      out << " parent=\"" << g.parent << "\" relname=\"" << xml_escape(g.relname, true) << "\"";
    out << "/>\n";
  }
  out << "  </body>\n</rst>\n";
  return out.str();
}

}  // namespace gcdt
