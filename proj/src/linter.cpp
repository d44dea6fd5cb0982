#include "gcdt/linter.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "unicode.hpp"

namespace gcdt {

namespace {

std::string strip_spaces(const std::string& s) {
  std::string out;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ' ' || s[i] == '\t') {
      ++i;
      continue;
    }
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE3 &&
        static_cast<unsigned char>(s[i + 1]) == 0x80 &&
        static_cast<unsigned char>(s[i + 2]) == 0x80) {
      i += 3;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

bool ends_with_de(const std::string& text) {
  // final 的 or 之, ignoring trailing punctuation
  auto cps = uni::decode(strip_spaces(text));
  for (auto it = cps.rbegin(); it != cps.rend(); ++it) {
    if (*it == 0x7684 || *it == 0x4E4B) return true;  // 的 之
    // skip closing punctuation
    if (*it == 0x3002 || *it == 0xFF0C || *it == 0x2019 || *it == 0x201D || *it == 0xFF09 ||
        *it == 0x300B || *it == 0x3001)
      continue;
    return false;
  }
  return false;
}

bool is_citation_text(const std::string& text) {
  // one or more [n] marks, optional ":pp. n-m" suffix, optional final stop
  auto cps = uni::decode(strip_spaces(text));
  size_t i = 0;
  auto eat_mark = [&]() {
    if (i >= cps.size() || (cps[i] != U'[' && cps[i] != 0x3010)) return false;
    size_t j = i + 1;
    bool digits = false;
    while (j < cps.size() && cps[j] >= U'0' && cps[j] <= U'9') {
      ++j;
      digits = true;
    }
    if (!digits || j >= cps.size() || (cps[j] != U']' && cps[j] != 0x3011)) return false;
    i = j + 1;
    return true;
  };
  if (!eat_mark()) return false;
  while (eat_mark()) {
  }
  if (i < cps.size() && (cps[i] == U':' || cps[i] == 0xFF1A)) {
    ++i;
    while (i < cps.size() &&
           ((cps[i] >= U'0' && cps[i] <= U'9') || cps[i] == U'p' || cps[i] == U'.' ||
            cps[i] == U'-' || cps[i] == 0x2013 || cps[i] == U'~'))
      ++i;
  }
  if (i < cps.size() && cps[i] == 0x3002) ++i;  // 。
  return i == cps.size();
}

bool contains_question_mark(const std::string& text) {
  return text.find("\xEF\xBC\x9F") != std::string::npos || text.find('?') != std::string::npos;
}

struct Linter {
  const AnalyzedDocument* doc;
  const RstTree& tree;
  const LintConfig& cfg;
  LintReport report;
  std::vector<int> edu_sentence;  // 1-based edu -> sentence index (-1 unknown)

  Linter(const AnalyzedDocument* d, const RstTree& t, const LintConfig& c)
      : doc(d), tree(t), cfg(c) {}

  Severity severity_of(const std::string& code, Severity def) const {
    auto it = cfg.severity_overrides.find(code);
    return it == cfg.severity_overrides.end() ? def : it->second;
  }

  void add(const std::string& code, Severity def, const std::string& locus,
           const std::string& message, const std::string& section) {
    if (cfg.disabled_codes.count(code)) return;
    report.findings.push_back(
        {code, severity_of(code, def), locus, message + " (see \xC2\xA7" + section + ")",
         section});
  }

  std::string span_locus(const RstNode& n) const {
    auto [f, l] = node_span(n);
    std::ostringstream os;
    os << "edus " << f << "-" << l;
    if (!n.id.empty()) os << " (node " << n.id << ")";
    return os.str();
  }

  void map_edus_to_sentences() {
    edu_sentence.assign(tree.edus.size() + 1, -1);
    bool have_explicit = false;
    for (size_t i = 0; i < tree.edus.size(); ++i)
      if (tree.edus[i].sentence_begin >= 0) {
        edu_sentence[i + 1] = tree.edus[i].sentence_begin;
        have_explicit = true;
      }
    if (have_explicit || !doc) return;
    // align EDU texts against document sentences
    size_t sent = 0;
    std::string rest = doc->structure.sentences.empty()
                           ? ""
                           : strip_spaces(doc->structure.sentences[0]);
    for (size_t i = 0; i < tree.edus.size(); ++i) {
      std::string t = strip_spaces(tree.edus[i].text);
      while (sent < doc->structure.sentences.size() && rest.empty()) {
        ++sent;
        if (sent < doc->structure.sentences.size())
          rest = strip_spaces(doc->structure.sentences[sent]);
      }
      if (sent >= doc->structure.sentences.size() || rest.rfind(t, 0) != 0) {
        // texts do not line up; sentence-dependent checks are skipped
        edu_sentence.assign(tree.edus.size() + 1, -1);
        return;
      }
      edu_sentence[i + 1] = static_cast<int>(sent);
      rest = rest.substr(t.size());
    }
  }

  int paragraph_of_sentence(int sent) const {
    if (!doc) return -1;
    for (size_t p = 0; p < doc->structure.paragraphs.size(); ++p) {
      auto [b, e] = doc->structure.paragraphs[p];
      if (sent >= b && sent < e) return static_cast<int>(p);
    }
    return -1;
  }

  // nucleus path: follow nucleus edges (leftmost member for multinuclear
  // nodes) down to a leaf
  int nucleus_path_edu(const RstNode& n) const {
    const RstNode* cur = &n;
    while (cur->kind != NodeKind::leaf) {
      const RstNode* next = nullptr;
      for (const auto& e : cur->children) {
        if (e.role == Role::nucleus) {
          next = e.child.get();
          break;
        }
      }
      if (!next) return node_span(*cur).first;
      cur = next;
    }
    return cur->edu_index;
  }

  void walk(const RstNode& n, int depth) {
    if (n.kind == NodeKind::multinuc) {
      check_multinuc(n);
      check_attachment_order(n, depth);
    }
    if (n.kind == NodeKind::span) check_span(n);
    for (const auto& e : n.children) walk(*e.child, depth + 1);
  }

  void check_multinuc(const RstNode& n) {
    std::string rel = n.children.empty() ? "" : n.children.front().relation;
    bool mixed = false;
    for (const auto& e : n.children)
      if (e.relation != rel) mixed = true;
    if (mixed)
      add("L-MULTINUC-SAMEREL", Severity::error, span_locus(n),
          "members of one multinuclear node must share one relation", "2.2");

    if (rel == "same-unit") {
      // interruption: some pair of consecutive members must have intervening
      // satellite material between their nucleus-path EDUs
      bool interrupted = false;
      for (size_t i = 0; i + 1 < n.children.size(); ++i) {
        int a = nucleus_path_edu(*n.children[i].child);
        int b = nucleus_path_edu(*n.children[i + 1].child);
        if (b - a > 1) interrupted = true;
      }
      if (!interrupted && n.children.size() >= 2)
        add("L-SU-INTERRUPT", Severity::warning, span_locus(n),
            "same-unit members are adjacent; no interrupting satellite between them", "2.3");

      // members in different sentences
      bool known = true;
      std::set<int> sentences;
      auto [f, l] = node_span(n);
      for (int e = f; e <= l; ++e) {
        if (e < 1 || e >= static_cast<int>(edu_sentence.size()) || edu_sentence[e] < 0)
          known = false;
        else
          sentences.insert(edu_sentence[e]);
      }
      if (known && sentences.size() > 1)
        add("W-SU-XSENT", Severity::warning, span_locus(n),
            "same-unit members span different sentences", "1.1.12");
    }
  }

  void check_span(const RstNode& n) {
    for (const auto& e : n.children) {
      if (e.role != Role::satellite) continue;
      const RstNode& sat = *e.child;
      auto [sf, sl] = node_span(sat);
      auto [nf, nl] = nucleus_span(n);
      (void)nl;

      // prenominal relative-clause shape: satellite leaf ending in DE with the
      // nucleus following it
      if (sat.kind == NodeKind::leaf && sl < nf &&
          ends_with_de(tree.edus[sat.edu_index - 1].text) && e.relation != "elaboration-attribute" &&
          e.relation != "purpose-attribute") {
        add("L-ATTR-REL", Severity::advisory, span_locus(sat),
            "satellite ends in \xE7\x9A\x84/\xE4\xB9\x8B before its nucleus; expected "
            "elaboration-attribute or purpose-attribute, found " +
                e.relation,
            "2.0.1");
      }

      if (sat.kind == NodeKind::leaf && is_citation_text(tree.edus[sat.edu_index - 1].text) &&
          e.relation != "explanation-evidence") {
        add("L-CITE", Severity::warning, span_locus(sat),
            "bracketed citation should be an explanation-evidence satellite, found " + e.relation,
            "2.1.13");
      }

      if (e.relation == "organization-heading") check_heading(n, sat, sf, sl, nf);

      if (e.relation == "topic-question") {
        std::string text;
        for (int i = sf; i <= sl; ++i) text += tree.edus[i - 1].text;
        if (!contains_question_mark(text))
          add("L-QUES", Severity::advisory, span_locus(sat),
              "topic-question satellite contains no question mark", "2.1.24");
      }
    }
  }

  std::pair<int, int> nucleus_span(const RstNode& n) const {
    for (const auto& e : n.children)
      if (e.role == Role::nucleus) return node_span(*e.child);
    return node_span(n);
  }

  void check_heading(const RstNode& parent, const RstNode& sat, int /*sf*/, int sl, int nf) {
    if (sl >= nf) {
      add("L-HEAD", Severity::warning, span_locus(sat),
          "organization-heading satellite must precede its nucleus", "2.1.18");
      return;
    }
    if (!doc) {
      need_doc_note("L-HEAD");
      return;
    }
    if (sl >= static_cast<int>(edu_sentence.size()) || edu_sentence[sl] < 0 ||
        nf >= static_cast<int>(edu_sentence.size()) || edu_sentence[nf] < 0) {
      need_doc_note("L-HEAD");
      return;
    }
    int heading_sent = edu_sentence[sl];
    int body_sent = edu_sentence[nf];
    int hp = paragraph_of_sentence(heading_sent);
    int bp = paragraph_of_sentence(body_sent);
    bool paragraph_break = hp >= 0 && bp >= 0 && hp != bp;
    bool section_break = false;
    for (const auto& sec : doc->structure.sections)
      if (sec.start_paragraph == bp && bp != hp) section_break = true;
    if (!paragraph_break && !section_break)
      add("L-HEAD", Severity::warning, span_locus(sat),
          "heading satellite lacks a following paragraph or section break; "
          "consider organization-preparation",
          "2.1.18");
    (void)parent;
  }

  // Inside one same-unit complex, satellites that modify the subject fragment
  // attach no deeper than satellites that modify the object fragment.
  void check_attachment_order(const RstNode& n, int depth) {
    if (n.kind != NodeKind::multinuc || n.children.empty() ||
        n.children.front().relation != "same-unit")
      return;
    if (!doc) {
      need_doc_note("L-ORDER");
      return;
    }
    struct Mod {
      int depth;
      std::string anchor_rel;  // deprel of the modified fragment head
      const RstNode* node;
    };
    std::vector<Mod> mods;
    std::function<void(const RstNode&, int)> scan = [&](const RstNode& x, int d) {
      if (x.kind == NodeKind::span) {
        auto [xf, xl] = node_span(x);
        for (const auto& e : x.children) {
          if (e.role != Role::satellite) continue;
          if (e.relation != "elaboration-attribute" && e.relation != "purpose-attribute" &&
              e.relation != "elaboration-additional")
            continue;
          auto [sf, sl] = node_span(*e.child);
          // prenominal modifiers anchor the noun after them, parenthetical
          // modifiers the nominal before them
          bool prenominal = sl < xl;
          std::string anchor = prenominal ? first_nominal_deprel(sl + 1)
                                          : last_nominal_deprel(sf - 1);
          if (!anchor.empty()) mods.push_back({d, anchor, e.child.get()});
        }
      }
      for (const auto& e : x.children) scan(*e.child, d + 1);
    };
    scan(n, depth);
    int best_subj = -1, best_obj = -1;
    const RstNode* subj_node = nullptr;
    for (const auto& m : mods) {
      if (m.anchor_rel == "nsubj" || m.anchor_rel == "top") {
        if (best_subj < 0 || m.depth > best_subj) {
          best_subj = m.depth;
          subj_node = m.node;
        }
      } else if (m.anchor_rel == "dobj" || m.anchor_rel == "pobj") {
        if (best_obj < 0 || m.depth < best_obj) best_obj = m.depth;
      }
    }
    if (best_subj >= 0 && best_obj >= 0 && best_subj > best_obj)
      add("L-ORDER", Severity::advisory, span_locus(*subj_node),
          "subject modifier attaches deeper than an object modifier in the same-unit complex",
          "2.0.2");
  }

  // token range [begin, end) of an EDU within its sentence, by character walk
  bool edu_token_range(int edu, int& sent, size_t& begin, size_t& end) const {
    if (!doc || edu < 1 || edu > static_cast<int>(tree.edus.size())) return false;
    if (edu >= static_cast<int>(edu_sentence.size()) || edu_sentence[edu] < 0) return false;
    sent = edu_sentence[edu];
    if (sent < 0 || sent >= static_cast<int>(doc->sentences.size())) return false;
    size_t offset = 0;
    for (int e = 1; e < edu; ++e)
      if (edu_sentence[e] == sent) offset += strip_spaces(tree.edus[e - 1].text).size();
    size_t want = offset + strip_spaces(tree.edus[edu - 1].text).size();
    size_t acc = 0;
    begin = end = doc->sentences[sent].size();
    for (size_t k = 0; k < doc->sentences[sent].size(); ++k) {
      if (acc == offset) begin = k;
      acc += strip_spaces(doc->sentences[sent][k].form).size();
      if (acc == want) {
        end = k + 1;
        return begin <= end;
      }
    }
    return false;
  }

  std::string first_nominal_deprel(int edu) const {
    int sent;
    size_t b, e;
    if (!edu_token_range(edu, sent, b, e)) return "";
    for (size_t k = b; k < doc->sentences[sent].size(); ++k) {
      const Token& u = doc->sentences[sent][k];
      if (u.pos == "NN" || u.pos == "NR" || u.pos == "NT" || u.pos == "PN") return u.deprel;
    }
    return "";
  }

  std::string last_nominal_deprel(int edu) const {
    int sent;
    size_t b, e;
    if (!edu_token_range(edu, sent, b, e)) return "";
    for (size_t k = e; k-- > 0;) {
      const Token& u = doc->sentences[sent][k];
      if (u.pos == "NN" || u.pos == "NR" || u.pos == "NT" || u.pos == "PN") return u.deprel;
    }
    return "";
  }

  void need_doc_note(const std::string& code) {
    std::string note = code + ": skipped (needs an aligned document with dependency parses)";
    if (std::find(report.footer.begin(), report.footer.end(), note) == report.footer.end())
      report.footer.push_back(note);
  }

  void run() {
    map_edus_to_sentences();
    if (tree.root) walk(*tree.root, 0);
    std::sort(report.findings.begin(), report.findings.end(),
              [](const Diagnostic& a, const Diagnostic& b) {
                return std::tie(a.code, a.locus, a.message) < std::tie(b.code, b.locus, b.message);
              });
    report.findings.erase(std::unique(report.findings.begin(), report.findings.end()),
                          report.findings.end());
    report.footer.push_back(
        "manual-review items not auto-flagged: heading nuclearity content "
        "(\xC2\xA7"
        "3.1), motivation vs cause (\xC2\xA7"
        "3.2), recursive question-answer structure (\xC2\xA7"
        "3.3)");
  }
};

}  // namespace

const std::vector<RegistryEntry>& lint_registry() {
  static const std::vector<RegistryEntry> kRegistry = {
      {"L-SU-INTERRUPT", Severity::warning, "2.3",
       "same-unit without an interrupting satellite between member nucleus paths"},
      {"W-SU-XSENT", Severity::warning, "1.1.12", "same-unit members span different sentences"},
      {"L-ATTR-REL", Severity::advisory, "2.0.1",
       "prenominal DE-final satellite not labeled elaboration-attribute/purpose-attribute"},
      {"L-ORDER", Severity::advisory, "2.0.2",
       "subject modifier attached deeper than object modifier (needs parse)"},
      {"L-CITE", Severity::warning, "2.1.13",
       "citation-shaped EDU (pattern: [n]+ with optional ':pp. n-m') not labeled "
       "explanation-evidence"},
      {"L-HEAD", Severity::warning, "2.1.18",
       "organization-heading without a following paragraph or section break"},
      {"L-QUES", Severity::advisory, "2.1.24", "topic-question satellite without a question mark"},
      {"L-MULTINUC-SAMEREL", Severity::error, "2.2",
       "mixed relation names among one multinuclear node's children"},
  };
  return kRegistry;
}

LintReport lint(const AnalyzedDocument* doc, const RstTree& tree, const LintConfig& config) {
  auto structural = validate_structure(tree);
  // Mixed relation names re-surface as L-MULTINUC-SAMEREL; every other
  // structural error blocks linting.
  std::string blocking;
  for (const auto& d : structural) {
    if (d.code == "E-MULTINUC-MIXED") continue;
    if (!blocking.empty()) blocking += ",";
    blocking += d.code;
  }
  if (!blocking.empty())
    throw LintError("PreconditionFailed: structural validation reported " + blocking);
  Linter linter(doc, tree, config);
  linter.run();
  return std::move(linter.report);
}

}  // namespace gcdt
