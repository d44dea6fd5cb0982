#include "gcdt/segmenter.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "unicode.hpp"

namespace gcdt {

namespace {

bool is_verbal(const std::string& pos) {
  return pos == "VV" || pos == "VC" || pos == "VE" || pos == "VA";
}
bool is_clause_verb(const std::string& pos) {  // VA excluded: bare adjectives
  return pos == "VV" || pos == "VC" || pos == "VE";
}
bool is_nominal(const std::string& pos) {
  return pos == "NN" || pos == "NR" || pos == "NT" || pos == "PN";
}
bool is_prep_pos(const std::string& pos) {
  return pos == "P" || pos == "LB" || pos == "SB" || pos == "BA";
}

struct Span {
  int first = 0, last = 0;
  bool contains(int tok) const { return first <= tok && tok <= last; }
  // inter-token position strictly inside the span
  bool covers_pos(int p) const { return first <= p && p < last; }
};

// Cues whose trigger depends on syntactic configuration rather than the
// surface alone: prepositions take the S2 route unless tagged CS.
const std::set<std::string>& prep_gated_cues() {
  static const std::set<std::string> s = {
      "根据", "据", "按照", "按", "依照", "基于", "因", "因为", "由于",
      "经过", "通过", "透过", "随着", "针对", "除了", "除"};
  return s;
}

const std::set<std::string>& t3_markers() {
  static const std::set<std::string> s = {"用", "以", "按照", "看"};
  return s;
}

class RuleEngine {
 public:
  RuleEngine(const Sentence& sent, const Lexicons& lex, const SegmenterConfig& cfg)
      : sent_(sent), lex_(lex), cfg_(cfg), n_(static_cast<int>(sent.size())) {
    parsed_ = n_ > 0;
    for (const Token& t : sent_)
      if (!t.head) parsed_ = false;
    if (parsed_) build_tree();
    find_punct_structures();
  }

  bool parsed() const { return parsed_; }

  std::vector<BoundaryCandidate> run() {
    if (n_ == 0) return {};
    // construction passes first: later rules consult their spans
    rule_t2();
    rule_t3();
    match_templates();
    rule_s2();
    classify_parens();

    rule_t1_t5_conj();
    rule_t4();
    rule_s1();
    rule_s4();
    rule_s5();
    rule_s6();

    rule_t8_parens();
    rule_t8_citations();
    rule_t9();
    rule_t10();
    chunk_and_fragment_rules();

    rule_s7();
    return std::move(out_);
  }

 private:
  const Sentence& sent_;
  const Lexicons& lex_;
  const SegmenterConfig& cfg_;
  int n_;
  bool parsed_ = false;

  std::vector<std::vector<int>> kids_;  // 1-based
  std::vector<Span> subtree_;
  std::vector<Span> title_spans_, math_spans_, foreign_runs_, hyphen_pairs_;
  std::vector<Span> paren_spans_;
  enum class ParenKind { edu, core_arg, citation_date, ipa };
  std::vector<ParenKind> paren_kinds_;
  struct CitationRun {
    Span span;
    bool suppressed = false;  // attached to a title/quote
  };
  std::vector<CitationRun> citation_runs_;
  std::vector<Span> rc_spans_, t3_spans_, s2x_spans_;
  struct TemplateHit {
    Span span;
    enum class Behavior { enclose, before_close, after_close } behavior;
  };
  std::vector<TemplateHit> template_hits_;
  std::vector<BoundaryCandidate> out_;

  const Token& tok(int i) const { return sent_[i - 1]; }
  const std::string& form(int i) const { return sent_[i - 1].form; }
  const std::string& pos(int i) const { return sent_[i - 1].pos; }
  int head(int i) const { return parsed_ ? *sent_[i - 1].head : 0; }
  const std::string& rel(int i) const { return sent_[i - 1].deprel; }

  bool enabled(const char* rule) const { return !cfg_.disabled_rules.count(rule); }

  void build_tree() {
    kids_.assign(n_ + 1, {});
    for (int i = 1; i <= n_; ++i)
      if (head(i) > 0 && head(i) <= n_) kids_[head(i)].push_back(i);
    subtree_.assign(n_ + 1, {});
    // children have strictly smaller subtrees only in acyclic parses; compute
    // by iterating to a fixed point, which is linear in practice
    for (int i = 1; i <= n_; ++i) subtree_[i] = {i, i};
    bool changed = true;
    int guard = 0;
    while (changed && guard++ <= n_ + 2) {
      changed = false;
      for (int i = 1; i <= n_; ++i) {
        int h = head(i);
        if (h <= 0 || h > n_) continue;
        if (subtree_[i].first < subtree_[h].first) {
          subtree_[h].first = subtree_[i].first;
          changed = true;
        }
        if (subtree_[i].last > subtree_[h].last) {
          subtree_[h].last = subtree_[i].last;
          changed = true;
        }
      }
    }
  }

  Span subtree(int i) const { return parsed_ ? subtree_[i] : Span{i, i}; }

  bool has_child(int v, const char* deprel) const {
    if (!parsed_) return false;
    for (int c : kids_[v])
      if (rel(c) == deprel) return true;
    return false;
  }
  int child_with(int v, const char* deprel) const {
    if (!parsed_) return 0;
    for (int c : kids_[v])
      if (rel(c) == deprel) return c;
    return 0;
  }
  bool inside_rcmod(int i) const {
    if (!parsed_) return false;
    int cur = head(i);
    int guard = 0;
    while (cur > 0 && cur <= n_ && guard++ <= n_) {
      if (rel(cur) == "rcmod") return true;
      cur = head(cur);
    }
    return false;
  }

  template <typename Pred>
  bool any_in(int first, int last, Pred pred) const {
    for (int i = std::max(1, first); i <= std::min(n_, last); ++i)
      if (pred(i)) return true;
    return false;
  }

  bool token_in_spans(const std::vector<Span>& spans, int i) const {
    for (const auto& s : spans)
      if (s.contains(i)) return true;
    return false;
  }

  bool token_blocked(int i) const {
    return token_in_spans(title_spans_, i) || token_in_spans(math_spans_, i) ||
           token_in_spans(foreign_runs_, i) || token_in_spans(paren_spans_, i);
  }

  bool inside_p_subtree(int i) const {
    if (!parsed_) return false;
    int cur = head(i);
    int guard = 0;
    while (cur > 0 && cur <= n_ && guard++ <= n_) {
      if (pos(cur) == "P" || pos(cur) == "LC" || pos(cur) == "LB" || pos(cur) == "SB")
        return true;
      cur = head(cur);
    }
    return false;
  }

  bool is_single_cue(int i) const {
    auto m = lex_.match_cue(sent_, i);
    return m && !m->entry->is_template() && m->last_token == i;
  }

  // ---- candidate emission -------------------------------------------------

  // Rules compute gaps "after token k"; candidates carry the before-token
  // index k+1 per the BoundaryCandidate contract.
  void trig(int position, const char* rule, std::string note, Span span = {}) {
    if (!enabled(rule)) return;
    // separators attach to the left EDU
    while (position >= 1 && position < n_ &&
           uni::is_left_attaching_separator(form(position + 1)))
      ++position;
    if (position <= 0 || position >= n_) return;
    if (span.first == 0) span = {position, position + 1};
    out_.push_back(
        {position + 1, rule, Polarity::trigger, std::move(note), span.first, span.last});
  }

  void trig_nodash_shift(int position, const char* rule, std::string note) {
    // dashes join the following EDU; no separator shift applies before them
    if (!enabled(rule)) return;
    if (position <= 0 || position >= n_) return;
    out_.push_back(
        {position + 1, rule, Polarity::trigger, std::move(note), position, position + 1});
  }

  void supp(int position, const char* rule, std::string note) {
    if (!enabled(rule)) return;
    if (position <= 0 || position >= n_) return;
    out_.push_back(
        {position + 1, rule, Polarity::suppress, std::move(note), position, position + 1});
  }

  void supp_range(int first, int last, const char* rule, const std::string& note) {
    for (int p = first; p <= last; ++p) supp(p, rule, note);
  }

  // ---- punctuation structures ---------------------------------------------

  void find_punct_structures() {
    // paired spans
    auto pair_up = [&](auto is_open, auto is_close, std::vector<Span>& out) {
      std::vector<int> stack;
      for (int i = 1; i <= n_; ++i) {
        if (is_open(form(i))) {
          stack.push_back(i);
        } else if (is_close(form(i)) && !stack.empty()) {
          out.push_back({stack.back(), i});
          stack.pop_back();
        }
      }
    };
    pair_up([](std::string_view f) { return uni::is_title_open(f); },
            [](std::string_view f) { return uni::is_title_close(f); }, title_spans_);
    pair_up([](std::string_view f) { return uni::is_open_paren(f); },
            [](std::string_view f) { return uni::is_close_paren(f); }, paren_spans_);

    // $ ... $ spans
    int open_math = 0;
    for (int i = 1; i <= n_; ++i) {
      if (!uni::is_math_delim(form(i))) continue;
      if (open_math == 0) {
        open_math = i;
      } else {
        math_spans_.push_back({open_math, i});
        open_math = 0;
      }
    }

    // citation runs with optional page suffix
    for (int i = 1; i <= n_; ++i) {
      if (!uni::is_citation_token(form(i))) continue;
      int j = i;
      while (j < n_ && uni::is_citation_token(form(j + 1))) ++j;
      int end = j;
      if (end + 2 <= n_ && uni::is_colon(form(end + 1)) &&
          (uni::is_page_word(form(end + 2)) || uni::is_digit_range(form(end + 2)))) {
        end += 2;
        while (end < n_ && (uni::is_page_word(form(end + 1)) || uni::is_digit_range(form(end + 1))))
          ++end;
      }
      CitationRun run;
      run.span = {i, end};
      run.suppressed =
          i > 1 && (uni::is_title_close(form(i - 1)) || uni::is_quote_close(form(i - 1)));
      citation_runs_.push_back(run);
      i = end;
    }

    // foreign runs: maximal sequences of non-CJK tokens, citations excluded
    int run_start = 0;
    for (int i = 1; i <= n_ + 1; ++i) {
      bool foreign = i <= n_ && uni::is_foreign_token(form(i)) &&
                     !uni::is_citation_token(form(i)) && !uni::is_math_delim(form(i));
      if (foreign && run_start == 0) run_start = i;
      if (!foreign && run_start != 0) {
        if (i - run_start >= 2) foreign_runs_.push_back({run_start, i - 1});
        run_start = 0;
      }
    }

    // single hyphens and nominal-combinator dashes between content words
    for (int i = 2; i < n_; ++i) {
      if (!uni::is_hyphen(form(i))) continue;
      const std::string& lp = pos(i - 1);
      const std::string& rp = pos(i + 1);
      auto combinable = [](const std::string& p) {
        return p == "CD" || p == "NN" || p == "NR" || p == "NT" || p == "FW" || p == "JJ" ||
               p == "PN" || p == "OD";
      };
      if (combinable(lp) && combinable(rp)) hyphen_pairs_.push_back({i - 1, i});
    }
  }

  void classify_parens() {
    paren_kinds_.assign(paren_spans_.size(), ParenKind::edu);
    for (size_t k = 0; k < paren_spans_.size(); ++k) {
      const Span s = paren_spans_[k];
      if (s.last - s.first < 2) continue;
      bool has_date = false, all_foreign = true;
      for (int i = s.first + 1; i < s.last; ++i) {
        if (uni::looks_like_date(form(i)) || pos(i) == "NT") has_date = true;
        if (!uni::is_foreign_token(form(i))) all_foreign = false;
      }
      bool square = form(s.first) == "[" || form(s.first) == "\xE3\x80\x90";
      if (square && all_foreign) {
        paren_kinds_[k] = ParenKind::ipa;
        continue;
      }
      if (has_date) {
        bool after_title =
            s.first > 1 && (uni::is_title_close(form(s.first - 1)) ||
                            uni::is_quote_close(form(s.first - 1)));
        paren_kinds_[k] = after_title ? ParenKind::citation_date : ParenKind::edu;
        continue;
      }
      // inserted core argument: the content head is a subject or object of a
      // predicate outside the parentheses
      if (parsed_) {
        for (int i = s.first + 1; i < s.last; ++i) {
          int h = head(i);
          if (h != 0 && !s.contains(h) && is_verbal(pos(h)) &&
              (rel(i) == "nsubj" || rel(i) == "dobj" || rel(i) == "pobj" ||
               rel(i) == "nsubjpass" || rel(i) == "top")) {
            paren_kinds_[k] = ParenKind::core_arg;
            break;
          }
        }
      } else if (s.last - s.first == 2 && pos(s.first + 1) == "PN") {
        paren_kinds_[k] = ParenKind::core_arg;
      }
    }
  }

  // ---- T2: relative clauses ------------------------------------------------

  void rule_t2() {
    if (!parsed_) {
      // degraded: boundary after clausal-DE tokens only
      for (int i = 1; i <= n_; ++i)
        if ((form(i) == "的" || form(i) == "之") && pos(i) == "DEC" && !token_blocked(i))
          trig(i, "T2", "degraded: clausal DE");
      return;
    }
    std::vector<int> t2_positions;
    for (int d = 1; d <= n_; ++d) {
      bool de = form(d) == "的" || form(d) == "之";
      if (!de || rel(d) != "cpm") continue;
      int v = head(d);
      if (v <= 0 || rel(v) != "rcmod") continue;
      if (!t2_gate(v)) continue;
      Span span = subtree(v);
      rc_spans_.push_back(span);
      trig(span.first - 1, "T2", "relative clause start", span);
      trig(d, "T2", "relative clause DE", span);
      t2_positions.push_back(span.first - 1);
      t2_positions.push_back(d);
      // coordinated relative clauses each form a unit
      for (int c : kids_[v]) {
        if (rel(c) != "conj" || !is_verbal(pos(c))) continue;
        Span cs = subtree(c);
        trig(cs.first - 1, "T2", "coordinated relative clause", cs);
        t2_positions.push_back(cs.first - 1);
      }
    }
    // DE-less relatives: verbal prenominal modifier with its own dependents
    for (int v = 1; v <= n_; ++v) {
      if (rel(v) != "rcmod" || !is_clause_verb(pos(v))) continue;
      int h = head(v);
      if (h <= v) continue;
      if (has_child(v, "cpm")) continue;
      if (kids_[v].empty()) continue;
      Span span = subtree(v);
      if (span.last >= h) continue;
      rc_spans_.push_back(span);
      trig(span.first - 1, "T2", "DE-less relative (heuristic)", span);
      trig(span.last, "T2", "DE-less relative (heuristic)", span);
      t2_positions.push_back(span.first - 1);
      t2_positions.push_back(span.last);
    }
    // a noun whose prenominal DE-phrase already contains a boundary keeps that
    // final DE-phrase as a separate unit as well
    for (int nn = 2; nn <= n_; ++nn) {
      if (!is_nominal(pos(nn))) continue;
      int d = nn - 1;
      if (form(d) != "的" && form(d) != "之") continue;
      int h = head(d);
      if (h <= 0) continue;
      Span phrase = subtree(h);
      bool has_internal = false;
      for (int p : t2_positions)
        if (p >= phrase.first && p < d) has_internal = true;
      if (has_internal) trig(d, "T2", "stranded DE before head noun", {phrase.first, d});
    }
  }

  bool t2_gate(int v) const {
    if (is_clause_verb(pos(v))) return true;
    if (pos(v) == "VA") {
      for (int c : kids_[v])
        if (is_nominal(pos(c))) return true;
    }
    return false;
  }

  // ---- T3: manner and means medial adverbials -------------------------------

  void rule_t3() {
    for (int m = 1; m <= n_; ++m) {
      // V+起来 at clause start
      const std::string& f = form(m);
      if (pos(m) == "VV" && uni::length(f) > 2 && f.size() >= 6 &&
          f.substr(f.size() - 6) == "起来" && (m == 1 || uni::is_comma(form(m - 1))) && m < n_ &&
          (pos(m + 1) == "AD" || is_verbal(pos(m + 1)))) {
        trig(m, "T3", "manner V-qilai (heuristic)", {m, m});
        t3_spans_.push_back({m, m});
        continue;
      }
      if (!t3_markers().count(f)) continue;
      if (pos(m) != "P" && pos(m) != "VV") continue;
      if (token_blocked(m)) continue;
      if (parsed_) {
        int h = head(m);
        if (h <= m || !is_verbal(pos(h))) continue;
        if (inside_rcmod(m)) continue;
        Span span = subtree(m);
        if (span.last >= h) continue;
        int next = span.last + 1;
        while (next <= n_ && pos(next) == "AD") ++next;
        if (next > n_ || !is_verbal(pos(next))) continue;
        trig(m - 1, "T3", "manner/means phrase", span);
        trig(span.last, "T3", "manner/means phrase", span);
        t3_spans_.push_back(span);
      } else {
        // degraded: close the phrase before the next verb
        int v = m + 1;
        while (v <= n_ && !is_verbal(pos(v)) && !uni::is_punct(form(v))) ++v;
        if (v <= n_ && v > m + 1 && is_verbal(pos(v))) {
          trig(m - 1, "T3", "degraded manner/means", {m, v - 1});
          trig(v - 1, "T3", "degraded manner/means", {m, v - 1});
          t3_spans_.push_back({m, v - 1});
        }
      }
    }
  }

  // ---- cue templates --------------------------------------------------------

  void match_templates() {
    for (int i = 1; i <= n_; ++i) {
      if (token_blocked(i)) continue;
      auto m = lex_.match_cue(sent_, i);
      if (!m || !m->entry->is_template()) continue;
      const std::string& sur = m->entry->surface;
      auto gap = sur.find(CueEntry::kGap);
      TemplateHit hit;
      hit.span = {m->first_token, m->last_token};
      if (gap == 0)
        hit.behavior = TemplateHit::Behavior::after_close;
      else if (sur.find(CueEntry::kGap, gap + 3) != std::string::npos)
        // correlative pattern (the opener repeats): split before the repeat
        hit.behavior = TemplateHit::Behavior::before_close;
      else
        hit.behavior = TemplateHit::Behavior::enclose;
      template_hits_.push_back(hit);
      i = m->last_token;
    }
  }

  // ---- S2: prepositional phrases -------------------------------------------

  void rule_s2() {
    if (!parsed_) {
      for (int p = 1; p <= n_; ++p) {
        if (pos(p) != "P" || token_blocked(p)) continue;
        int v = p + 1;
        while (v <= n_ && !is_verbal(pos(v)) && !uni::is_punct(form(v))) ++v;
        supp_range(p, v - 1, "S2", "degraded PP");
      }
      return;
    }
    for (int p = 1; p <= n_; ++p) {
      const std::string& tag = pos(p);
      bool bei = form(p) == "被" && (tag == "LB" || tag == "SB" || tag == "P");
      if (bei) {
        bei_phrase(p);
        continue;
      }
      if (tag != "P" && tag != "LC") continue;
      int h = head(p);
      if (h <= 0 || !is_verbal(pos(h))) continue;
      // phrase-internal localizers are part of the enclosing phrase
      if (inside_p_subtree(p)) continue;
      Span span = subtree(p);
      // a relativized 时候 complement is segmented by T2, not suppressed
      bool relativized_shihou = false;
      for (int i = span.first; i <= span.last; ++i)
        if (form(i) == "时候" && pos(i) == "NN" && has_child(i, "rcmod")) relativized_shihou = true;
      if (relativized_shihou) continue;

      bool clausal = any_in(span.first, span.last,
                            [&](int i) { return i != p && is_clause_verb(pos(i)); });
      if (clausal) {
        trig(span.first - 1, "S2", "preposition heads a clausal complement", span);
        trig(span.last, "S2", "preposition heads a clausal complement", span);
        s2x_spans_.push_back(span);
      } else {
        for (int q = span.first; q < span.last; ++q) {
          if (is_paren_edge(q)) continue;
          supp(q, "S2", "prepositional phrase");
        }
      }
    }
  }

  void bei_phrase(int p) {
    int h = head(p);
    if (h <= p || !is_verbal(pos(h))) return;
    // only resultative BEI complexes split around their edges
    bool resultative = form(h).size() >= 3 && form(h).substr(form(h).size() - 3) == "得";
    if (!resultative && !has_child(h, "ccomp")) return;
    Span span = {p, h};
    trig(p - 1, "S2", "BEI phrase with resultative complement", span);
    trig(h, "S2", "BEI phrase with resultative complement", span);
    s2x_spans_.push_back(span);
  }

  bool is_paren_edge(int q) const {
    for (const auto& s : paren_spans_)
      if (q == s.first - 1 || q == s.last) return true;
    return false;
  }

  // ---- T1/T5: serial verbs and clausal coordination --------------------------

  void rule_t1_t5_conj() {
    if (!parsed_) return;
    for (int v2 = 1; v2 <= n_; ++v2) {
      if (rel(v2) != "conj" || !is_verbal(pos(v2))) continue;
      int v1 = head(v2);
      if (v1 <= 0 || v1 >= v2 || !is_verbal(pos(v1))) continue;
      if (rel(v1) == "rcmod") continue;  // handled by T2's coordination case
      Span span = subtree(v2);
      int s = span.first;
      if (is_single_cue(s)) continue;  // T10 credits cue-led coordination
      bool after_comma = s > 1 && uni::is_comma(form(s - 1));
      bool starts_cc = pos(s) == "CC";
      if (after_comma || starts_cc) {
        trig(s - 1, "T5", "coordinated clause", span);
      } else if (!uni::is_punct(form(s))) {
        // tight serial-verb construction
        bool own_subject = has_child(v2, "nsubj") || has_child(v2, "top");
        bool right_material = false;
        for (int c : kids_[v2])
          if (c > v2) right_material = true;
        if (!own_subject && right_material)
          trig(s - 1, "T1", "serial verb construction", span);
      }
    }
  }

  // ---- T4: reported speech --------------------------------------------------

  void rule_t4() {
    for (int v = 1; v <= n_; ++v) {
      if (!is_verbal(pos(v)) || !lex_.is_attribution_verb(form(v))) continue;
      // fixed frame "V A 为 B" does not open a reported clause
      bool frame = false;
      for (int f = v + 1; f <= std::min(n_, v + 4); ++f)
        if (form(f) == "为" && (pos(f) == "P" || pos(f) == "VC")) frame = true;
      if (frame) {
        supp(v, "T4", "fixed frame with 为");
        continue;
      }
      if (parsed_) {
        int c = child_with(v, "ccomp");
        if (c > v) trig(v, "T4", "attribution verb with clausal complement",
                        {v, subtree(c).last});
      } else if (v < n_ &&
                 (uni::is_colon(form(v + 1)) || form(v + 1) == "\xE2\x80\x9C")) {
        trig(v, "T4", "degraded: attribution before quote");
      }
    }
  }

  // ---- S1: complement and subject clauses ------------------------------------

  void rule_s1() {
    if (!parsed_) return;
    for (int v = 1; v <= n_; ++v) {
      if (!is_verbal(pos(v)) || lex_.is_attribution_verb(form(v))) continue;
      for (int c : kids_[v]) {
        if (c > v && (rel(c) == "ccomp" || rel(c) == "xcomp")) {
          int p = subtree(c).first - 1;
          if (!is_construction_edge(p)) supp(p, "S1", "complement clause");
        }
        if (rel(c) == "csubj") {
          Span span = subtree(c);
          for (int p = span.first; p <= span.last + 1; ++p)
            if (!is_construction_edge(p)) supp(p, "S1", "subject clause");
        }
      }
    }
  }

  bool is_construction_edge(int p) const {
    for (const auto& s : t3_spans_)
      if (p == s.first - 1 || p == s.last) return true;
    for (const auto& s : s2x_spans_)
      if (p == s.first - 1 || p == s.last) return true;
    for (const auto& s : rc_spans_)
      if (p == s.first - 1 || p == s.last) return true;
    for (const auto& h : template_hits_)
      if (p == h.span.first - 1 || p == h.span.last) return true;
    return false;
  }

  // ---- S4: MSP particles -----------------------------------------------------

  void rule_s4() {
    for (int m = 1; m <= n_; ++m) {
      if (pos(m) != "MSP") continue;
      const std::string& f = form(m);
      if (f == "所" || f == "而" || f == "来") {
        supp(m - 1, "S4", "MSP particle");
        supp(m, "S4", "MSP particle");
      } else if (f == "以" || f == "去") {
        trig(m - 1, "S4", "purposive MSP; purpose-goal hint", {m, m});
      }
    }
  }

  // ---- S5: shared-complement coordination -------------------------------------

  void rule_s5() {
    if (!parsed_) return;
    auto has_object = [&](int v) {
      if (has_child(v, "dobj") || has_child(v, "ccomp") || has_child(v, "attr")) return true;
      // a BA/BEI marker child carries the displaced object
      for (int c : kids_[v])
        if (is_prep_pos(pos(c)) && (form(c) == "把" || form(c) == "将" || form(c) == "被"))
          return true;
      return false;
    };
    std::function<bool(int, int)> chain_object = [&](int v, int depth) {
      if (depth > 4) return false;
      if (has_object(v)) return true;
      int x = child_with(v, "xcomp");
      return x != 0 && chain_object(x, depth + 1);
    };
    for (int v2 = 1; v2 <= n_; ++v2) {
      if (rel(v2) != "conj" || !is_clause_verb(pos(v2)) || pos(v2) == "VC") continue;
      int v1 = head(v2);
      if (v1 <= 0 || v1 >= v2 || !is_verbal(pos(v1)) || pos(v1) == "VC") continue;
      if (rel(v1) == "rcmod") continue;
      // no comma between the conjuncts: tight coordination
      bool comma_between = any_in(v1, v2, [&](int i) { return uni::is_comma(form(i)); });
      if (comma_between) continue;
      bool ba_frame = any_in(subtree(v1).first, v1, [&](int i) {
        return (form(i) == "把" || form(i) == "将") && is_prep_pos(pos(i));
      });
      bool o1 = has_object(v1) || ba_frame;
      bool o2 = chain_object(v2, 0);
      if (o1 == o2) continue;  // both or neither: no shared gap
      int s = subtree(v2).first;
      supp(s - 1, "S5", "verbs share an explicit complement");
    }
  }

  // ---- S6: existential 有 ------------------------------------------------------

  void rule_s6() {
    if (!parsed_) {
      for (int v = 1; v <= n_; ++v)
        if (form(v) == "有" && pos(v) == "VE") {
          supp(v - 1, "S6", "existential");
          supp(v, "S6", "existential");
        }
      return;
    }
    for (int v = 1; v <= n_; ++v) {
      if (form(v) != "有" || pos(v) != "VE") continue;
      if (rel(v) == "rcmod" || inside_rcmod(v)) continue;
      supp(v - 1, "S6", "existential clause");
      supp(v, "S6", "existential clause");
      // the existential object and any comment clause after it stay together
      for (int c : kids_[v]) {
        if (rel(c) != "dobj") continue;
        int e = subtree(c).last;
        supp(e, "S6", "existential clause");
        supp(e + 1, "S6", "existential clause");
      }
    }
  }

  // ---- T8: parentheticals and references ---------------------------------------

  void rule_t8_parens() {
    for (size_t k = 0; k < paren_spans_.size(); ++k) {
      const Span s = paren_spans_[k];
      switch (paren_kinds_[k]) {
        case ParenKind::edu: {
          std::string note = "parenthetical";
          trig(s.first - 1, "T8", note, s);
          trig(s.last, "T8", note, s);
          break;
        }
        case ParenKind::core_arg:
          supp_range(s.first - 1, s.last, "S7", "inserted core argument");
          break;
        case ParenKind::citation_date:
          supp_range(s.first - 1, s.last, "S7", "citation date (heuristic)");
          break;
        case ParenKind::ipa:
          supp_range(s.first, s.last - 1, "S7", "IPA or math bracket");
          break;
      }
    }
  }

  void rule_t8_citations() {
    for (const auto& run : citation_runs_) {
      if (run.suppressed) {
        supp_range(run.span.first - 1, run.span.last, "S7", "title-attached citation");
        continue;
      }
      trig(run.span.first - 1, "T8", "supporting reference", run.span);
      trig(run.span.last, "T8", "supporting reference", run.span);
      supp_range(run.span.first, run.span.last - 1, "S7", "inside citation run");
    }
  }

  // ---- T9: dashes and colons -----------------------------------------------------

  void rule_t9() {
    for (int i = 1; i <= n_; ++i) {
      if (token_blocked(i)) continue;
      if (uni::is_long_dash(form(i)) && !token_in_spans(hyphen_pairs_, i))
        trig_nodash_shift(i - 1, "T9", "dash opens an embedded unit");
      if (uni::is_colon(form(i))) {
        bool adnominal = i > 1 && uni::is_citation_token(form(i - 1));
        if (!adnominal) trig(i, "T9", "non-adnominal colon");
      }
    }
  }

  // ---- T10: strong discourse cues ---------------------------------------------

  bool left_context_has_predicate(int position) const {
    return any_in(1, position, [&](int i) {
      return is_verbal(pos(i)) && !token_blocked(i);
    });
  }

  void rule_t10() {
    // single-token cues
    for (int i = 1; i <= n_; ++i) {
      if (token_blocked(i)) continue;
      auto m = lex_.match_cue(sent_, i);
      if (!m || m->entry->is_template()) continue;
      const std::string& f = form(i);
      if (prep_gated_cues().count(f)) {
        // prepositional cues segment through the S2 clausal route
        if (pos(i) != "CS") continue;
      }
      if (left_context_has_predicate(i - 1)) trig(i - 1, "T10", "strong discourse cue", {i, i});
    }
    // templates
    for (const auto& h : template_hits_) {
      switch (h.behavior) {
        case TemplateHit::Behavior::enclose:
          if (left_context_has_predicate(h.span.first - 1))
            trig(h.span.first - 1, "T10", "cue template", h.span);
          trig(h.span.last, "T10", "cue template", h.span);
          break;
        case TemplateHit::Behavior::before_close:
          if (left_context_has_predicate(h.span.last - 1))
            trig(h.span.last - 1, "T10", "cue template (correlative)", h.span);
          break;
        case TemplateHit::Behavior::after_close:
          trig(h.span.last, "T10", "cue template (closing)", h.span);
          break;
      }
    }
  }

  // ---- chunk engine: T5/T6/T7 at commas, T12/S3 fragments -----------------------

  bool token_in_embedded(int i) const {
    return token_in_spans(rc_spans_, i) || token_in_spans(t3_spans_, i) ||
           token_in_spans(s2x_spans_, i) || token_blocked(i) ||
           [&] {
             for (const auto& h : template_hits_)
               if (h.span.contains(i)) return true;
             return false;
           }();
  }

  int clause_start_before(int k) const {
    int s = 1;
    for (int i = 1; i < k; ++i) {
      if (uni::is_comma(form(i)) && !token_blocked(i)) s = i + 1;
      if (uni::is_colon(form(i)) && !token_blocked(i)) s = i + 1;
      const std::string& f = form(i);
      if (f == "\xE2\x80\x9C" || f == "\xE3\x80\x8C") s = i + 1;  // open quotes
    }
    return s;
  }

  void chunk_and_fragment_rules() {
    // top-level comma positions
    std::vector<int> commas;
    for (int i = 1; i < n_; ++i)
      if (uni::is_comma(form(i)) && !token_blocked(i)) commas.push_back(i);

    for (int k : commas) {
      int rbegin = k + 1;
      int rend = n_;
      for (int i = k + 1; i <= n_; ++i)
        if (uni::is_comma(form(i)) && !token_blocked(i)) {
          rend = i - 1;
          break;
        }
      // right chunk carries its own predicate outside embedded material
      int first_pred = 0;
      for (int i = rbegin; i <= rend; ++i) {
        if (is_verbal(pos(i)) && !token_in_embedded(i) && !inside_p_subtree(i)) {
          first_pred = i;
          break;
        }
      }
      int first_content = rbegin;
      while (first_content <= rend && uni::is_punct(form(first_content))) ++first_content;
      bool cue_led = first_content <= rend && is_single_cue(first_content);
      if (first_pred != 0 && !cue_led) {
        const char* rule = "T5";
        if (pos(first_pred) == "VA")
          rule = "T6";
        else if (pos(first_pred) == "VC" && rel(first_pred) != "conj")
          rule = "T7";
        trig(k, rule, "clause chunk with its own predicate", {rbegin, rend});
      }

      fragment_rule(k);
    }
  }

  // T12/S3: a clause-initial chunk without its own predicate is either a
  // stranded same-unit fragment (segmented) or a dislocated topic or preposed
  // adjunct (absorbed into what follows).
  void fragment_rule(int k) {
    int lbegin = clause_start_before(k);
    if (lbegin > 1 && !uni::is_colon(form(lbegin - 1)) && form(lbegin - 1) != "\xE2\x80\x9C" &&
        form(lbegin - 1) != "\xE3\x80\x8C")
      return;  // mid-sentence chunk
    bool verbless = !any_in(lbegin, k - 1, [&](int i) {
      if (!is_verbal(pos(i)) || token_blocked(i)) return false;
      if (!inside_p_subtree(i)) return true;
      // verbs inside clausal prepositional phrases still count as predicates
      return token_in_spans(s2x_spans_, i);
    });
    if (!verbless) return;

    // stranded fragment, case 1: topic NP plus an adjunct phrase reaching the comma
    bool t12 = false;
    if (parsed_) {
      int np = 0;
      for (int i = lbegin; i < k; ++i)
        if (is_nominal(pos(i)) && !inside_p_subtree(i) && !token_blocked(i)) {
          np = i;
          break;
        }
      if (np) {
        for (int i = np + 1; i < k; ++i) {
          if ((pos(i) == "P" || pos(i) == "LC") && !inside_p_subtree(i) &&
              subtree(i).last == k - 1) {
            t12 = true;
            break;
          }
        }
      }
    }
    // case 2: the material right after the comma opens an embedded unit
    if (!t12) {
      int after = k + 1;
      while (after <= n_ && pos(after) == "AD") ++after;
      if (after <= n_) {
        for (const auto& s : rc_spans_)
          if (s.first == after) t12 = true;
        for (const auto& h : template_hits_)
          if (h.span.first == after) t12 = true;
        for (size_t j = 0; j < paren_spans_.size(); ++j)
          if (paren_spans_[j].first == after && paren_kinds_[j] == ParenKind::edu) t12 = true;
      }
    }
    if (t12) {
      trig(k, "T12", "stranded left fragment (inferred)", {lbegin, k});
      return;
    }

    // a preposed prepositional or localizer phrase absorbs its comma
    for (int i = lbegin; i < k; ++i) {
      if ((pos(i) == "P" || pos(i) == "LC") && !inside_p_subtree(i) &&
          !token_in_spans(s2x_spans_, i)) {
        Span s = subtree(i);
        if (s.first == lbegin && s.last == k - 1) {
          supp(k, "S3", "preposed adjunct phrase");
          return;
        }
      }
    }
    // a fragment already holding a segmented construction is same-unit
    // territory; its boundary comes from the construction edges
    for (const auto& s : rc_spans_)
      if (s.first >= lbegin && s.last < k) return;
    for (size_t j = 0; j < paren_spans_.size(); ++j)
      if (paren_spans_[j].first >= lbegin && paren_spans_[j].last < k &&
          paren_kinds_[j] == ParenKind::edu)
        return;
    for (const auto& s : s2x_spans_)
      if (s.first >= lbegin && s.last < k) return;

    supp(k, "S3", "dislocated or fragment topic");
  }

  // ---- S7: blocked spans ---------------------------------------------------------

  void rule_s7() {
    for (const auto& s : title_spans_) supp_range(s.first, s.last - 1, "S7", "book title");
    for (const auto& s : math_spans_) supp_range(s.first, s.last - 1, "S7", "math span");
    for (const auto& s : foreign_runs_)
      supp_range(s.first, s.last - 1, "S7", "translanguaged run");
    for (const auto& s : hyphen_pairs_) {
      supp(s.first, "S7", "nominal combinator");
      supp(s.last, "S7", "nominal combinator");
    }
    for (int i = 1; i <= n_; ++i) {
      if (uni::is_semicolon(form(i))) {
        supp(i - 1, "S7", "semicolon enumeration");
        supp(i, "S7", "semicolon enumeration");
      }
      if (form(i) == "还有" && (pos(i) == "CC" || pos(i) == "VE")) {
        supp_range(std::max(1, i - 2), i, "S7", "single-token coordination");
      }
    }
  }
};

}  // namespace

Segmenter::Segmenter(SegmenterConfig config) : config_(std::move(config)) {
  lex_ = config_.lexicons ? config_.lexicons : &Lexicons::embedded();
}

std::vector<BoundaryCandidate> Segmenter::evaluate_rules(const Sentence& sentence) const {
  RuleEngine engine(sentence, *lex_, config_);
  if (config_.require_parse && !engine.parsed() && !sentence.empty())
    throw ParseError(ParseError::Kind::head_out_of_range,
                     "segmenter: sentence lacks a dependency parse and require_parse is set");
  return engine.run();
}

std::vector<EduSpan> Segmenter::resolve(const std::vector<BoundaryCandidate>& candidates,
                                        int sentence_len) {
  if (sentence_len <= 0) return {};
  std::set<int> suppressed;
  for (const auto& c : candidates)
    if (c.polarity == Polarity::suppress) suppressed.insert(c.position);

  // position p = a boundary before token p
  std::map<int, std::vector<const BoundaryCandidate*>> triggers;
  for (const auto& c : candidates) {
    if (c.polarity != Polarity::trigger) continue;
    if (c.position <= 1 || c.position > sentence_len) continue;
    if (suppressed.count(c.position)) continue;
    triggers[c.position].push_back(&c);
  }

  auto rules_at = [&](int pos) {
    std::vector<std::string> out;
    auto it = triggers.find(pos);
    if (it == triggers.end()) return out;
    auto by_credit = it->second;
    std::sort(by_credit.begin(), by_credit.end(),
              [](const BoundaryCandidate* a, const BoundaryCandidate* b) {
                int la = a->span_last - a->span_first;
                int lb = b->span_last - b->span_first;
                if (la != lb) return la > lb;                      // longest
                if (a->span_first != b->span_first) return a->span_first < b->span_first;
                return a->rule < b->rule;
              });
    for (const auto* c : by_credit)
      if (std::find(out.begin(), out.end(), c->rule) == out.end()) out.push_back(c->rule);
    return out;
  };

  std::vector<EduSpan> spans;
  int prev = 0;
  std::vector<int> positions;
  for (const auto& [pos, _] : triggers) positions.push_back(pos);
  for (size_t b = 0; b <= positions.size(); ++b) {
    EduSpan span;
    span.first_token = prev + 1;
    span.last_token = b < positions.size() ? positions[b] - 1 : sentence_len;
    if (b < positions.size()) {
      auto closing = rules_at(positions[b]);
      span.trace.insert(span.trace.end(), closing.begin(), closing.end());
    }
    if (b > 0) {
      auto opening = rules_at(positions[b - 1]);
      for (const auto& r : opening)
        if (std::find(span.trace.begin(), span.trace.end(), r) == span.trace.end())
          span.trace.push_back(r);
    }
    prev = span.last_token;
    spans.push_back(std::move(span));
  }
  return spans;
}

std::vector<EduSpan> Segmenter::segment_sentence(const Sentence& sentence) const {
  return segment_sentence_ex(sentence, 0).spans;
}

SentenceSegmentation Segmenter::segment_sentence_ex(const Sentence& sentence,
                                                    int sentence_index) const {
  SentenceSegmentation out;
  auto candidates = evaluate_rules(sentence);
  out.spans = resolve(candidates, static_cast<int>(sentence.size()));
  for (auto& s : out.spans) s.sentence_index = sentence_index;
  bool parsed = !sentence.empty();
  for (const Token& t : sentence)
    if (!t.head) parsed = false;
  if (!parsed && !sentence.empty())
    out.warnings.push_back("sentence " + std::to_string(sentence_index) +
                           ": no dependency parse; structural rules disabled");
  return out;
}

std::vector<EduSpan> Segmenter::segment_document(const AnalyzedDocument& doc) const {
  std::vector<EduSpan> spans;
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    auto part = segment_sentence_ex(doc.sentences[s], static_cast<int>(s)).spans;
    spans.insert(spans.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  }
  return spans;
}

}  // namespace gcdt
