#include "gcdt/lexicons.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "unicode.hpp"

namespace gcdt {

namespace {
#include "embedded_lexicons.inc"

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::pair<std::string, std::string> split_entry(const std::string& line) {
  auto tab = line.find('\t');
  if (tab == std::string::npos) return {line, ""};
  return {line.substr(0, tab), line.substr(tab + 1)};
}

std::optional<CueCategory> category_by_name(const std::string& s) {
  static const std::map<std::string, CueCategory> m = {
      {"adversarial", CueCategory::adversarial},
      {"attributional", CueCategory::attributional},
      {"causal", CueCategory::causal},
      {"circumstantial", CueCategory::circumstantial},
      {"coordinating", CueCategory::coordinating},
      {"elaborating", CueCategory::elaborating},
      {"topic", CueCategory::topic},
  };
  auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::optional<TrickyClass> tricky_by_name(const std::string& s) {
  static const std::map<std::string, TrickyClass> m = {
      {"preposition", TrickyClass::preposition},
      {"localizer", TrickyClass::localizer},
      {"adverb", TrickyClass::adverb},
      {"verb", TrickyClass::verb},
  };
  auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

bool class_matches_pos(TrickyClass cls, const std::string& pos) {
  switch (cls) {
    case TrickyClass::preposition: return pos == "P" || pos == "LB" || pos == "SB" || pos == "BA";
    case TrickyClass::localizer: return pos == "LC";
    case TrickyClass::adverb: return pos == "AD";
    case TrickyClass::verb: return pos == "VV" || pos == "VC" || pos == "VE" || pos == "VA";
  }
  return false;
}

}  // namespace

const char* cue_category_name(CueCategory c) {
  switch (c) {
    case CueCategory::adversarial: return "adversarial";
    case CueCategory::attributional: return "attributional";
    case CueCategory::causal: return "causal";
    case CueCategory::circumstantial: return "circumstantial";
    case CueCategory::coordinating: return "coordinating";
    case CueCategory::elaborating: return "elaborating";
    case CueCategory::topic: return "topic";
  }
  return "?";
}

const char* tricky_class_name(TrickyClass c) {
  switch (c) {
    case TrickyClass::preposition: return "preposition";
    case TrickyClass::localizer: return "localizer";
    case TrickyClass::adverb: return "adverb";
    case TrickyClass::verb: return "verb";
  }
  return "?";
}

void Lexicons::load(const std::string& verbs_tsv, const std::string& cues_tsv,
                    const std::string& tricky_tsv) {
  std::set<std::string> seen;
  for (const auto& line : split_lines(verbs_tsv)) {
    if (line.empty() || line[0] == '#') continue;
    auto [surface, gloss] = split_entry(line);
    if (!seen.insert(surface).second)
      throw ParseError(ParseError::Kind::malformed_metadata_value,
                       "lexicon: duplicate attribution verb " + surface, 0, surface);
    attribution_verbs_.push_back(surface);
  }

  std::optional<CueCategory> cat;
  std::map<CueCategory, std::set<std::string>> seen_cues;
  for (const auto& line : split_lines(cues_tsv)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string name = line.substr(1);
      name.erase(0, name.find_first_not_of(' '));
      if (auto c = category_by_name(name)) cat = c;
      continue;
    }
    if (!cat)
      throw ParseError(ParseError::Kind::malformed_metadata_value,
                       "lexicon: cue entry before any category header");
    auto [surface, gloss] = split_entry(line);
    if (!seen_cues[*cat].insert(surface).second)
      throw ParseError(ParseError::Kind::malformed_metadata_value,
                       "lexicon: duplicate cue " + surface + " in category " +
                           cue_category_name(*cat),
                       0, surface);
    cues_.push_back({surface, *cat, gloss});
  }

  std::optional<TrickyClass> cls;
  std::map<TrickyClass, std::set<std::string>> seen_tricky;
  for (const auto& line : split_lines(tricky_tsv)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string name = line.substr(1);
      name.erase(0, name.find_first_not_of(' '));
      if (auto c = tricky_by_name(name)) cls = c;
      continue;
    }
    if (!cls)
      throw ParseError(ParseError::Kind::malformed_metadata_value,
                       "lexicon: tricky entry before any class header");
    auto [surface, note] = split_entry(line);
    if (!seen_tricky[*cls].insert(surface).second)
      throw ParseError(ParseError::Kind::malformed_metadata_value,
                       "lexicon: duplicate tricky token " + surface, 0, surface);
    tricky_.push_back({surface, *cls, note});
  }
}

const Lexicons& Lexicons::embedded() {
  static const Lexicons instance = [] {
    Lexicons lex;
    lex.load(kAttributionVerbsTsv, kDiscourseCuesTsv, kTrickyTokensTsv);
    return lex;
  }();
  return instance;
}

Lexicons Lexicons::from_directory(const std::string& dir) {
  Lexicons lex;
  lex.load(read_file(dir + "/attribution_verbs.tsv"), read_file(dir + "/discourse_cues.tsv"),
           read_file(dir + "/tricky_tokens.tsv"));
  return lex;
}

bool Lexicons::is_attribution_verb(const std::string& form) const {
  return std::find(attribution_verbs_.begin(), attribution_verbs_.end(), form) !=
         attribution_verbs_.end();
}

std::optional<CueMatch> Lexicons::match_cue(std::span<const Token> sentence, int start) const {
  if (start < 1 || start > static_cast<int>(sentence.size())) return std::nullopt;
  const std::string& first = sentence[start - 1].form;

  std::optional<CueMatch> best;
  auto consider = [&](const CueEntry& e, int last) {
    if (!best || last - start > best->last_token - best->first_token)
      best = CueMatch{&e, start, last};
  };

  for (const auto& e : cues_) {
    if (!e.is_template()) {
      if (e.surface == first) consider(e, start);
      continue;
    }
    auto gap = e.surface.find(CueEntry::kGap);
    std::string opener = e.surface.substr(0, gap);
    std::string closer = e.surface.substr(gap + 3);

    // 越…越…: both parts are prefixes of their tokens (e.g. 越多 … 越).
    if (!closer.empty() && closer.size() >= 3 && closer.substr(closer.size() - 3) == "\xE2\x80\xA6")
      closer = closer.substr(0, closer.size() - 3);
    bool prefix_mode = opener == closer && !opener.empty();

    if (opener.empty()) continue;  // closer-only templates don't match forward
    bool opener_ok = prefix_mode ? first.rfind(opener, 0) == 0 : first == opener;
    if (!opener_ok) continue;

    for (int j = start + 1; j <= static_cast<int>(sentence.size()); ++j) {
      const std::string& f = sentence[j - 1].form;
      bool closer_ok = prefix_mode ? f.rfind(closer, 0) == 0 : f == closer;
      if (!closer_ok) continue;
      // the gap must hold at least one token unless the opener token itself
      // carries gap material (prefix mode)
      if (!prefix_mode && j == start + 1) continue;
      consider(e, j);
      break;
    }
  }

  // closer-only templates (…的话): match when the start token is the closer.
  for (const auto& e : cues_) {
    if (!e.is_template()) continue;
    auto gap = e.surface.find(CueEntry::kGap);
    if (gap != 0) continue;
    std::string closer = e.surface.substr(3);
    if (first == closer) consider(e, start);
  }

  return best;
}

std::optional<TrickyLookup> Lexicons::tricky_class(const std::string& form,
                                                   const std::string& pos) const {
  std::vector<TrickyToken> hits;
  for (const auto& t : tricky_)
    if (t.surface == form) hits.push_back(t);
  if (hits.empty()) return std::nullopt;

  TrickyLookup out;
  for (const auto& t : hits) {
    if (class_matches_pos(t.cls, pos)) {
      out.consistent = t;
      return out;
    }
  }
  out.inconsistent = std::move(hits);
  return out;
}

}  // namespace gcdt
