// Closed word lists from the annotation manual: attribution verbs, strong
// discourse cues by category, and tricky-token POS classes.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcdt/corpus_io.hpp"

namespace gcdt {

enum class CueCategory {
  adversarial,
  attributional,
  causal,
  circumstantial,
  coordinating,
  elaborating,
  topic,
};

const char* cue_category_name(CueCategory c);

struct CueEntry {
  // Surface form; two-part templates carry an explicit gap marker [GAP],
  // e.g. the topic pattern with an opener and a closer around a complement.
  std::string surface;
  CueCategory category = CueCategory::adversarial;
  std::string gloss;

  bool is_template() const { return surface.find(kGap) != std::string::npos; }
  static constexpr const char* kGap = "\xE2\x80\xA6";  // HORIZONTAL ELLIPSIS
};

enum class TrickyClass { preposition, localizer, adverb, verb };

const char* tricky_class_name(TrickyClass c);

struct TrickyToken {
  std::string surface;
  TrickyClass cls = TrickyClass::preposition;
  std::string note;  // disambiguation hint from the manual
};

struct CueMatch {
  const CueEntry* entry = nullptr;
  int first_token = 0;  // 1-based, inclusive
  int last_token = 0;
};

struct TrickyLookup {
  // Entry whose class agrees with the supplied POS tag, if any.
  std::optional<TrickyToken> consistent;
  // All table entries for the surface when no class agrees (for diagnostics).
  std::vector<TrickyToken> inconsistent;
};

class Lexicons {
 public:
  // Loads the embedded lists. Throws ParseError on malformed data or
  // duplicate surfaces within a category.
  static const Lexicons& embedded();
  // Loads from a directory holding attribution_verbs.tsv, discourse_cues.tsv,
  // tricky_tokens.tsv (same format as the embedded data).
  static Lexicons from_directory(const std::string& dir);

  bool is_attribution_verb(const std::string& form) const;

  // Longest cue match starting at `start` (1-based) in the sentence window.
  // Templates match only when the gap holds at least one token and the
  // closing part occurs in the same sentence.
  std::optional<CueMatch> match_cue(std::span<const Token> sentence, int start) const;

  std::optional<TrickyLookup> tricky_class(const std::string& form, const std::string& pos) const;

  const std::vector<CueEntry>& cues() const { return cues_; }
  const std::vector<std::string>& attribution_verbs() const { return attribution_verbs_; }
  const std::vector<TrickyToken>& tricky_tokens() const { return tricky_; }

 private:
  Lexicons() = default;
  void load(const std::string& verbs_tsv, const std::string& cues_tsv,
            const std::string& tricky_tsv);

  std::vector<std::string> attribution_verbs_;
  std::vector<CueEntry> cues_;
  std::vector<TrickyToken> tricky_;
};

}  // namespace gcdt
