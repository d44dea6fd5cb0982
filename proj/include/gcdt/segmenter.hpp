// Deterministic rule-based EDU segmentation over dependency-parsed sentences.
//
// Trigger rules T1-T12 and suppression rules S1-S7 fire boundary candidates;
// resolve() places a boundary where a trigger fires and no suppression covers
// the position. Suppression wins ties.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "gcdt/corpus_io.hpp"
#include "gcdt/lexicons.hpp"

namespace gcdt {

enum class Polarity { trigger, suppress };

struct BoundaryCandidate {
  // Inter-token index: a boundary before token `position` (1-based), so a
  // candidate at p splits tokens 1..p-1 from p..n. Sentence edges are
  // implicit; valid positions satisfy 1 < position <= sentence length.
  int position = 0;
  std::string rule;  // T1..T12, S1..S7
  Polarity polarity = Polarity::trigger;
  std::string note;
  // Extent of the construction that fired, for trace credit.
  int span_first = 0, span_last = 0;
};

struct EduSpan {
  int sentence_index = 0;
  int first_token = 1;  // 1-based inclusive
  int last_token = 1;
  std::vector<std::string> trace;  // winning rule ids that opened/closed it

  bool operator==(const EduSpan& o) const {
    return sentence_index == o.sentence_index && first_token == o.first_token &&
           last_token == o.last_token;
  }
};

struct SegmenterConfig {
  std::set<std::string> disabled_rules;  // by id
  bool require_parse = false;            // fail instead of degrading
  const Lexicons* lexicons = nullptr;    // default: embedded
};

struct SentenceSegmentation {
  std::vector<EduSpan> spans;
  std::vector<std::string> warnings;  // e.g. degraded mode notes
};

class Segmenter {
 public:
  explicit Segmenter(SegmenterConfig config = {});

  std::vector<BoundaryCandidate> evaluate_rules(const Sentence& sentence) const;

  // Pure arithmetic: applies suppression precedence and partitions 1..len.
  static std::vector<EduSpan> resolve(const std::vector<BoundaryCandidate>& candidates,
                                      int sentence_len);

  std::vector<EduSpan> segment_sentence(const Sentence& sentence) const;
  SentenceSegmentation segment_sentence_ex(const Sentence& sentence, int sentence_index = 0) const;

  std::vector<EduSpan> segment_document(const AnalyzedDocument& doc) const;

  const SegmenterConfig& config() const { return config_; }

 private:
  SegmenterConfig config_;
  const Lexicons* lex_;
};

}  // namespace gcdt
