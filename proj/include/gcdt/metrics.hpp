// Agreement scores between segmentations and between RST trees.
#pragma once

#include <stdexcept>
#include <vector>

#include "gcdt/rst_model.hpp"
#include "gcdt/segmenter.hpp"

namespace gcdt {

struct ScoreError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundaryScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long true_pos = 0;
  long pred_total = 0;
  long gold_total = 0;
};

struct ParsevalScores {
  double span_f1 = 0.0;
  double nuclearity_f1 = 0.0;
  double relation_f1 = 0.0;
};

// Boundaries compared as sets of sentence-internal split positions; sentence
// edges excluded. 0/0 counts score 1.0 when both sides are empty, else 0.0.
// Throws ScoreError (CoverageMismatch) if the token coverage differs.
BoundaryScores boundary_scores(const std::vector<EduSpan>& gold,
                               const std::vector<EduSpan>& pred);

// Pooled counts across many sentence pairs (micro average).
struct BoundaryCounts {
  long true_pos = 0, pred_total = 0, gold_total = 0;
  void add(const BoundaryCounts& o) {
    true_pos += o.true_pos;
    pred_total += o.pred_total;
    gold_total += o.gold_total;
  }
};
BoundaryCounts boundary_counts(const std::vector<EduSpan>& gold, const std::vector<EduSpan>& pred);
BoundaryScores scores_from_counts(const BoundaryCounts& c);

// Constituents compared as (span), (span+nuclearity), (span+nuclearity+
// relation) multisets over internal nodes; micro-averaged F1.
// Throws ScoreError (EduMismatch) if the EDU inventories differ.
ParsevalScores parseval_scores(const RstTree& gold, const RstTree& pred);

}  // namespace gcdt
