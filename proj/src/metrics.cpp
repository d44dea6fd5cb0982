#include "gcdt/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace gcdt {

namespace {

// sentence -> (length, internal split positions)
std::map<int, std::pair<int, std::set<int>>> boundary_map(const std::vector<EduSpan>& spans) {
  std::map<int, std::pair<int, std::set<int>>> out;
  for (const auto& s : spans) {
    auto& [len, splits] = out[s.sentence_index];
    len = std::max(len, s.last_token);
    splits.insert(s.last_token);
  }
  for (auto& [sent, entry] : out) entry.second.erase(entry.first);  // drop the sentence edge
  return out;
}

double safe_div(long a, long b) { return b == 0 ? 0.0 : static_cast<double>(a) / b; }

}  // namespace

BoundaryCounts boundary_counts(const std::vector<EduSpan>& gold,
                               const std::vector<EduSpan>& pred) {
  auto g = boundary_map(gold);
  auto p = boundary_map(pred);

  if (g.size() != p.size())
    throw ScoreError("CoverageMismatch: segmentations cover different sentence sets");
  for (const auto& [sent, entry] : g) {
    auto it = p.find(sent);
    if (it == p.end() || it->second.first != entry.first)
      throw ScoreError("CoverageMismatch: sentence " + std::to_string(sent) +
                       " differs in token coverage");
  }

  BoundaryCounts c;
  for (const auto& [sent, entry] : g) {
    const auto& gs = entry.second;
    const auto& ps = p[sent].second;
    c.gold_total += static_cast<long>(gs.size());
    c.pred_total += static_cast<long>(ps.size());
    for (int b : ps)
      if (gs.count(b)) ++c.true_pos;
  }
  return c;
}

BoundaryScores scores_from_counts(const BoundaryCounts& c) {
  BoundaryScores s;
  s.true_pos = c.true_pos;
  s.pred_total = c.pred_total;
  s.gold_total = c.gold_total;
  if (c.pred_total == 0 && c.gold_total == 0) {
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  s.precision = c.pred_total == 0 ? 0.0 : safe_div(c.true_pos, c.pred_total);
  s.recall = c.gold_total == 0 ? 0.0 : safe_div(c.true_pos, c.gold_total);
  s.f1 = (s.precision + s.recall) == 0.0 ? 0.0
                                         : 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

BoundaryScores boundary_scores(const std::vector<EduSpan>& gold,
                               const std::vector<EduSpan>& pred) {
  return scores_from_counts(boundary_counts(gold, pred));
}

namespace {

struct Constituent {
  int first, last;
  Role role;             // role of the node on its incoming edge
  std::string relation;  // relation on its incoming edge
};

void collect(const RstNode& n, Role role, const std::string& relation,
             std::vector<Constituent>& out) {
  if (n.kind != NodeKind::leaf) {
    auto [f, l] = node_span(n);
    out.push_back({f, l, role, relation});
  }
  for (const auto& e : n.children) collect(*e.child, e.role, e.relation, out);
}

long matching(std::vector<std::tuple<int, int, int, std::string>> a,
              std::vector<std::tuple<int, int, int, std::string>> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::tuple<int, int, int, std::string>> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
  return static_cast<long>(inter.size());
}

double micro_f1(long tp, long pred, long gold) {
  if (pred == 0 && gold == 0) return 1.0;
  double p = pred == 0 ? 0.0 : static_cast<double>(tp) / pred;
  double r = gold == 0 ? 0.0 : static_cast<double>(tp) / gold;
  return (p + r) == 0.0 ? 0.0 : 2 * p * r / (p + r);
}

}  // namespace

ParsevalScores parseval_scores(const RstTree& gold, const RstTree& pred) {
  if (gold.edus.size() != pred.edus.size())
    throw ScoreError("EduMismatch: trees have different EDU counts");
  for (size_t i = 0; i < gold.edus.size(); ++i)
    if (gold.edus[i].text != pred.edus[i].text)
      throw ScoreError("EduMismatch: EDU " + std::to_string(i + 1) + " differs");

  std::vector<Constituent> g, p;
  if (gold.root) collect(*gold.root, Role::nucleus, "", g);
  if (pred.root) collect(*pred.root, Role::nucleus, "", p);

  auto project = [](const std::vector<Constituent>& v, bool with_nuc, bool with_rel) {
    std::vector<std::tuple<int, int, int, std::string>> out;
    out.reserve(v.size());
    for (const auto& c : v)
      out.push_back({c.first, c.last, with_nuc ? static_cast<int>(c.role) : 0,
                     with_rel ? c.relation : std::string()});
    return out;
  };

  ParsevalScores s;
  const long gn = static_cast<long>(g.size());
  const long pn = static_cast<long>(p.size());
  s.span_f1 = micro_f1(matching(project(g, false, false), project(p, false, false)), pn, gn);
  s.nuclearity_f1 = micro_f1(matching(project(g, true, false), project(p, true, false)), pn, gn);
  s.relation_f1 = micro_f1(matching(project(g, true, true), project(p, true, true)), pn, gn);
  return s;
}

}  // namespace gcdt
