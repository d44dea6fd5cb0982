#include <map>
#include <random>

#include "doctest.h"
#include "gcdt/metrics.hpp"

using namespace gcdt;

namespace {

std::vector<EduSpan> spans_from(int sentence, int len, const std::set<int>& splits) {
  std::vector<EduSpan> out;
  int prev = 0;
  auto cuts = splits;
  cuts.insert(len);
  for (int c : cuts) {
    out.push_back({sentence, prev + 1, c, {}});
    prev = c;
  }
  return out;
}

// Independent oracle: enumerate labeled constituents by an explicit stack walk
// and pool precision/recall counts with plain maps.
using Item = std::tuple<int, int, int, std::string>;

std::map<Item, int> oracle_items(const RstTree& t, bool nuc, bool rel) {
  std::map<Item, int> bag;
  if (!t.root) return bag;
  std::vector<std::pair<const RstNode*, std::pair<int, std::string>>> stack;
  stack.push_back({t.root.get(), {0, ""}});  // role 0 = nucleus
  while (!stack.empty()) {
    auto [node, edge] = stack.back();
    stack.pop_back();
    if (node->kind != NodeKind::leaf) {
      auto [f, l] = node_span(*node);
      bag[{f, l, nuc ? edge.first : 0, rel ? edge.second : std::string()}] += 1;
    }
    for (const auto& e : node->children)
      stack.push_back({e.child.get(), {e.role == Role::satellite ? 1 : 0, e.relation}});
  }
  return bag;
}

double oracle_f1(const RstTree& g, const RstTree& p, bool nuc, bool rel) {
  auto gb = oracle_items(g, nuc, rel);
  auto pb = oracle_items(p, nuc, rel);
  long tp = 0, gn = 0, pn = 0;
  for (const auto& [item, c] : gb) gn += c;
  for (const auto& [item, c] : pb) pn += c;
  for (const auto& [item, c] : pb) {
    auto it = gb.find(item);
    if (it != gb.end()) tp += std::min(c, it->second);
  }
  if (gn == 0 && pn == 0) return 1.0;
  double prec = pn == 0 ? 0.0 : double(tp) / pn;
  double rec = gn == 0 ? 0.0 : double(tp) / gn;
  return (prec + rec) == 0.0 ? 0.0 : 2 * prec * rec / (prec + rec);
}

RstTree left_branching3(const std::string& r1, const std::string& r2) {
  RstTree t;
  t.edus = {{"一", -1, -1}, {"二", -1, -1}, {"三", -1, -1}};
  std::vector<RstNodePtr> inner;
  inner.push_back(make_leaf(1));
  inner.push_back(make_leaf(2));
  std::vector<RstNodePtr> outer;
  outer.push_back(make_multinuc(r1, std::move(inner)));
  outer.push_back(make_leaf(3));
  t.root = make_multinuc(r2, std::move(outer));
  return t;
}

RstTree right_branching3(const std::string& r1, const std::string& r2) {
  RstTree t;
  t.edus = {{"一", -1, -1}, {"二", -1, -1}, {"三", -1, -1}};
  std::vector<RstNodePtr> inner;
  inner.push_back(make_leaf(2));
  inner.push_back(make_leaf(3));
  std::vector<RstNodePtr> outer;
  outer.push_back(make_leaf(1));
  outer.push_back(make_multinuc(r1, std::move(inner)));
  t.root = make_multinuc(r2, std::move(outer));
  return t;
}

RstTree ns3(const std::string& rel_left, const std::string& rel_right) {
  RstTree t;
  t.edus = {{"一", -1, -1}, {"二", -1, -1}, {"三", -1, -1}};
  std::vector<std::pair<RstNodePtr, std::string>> sats;
  sats.emplace_back(make_leaf(1), rel_left);
  sats.emplace_back(make_leaf(3), rel_right);
  t.root = make_span(make_leaf(2), std::move(sats));
  return t;
}

// trees over up to 5 edus in assorted shapes
std::vector<RstTree> fixture_family() {
  std::vector<RstTree> out;
  out.push_back(left_branching3("joint-list", "joint-sequence"));
  out.push_back(right_branching3("joint-list", "joint-sequence"));
  out.push_back(left_branching3("joint-list", "joint-list"));
  out.push_back(ns3("contingency-condition", "explanation-evidence"));
  out.push_back(ns3("causal-cause", "explanation-evidence"));
  {
    RstTree t;
    t.edus = {{"一", -1, -1}, {"二", -1, -1}, {"三", -1, -1}, {"四", -1, -1}, {"五", -1, -1}};
    std::vector<std::pair<RstNodePtr, std::string>> s1;
    s1.emplace_back(make_leaf(2), "elaboration-attribute");
    auto m1 = make_span(make_leaf(1), std::move(s1));
    std::vector<std::pair<RstNodePtr, std::string>> s2;
    s2.emplace_back(make_leaf(4), "elaboration-attribute");
    auto m2 = make_span(make_leaf(3), std::move(s2));
    std::vector<RstNodePtr> members;
    members.push_back(std::move(m1));
    members.push_back(std::move(m2));
    auto su = make_multinuc("same-unit", std::move(members));
    std::vector<std::pair<RstNodePtr, std::string>> s3;
    s3.emplace_back(make_leaf(5), "explanation-evidence");
    t.root = make_span(std::move(su), std::move(s3));
    out.push_back(std::move(t));
  }
  {
    RstTree t;
    t.edus = {{"一", -1, -1}, {"二", -1, -1}, {"三", -1, -1}, {"四", -1, -1}, {"五", -1, -1}};
    std::vector<RstNodePtr> members;
    members.push_back(make_leaf(1));
    members.push_back(make_leaf(2));
    std::vector<std::pair<RstNodePtr, std::string>> sats;
    sats.emplace_back(make_multinuc("joint-list", std::move(members)), "context-background");
    std::vector<RstNodePtr> rest;
    rest.push_back(make_span(make_leaf(3), std::move(sats)));
    rest.push_back(make_leaf(4));
    rest.push_back(make_leaf(5));
    t.root = make_multinuc("joint-sequence", std::move(rest));
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

TEST_CASE("boundary: identical segmentations score one") {
  auto g = spans_from(0, 10, {3, 7});
  auto s = boundary_scores(g, g);
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.f1 == 1.0);
}

TEST_CASE("boundary: hand-enumerated counts") {
  // gold splits {3,7}, pred {3,8}: one shared boundary out of two on each side
  auto g = spans_from(0, 10, {3, 7});
  auto p = spans_from(0, 10, {3, 8});
  auto s = boundary_scores(g, p);
  CHECK(s.true_pos == 1);
  CHECK(s.pred_total == 2);
  CHECK(s.gold_total == 2);
  CHECK(s.precision == doctest::Approx(0.5));
  CHECK(s.recall == doctest::Approx(0.5));
  CHECK(s.f1 == doctest::Approx(0.5));
}

TEST_CASE("boundary: empty against empty scores one") {
  auto g = spans_from(0, 5, {});
  auto s = boundary_scores(g, g);
  CHECK(s.f1 == 1.0);
  CHECK(s.gold_total == 0);
}

TEST_CASE("boundary: five constructed pairs match hand counts") {
  struct Case {
    std::set<int> gold, pred;
    long tp, pn, gn;
  };
  std::vector<Case> cases = {
      {{3, 7}, {3, 8}, 1, 2, 2}, {{2}, {2}, 1, 1, 1},          {{}, {4}, 0, 1, 0},
      {{5, 6}, {}, 0, 0, 2},     {{2, 4, 6}, {2, 5, 6}, 2, 3, 3},
  };
  for (const auto& c : cases) {
    auto s = boundary_scores(spans_from(0, 9, c.gold), spans_from(0, 9, c.pred));
    CHECK(s.true_pos == c.tp);
    CHECK(s.pred_total == c.pn);
    CHECK(s.gold_total == c.gn);
  }
}

TEST_CASE("boundary: coverage mismatch throws") {
  CHECK_THROWS_AS(boundary_scores(spans_from(0, 10, {3}), spans_from(0, 9, {3})), ScoreError);
  CHECK_THROWS_AS(boundary_scores(spans_from(0, 10, {3}), spans_from(1, 10, {3})), ScoreError);
}

TEST_CASE("boundary: swapping gold and pred swaps precision and recall") {
  std::mt19937 rng(7);
  for (int round = 0; round < 100; ++round) {
    int len = std::uniform_int_distribution<int>(2, 20)(rng);
    auto pick = [&] {
      std::set<int> s;
      int k = std::uniform_int_distribution<int>(0, len / 2)(rng);
      for (int i = 0; i < k; ++i) s.insert(std::uniform_int_distribution<int>(1, len - 1)(rng));
      return s;
    };
    auto a = spans_from(0, len, pick());
    auto b = spans_from(0, len, pick());
    auto ab = boundary_scores(a, b);
    auto ba = boundary_scores(b, a);
    CHECK(ab.precision == doctest::Approx(ba.recall));
    CHECK(ab.recall == doctest::Approx(ba.precision));
    CHECK(ab.f1 == doctest::Approx(ba.f1));
    CHECK(ab.f1 >= 0.0);
    CHECK(ab.f1 <= 1.0);
  }
}

TEST_CASE("boundary: removing a wrong predicted boundary never lowers precision") {
  std::mt19937 rng(11);
  for (int round = 0; round < 100; ++round) {
    int len = 12;
    std::set<int> gold = {3, 8};
    std::set<int> pred = {3, 5, 9};
    // drop one wrong boundary
    auto base = boundary_scores(spans_from(0, len, gold), spans_from(0, len, pred));
    for (int wrong : {5, 9}) {
      auto reduced = pred;
      reduced.erase(wrong);
      auto s = boundary_scores(spans_from(0, len, gold), spans_from(0, len, reduced));
      CHECK(s.precision >= base.precision);
    }
  }
}

TEST_CASE("parseval: a tree against itself scores one everywhere") {
  for (const auto& t : fixture_family()) {
    auto s = parseval_scores(t, t);
    CHECK(s.span_f1 == 1.0);
    CHECK(s.nuclearity_f1 == 1.0);
    CHECK(s.relation_f1 == 1.0);
  }
}

TEST_CASE("parseval: one relation label difference on a 3-EDU pair") {
  // The label on the inner constituent's incoming edge differs; spans and
  // nuclearity agree. Exhaustive listing: constituents are the root (matching
  // blank relation) and the inner node, so relation F1 is exactly 1/2.
  auto gold = left_branching3("joint-list", "joint-sequence");
  auto pred = left_branching3("joint-list", "joint-other");
  auto s = parseval_scores(gold, pred);
  CHECK(s.span_f1 == 1.0);
  CHECK(s.nuclearity_f1 == 1.0);
  CHECK(s.relation_f1 == doctest::Approx(oracle_f1(gold, pred, true, true)));
  CHECK(s.relation_f1 == doctest::Approx(0.5));
}

TEST_CASE("parseval: left versus right branching") {
  auto gold = left_branching3("joint-list", "joint-list");
  auto pred = right_branching3("joint-list", "joint-list");
  auto s = parseval_scores(gold, pred);
  CHECK(s.span_f1 == doctest::Approx(oracle_f1(gold, pred, false, false)));
  CHECK(s.span_f1 == doctest::Approx(0.5));  // only the root span matches
}

TEST_CASE("parseval: oracle equivalence over all fixture pairs") {
  auto family = fixture_family();
  for (const auto& g : family) {
    for (const auto& p : family) {
      if (g.edus.size() != p.edus.size()) continue;
      auto s = parseval_scores(g, p);
      CHECK(s.span_f1 == doctest::Approx(oracle_f1(g, p, false, false)));
      CHECK(s.nuclearity_f1 == doctest::Approx(oracle_f1(g, p, true, false)));
      CHECK(s.relation_f1 == doctest::Approx(oracle_f1(g, p, true, true)));
      CHECK(s.span_f1 >= s.nuclearity_f1);
      CHECK(s.nuclearity_f1 >= s.relation_f1);
    }
  }
}

TEST_CASE("parseval: EDU mismatch throws") {
  auto a = left_branching3("joint-list", "joint-list");
  auto b = left_branching3("joint-list", "joint-list");
  b.edus[1].text = "不同";
  CHECK_THROWS_AS(parseval_scores(a, b), ScoreError);
  RstTree c;
  c.edus = {{"一", -1, -1}};
  c.root = make_leaf(1);
  CHECK_THROWS_AS(parseval_scores(a, c), ScoreError);
}
