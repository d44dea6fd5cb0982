#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "gcdt/corpus_io.hpp"

using namespace gcdt;

namespace {

std::string fixture(const std::string& rel) { return std::string(GCDT_FIXTURE_DIR) + "/" + rel; }

std::string header() {
  return "title: T\n"
         "shortTitle: aging\n"
         "type: academic\n"
         "author: A\n"
         "dateCreated: 2019-03-11\n"
         "dateModified: XXXX-XX-XX\n"
         "dateCollected: 2022-02-01\n"
         "sourceURL: https://example.org/x\n"
         "speakerCount: 0\n"
         "speakerList: none\n\n";
}

}  // namespace

TEST_CASE("raw: text id is corpus, genre and short title joined") {
  auto [meta, st] = parse_raw_document(header() + "A\n");
  CHECK(meta.text_id == "gcdt_academic_aging");
  CHECK(meta.genre == "academic");
  CHECK(meta.date_modified == "XXXX-XX-XX");
}

TEST_CASE("raw: blank line splits paragraphs, line feed splits sentences") {
  auto [meta, st] = parse_raw_document(header() + "A\n\nB\n");
  CHECK(st.sentences.size() == 2);
  REQUIRE(st.paragraphs.size() == 2);
  CHECK(st.paragraphs[0] == std::pair<int, int>{0, 1});
  CHECK(st.paragraphs[1] == std::pair<int, int>{1, 2});
}

TEST_CASE("raw: section markers open sections at the next paragraph") {
  auto [meta, st] = parse_raw_document(header() + "<section/>\nA\nB\n\n<subsection/>\nC\n");
  REQUIRE(st.sections.size() == 2);
  CHECK(st.sections[0] == Section{1, 0});
  CHECK(st.sections[1] == Section{2, 1});
  REQUIRE(st.paragraphs.size() == 2);
  CHECK(st.paragraphs[0] == std::pair<int, int>{0, 2});
  CHECK(st.paragraphs[1] == std::pair<int, int>{2, 3});
  CHECK(st.sentences.size() == 3);
}

TEST_CASE("raw: errors") {
  CHECK_THROWS_WITH_AS(parse_raw_document("title: x\n\nA\n"), doctest::Contains("shortTitle"),
                       ParseError);
  CHECK_THROWS_AS(parse_raw_document(header() + "text <section/> inline\n"), ParseError);
  CHECK_THROWS_AS(parse_raw_document(header()), ParseError);  // empty body
  // speaker invariants
  std::string bad = header();
  bad.replace(bad.find("speakerCount: 0"), 15, "speakerCount: 2");
  CHECK_THROWS_AS(parse_raw_document(bad + "A\n"), ParseError);
}

TEST_CASE("raw: canonical round trip") {
  for (const char* name : {"ex124.txt", "ex128.txt", "aging.txt", "ex124_nobreak.txt"}) {
    auto parsed = parse_raw_document(read_file(fixture("raw/") + name));
    std::string canonical = serialize_raw_document(parsed.first, parsed.second);
    auto reparsed = parse_raw_document(canonical);
    CHECK(reparsed.first == parsed.first);
    CHECK(reparsed.second == parsed.second);
    CHECK(serialize_raw_document(reparsed.first, reparsed.second) == canonical);
  }
}

TEST_CASE("raw: no sections means no marker lines") {
  auto parsed = parse_raw_document(header() + "A\nB\n");
  std::string canonical = serialize_raw_document(parsed.first, parsed.second);
  CHECK(canonical.find("section") == std::string::npos);
}

TEST_CASE("raw: unknown dates are emitted verbatim") {
  auto parsed = parse_raw_document(header() + "A\n");
  std::string canonical = serialize_raw_document(parsed.first, parsed.second);
  CHECK(canonical.find("dateModified: XXXX-XX-XX") != std::string::npos);
  CHECK(canonical.find("dateCreated: 2019-03-11") != std::string::npos);
}

TEST_CASE("conllx: empty input gives no sentences") {
  CHECK(parse_conllx("").empty());
  CHECK(parse_conllx("\n\n").empty());
}

TEST_CASE("conllx: two-token block with root at token 2") {
  std::string block =
      "1\tA\t_\tNN\tNN\t_\t2\tnsubj\t_\t_\n"
      "2\tB\t_\tVV\tVV\t_\t0\troot\t_\t_\n";
  auto sents = parse_conllx(block);
  REQUIRE(sents.size() == 1);
  REQUIRE(sents[0].size() == 2);
  CHECK(sents[0][1].head == 0);
  CHECK(sents[0][0].pos == "NN");
  CHECK(sents[0][0].deprel == "nsubj");
}

TEST_CASE("conllx: errors carry line numbers") {
  CHECK_THROWS_AS(parse_conllx("1\tA\tX\n"), ParseError);  // column count
  CHECK_THROWS_AS(parse_conllx("x\tA\t_\tNN\tNN\t_\t0\troot\t_\t_\n"), ParseError);
  // head out of range in a 3-token sentence
  std::string block =
      "1\tA\t_\tNN\tNN\t_\t2\tdep\t_\t_\n"
      "2\tB\t_\tVV\tVV\t_\t0\troot\t_\t_\n"
      "3\tC\t_\tNN\tNN\t_\t5\tdep\t_\t_\n";
  try {
    parse_conllx(block);
    FAIL("expected HeadOutOfRange");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::head_out_of_range);
    CHECK(e.line == 3);
  }
  // self-headed token
  CHECK_THROWS_AS(parse_conllx("1\tA\t_\tNN\tNN\t_\t1\tdep\t_\t_\n"), ParseError);
  // two roots
  std::string two_roots =
      "1\tA\t_\tVV\tVV\t_\t0\troot\t_\t_\n"
      "2\tB\t_\tVV\tVV\t_\t0\troot\t_\t_\n";
  CHECK_THROWS_AS(parse_conllx(two_roots), ParseError);
}

TEST_CASE("align: matching forms reproduce the raw sentence") {
  auto parsed = parse_raw_document(header() + "他 是 密友 。\n");
  std::string block =
      "1\t他\t_\tPN\tPN\t_\t2\tnsubj\t_\t_\n"
      "2\t是\t_\tVC\tVC\t_\t0\troot\t_\t_\n"
      "3\t密友\t_\tNN\tNN\t_\t2\tattr\t_\t_\n"
      "4\t。\t_\tPU\tPU\t_\t2\tpunct\t_\t_\n";
  auto doc = align(parsed, parse_conllx(block));
  CHECK(doc.sentences.size() == 1);
  CHECK(doc.sentences[0].size() == 4);
}

TEST_CASE("align: sentence count mismatch") {
  auto parsed = parse_raw_document(header() + "A\nB\nC\n");
  std::string block =
      "1\tA\t_\tNN\tNN\t_\t0\troot\t_\t_\n\n"
      "1\tB\t_\tNN\tNN\t_\t0\troot\t_\t_\n";
  CHECK_THROWS_AS(align(parsed, parse_conllx(block)), ParseError);
}

TEST_CASE("align: first divergent character is reported") {
  auto parsed = parse_raw_document(header() + "他是密友。\n");
  std::string block =
      "1\t他\t_\tPN\tPN\t_\t2\tnsubj\t_\t_\n"
      "2\t是\t_\tVC\tVC\t_\t0\troot\t_\t_\n"
      "3\t挚友\t_\tNN\tNN\t_\t2\tattr\t_\t_\n"
      "4\t。\t_\tPU\tPU\t_\t2\tpunct\t_\t_\n";
  try {
    align(parsed, parse_conllx(block));
    FAIL("expected TextMismatch");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::text_mismatch);
    CHECK(e.detail == "0:2");
  }
}

TEST_CASE("rs3: single segment parses to a single-leaf tree") {
  std::string text =
      "<rst><header><relations/></header>"
      "<body><segment id=\"1\">一 句 话 。</segment></body></rst>";
  auto tree = parse_rs3(text);
  REQUIRE(tree.edus.size() == 1);
  REQUIRE(tree.root);
  CHECK(tree.root->kind == NodeKind::leaf);
  CHECK(validate_structure(tree).empty());
}

TEST_CASE("rs3: same-unit plus attribute pattern") {
  auto tree = parse_rs3(read_file(fixture("rs3/ex83.rs3")));
  REQUIRE(tree.edus.size() == 3);
  REQUIRE(tree.root);
  CHECK(tree.root->kind == NodeKind::multinuc);
  REQUIRE(tree.root->children.size() == 2);
  CHECK(tree.root->children[0].relation == "same-unit");
  const RstNode& second = *tree.root->children[1].child;
  REQUIRE(second.kind == NodeKind::span);
  REQUIRE(second.children.size() == 2);
  CHECK(second.children[0].role == Role::satellite);
  CHECK(second.children[0].relation == "elaboration-attribute");
  CHECK(node_span(*tree.root) == std::pair<int, int>{1, 3});
  CHECK(validate_structure(tree).empty());
}

TEST_CASE("rs3: errors") {
  std::string dangling =
      "<rst><header><relations><rel name=\"joint-list\" type=\"multinuc\"/></relations></header>"
      "<body><segment id=\"1\" parent=\"9\" relname=\"joint-list\">x</segment></body></rst>";
  try {
    parse_rs3(dangling);
    FAIL("expected DanglingParent");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::dangling_parent);
  }

  std::string unknown =
      "<rst><header><relations><rel name=\"sparkle\" type=\"rst\"/></relations></header>"
      "<body><segment id=\"1\" parent=\"2\" relname=\"sparkle\">x</segment>"
      "<segment id=\"2\">y</segment></body></rst>";
  try {
    parse_rs3(unknown);
    FAIL("expected UnknownRelation");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::unknown_relation);
  }

  std::string cycle =
      "<rst><header><relations><rel name=\"elaboration-additional\" type=\"rst\"/></relations>"
      "</header><body>"
      "<segment id=\"1\" parent=\"2\" relname=\"elaboration-additional\">x</segment>"
      "<segment id=\"2\" parent=\"1\" relname=\"elaboration-additional\">y</segment>"
      "</body></rst>";
  CHECK_THROWS_AS(parse_rs3(cycle), ParseError);

  CHECK_THROWS_AS(parse_rs3("<rst><body"), ParseError);  // malformed XML
}

TEST_CASE("rs3: canonical serialization is stable across round trips") {
  for (const char* name : {"ex83.rs3", "ex85.rs3", "ex93.rs3", "ex96.rs3", "ex106.rs3",
                           "ex118.rs3", "ex124.rs3", "ex128.rs3", "ex136.rs3", "ex141.rs3",
                           "ex148.rs3", "ex150.rs3", "ex31.rs3"}) {
    auto tree = parse_rs3(read_file(fixture("rs3/") + name));
    std::string canonical = serialize_rs3(tree);
    auto reparsed = parse_rs3(canonical);
    CHECK_MESSAGE(trees_equal(tree, reparsed), name);
    CHECK_MESSAGE(serialize_rs3(reparsed) == canonical, name);
  }
}

TEST_CASE("rs3: a satellite on a bare segment implies its span") {
  std::string text =
      "<rst><header><relations><rel name=\"causal-cause\" type=\"rst\"/></relations></header>"
      "<body>"
      "<segment id=\"1\" parent=\"2\" relname=\"causal-cause\">因 为 下雨 ，</segment>"
      "<segment id=\"2\">比赛 取消 。</segment>"
      "</body></rst>";
  auto tree = parse_rs3(text);
  REQUIRE(tree.root);
  CHECK(tree.root->kind == NodeKind::span);
  CHECK(validate_structure(tree).empty());
  // the canonical form materializes the span group and still round-trips
  auto canonical = serialize_rs3(tree);
  CHECK(canonical.find("<group") != std::string::npos);
  CHECK(trees_equal(tree, parse_rs3(canonical)));
}

TEST_CASE("rs3: equal trees serialize to identical bytes regardless of build order") {
  RstTree a;
  a.edus = {{"甲", -1, -1}, {"乙", -1, -1}, {"丙", -1, -1}};
  {
    std::vector<std::pair<RstNodePtr, std::string>> sats;
    sats.emplace_back(make_leaf(1), "contingency-condition");
    sats.emplace_back(make_leaf(3), "explanation-evidence");
    a.root = make_span(make_leaf(2), std::move(sats));
  }
  RstTree b;
  b.edus = a.edus;
  {
    std::vector<std::pair<RstNodePtr, std::string>> sats;
    sats.emplace_back(make_leaf(3), "explanation-evidence");
    sats.emplace_back(make_leaf(1), "contingency-condition");
    b.root = make_span(make_leaf(2), std::move(sats));
  }
  CHECK(trees_equal(a, b));
  CHECK(serialize_rs3(a) == serialize_rs3(b));
}

namespace {

// Random invariant-valid trees: recursive splits over a random EDU count,
// alternating span and multinuclear nodes with taxonomy relations.
RstNodePtr random_subtree(std::mt19937& rng, int first, int last) {
  if (first == last) return make_leaf(first);
  std::uniform_int_distribution<int> coin(0, 1);
  const auto& inv = relation_inventory();
  auto pick_rel = [&](Arity arity) {
    for (;;) {
      const auto& r = inv[std::uniform_int_distribution<size_t>(0, inv.size() - 1)(rng)];
      if (r.arity == arity || (arity == Arity::multinuclear && r.arity == Arity::same_unit))
        return r.name;
    }
  };
  if (coin(rng) == 0 || last - first >= 2) {
    // multinuclear over 2..3 adjacent parts
    int parts = std::min(last - first + 1, 2 + coin(rng));
    std::vector<int> cuts;
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < parts - 1)
      chosen.insert(std::uniform_int_distribution<int>(first, last - 1)(rng));
    std::vector<RstNodePtr> members;
    int begin = first;
    for (int cut : chosen) {
      members.push_back(random_subtree(rng, begin, cut));
      begin = cut + 1;
    }
    members.push_back(random_subtree(rng, begin, last));
    return make_multinuc(pick_rel(Arity::multinuclear), std::move(members));
  }
  // span: nucleus plus one satellite on a random side
  int cut = std::uniform_int_distribution<int>(first, last - 1)(rng);
  bool sat_left = coin(rng) == 0;
  auto a = random_subtree(rng, first, cut);
  auto b = random_subtree(rng, cut + 1, last);
  std::vector<std::pair<RstNodePtr, std::string>> sats;
  if (sat_left) {
    sats.emplace_back(std::move(a), pick_rel(Arity::nucleus_satellite));
    return make_span(std::move(b), std::move(sats));
  }
  sats.emplace_back(std::move(b), pick_rel(Arity::nucleus_satellite));
  return make_span(std::move(a), std::move(sats));
}

}  // namespace

TEST_CASE("rs3: random invariant-valid trees round-trip canonically") {
  std::mt19937 rng(20221011);
  for (int round = 0; round < 120; ++round) {
    int n = std::uniform_int_distribution<int>(1, 9)(rng);
    RstTree t;
    for (int i = 1; i <= n; ++i) t.edus.push_back({"第" + std::to_string(i) + " 单元", -1, -1});
    t.root = random_subtree(rng, 1, n);
    REQUIRE(validate_structure(t).empty());
    std::string canonical = serialize_rs3(t);
    auto reparsed = parse_rs3(canonical);
    REQUIRE(trees_equal(t, reparsed));
    REQUIRE(serialize_rs3(reparsed) == canonical);
  }
}

TEST_CASE("rs3: two parentless elements are rejected") {
  std::string text =
      "<rst><header><relations/></header><body>"
      "<segment id=\"1\">x</segment><segment id=\"2\">y</segment></body></rst>";
  CHECK_THROWS_AS(parse_rs3(text), ParseError);
}

TEST_CASE("conllx: serialization round-trips") {
  auto sents = parse_conllx(read_file(fixture("golden/sentences.conllx")));
  auto again = parse_conllx(serialize_conllx(sents));
  CHECK(again == sents);
}

TEST_CASE("raw: random documents round-trip") {
  std::mt19937 rng(7);
  for (int round = 0; round < 60; ++round) {
    Metadata m;
    m.title = "标题" + std::to_string(round);
    m.short_title = "t" + std::to_string(round);
    m.genre = "news";
    m.text_id = "gcdt_news_t" + std::to_string(round);
    m.author = "某人";
    m.date_created = "2020-01-02";
    m.date_modified = "XXXX-XX-XX";
    m.date_collected = "2022-02-01";
    m.source_url = "https://example.org/" + std::to_string(round);
    int speakers = std::uniform_int_distribution<int>(0, 3)(rng);
    m.speaker_count = speakers;
    if (speakers == 0)
      m.speaker_list = {"none"};
    else
      for (int i = 0; i < speakers; ++i) m.speaker_list.push_back("说话人" + std::to_string(i));

    DocStructure st;
    int sentences = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int i = 0; i < sentences; ++i) st.sentences.push_back("句子 " + std::to_string(i));
    int begin = 0;
    while (begin < sentences) {
      int end = std::min(sentences, begin + std::uniform_int_distribution<int>(1, 3)(rng));
      st.paragraphs.emplace_back(begin, end);
      begin = end;
    }
    int sections = std::uniform_int_distribution<int>(0, 2)(rng);
    int para = 0;
    for (int i = 0; i < sections && para < static_cast<int>(st.paragraphs.size()); ++i) {
      st.sections.push_back({std::uniform_int_distribution<int>(1, 3)(rng), para});
      para += 1 + std::uniform_int_distribution<int>(0, 1)(rng);
    }

    std::string canonical = serialize_raw_document(m, st);
    auto [m2, st2] = parse_raw_document(canonical);
    REQUIRE(m2 == m);
    REQUIRE(st2 == st);
    REQUIRE(serialize_raw_document(m2, st2) == canonical);
  }
}

TEST_CASE("rs3: serializing an invalid tree is rejected") {
  RstTree t;
  t.edus = {{"x", -1, -1}};
  t.root = make_leaf(1);
  t.root_attach = "elaboration-additional";  // a satellite as root
  try {
    serialize_rs3(t);
    FAIL("expected InvalidTree");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::invalid_tree);
    CHECK(e.detail.find("E-ROOT-SAT") != std::string::npos);
  }
}
