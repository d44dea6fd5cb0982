#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "gcdt/lexicons.hpp"

using namespace gcdt;

namespace {
Sentence toks(std::initializer_list<const char*> forms) {
  Sentence s;
  int i = 0;
  for (const char* f : forms) s.push_back({++i, f, "NN", 0, "dep"});
  return s;
}
}  // namespace

TEST_CASE("attribution verbs: exact match only") {
  const auto& lex = Lexicons::embedded();
  CHECK(lex.is_attribution_verb("认为"));
  CHECK(lex.is_attribution_verb("宣称"));
  CHECK(lex.is_attribution_verb("希望"));
  CHECK(lex.is_attribution_verb("透露"));
  CHECK(!lex.is_attribution_verb("扔"));
  CHECK(!lex.is_attribution_verb("认"));
  // the duplicated manual entry is stored once
  int count = 0;
  for (const auto& v : lex.attribution_verbs())
    if (v == "建议") ++count;
  CHECK(count == 1);
  CHECK(lex.attribution_verbs().size() == 61);
}

TEST_CASE("match_cue: topic template spans opener to closer") {
  const auto& lex = Lexicons::embedded();
  auto s = toks({"对", "啮齿类", "动物", "来说", "太", "刺激"});
  auto m = lex.match_cue(s, 1);
  REQUIRE(m);
  CHECK(m->entry->category == CueCategory::topic);
  CHECK(m->first_token == 1);
  CHECK(m->last_token == 4);
}

TEST_CASE("match_cue: single-token causal cue") {
  const auto& lex = Lexicons::embedded();
  auto s = toks({"因为", "他", "来"});
  auto m = lex.match_cue(s, 1);
  REQUIRE(m);
  CHECK(m->entry->category == CueCategory::causal);
  CHECK(m->last_token == 1);
}

TEST_CASE("match_cue: non-cue token matches nothing") {
  const auto& lex = Lexicons::embedded();
  auto s = toks({"苹果", "来说"});
  CHECK(!lex.match_cue(s, 1));
}

TEST_CASE("match_cue: template gap needs at least one token") {
  const auto& lex = Lexicons::embedded();
  auto adjacent = toks({"对", "来说", "很", "好"});
  auto m = lex.match_cue(adjacent, 1);
  CHECK(!m);  // no gap, no plain 对 entry either
}

TEST_CASE("match_cue: correlative and closer-only templates") {
  const auto& lex = Lexicons::embedded();
  auto s = toks({"越多", "越", "好"});
  auto m = lex.match_cue(s, 1);
  REQUIRE(m);
  CHECK(m->first_token == 1);
  CHECK(m->last_token == 2);

  auto tail = toks({"下雨", "的话", "不", "去"});
  auto m2 = lex.match_cue(tail, 2);
  REQUIRE(m2);
  CHECK(m2->entry->category == CueCategory::circumstantial);
  CHECK(m2->first_token == 2);
  CHECK(m2->last_token == 2);
}

TEST_CASE("tricky_class: class agreement against the POS tag") {
  const auto& lex = Lexicons::embedded();
  auto lc = lex.tricky_class("以来", "LC");
  REQUIRE(lc);
  REQUIRE(lc->consistent);
  CHECK(lc->consistent->cls == TrickyClass::localizer);

  auto vv = lex.tricky_class("利用", "VV");
  REQUIRE(vv);
  REQUIRE(vv->consistent);
  CHECK(vv->consistent->cls == TrickyClass::verb);

  CHECK(!lex.tricky_class("苹果", "NN"));

  // 作为 is listed as both preposition and verb
  auto p = lex.tricky_class("作为", "P");
  REQUIRE(p);
  REQUIRE(p->consistent);
  CHECK(p->consistent->cls == TrickyClass::preposition);
  auto nn = lex.tricky_class("作为", "NN");
  REQUIRE(nn);
  CHECK(!nn->consistent);
  CHECK(nn->inconsistent.size() == 2);
}

TEST_CASE("lexicon loading: duplicate surfaces within a category abort") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "gcdt_lexdup";
  fs::create_directories(dir);
  std::ofstream(dir / "attribution_verbs.tsv") << "说\n说\n";
  std::ofstream(dir / "discourse_cues.tsv") << "# causal\n因为\n";
  std::ofstream(dir / "tricky_tokens.tsv") << "# verb\n利用\n";
  CHECK_THROWS_AS(Lexicons::from_directory(dir.string()), ParseError);
  fs::remove_all(dir);
}

TEST_CASE("lexicon loading: override directory mirrors the embedded data") {
  auto lex = Lexicons::from_directory(std::string(GCDT_DATA_DIR) + "/lexicons");
  CHECK(lex.attribution_verbs() == Lexicons::embedded().attribution_verbs());
  CHECK(lex.cues().size() == Lexicons::embedded().cues().size());
  CHECK(lex.tricky_tokens().size() == Lexicons::embedded().tricky_tokens().size());
}
