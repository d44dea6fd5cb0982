// Prints golden vs predicted boundaries per sentence, with the full
// candidate list for mismatches. Maintenance aid for the golden corpus.
#include <iostream>
#include "gcdt/segmenter.hpp"
#include "../tests/golden_util.hpp"

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "tests/fixtures/golden";
  auto entries = golden::load_entries(dir + "/boundaries.tsv");
  auto sents = gcdt::parse_conllx(gcdt::read_file(dir + "/sentences.conllx"));
  if (entries.size() != sents.size()) {
    std::cerr << "entry/sentence count mismatch: " << entries.size() << " vs " << sents.size() << "\n";
    return 2;
  }
  gcdt::Segmenter seg;
  int bad = 0;
  for (size_t i = 0; i < sents.size(); ++i) {
    auto spans = seg.segment_sentence(sents[i]);
    auto pred = golden::boundaries_of(spans, (int)sents[i].size());
    if (pred != entries[i].boundaries) {
      ++bad;
      std::cout << entries[i].id << " MISMATCH\n  gold:";
      for (int b : entries[i].boundaries) std::cout << " " << b;
      std::cout << "\n  pred:";
      for (int b : pred) std::cout << " " << b;
      std::cout << "\n  sent:";
      for (auto& t : sents[i]) std::cout << " " << t.form;
      std::cout << "\n  candidates:\n";
      for (auto& c : seg.evaluate_rules(sents[i]))
        std::cout << "    " << (c.polarity == gcdt::Polarity::trigger ? "T" : "S") << " @" << c.position
                  << " " << c.rule << " [" << c.span_first << "," << c.span_last << "] " << c.note << "\n";
    }
  }
  std::cout << (entries.size() - bad) << "/" << entries.size() << " sentences exact\n";
  return bad != 0;
}
