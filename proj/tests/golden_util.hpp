// Shared loader for the golden segmentation fixture.
#pragma once

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gcdt/corpus_io.hpp"

namespace golden {

struct Entry {
  std::string id;
  bool core = true;
  std::set<int> boundaries;
  std::string note;
};

inline std::vector<Entry> load_entries(const std::string& path) {
  std::vector<Entry> out;
  std::istringstream in(gcdt::read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Entry e;
    std::string core, bounds;
    std::getline(ls, e.id, '\t');
    std::getline(ls, core, '\t');
    std::getline(ls, bounds, '\t');
    std::getline(ls, e.note, '\t');
    e.core = core == "1";
    if (bounds != "-") {
      std::istringstream bs(bounds);
      std::string b;
      while (std::getline(bs, b, ',')) e.boundaries.insert(std::stoi(b));
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::set<int> boundaries_of(const std::vector<gcdt::EduSpan>& spans, int len) {
  std::set<int> out;
  for (const auto& s : spans)
    if (s.last_token != len) out.insert(s.last_token);
  return out;
}

}  // namespace golden
