#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "gcdt/corpus_io.hpp"
#include "unicode.hpp"

namespace gcdt {

namespace {

constexpr const char* kCorpusName = "gcdt";

const std::vector<std::string>& header_keys() {
  static const std::vector<std::string> keys = {
      "title",        "shortTitle",   "type",      "author",       "dateCreated",
      "dateModified", "dateCollected", "sourceURL", "speakerCount", "speakerList"};
  return keys;
}

bool valid_date(const std::string& d) {
  if (d == "XXXX-XX-XX") return true;
  if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
  for (size_t i = 0; i < d.size(); ++i) {
    if (i == 4 || i == 7) continue;
    if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
  }
  return true;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// <section/>, <subsection/>, <subsubsection/>, ... -> depth; 0 if not a marker.
int marker_depth(const std::string& line) {
  const std::string t = trim(line);
  if (t.size() < 10 || t.front() != '<' || t.substr(t.size() - 2) != "/>") return 0;
  std::string name = t.substr(1, t.size() - 3);
  int depth = 1;
  while (name.rfind("sub", 0) == 0) {
    ++depth;
    name = name.substr(3);
  }
  return name == "section" ? depth : 0;
}

bool contains_marker_text(const std::string& line) {
  return line.find("section/>") != std::string::npos;
}

}  // namespace

std::pair<Metadata, DocStructure> parse_raw_document(const std::string& text) {
  auto lines = split_lines(text);
  Metadata meta;
  std::map<std::string, std::string> fields;

  size_t i = 0;
  for (; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (trim(line).empty()) {
      ++i;
      break;
    }
    auto colon = line.find_first_of(":\xEF\xBC\x9A");
    size_t colon_len = (colon != std::string::npos && line[colon] == ':') ? 1 : 3;
    if (colon == std::string::npos)
      throw ParseError(ParseError::Kind::malformed_metadata_value,
                       "metadata line without ':' at line " + std::to_string(i + 1),
                       static_cast<int>(i + 1));
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + colon_len));
    fields[key] = value;
  }

  for (const auto& key : header_keys())
    if (!fields.count(key))
      throw ParseError(ParseError::Kind::missing_metadata_field,
                       "missing metadata field '" + key + "'", 0, key);

  meta.title = fields["title"];
  meta.short_title = fields["shortTitle"];
  meta.genre = fields["type"];
  meta.author = fields["author"];
  meta.date_created = fields["dateCreated"];
  meta.date_modified = fields["dateModified"];
  meta.date_collected = fields["dateCollected"];
  meta.source_url = fields["sourceURL"];
  meta.text_id = std::string(kCorpusName) + "_" + meta.genre + "_" + meta.short_title;

  for (const char* k : {"dateCreated", "dateModified", "dateCollected"})
    if (!valid_date(fields[k]))
      throw ParseError(ParseError::Kind::malformed_metadata_value,
                       std::string("date field '") + k + "' must be YYYY-MM-DD or XXXX-XX-XX",
                       0, k);

  try {
    size_t pos = 0;
    meta.speaker_count = std::stoi(fields["speakerCount"], &pos);
    if (pos != fields["speakerCount"].size() || meta.speaker_count < 0) throw std::exception();
  } catch (...) {
    throw ParseError(ParseError::Kind::malformed_metadata_value,
                     "speakerCount must be a non-negative integer", 0, "speakerCount");
  }

  {
    std::string list = fields["speakerList"];
    std::string item;
    std::istringstream is(list);
    while (std::getline(is, item, ','))
      meta.speaker_list.push_back(trim(item));
    if (meta.speaker_list.empty()) meta.speaker_list.push_back("none");
  }
  bool none_list = meta.speaker_list.size() == 1 && meta.speaker_list[0] == "none";
  if ((meta.speaker_count == 0) != none_list)
    throw ParseError(ParseError::Kind::malformed_metadata_value,
                     "speakerCount is 0 iff speakerList is 'none'", 0, "speakerList");

  DocStructure st;
  bool paragraph_open = false;
  std::vector<int> pending_sections;
  int para_begin = 0;

  auto close_paragraph = [&](int end) {
    if (paragraph_open) {
      st.paragraphs.emplace_back(para_begin, end);
      paragraph_open = false;
    }
  };

  for (; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::string t = trim(line);
    if (t.empty()) {
      close_paragraph(static_cast<int>(st.sentences.size()));
      continue;
    }
    if (int depth = marker_depth(t)) {
      close_paragraph(static_cast<int>(st.sentences.size()));
      pending_sections.push_back(depth);
      continue;
    }
    if (contains_marker_text(t))
      throw ParseError(ParseError::Kind::malformed_marker,
                       "section marker must occupy a whole line (line " + std::to_string(i + 1) +
                           ")",
                       static_cast<int>(i + 1));
    if (!paragraph_open) {
      para_begin = static_cast<int>(st.sentences.size());
      paragraph_open = true;
      for (int depth : pending_sections)
        st.sections.push_back({depth, static_cast<int>(st.paragraphs.size())});
      pending_sections.clear();
    }
    st.sentences.push_back(t);
  }
  close_paragraph(static_cast<int>(st.sentences.size()));

  if (st.sentences.empty())
    throw ParseError(ParseError::Kind::empty_body, "document has no body sentences");

  return {std::move(meta), std::move(st)};
}

std::string serialize_raw_document(const Metadata& meta, const DocStructure& structure) {
  std::ostringstream out;
  auto join_speakers = [&] {
    std::string s;
    for (size_t i = 0; i < meta.speaker_list.size(); ++i) {
      if (i) s += ", ";
      s += meta.speaker_list[i];
    }
    return s;
  };
  out << "title: " << meta.title << "\n";
  out << "shortTitle: " << meta.short_title << "\n";
  out << "type: " << meta.genre << "\n";
  out << "author: " << meta.author << "\n";
  out << "dateCreated: " << meta.date_created << "\n";
  out << "dateModified: " << meta.date_modified << "\n";
  out << "dateCollected: " << meta.date_collected << "\n";
  out << "sourceURL: " << meta.source_url << "\n";
  out << "speakerCount: " << meta.speaker_count << "\n";
  out << "speakerList: " << join_speakers() << "\n";
  out << "\n";

  // sections indexed by starting paragraph
  std::multimap<int, int> sections_at;  // paragraph -> depth
  for (const auto& s : structure.sections) sections_at.emplace(s.start_paragraph, s.depth);

  for (size_t p = 0; p < structure.paragraphs.size(); ++p) {
    if (p) out << "\n";
    auto [lo, hi] = sections_at.equal_range(static_cast<int>(p));
    for (auto it = lo; it != hi; ++it) {
      out << "<";
      for (int d = 1; d < it->second; ++d) out << "sub";
      out << "section/>\n";
    }
    auto [b, e] = structure.paragraphs[p];
    for (int s = b; s < e; ++s) out << structure.sentences[s] << "\n";
  }
  return uni::nfc(out.str());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseError::Kind::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(ParseError::Kind::io_error, "cannot write " + path);
  out << content;
}

}  // namespace gcdt
