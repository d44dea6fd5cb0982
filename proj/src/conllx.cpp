#include <sstream>

#include "gcdt/corpus_io.hpp"
#include "unicode.hpp"

namespace gcdt {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      cols.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cols.push_back(cur);
  return cols;
}

int parse_int(const std::string& s, ParseError::Kind kind, int line_no, const char* what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::exception();
    return v;
  } catch (...) {
    throw ParseError(kind, std::string(what) + " '" + s + "' at line " + std::to_string(line_no),
                     line_no);
  }
}

void finish_sentence(Sentence& sent, std::vector<Sentence>& out,
                     const std::vector<int>& head_lines) {
  if (sent.empty()) return;
  const int n = static_cast<int>(sent.size());
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& t = sent[i];
    if (!t.head) continue;
    int h = *t.head;
    if (h < 0 || h > n)
      throw ParseError(ParseError::Kind::head_out_of_range,
                       "head " + std::to_string(h) + " out of range at line " +
                           std::to_string(head_lines[i]),
                       head_lines[i]);
    if (h == t.index)
      throw ParseError(ParseError::Kind::head_out_of_range,
                       "token is its own head at line " + std::to_string(head_lines[i]),
                       head_lines[i]);
    if (h == 0) ++roots;
  }
  bool parsed = !sent.empty() && sent[0].head.has_value();
  if (parsed && roots != 1)
    throw ParseError(ParseError::Kind::head_out_of_range,
                     "sentence ending at line " + std::to_string(head_lines.back()) + " has " +
                         std::to_string(roots) + " roots",
                     head_lines.back());
  out.push_back(std::move(sent));
  sent.clear();
}

}  // namespace

std::vector<Sentence> parse_conllx(const std::string& text) {
  std::vector<Sentence> out;
  Sentence sent;
  std::vector<int> head_lines;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish_sentence(sent, out, head_lines);
      head_lines.clear();
      continue;
    }
    auto cols = split_tabs(line);
    if (cols.size() != 10)
      throw ParseError(ParseError::Kind::bad_column_count,
                       "expected 10 tab-separated columns, got " + std::to_string(cols.size()) +
                           " at line " + std::to_string(line_no),
                       line_no);
    Token t;
    t.index = parse_int(cols[0], ParseError::Kind::non_numeric_index, line_no, "token index");
    if (t.index != static_cast<int>(sent.size()) + 1)
      throw ParseError(ParseError::Kind::non_numeric_index,
                       "token index " + cols[0] + " out of sequence at line " +
                           std::to_string(line_no),
                       line_no);
    t.form = cols[1];
    t.pos = cols[3] == "_" ? cols[4] : cols[3];
    if (cols[6] != "_")
      t.head = parse_int(cols[6], ParseError::Kind::non_numeric_index, line_no, "head index");
    t.deprel = cols[7] == "_" ? "" : cols[7];
    sent.push_back(std::move(t));
    head_lines.push_back(line_no);
  }
  finish_sentence(sent, out, head_lines);
  return out;
}

std::string serialize_conllx(const std::vector<Sentence>& sentences) {
  std::ostringstream out;
  for (size_t s = 0; s < sentences.size(); ++s) {
    if (s) out << "\n";
    for (const Token& t : sentences[s]) {
      out << t.index << '\t' << t.form << '\t' << '_' << '\t' << t.pos << '\t' << t.pos << '\t'
          << '_' << '\t';
      if (t.head)
        out << *t.head;
      else
        out << '_';
      out << '\t' << (t.deprel.empty() ? "_" : t.deprel) << '\t' << '_' << '\t' << '_' << "\n";
    }
  }
  return out.str();
}

namespace {

std::string strip_spaces(const std::string& s) {
  std::string out;
  size_t i = 0;
  while (i < s.size()) {
    // skip ASCII whitespace and U+3000 ideographic space
    if (s[i] == ' ' || s[i] == '\t') {
      ++i;
      continue;
    }
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE3 &&
        static_cast<unsigned char>(s[i + 1]) == 0x80 &&
        static_cast<unsigned char>(s[i + 2]) == 0x80) {
      i += 3;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

}  // namespace

AnalyzedDocument align(std::pair<Metadata, DocStructure> meta_structure,
                       std::vector<Sentence> parses) {
  auto& [meta, st] = meta_structure;
  if (st.sentences.size() != parses.size())
    throw ParseError(ParseError::Kind::sentence_count_mismatch,
                     "document has " + std::to_string(st.sentences.size()) +
                         " sentences but parse file has " + std::to_string(parses.size()));

  for (size_t s = 0; s < parses.size(); ++s) {
    std::string raw = strip_spaces(st.sentences[s]);
    std::string forms;
    for (const Token& t : parses[s]) forms += strip_spaces(t.form);
    if (raw != forms) {
      auto a = uni::decode(raw);
      auto b = uni::decode(forms);
      size_t k = 0;
      while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
      throw ParseError(ParseError::Kind::text_mismatch,
                       "sentence " + std::to_string(s) + " diverges from its parse at character " +
                           std::to_string(k),
                       0, std::to_string(s) + ":" + std::to_string(k));
    }
  }

  AnalyzedDocument doc;
  doc.metadata = std::move(meta);
  doc.structure = std::move(st);
  doc.sentences = std::move(parses);
  return doc;
}

}  // namespace gcdt
