// Readers and writers for the corpus's three concrete formats: raw structured
// text, CoNLL-X dependency parses, and rs3 RST trees, plus document alignment.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gcdt/rst_model.hpp"

namespace gcdt {

struct ParseError : std::runtime_error {
  enum class Kind {
    missing_metadata_field,
    malformed_metadata_value,
    malformed_marker,
    empty_body,
    bad_column_count,
    non_numeric_index,
    head_out_of_range,
    sentence_count_mismatch,
    text_mismatch,
    xml_error,
    unknown_relation,
    dangling_parent,
    cycle_detected,
    invalid_tree,
    io_error,
  };
  Kind kind;
  int line = 0;        // 1-based where applicable
  std::string detail;  // field name, relation name, node id, ...

  ParseError(Kind k, std::string msg, int line_no = 0, std::string d = "")
      : std::runtime_error(std::move(msg)), kind(k), line(line_no), detail(std::move(d)) {}
};

struct Metadata {
  std::string title;
  std::string short_title;
  std::string genre;
  std::string text_id;  // corpus name + genre + short title, underscore-joined
  std::string author;
  std::string date_created;
  std::string date_modified;
  std::string date_collected;
  std::string source_url;
  int speaker_count = 0;
  std::vector<std::string> speaker_list;

  bool operator==(const Metadata&) const = default;
};

struct Section {
  int depth = 1;            // 1 = section, 2 = subsection, ...
  int start_paragraph = 0;  // 0-based paragraph index
  bool operator==(const Section&) const = default;
};

struct DocStructure {
  std::vector<Section> sections;
  // Paragraphs as [begin, end) sentence-index ranges, ordered and covering.
  std::vector<std::pair<int, int>> paragraphs;
  std::vector<std::string> sentences;  // raw text lines

  bool operator==(const DocStructure&) const = default;
};

struct Token {
  int index = 0;              // 1-based within sentence
  std::string form;
  std::string pos;            // CTB tag
  std::optional<int> head;    // 0 = syntactic root; nullopt = no parse
  std::string deprel;

  bool operator==(const Token&) const = default;
};

using Sentence = std::vector<Token>;

struct AnalyzedDocument {
  Metadata metadata;
  DocStructure structure;
  std::vector<Sentence> sentences;
};

// Raw structured text: `key: value` metadata header, blank line, body where
// one line feed separates sentences, two separate paragraphs, and
// <section/>-family markers on their own lines open sections.
std::pair<Metadata, DocStructure> parse_raw_document(const std::string& text);
std::string serialize_raw_document(const Metadata& meta, const DocStructure& structure);

// CoNLL-X: blank-line-separated blocks of 10 tab-separated columns.
// Columns 1,2,4,7,8 populate index, form, pos, head, deprel.
std::vector<Sentence> parse_conllx(const std::string& text);
std::string serialize_conllx(const std::vector<Sentence>& sentences);

AnalyzedDocument align(std::pair<Metadata, DocStructure> meta_structure,
                       std::vector<Sentence> parses);

// rs3: the rstweb interchange format. parse resolves every relname against
// the header declarations and the taxonomy; serialize emits canonical form
// (fixed attribute order and indentation, LF endings, NFC text).
RstTree parse_rs3(const std::string& text);
std::string serialize_rs3(const RstTree& tree);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace gcdt
