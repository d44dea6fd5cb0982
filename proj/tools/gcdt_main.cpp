// gcdt: batch tools for the corpus formats — segmentation, tree validation,
// convention linting, agreement scoring, corpus statistics, canonicalization.
#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gcdt/corpus_io.hpp"
#include "gcdt/linter.hpp"
#include "gcdt/metrics.hpp"
#include "gcdt/segmenter.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
  std::string format = "text";
  std::string output;
  std::string config_path;
  std::string fail_on = "error";
  int jobs = 1;
  bool stable = false;
};

struct LoadedConfig {
  gcdt::SegmenterConfig segmenter;
  gcdt::LintConfig lint;
  std::unique_ptr<gcdt::Lexicons> own_lexicons;
};

gcdt::Severity severity_from(const std::string& s) {
  if (s == "error") return gcdt::Severity::error;
  if (s == "warning") return gcdt::Severity::warning;
  if (s == "advisory") return gcdt::Severity::advisory;
  throw std::runtime_error("unknown severity '" + s + "'");
}

LoadedConfig load_config(const std::string& path) {
  LoadedConfig out;
  if (path.empty()) return out;
  json j = json::parse(gcdt::read_file(path));
  for (auto& [key, value] : j.items()) {
    if (key == "lexicon_dir") {
      out.own_lexicons =
          std::make_unique<gcdt::Lexicons>(gcdt::Lexicons::from_directory(value.get<std::string>()));
      out.segmenter.lexicons = out.own_lexicons.get();
    } else if (key == "require_parse") {
      out.segmenter.require_parse = value.get<bool>();
    } else if (key == "rules") {
      for (auto& [rkey, rvalue] : value.items()) {
        if (rkey != "disable") throw std::runtime_error("unknown config key rules." + rkey);
        for (const auto& id : rvalue) out.segmenter.disabled_rules.insert(id.get<std::string>());
      }
    } else if (key == "lint") {
      for (auto& [lkey, lvalue] : value.items()) {
        if (lkey == "disable") {
          for (const auto& id : lvalue) out.lint.disabled_codes.insert(id.get<std::string>());
        } else if (lkey == "severity") {
          for (auto& [code, level] : lvalue.items())
            out.lint.severity_overrides[code] = severity_from(level.get<std::string>());
        } else {
          throw std::runtime_error("unknown config key lint." + lkey);
        }
      }
    } else {
      throw std::runtime_error("unknown config key '" + key + "'");
    }
  }
  return out;
}

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
  return buf;
}

void emit(const CommonOpts& opts, const std::string& payload, const std::string& meta_line) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!opts.output.empty()) {
    file.open(opts.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + opts.output);
    out = &file;
  }
  if (!opts.stable && !meta_line.empty()) *out << meta_line << "\n";
  *out << payload;
}

bool at_or_above(gcdt::Severity s, const std::string& threshold) {
  if (threshold == "never") return false;
  auto rank = [](gcdt::Severity x) {
    switch (x) {
      case gcdt::Severity::error: return 2;
      case gcdt::Severity::warning: return 1;
      case gcdt::Severity::advisory: return 0;
    }
    return 0;
  };
  return rank(s) >= rank(severity_from(threshold));
}

std::string render_diagnostics(const std::string& file, const std::vector<gcdt::Diagnostic>& diags,
                               const std::vector<std::string>& footer, const std::string& format) {
  std::ostringstream os;
  if (format == "jsonl") {
    for (const auto& d : diags) {
      json j = {{"file", file},
                {"code", d.code},
                {"severity", gcdt::severity_name(d.severity)},
                {"locus", d.locus},
                {"message", d.message},
                {"section", d.manual_section}};
      os << j.dump() << "\n";
    }
    for (const auto& note : footer) os << json{{"file", file}, {"note", note}}.dump() << "\n";
  } else {
    for (const auto& d : diags)
      os << file << ": " << gcdt::severity_name(d.severity) << " " << d.code << " [" << d.locus
         << "] " << d.message << "\n";
    for (const auto& note : footer) os << file << ": note: " << note << "\n";
  }
  return os.str();
}

// Runs fn over the inputs with up to `jobs` workers; output keeps input order.
template <typename Fn>
std::vector<std::string> map_ordered(const std::vector<std::string>& inputs, int jobs, Fn fn) {
  std::vector<std::string> results(inputs.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < inputs.size(); ++i) results[i] = fn(inputs[i]);
    return results;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= inputs.size()) return;
      results[i] = fn(inputs[i]);
    }
  };
  std::vector<std::future<void>> futs;
  for (int w = 0; w < jobs; ++w) futs.push_back(std::async(std::launch::async, worker));
  for (auto& f : futs) f.get();
  return results;
}

gcdt::AnalyzedDocument load_document(const std::string& raw_path, const std::string& conllx_path) {
  auto meta_structure = gcdt::parse_raw_document(gcdt::read_file(raw_path));
  auto parses = gcdt::parse_conllx(gcdt::read_file(conllx_path));
  return gcdt::align(std::move(meta_structure), std::move(parses));
}

int cmd_segment(const CommonOpts& opts, const LoadedConfig& cfg, const std::string& raw_path,
                const std::string& conllx_path) {
  auto doc = load_document(raw_path, conllx_path);
  gcdt::Segmenter seg(cfg.segmenter);
  std::ostringstream os;
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    auto part = seg.segment_sentence_ex(doc.sentences[s], static_cast<int>(s));
    for (const auto& w : part.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& span : part.spans) {
      os << doc.metadata.text_id << "\t" << span.sentence_index << "\t" << span.first_token
         << "\t" << span.last_token << "\t";
      for (size_t t = 0; t < span.trace.size(); ++t) {
        if (t) os << ",";
        os << span.trace[t];
      }
      if (span.trace.empty()) os << "-";
      os << "\n";
    }
  }
  emit(opts, os.str(), "# gcdt segment " + timestamp());
  return 0;
}

int cmd_validate(const CommonOpts& opts, const std::vector<std::string>& rs3_paths) {
  bool threshold_hit = false;
  auto results = map_ordered(rs3_paths, opts.jobs, [&](const std::string& path) {
    auto tree = gcdt::parse_rs3(gcdt::read_file(path));
    auto diags = gcdt::validate_structure(tree);
    for (const auto& d : diags)
      if (at_or_above(d.severity, opts.fail_on)) threshold_hit = true;
    return render_diagnostics(path, diags, {}, opts.format);
  });
  std::string all;
  for (auto& r : results) all += r;
  emit(opts, all, "# gcdt validate " + timestamp());
  return threshold_hit ? 1 : 0;
}

int cmd_lint(const CommonOpts& opts, const LoadedConfig& cfg,
             const std::vector<std::string>& rs3_paths, const std::string& raw_path,
             const std::string& conllx_path) {
  std::optional<gcdt::AnalyzedDocument> doc;
  if (!raw_path.empty() && !conllx_path.empty()) {
    doc = load_document(raw_path, conllx_path);
  } else if (!raw_path.empty()) {
    auto [meta, structure] = gcdt::parse_raw_document(gcdt::read_file(raw_path));
    gcdt::AnalyzedDocument d;
    d.metadata = std::move(meta);
    // sentence texts without parses still locate headings and paragraphs
    d.sentences.resize(structure.sentences.size());
    d.structure = std::move(structure);
    doc = std::move(d);
  }
  bool threshold_hit = false;
  auto results = map_ordered(rs3_paths, opts.jobs, [&](const std::string& path) {
    auto tree = gcdt::parse_rs3(gcdt::read_file(path));
    auto report = gcdt::lint(doc ? &*doc : nullptr, tree, cfg.lint);
    for (const auto& d : report.findings)
      if (at_or_above(d.severity, opts.fail_on)) threshold_hit = true;
    return render_diagnostics(path, report.findings, report.footer, opts.format);
  });
  std::string all;
  for (auto& r : results) all += r;
  emit(opts, all, "# gcdt lint " + timestamp());
  return threshold_hit ? 1 : 0;
}

// (doc, sentence) -> (length, internal splits)
using TsvSegmentation = std::map<std::pair<std::string, int>, std::pair<int, std::set<int>>>;

TsvSegmentation tsv_boundaries(const std::string& path) {
  TsvSegmentation out;
  std::istringstream in(gcdt::read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string doc, sent, first, last;
    std::getline(ls, doc, '\t');
    std::getline(ls, sent, '\t');
    std::getline(ls, first, '\t');
    std::getline(ls, last, '\t');
    int s = std::stoi(sent), l = std::stoi(last);
    auto& e = out[{doc, s}];
    e.first = std::max(e.first, l);
    e.second.insert(l);
  }
  for (auto& [key, e] : out) e.second.erase(e.first);
  return out;
}

int cmd_score(const CommonOpts& opts, const std::string& gold_path, const std::string& pred_path) {
  json report;
  std::string csv;
  if (gold_path.size() > 4 && gold_path.substr(gold_path.size() - 4) == ".rs3") {
    auto gold = gcdt::parse_rs3(gcdt::read_file(gold_path));
    auto pred = gcdt::parse_rs3(gcdt::read_file(pred_path));
    auto s = gcdt::parseval_scores(gold, pred);
    report = {{"kind", "parseval"},
              {"gold", gold_path},
              {"pred", pred_path},
              {"span_f1", s.span_f1},
              {"nuclearity_f1", s.nuclearity_f1},
              {"relation_f1", s.relation_f1}};
    std::ostringstream os;
    os << "metric,value\nspan_f1," << s.span_f1 << "\nnuclearity_f1," << s.nuclearity_f1
       << "\nrelation_f1," << s.relation_f1 << "\n";
    csv = os.str();
  } else {
    auto g = tsv_boundaries(gold_path);
    auto p = tsv_boundaries(pred_path);
    if (g.size() != p.size())
      throw gcdt::ScoreError("CoverageMismatch: segmentations cover different sentence sets");
    std::map<std::string, gcdt::BoundaryCounts> per_doc;
    for (const auto& [key, ge] : g) {
      auto it = p.find(key);
      if (it == p.end() || it->second.first != ge.first)
        throw gcdt::ScoreError("CoverageMismatch: " + key.first + " sentence " +
                               std::to_string(key.second) + " differs in coverage");
      gcdt::BoundaryCounts c;
      c.gold_total = static_cast<long>(ge.second.size());
      c.pred_total = static_cast<long>(it->second.second.size());
      for (int b : it->second.second)
        if (ge.second.count(b)) ++c.true_pos;
      per_doc[key.first].add(c);
    }
    gcdt::BoundaryCounts pooled;
    json docs = json::array();
    std::ostringstream os;
    os << "doc,precision,recall,f1,true_pos,pred_total,gold_total\n";
    for (const auto& [doc, counts] : per_doc) {
      pooled.add(counts);
      auto s = gcdt::scores_from_counts(counts);
      docs.push_back({{"doc", doc},
                      {"precision", s.precision},
                      {"recall", s.recall},
                      {"f1", s.f1}});
      os << doc << "," << s.precision << "," << s.recall << "," << s.f1 << "," << s.true_pos
         << "," << s.pred_total << "," << s.gold_total << "\n";
    }
    auto s = gcdt::scores_from_counts(pooled);
    report = {{"kind", "boundary"},
              {"gold", gold_path},
              {"pred", pred_path},
              {"precision", s.precision},
              {"recall", s.recall},
              {"f1", s.f1},
              {"true_pos", s.true_pos},
              {"pred_total", s.pred_total},
              {"gold_total", s.gold_total},
              {"documents", docs}};
    os << "TOTAL," << s.precision << "," << s.recall << "," << s.f1 << "," << s.true_pos << ","
       << s.pred_total << "," << s.gold_total << "\n";
    csv = os.str();
  }
  emit(opts, opts.format == "csv" ? csv : report.dump(2) + "\n", "# gcdt score " + timestamp());
  return 0;
}

void count_relations(const gcdt::RstNode& n, std::map<std::string, long>& counts) {
  for (const auto& e : n.children) {
    if (!e.relation.empty() && e.relation != "span") ++counts[e.relation];
    count_relations(*e.child, counts);
  }
}

int cmd_stats(const CommonOpts& opts, const std::vector<std::string>& rs3_paths) {
  std::map<std::string, long> rel_counts;
  long edus = 0, docs = 0;
  for (const auto& path : rs3_paths) {
    auto tree = gcdt::parse_rs3(gcdt::read_file(path));
    ++docs;
    edus += static_cast<long>(tree.edus.size());
    if (tree.root) count_relations(*tree.root, rel_counts);
  }
  std::ostringstream os;
  if (opts.format == "csv") {
    os << "relation,count\n";
    for (const auto& [name, c] : rel_counts) os << name << "," << c << "\n";
    os << "_docs," << docs << "\n_edus," << edus << "\n";
  } else if (opts.format == "jsonl") {
    for (const auto& [name, c] : rel_counts)
      os << json{{"relation", name}, {"count", c}}.dump() << "\n";
    os << json{{"docs", docs}, {"edus", edus}}.dump() << "\n";
  } else {
    os << "docs\t" << docs << "\nedus\t" << edus << "\n";
    for (const auto& [name, c] : rel_counts) os << name << "\t" << c << "\n";
  }
  emit(opts, os.str(), "# gcdt stats " + timestamp());
  return 0;
}

int cmd_convert(const CommonOpts& opts, const std::string& raw_path, const std::string& rs3_path) {
  std::string payload;
  if (!raw_path.empty()) {
    auto [meta, structure] = gcdt::parse_raw_document(gcdt::read_file(raw_path));
    payload = gcdt::serialize_raw_document(meta, structure);
  } else {
    payload = gcdt::serialize_rs3(gcdt::parse_rs3(gcdt::read_file(rs3_path)));
  }
  emit(opts, payload, "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gcdt: corpus segmentation, validation, linting and scoring"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string raw_path, conllx_path, gold_path, pred_path;
  std::vector<std::string> rs3_paths;

  if (const char* env = std::getenv("GCDT_CONFIG")) opts.config_path = env;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", opts.format, "output format: text, jsonl, csv");
    cmd->add_option("-o,--output", opts.output, "write to a file instead of stdout");
    cmd->add_option("--config", opts.config_path, "JSON config path (or GCDT_CONFIG)");
    cmd->add_option("--jobs", opts.jobs, "document-level parallelism");
    cmd->add_flag("--stable", opts.stable, "suppress the timestamp header line");
    cmd->add_option("--fail-on", opts.fail_on,
                    "severity threshold for exit code 1: error, warning, advisory, never");
  };

  auto* segment = app.add_subcommand("segment", "segment a document into EDUs (TSV)");
  segment->add_option("--raw", raw_path, "raw document")->required();
  segment->add_option("--conllx", conllx_path, "dependency parses")->required();
  add_common(segment);

  auto* validate = app.add_subcommand("validate", "structural checks on rs3 trees");
  validate->add_option("--rs3", rs3_paths, "rs3 files")->required();
  add_common(validate);

  auto* lint = app.add_subcommand("lint", "guideline-convention checks on rs3 trees");
  lint->add_option("--rs3", rs3_paths, "rs3 files")->required();
  lint->add_option("--raw", raw_path, "raw document for layout-aware checks");
  lint->add_option("--conllx", conllx_path, "parses for syntax-aware checks");
  add_common(lint);

  auto* score = app.add_subcommand("score", "agreement between two files (rs3 or segment TSV)");
  score->add_option("--gold", gold_path, "gold file")->required();
  score->add_option("--pred", pred_path, "predicted file")->required();
  add_common(score);

  auto* stats = app.add_subcommand("stats", "relation and EDU frequencies over rs3 files");
  stats->add_option("--rs3", rs3_paths, "rs3 files")->required();
  add_common(stats);

  auto* convert = app.add_subcommand("convert", "re-emit a file in canonical form");
  convert->add_option("--raw", raw_path, "raw document to canonicalize");
  convert->add_option("--rs3", rs3_paths, "rs3 file to canonicalize")->expected(0, 1);
  add_common(convert);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << app.help() << "\n";
    return 2;
  }

  try {
    LoadedConfig cfg = load_config(opts.config_path);
    if (segment->parsed()) return cmd_segment(opts, cfg, raw_path, conllx_path);
    if (validate->parsed()) return cmd_validate(opts, rs3_paths);
    if (lint->parsed()) return cmd_lint(opts, cfg, rs3_paths, raw_path, conllx_path);
    if (score->parsed()) return cmd_score(opts, gold_path, pred_path);
    if (stats->parsed()) return cmd_stats(opts, rs3_paths);
    if (convert->parsed())
      return cmd_convert(opts, raw_path, rs3_paths.empty() ? "" : rs3_paths.front());
  } catch (const std::exception& e) {
    std::cerr << "gcdt: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
