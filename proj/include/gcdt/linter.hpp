// Guideline-convention checks on validated trees, beyond structural validity.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gcdt/corpus_io.hpp"
#include "gcdt/diag.hpp"
#include "gcdt/rst_model.hpp"

namespace gcdt {

struct LintError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LintConfig {
  std::set<std::string> disabled_codes;
  std::map<std::string, Severity> severity_overrides;
};

struct LintReport {
  std::vector<Diagnostic> findings;
  // Coverage notes, e.g. checks skipped for lack of a dependency parse.
  std::vector<std::string> footer;
};

struct RegistryEntry {
  std::string code;
  Severity severity;
  std::string manual_section;
  std::string summary;
};

// The closed registry of lint codes with default severities.
const std::vector<RegistryEntry>& lint_registry();

// Throws LintError (PreconditionFailed) if structural validation fails.
// `doc` may be null: document-dependent checks are skipped with a footer note.
LintReport lint(const AnalyzedDocument* doc, const RstTree& tree, const LintConfig& config = {});

}  // namespace gcdt
