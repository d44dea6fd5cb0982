// Shared diagnostic record emitted by tree validation and lint checks.
#pragma once

#include <string>
#include <vector>

namespace gcdt {

enum class Severity { error, warning, advisory };

const char* severity_name(Severity s);

struct Diagnostic {
  std::string code;            // stable identifier, e.g. "E-SPAN-GAP", "L-CITE"
  Severity severity = Severity::error;
  std::string locus;           // node id or span description
  std::string message;
  std::string manual_section;  // e.g. "2.3"

  bool operator==(const Diagnostic&) const = default;
};

}  // namespace gcdt
