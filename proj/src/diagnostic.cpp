#include "dibg/diagnostic.hpp"

namespace dibg {

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::Lex: return "lex";
    case DiagnosticKind::Parse: return "parse";
    case DiagnosticKind::Check: return "check";
  }
  return "unknown";
}

std::string format(const Diagnostic& d) {
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + std::string(to_string(d.kind)) +
         " error: " + d.message;
}

std::string format(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    out += format(d);
    out += '\n';
  }
  return out;
}

}  // namespace dibg
