#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dibg {

enum class DiagnosticKind { Lex, Parse, Check };

struct Diagnostic {
  int line = 1;
  int column = 1;
  DiagnosticKind kind = DiagnosticKind::Parse;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string_view to_string(DiagnosticKind kind);

// "3:7: check error: undeclared variable 'x'"
std::string format(const Diagnostic& d);
std::string format(const std::vector<Diagnostic>& ds);

}  // namespace dibg
