#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dibg/ast.hpp"
#include "dibg/diagnostic.hpp"

namespace dibg {

// A parsed, name/arity/type-checked WLANG program. Immutable; shared between
// the traces generated from it.
class CheckedProgram {
 public:
  const std::vector<FunctionDef>& functions() const { return functions_; }
  const FunctionDef& main() const { return functions_[main_index_]; }
  const FunctionDef* find(std::string_view name) const;

  // Number of source lines as shown in an editor.
  int line_count() const { return line_count_; }

 private:
  friend class Checker;

  std::vector<FunctionDef> functions_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  std::size_t main_index_ = 0;
  int line_count_ = 0;
};

using CompileResult = std::variant<std::shared_ptr<const CheckedProgram>, std::vector<Diagnostic>>;

// Lexes, parses and checks WLANG source. Exactly one of the alternatives is
// returned; the diagnostic list is never empty.
CompileResult compile(std::string_view source);

// Number of lines; a final newline terminates the last line rather than
// starting a new one.
int count_lines(std::string_view source);

}  // namespace dibg
