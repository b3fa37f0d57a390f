#pragma once

#include <gtest/gtest.h>

#include <memory>
#include <string>
#include <string_view>

#include "dibg/frontend.hpp"

namespace dibg::testing {

// The two Euclid implementations used throughout the scenario tests. Line
// numbers matter: the halt scenario stops on line 8 of both.
inline constexpr std::string_view kGcdCorrect =
    "int main(int a, int b) {\n"
    "   int i = 0;\n"
    "   while (a != b && i < 500) {\n"
    "      i = i + 1;\n"
    "      if (a > b)\n"
    "         a = a - b;\n"
    "      else\n"
    "         b = b - a;\n"
    "   }\n"
    "   return a;\n"
    "}\n";

inline constexpr std::string_view kGcdBroken =
    "int main(int b, int a) {\n"
    "   int i = 0;\n"
    "   while (a != b && i < 500) {\n"
    "      i = i + 1;\n"
    "      if (b > a)\n"
    "         a = a - b;\n"
    "      else\n"
    "         b = b - a;\n"
    "   }\n"
    "   return b;\n"
    "}\n";

// kGcdBroken with the then/else bodies swapped back.
inline constexpr std::string_view kGcdFixed =
    "int main(int b, int a) {\n"
    "   int i = 0;\n"
    "   while (a != b && i < 500) {\n"
    "      i = i + 1;\n"
    "      if (b > a)\n"
    "         b = b - a;\n"
    "      else\n"
    "         a = a - b;\n"
    "   }\n"
    "   return b;\n"
    "}\n";

inline std::shared_ptr<const CheckedProgram> must_compile(std::string_view src) {
  auto r = compile(src);
  if (auto* diags = std::get_if<std::vector<Diagnostic>>(&r)) {
    ADD_FAILURE() << "compile failed:\n" << format(*diags) << "source:\n" << src;
    return nullptr;
  }
  return std::get<std::shared_ptr<const CheckedProgram>>(r);
}

inline std::vector<Diagnostic> must_fail(std::string_view src) {
  auto r = compile(src);
  if (auto* diags = std::get_if<std::vector<Diagnostic>>(&r)) return *diags;
  ADD_FAILURE() << "expected compile failure for:\n" << src;
  return {};
}

}  // namespace dibg::testing
