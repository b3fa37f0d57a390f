#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace dibg {

// Identifier of one program panel: a single uppercase letter A-Z.
class ProgramId {
 public:
  constexpr ProgramId() = default;
  constexpr explicit ProgramId(char letter) : letter_(letter) {}

  static constexpr bool valid_letter(char c) { return c >= 'A' && c <= 'Z'; }

  // Accepts exactly one uppercase letter.
  static std::optional<ProgramId> parse(std::string_view text) {
    if (text.size() != 1 || !valid_letter(text[0])) return std::nullopt;
    return ProgramId(text[0]);
  }

  constexpr char letter() const { return letter_; }
  std::string str() const { return std::string(1, letter_); }

  friend constexpr auto operator<=>(ProgramId, ProgramId) = default;

 private:
  char letter_ = 'A';
};

}  // namespace dibg
