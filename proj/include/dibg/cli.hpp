#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dibg/session.hpp"

namespace dibg::cli {

// Splits a command line into words. Double quotes group words (with \" and
// \\ escapes); an unquoted # starts a comment. Throws Error(InvalidArgument)
// on an unterminated quote.
std::vector<std::string> split_words(std::string_view line);

// Line-oriented snapshot text:
//   A line 8 status running cursor 5/8 result returned(2)
//   A.a = 2
//   watch 0 "A.a != B.b" = true
//   halt conditional 0
std::string format_snapshot(const SessionSnapshot& snap);

// One point per line: index, line, depth, status, function and bindings.
std::string format_trace(const Trace& trace);

struct Outcome {
  std::string output;          // printed in scripts and in the repl
  std::string ack;             // short confirmation, printed in the repl only
  bool state_changed = false;  // the repl prints a snapshot afterwards
};

// Executes the command language against one session. Relative paths are
// resolved against `base_dir`.
class CommandRunner {
 public:
  explicit CommandRunner(std::filesystem::path base_dir = {});

  // Throws dibg::Error on any command or session error; the session is left
  // as the failing operation left it (operations are atomic).
  Outcome execute(std::string_view line);

  bool quit_requested() const { return quit_; }
  DebugSession& session() { return session_; }
  const DebugSession& session() const { return session_; }

 private:
  std::filesystem::path resolve(const std::string& path) const;

  DebugSession session_;
  std::filesystem::path base_dir_;
  bool quit_ = false;
};

// Runs commands until `quit`, the end of input, or the first error, which is
// reported on `err` as "<name>:<line>: error: <message>". Returns 0 or 1.
int run_script_text(std::string_view text, const std::filesystem::path& base_dir, std::string_view name,
                    std::ostream& out, std::ostream& err);
int run_script(const std::filesystem::path& script, std::ostream& out, std::ostream& err);

// Interactive loop: errors are printed and the loop continues; after every
// state-changing command in debug mode the snapshot is printed.
void run_repl(std::istream& in, std::ostream& out, const std::filesystem::path& base_dir, bool prompt);

// Compiles and runs one program, printing its final status (and optionally
// every execution point). Returns 0, or 1 on compile/arity/io errors.
int exec_program(const std::filesystem::path& file, const std::vector<std::int64_t>& args, bool print_trace,
                 std::ostream& out, std::ostream& err);

}  // namespace dibg::cli
