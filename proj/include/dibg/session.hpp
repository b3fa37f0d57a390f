#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dibg/error.hpp"
#include "dibg/frontend.hpp"
#include "dibg/program_id.hpp"
#include "dibg/relational.hpp"
#include "dibg/trace.hpp"

namespace dibg {

enum class Mode { Edit, Debug };

std::string_view to_string(Mode m);

// One program panel.
struct ProgramSlot {
  ProgramId pid;
  std::string name;  // display name, usually the file it was loaded from
  std::string source;
  std::vector<std::int64_t> inputs;
  int step_size = 1;
  std::set<int> breakpoints;

  // Present exactly in debug mode.
  std::shared_ptr<const CheckedProgram> compiled;
  std::optional<Trace> trace;
  std::size_t cursor = 0;

  const ExecutionPoint& current() const { return (*trace)[cursor]; }
};

struct ConditionalBreakpoint {
  int cbid = 0;
  RelationalExpression expr;
  ScopeSpec scope;
  bool enabled = true;
};

struct WatchExpression {
  int wid = 0;
  RelationalExpression expr;
  ScopeSpec scope;
};

namespace halt {
struct None {
  friend bool operator==(None, None) = default;
};
struct Breakpoint {
  ProgramId pid;
  int line = 0;
  friend bool operator==(Breakpoint, Breakpoint) = default;
};
struct Conditional {
  int cbid = 0;
  friend bool operator==(Conditional, Conditional) = default;
};
struct AllTerminated {
  friend bool operator==(AllTerminated, AllTerminated) = default;
};
}  // namespace halt

using HaltReason = std::variant<halt::None, halt::Breakpoint, halt::Conditional, halt::AllTerminated>;

// "none", "breakpoint A 4", "conditional 0", "all_terminated".
std::string to_string(const HaltReason& h);

struct SlotSnapshot {
  ProgramId pid;
  std::string name;
  std::size_t cursor = 0;
  std::size_t trace_length = 0;
  int line = 0;
  std::size_t depth = 0;
  std::string function;
  Status status;
  std::vector<Binding> bindings;  // innermost frame
  Status final_status;            // what main eventually returns
  int step_size = 1;
  std::set<int> breakpoints;

  friend bool operator==(const SlotSnapshot&, const SlotSnapshot&) = default;
};

struct WatchSnapshot {
  int wid = 0;
  std::string text;
  EvalResult value;

  friend bool operator==(const WatchSnapshot&, const WatchSnapshot&) = default;
};

struct SessionSnapshot {
  std::vector<SlotSnapshot> slots;
  std::vector<WatchSnapshot> watches;
  HaltReason halt;

  friend bool operator==(const SessionSnapshot&, const SessionSnapshot&) = default;
};

// start_debug failure: compile diagnostics for every failing program.
class CompileFailure : public Error {
 public:
  explicit CompileFailure(std::map<ProgramId, std::vector<Diagnostic>> diagnostics);

  const std::map<ProgramId, std::vector<Diagnostic>>& diagnostics() const { return diagnostics_; }

 private:
  std::map<ProgramId, std::vector<Diagnostic>> diagnostics_;
};

// k programs debugged in lockstep over their precomputed traces.
//
// Single-writer: mutations must be serialized by the caller. Every operation
// throws dibg::Error (WrongMode, UnknownProgram, ...) on a violated
// precondition and then leaves the session untouched.
class DebugSession {
 public:
  // Edit mode with one empty program A.
  DebugSession();

  // Edit mode with the given programs (non-empty, unique). Used when
  // restoring saved sessions.
  explicit DebugSession(const std::vector<ProgramId>& pids);

  Mode mode() const { return mode_; }
  const std::vector<ProgramSlot>& slots() const { return slots_; }
  const ProgramSlot& slot(ProgramId pid) const;
  bool has_program(ProgramId pid) const;
  const std::vector<ConditionalBreakpoint>& conditional_breakpoints() const { return conds_; }
  const std::vector<WatchExpression>& watches() const { return watches_; }
  const HaltReason& halt_reason() const { return halt_; }

  const ExecutionLimits& limits() const { return limits_; }
  void set_limits(const ExecutionLimits& limits);

  // Panels (edit mode only). New panels take the next never-used letter.
  ProgramId add_program();
  // The letter add_program would assign, if any are left.
  std::optional<ProgramId> next_program_id() const;
  void remove_program(ProgramId pid);

  void set_source(ProgramId pid, std::string text);
  void set_name(ProgramId pid, std::string name);
  void set_inputs(ProgramId pid, std::vector<std::int64_t> inputs);
  void set_step_size(ProgramId pid, int n);  // either mode

  // Play / Stop.
  SessionSnapshot start_debug();
  void stop_debug();

  SessionSnapshot step();
  SessionSnapshot step_back();
  SessionSnapshot step_over();
  SessionSnapshot step_out();
  SessionSnapshot single_step(ProgramId pid);
  SessionSnapshot continue_run();

  // Rounds taken by the most recent continue_run.
  std::size_t last_continue_rounds() const { return last_rounds_; }

  void toggle_breakpoint(ProgramId pid, int line);

  int add_conditional_breakpoint(std::string_view text, ScopeSpec scope = {});
  void remove_conditional_breakpoint(int cbid);
  void set_conditional_enabled(int cbid, bool enabled);

  int add_watch(std::string_view text, ScopeSpec scope = {});
  void remove_watch(int wid);

  // Debug mode only.
  SessionSnapshot snapshot() const;

  // Current execution point of every program, for relational evaluation.
  PointTuple current_points() const;

 private:
  ProgramSlot& mutable_slot(ProgramId pid);
  void require_mode(Mode m, std::string_view op) const;
  RelationalExpression checked_expression(std::string_view text, const ScopeSpec& scope) const;

  std::vector<ProgramSlot> slots_;
  std::vector<ConditionalBreakpoint> conds_;
  std::vector<WatchExpression> watches_;
  Mode mode_ = Mode::Edit;
  HaltReason halt_;
  char next_letter_ = 'A';
  int next_cbid_ = 0;
  int next_wid_ = 0;
  std::size_t last_rounds_ = 0;
  ExecutionLimits limits_;
};

}  // namespace dibg
