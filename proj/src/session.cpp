#include "dibg/session.hpp"

#include <algorithm>

#include "dibg/interpreter.hpp"

namespace dibg {

namespace {

std::string join_messages(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += "; ";
    out += format(d);
  }
  return out;
}

std::string describe(const std::map<ProgramId, std::vector<Diagnostic>>& diagnostics) {
  std::string out = "compilation failed";
  for (const auto& [pid, diags] : diagnostics) out += "\n" + pid.str() + ": " + join_messages(diags);
  return out;
}

std::size_t last_index(const ProgramSlot& s) { return s.trace->last_index(); }

std::size_t advance(const ProgramSlot& s, std::size_t by) { return std::min(s.cursor + by, last_index(s)); }

std::size_t depth_at(const ProgramSlot& s, std::size_t i) { return (*s.trace)[i].stack.depth(); }

std::size_t over_step(const ProgramSlot& s, std::size_t from) {
  std::size_t d = depth_at(s, from);
  for (std::size_t j = from + 1; j <= last_index(s); ++j) {
    if (depth_at(s, j) <= d) return j;
  }
  // The trace ends deeper than `from` (a fault inside a nested call).
  return from;
}

std::size_t out_step(const ProgramSlot& s) {
  std::size_t d = depth_at(s, s.cursor);
  if (d > 1) {
    for (std::size_t j = s.cursor + 1; j <= last_index(s); ++j) {
      if (depth_at(s, j) < d) return j;
    }
  }
  return last_index(s);
}

}  // namespace

std::string_view to_string(Mode m) { return m == Mode::Edit ? "edit" : "debug"; }

std::string to_string(const HaltReason& h) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, halt::None>) {
          return "none";
        } else if constexpr (std::is_same_v<T, halt::Breakpoint>) {
          return "breakpoint " + r.pid.str() + " " + std::to_string(r.line);
        } else if constexpr (std::is_same_v<T, halt::Conditional>) {
          return "conditional " + std::to_string(r.cbid);
        } else {
          return "all_terminated";
        }
      },
      h);
}

CompileFailure::CompileFailure(std::map<ProgramId, std::vector<Diagnostic>> diagnostics)
    : Error(ErrorCode::Compile, describe(diagnostics)), diagnostics_(std::move(diagnostics)) {}

DebugSession::DebugSession() : DebugSession(std::vector<ProgramId>{ProgramId('A')}) {}

DebugSession::DebugSession(const std::vector<ProgramId>& pids) {
  if (pids.empty()) throw Error(ErrorCode::InvalidArgument, "a session needs at least one program");
  std::vector<ProgramId> sorted = pids;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidArgument, "duplicate program identifier");
  }
  for (ProgramId pid : sorted) {
    slots_.emplace_back().pid = pid;
  }
  next_letter_ = static_cast<char>(sorted.back().letter() + 1);
}

const ProgramSlot& DebugSession::slot(ProgramId pid) const {
  for (const auto& s : slots_) {
    if (s.pid == pid) return s;
  }
  throw Error(ErrorCode::UnknownProgram, "unknown program " + pid.str());
}

ProgramSlot& DebugSession::mutable_slot(ProgramId pid) { return const_cast<ProgramSlot&>(slot(pid)); }

bool DebugSession::has_program(ProgramId pid) const {
  return std::any_of(slots_.begin(), slots_.end(), [&](const ProgramSlot& s) { return s.pid == pid; });
}

void DebugSession::require_mode(Mode m, std::string_view op) const {
  if (mode_ != m) {
    throw Error(ErrorCode::WrongMode,
                std::string(op) + " requires " + std::string(to_string(m)) + " mode (session is in " +
                    std::string(to_string(mode_)) + " mode)");
  }
}

void DebugSession::set_limits(const ExecutionLimits& limits) {
  require_mode(Mode::Edit, "set_limits");
  if (limits.max_points == 0 || limits.max_stack_depth == 0) {
    throw Error(ErrorCode::InvalidArgument, "execution limits must be positive");
  }
  limits_ = limits;
}

ProgramId DebugSession::add_program() {
  require_mode(Mode::Edit, "add_program");
  if (!ProgramId::valid_letter(next_letter_)) {
    throw Error(ErrorCode::TooManyPrograms, "no program identifiers left (A-Z are used up)");
  }
  ProgramId pid(next_letter_++);
  slots_.emplace_back().pid = pid;
  return pid;
}

std::optional<ProgramId> DebugSession::next_program_id() const {
  if (!ProgramId::valid_letter(next_letter_)) return std::nullopt;
  return ProgramId(next_letter_);
}

void DebugSession::remove_program(ProgramId pid) {
  require_mode(Mode::Edit, "remove_program");
  slot(pid);
  if (slots_.size() == 1) throw Error(ErrorCode::LastProgram, "cannot remove the last program");
  std::erase_if(slots_, [&](const ProgramSlot& s) { return s.pid == pid; });
  auto mentions = [&](const RelationalExpression& e, const ScopeSpec& scope) {
    return e.programs.contains(pid) || scope.contains(pid);
  };
  std::erase_if(conds_, [&](const ConditionalBreakpoint& c) { return mentions(c.expr, c.scope); });
  std::erase_if(watches_, [&](const WatchExpression& w) { return mentions(w.expr, w.scope); });
}

void DebugSession::set_source(ProgramId pid, std::string text) {
  require_mode(Mode::Edit, "set_source");
  mutable_slot(pid).source = std::move(text);
}

void DebugSession::set_name(ProgramId pid, std::string name) { mutable_slot(pid).name = std::move(name); }

void DebugSession::set_inputs(ProgramId pid, std::vector<std::int64_t> inputs) {
  require_mode(Mode::Edit, "set_inputs");
  mutable_slot(pid).inputs = std::move(inputs);
}

void DebugSession::set_step_size(ProgramId pid, int n) {
  ProgramSlot& s = mutable_slot(pid);
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "step size must be at least 1, got " + std::to_string(n));
  s.step_size = n;
}

SessionSnapshot DebugSession::start_debug() {
  require_mode(Mode::Edit, "start_debug");

  std::map<ProgramId, std::vector<Diagnostic>> failures;
  std::vector<std::shared_ptr<const CheckedProgram>> compiled;
  for (const auto& s : slots_) {
    auto result = compile(s.source);
    if (auto* diags = std::get_if<std::vector<Diagnostic>>(&result)) {
      failures.emplace(s.pid, std::move(*diags));
      compiled.push_back(nullptr);
    } else {
      compiled.push_back(std::get<std::shared_ptr<const CheckedProgram>>(std::move(result)));
    }
  }
  if (!failures.empty()) throw CompileFailure(std::move(failures));

  for (std::size_t i = 0; i < slots_.size(); ++i) {
    std::size_t arity = compiled[i]->main().params.size();
    if (slots_[i].inputs.size() != arity) {
      throw Error(ErrorCode::InputArity, "program " + slots_[i].pid.str() + ": main takes " + std::to_string(arity) +
                                             " input(s) but " + std::to_string(slots_[i].inputs.size()) +
                                             " were given");
    }
  }

  std::vector<Trace> traces;
  traces.reserve(slots_.size());
  for (std::size_t i = 0; i < slots_.size(); ++i) traces.push_back(execute(compiled[i], slots_[i].inputs, limits_));

  for (std::size_t i = 0; i < slots_.size(); ++i) {
    ProgramSlot& s = slots_[i];
    int lines = compiled[i]->line_count();
    std::erase_if(s.breakpoints, [&](int line) { return line > lines; });
    s.compiled = std::move(compiled[i]);
    s.trace = std::move(traces[i]);
    s.cursor = 0;
  }
  mode_ = Mode::Debug;
  halt_ = halt::None{};
  last_rounds_ = 0;
  return snapshot();
}

void DebugSession::stop_debug() {
  require_mode(Mode::Debug, "stop_debug");
  for (auto& s : slots_) {
    s.compiled.reset();
    s.trace.reset();
    s.cursor = 0;
  }
  mode_ = Mode::Edit;
  halt_ = halt::None{};
}

SessionSnapshot DebugSession::step() {
  require_mode(Mode::Debug, "step");
  for (auto& s : slots_) s.cursor = advance(s, static_cast<std::size_t>(s.step_size));
  halt_ = halt::None{};
  return snapshot();
}

SessionSnapshot DebugSession::step_back() {
  require_mode(Mode::Debug, "step_back");
  for (auto& s : slots_) {
    auto by = static_cast<std::size_t>(s.step_size);
    s.cursor = s.cursor > by ? s.cursor - by : 0;
  }
  halt_ = halt::None{};
  return snapshot();
}

SessionSnapshot DebugSession::step_over() {
  require_mode(Mode::Debug, "step_over");
  for (auto& s : slots_) {
    for (int i = 0; i < s.step_size; ++i) s.cursor = over_step(s, s.cursor);
  }
  halt_ = halt::None{};
  return snapshot();
}

SessionSnapshot DebugSession::step_out() {
  require_mode(Mode::Debug, "step_out");
  for (auto& s : slots_) s.cursor = out_step(s);
  halt_ = halt::None{};
  return snapshot();
}

SessionSnapshot DebugSession::single_step(ProgramId pid) {
  require_mode(Mode::Debug, "single_step");
  ProgramSlot& s = mutable_slot(pid);
  s.cursor = advance(s, 1);
  halt_ = halt::None{};
  return snapshot();
}

SessionSnapshot DebugSession::continue_run() {
  require_mode(Mode::Debug, "continue");

  std::vector<bool> frozen(slots_.size(), false);
  std::vector<bool> on_breakpoint(slots_.size(), false);
  std::size_t rounds = 0;
  HaltReason reason = halt::AllTerminated{};

  auto all_frozen = [&] { return std::all_of(frozen.begin(), frozen.end(), [](bool f) { return f; }); };
  for (std::size_t i = 0; i < slots_.size(); ++i) frozen[i] = slots_[i].cursor == last_index(slots_[i]);

  while (!all_frozen()) {
    ++rounds;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (frozen[i]) continue;
      ProgramSlot& s = slots_[i];
      s.cursor = advance(s, static_cast<std::size_t>(s.step_size));
      if (s.breakpoints.contains(s.current().line)) {
        frozen[i] = on_breakpoint[i] = true;
      } else if (s.cursor == last_index(s)) {
        frozen[i] = true;
      }
    }

    PointTuple points = current_points();
    bool hit = false;
    for (const auto& c : conds_) {
      if (!c.enabled) continue;
      EvalResult r = evaluate(c.expr, points, c.scope);
      if (const bool* b = std::get_if<bool>(&r); b && *b) {
        reason = halt::Conditional{c.cbid};
        hit = true;
        break;
      }
    }
    if (hit) break;
  }

  if (!std::holds_alternative<halt::Conditional>(reason)) {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (on_breakpoint[i]) {
        reason = halt::Breakpoint{slots_[i].pid, slots_[i].current().line};
        break;
      }
    }
  }

  last_rounds_ = rounds;
  halt_ = reason;
  return snapshot();
}

void DebugSession::toggle_breakpoint(ProgramId pid, int line) {
  ProgramSlot& s = mutable_slot(pid);
  if (line < 1) throw Error(ErrorCode::InvalidArgument, "breakpoint line must be at least 1");
  if (!s.breakpoints.erase(line)) s.breakpoints.insert(line);
}

RelationalExpression DebugSession::checked_expression(std::string_view text, const ScopeSpec& scope) const {
  validate_scope(scope);
  auto parsed = parse_relational(text);
  if (auto* d = std::get_if<Diagnostic>(&parsed)) throw Error(ErrorCode::Parse, format(*d));
  auto expr = std::get<RelationalExpression>(std::move(parsed));
  for (ProgramId pid : expr.programs) {
    if (!has_program(pid)) throw Error(ErrorCode::UnknownProgram, "expression refers to unknown program " + pid.str());
  }
  for (const auto& entry : scope) {
    if (!has_program(entry.first)) {
      throw Error(ErrorCode::UnknownProgram, "scope refers to unknown program " + entry.first.str());
    }
  }
  return expr;
}

int DebugSession::add_conditional_breakpoint(std::string_view text, ScopeSpec scope) {
  RelationalExpression expr = checked_expression(text, scope);
  if (!expr.is_boolean()) {
    throw Error(ErrorCode::NonBooleanCondition, "conditional breakpoint '" + std::string(text) + "' is not a condition");
  }
  int id = next_cbid_++;
  conds_.push_back({id, std::move(expr), std::move(scope), true});
  return id;
}

void DebugSession::remove_conditional_breakpoint(int cbid) {
  if (!std::erase_if(conds_, [&](const ConditionalBreakpoint& c) { return c.cbid == cbid; })) {
    throw Error(ErrorCode::UnknownConditional, "unknown conditional breakpoint " + std::to_string(cbid));
  }
}

void DebugSession::set_conditional_enabled(int cbid, bool enabled) {
  for (auto& c : conds_) {
    if (c.cbid == cbid) {
      c.enabled = enabled;
      return;
    }
  }
  throw Error(ErrorCode::UnknownConditional, "unknown conditional breakpoint " + std::to_string(cbid));
}

int DebugSession::add_watch(std::string_view text, ScopeSpec scope) {
  RelationalExpression expr = checked_expression(text, scope);
  int id = next_wid_++;
  watches_.push_back({id, std::move(expr), std::move(scope)});
  return id;
}

void DebugSession::remove_watch(int wid) {
  if (!std::erase_if(watches_, [&](const WatchExpression& w) { return w.wid == wid; })) {
    throw Error(ErrorCode::UnknownWatch, "unknown watch " + std::to_string(wid));
  }
}

PointTuple DebugSession::current_points() const {
  require_mode(Mode::Debug, "current_points");
  PointTuple points;
  for (const auto& s : slots_) points.emplace(s.pid, &s.current());
  return points;
}

SessionSnapshot DebugSession::snapshot() const {
  require_mode(Mode::Debug, "get_snapshot");
  SessionSnapshot out;
  for (const auto& s : slots_) {
    const ExecutionPoint& p = s.current();
    SlotSnapshot ss;
    ss.pid = s.pid;
    ss.name = s.name;
    ss.cursor = s.cursor;
    ss.trace_length = s.trace->size();
    ss.line = p.line;
    ss.depth = p.stack.depth();
    ss.status = p.status;
    if (!p.stack.empty()) {
      ss.function = p.stack.innermost().function;
      ss.bindings = p.stack.innermost().bindings;
    }
    ss.final_status = s.trace->final_status();
    ss.step_size = s.step_size;
    ss.breakpoints = s.breakpoints;
    out.slots.push_back(std::move(ss));
  }
  PointTuple points = current_points();
  for (const auto& w : watches_) out.watches.push_back({w.wid, w.expr.text, evaluate(w.expr, points, w.scope)});
  out.halt = halt_;
  return out;
}

}  // namespace dibg
