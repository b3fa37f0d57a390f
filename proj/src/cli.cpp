#include "dibg/cli.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "dibg/interpreter.hpp"
#include "dibg/persistence.hpp"

namespace dibg::cli {

namespace {

constexpr std::string_view kHelp =
    "load <pid> <path>          set a program's source from a file (creates the next program)\n"
    "input <pid> <ints...>      set a program's inputs\n"
    "stepsize <pid> <n>         set a program's step size\n"
    "break <pid> <line>         toggle a line breakpoint\n"
    "condbreak \"<expr>\" [P:a-b...]  add a conditional breakpoint\n"
    "watch \"<expr>\" [P:a-b...]      add a watch expression\n"
    "delcondbreak <id> | enable <id> | disable <id> | delwatch <id>\n"
    "add | remove <pid>         add or remove a program panel\n"
    "start | stop               enter debug mode / return to edit mode\n"
    "step | stepback | stepover | stepout | singlestep <pid> | continue\n"
    "print                      show the current snapshot\n"
    "save <path> | open <path> | importcex <path>\n"
    "quit\n";

[[noreturn]] void usage(std::string_view text) { throw Error(ErrorCode::InvalidArgument, "usage: " + std::string(text)); }

void expect_args(const std::vector<std::string>& w, std::size_t n, std::string_view text) {
  if (w.size() != n + 1) usage(text);
}

std::int64_t parse_int(const std::string& s) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw Error(ErrorCode::InvalidArgument, "not a 64-bit integer: '" + s + "'");
  }
  return v;
}

int parse_small(const std::string& s) {
  std::int64_t v = parse_int(s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw Error(ErrorCode::InvalidArgument, "number out of range: '" + s + "'");
  }
  return static_cast<int>(v);
}

ProgramId parse_pid(const std::string& s) {
  auto pid = ProgramId::parse(s);
  if (!pid) throw Error(ErrorCode::InvalidArgument, "program identifier must be a single letter A-Z, got '" + s + "'");
  return *pid;
}

// "A:3-9"
ScopeSpec parse_scope(const std::vector<std::string>& w, std::size_t from) {
  ScopeSpec scope;
  for (std::size_t i = from; i < w.size(); ++i) {
    const std::string& s = w[i];
    auto colon = s.find(':');
    auto dash = s.find('-', colon == std::string::npos ? 0 : colon + 2);
    if (colon == std::string::npos || dash == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "scope must look like A:3-9, got '" + s + "'");
    }
    ProgramId pid = parse_pid(s.substr(0, colon));
    LineRange range{parse_small(s.substr(colon + 1, dash - colon - 1)), parse_small(s.substr(dash + 1))};
    if (!scope.emplace(pid, range).second) {
      throw Error(ErrorCode::InvalidArgument, "program " + pid.str() + " is scoped twice");
    }
  }
  return scope;
}

void print_error(std::ostream& err, std::string_view where, const std::exception& e) {
  err << where << "error: " << e.what() << "\n";
}

}  // namespace

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == '"') {
      std::string word;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char d = line[i++];
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\' && i < line.size() && (line[i] == '"' || line[i] == '\\')) d = line[i++];
        word += d;
      }
      if (!closed) throw Error(ErrorCode::InvalidArgument, "unterminated quoted string");
      words.push_back(std::move(word));
    } else {
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '\n' &&
             line[i] != '"' && line[i] != '#') {
        ++i;
      }
      words.emplace_back(line.substr(start, i - start));
    }
  }
  return words;
}

std::string format_snapshot(const SessionSnapshot& snap) {
  std::ostringstream out;
  for (const auto& s : snap.slots) {
    out << s.pid.str() << " line " << s.line << " status " << to_string(s.status) << " cursor " << s.cursor << "/"
        << s.trace_length << " result " << to_string(s.final_status) << "\n";
    for (const auto& b : s.bindings) out << s.pid.str() << "." << b.name << " = " << to_string(b.value) << "\n";
  }
  for (const auto& w : snap.watches) {
    out << "watch " << w.wid << " " << std::quoted(w.text) << " = " << to_string(w.value) << "\n";
  }
  out << "halt " << to_string(snap.halt) << "\n";
  return out.str();
}

std::string format_trace(const Trace& trace) {
  std::ostringstream out;
  for (const auto& p : trace.points()) {
    out << p.index << " line " << p.line << " depth " << p.stack.depth() << " " << to_string(p.status);
    if (!p.stack.empty()) {
      const Frame& f = p.stack.innermost();
      out << " " << f.function << ":";
      for (const auto& b : f.bindings) out << " " << b.name << " = " << to_string(b.value) << ";";
    }
    out << "\n";
  }
  return out.str();
}

CommandRunner::CommandRunner(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

std::filesystem::path CommandRunner::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir_ / p;
}

Outcome CommandRunner::execute(std::string_view line) {
  std::vector<std::string> w = split_words(line);
  Outcome out;
  if (w.empty()) return out;
  const std::string& verb = w[0];
  DebugSession& s = session_;
  out.state_changed = true;

  if (verb == "load") {
    expect_args(w, 2, "load <pid> <path>");
    ProgramId pid = parse_pid(w[1]);
    std::string source = read_text_file(resolve(w[2]));
    if (s.mode() != Mode::Edit) throw Error(ErrorCode::WrongMode, "load requires edit mode");
    if (!s.has_program(pid)) {
      auto next = s.next_program_id();
      if (!next || *next != pid) {
        throw Error(ErrorCode::UnknownProgram,
                    "unknown program " + pid.str() +
                        (next ? "; the next new program is " + next->str() : std::string("; no identifiers left")));
      }
      s.add_program();
    }
    s.set_source(pid, std::move(source));
    s.set_name(pid, w[2]);
  } else if (verb == "input") {
    if (w.size() < 2) usage("input <pid> <ints...>");
    std::vector<std::int64_t> inputs;
    for (std::size_t i = 2; i < w.size(); ++i) inputs.push_back(parse_int(w[i]));
    s.set_inputs(parse_pid(w[1]), std::move(inputs));
  } else if (verb == "stepsize") {
    expect_args(w, 2, "stepsize <pid> <n>");
    s.set_step_size(parse_pid(w[1]), parse_small(w[2]));
  } else if (verb == "break") {
    expect_args(w, 2, "break <pid> <line>");
    ProgramId pid = parse_pid(w[1]);
    int l = parse_small(w[2]);
    s.toggle_breakpoint(pid, l);
    out.ack = "breakpoint " + pid.str() + " " + std::to_string(l) + (s.slot(pid).breakpoints.contains(l) ? " on" : " off");
  } else if (verb == "condbreak") {
    if (w.size() < 2) usage("condbreak \"<expr>\" [P:start-end ...]");
    out.ack = "conditional " + std::to_string(s.add_conditional_breakpoint(w[1], parse_scope(w, 2)));
  } else if (verb == "watch") {
    if (w.size() < 2) usage("watch \"<expr>\" [P:start-end ...]");
    out.ack = "watch " + std::to_string(s.add_watch(w[1], parse_scope(w, 2)));
  } else if (verb == "delcondbreak") {
    expect_args(w, 1, "delcondbreak <id>");
    s.remove_conditional_breakpoint(parse_small(w[1]));
  } else if (verb == "enable" || verb == "disable") {
    expect_args(w, 1, verb + " <id>");
    s.set_conditional_enabled(parse_small(w[1]), verb == "enable");
  } else if (verb == "delwatch") {
    expect_args(w, 1, "delwatch <id>");
    s.remove_watch(parse_small(w[1]));
  } else if (verb == "add") {
    expect_args(w, 0, "add");
    out.ack = "program " + s.add_program().str();
  } else if (verb == "remove") {
    expect_args(w, 1, "remove <pid>");
    s.remove_program(parse_pid(w[1]));
  } else if (verb == "start") {
    expect_args(w, 0, "start");
    s.start_debug();
  } else if (verb == "stop") {
    expect_args(w, 0, "stop");
    s.stop_debug();
    out.ack = "mode edit";
  } else if (verb == "step") {
    expect_args(w, 0, "step");
    s.step();
  } else if (verb == "stepback") {
    expect_args(w, 0, "stepback");
    s.step_back();
  } else if (verb == "stepover") {
    expect_args(w, 0, "stepover");
    s.step_over();
  } else if (verb == "stepout") {
    expect_args(w, 0, "stepout");
    s.step_out();
  } else if (verb == "singlestep") {
    expect_args(w, 1, "singlestep <pid>");
    s.single_step(parse_pid(w[1]));
  } else if (verb == "continue") {
    expect_args(w, 0, "continue");
    s.continue_run();
  } else if (verb == "print") {
    expect_args(w, 0, "print");
    out.output = format_snapshot(s.snapshot());
    out.state_changed = false;
  } else if (verb == "save") {
    expect_args(w, 1, "save <path>");
    save_session_file(s, resolve(w[1]));
    out.state_changed = false;
  } else if (verb == "open") {
    expect_args(w, 1, "open <path>");
    session_ = load_session_file(resolve(w[1]));
  } else if (verb == "importcex") {
    expect_args(w, 1, "importcex <path>");
    import_counterexample(s, read_counterexample_file(resolve(w[1])));
  } else if (verb == "help") {
    out.output = std::string(kHelp);
    out.state_changed = false;
  } else if (verb == "quit") {
    expect_args(w, 0, "quit");
    quit_ = true;
    out.state_changed = false;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown command '" + verb + "' (try help)");
  }
  return out;
}

int run_script_text(std::string_view text, const std::filesystem::path& base_dir, std::string_view name,
                    std::ostream& out, std::ostream& err) {
  CommandRunner runner(base_dir);
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (!runner.quit_requested() && std::getline(in, line)) {
    ++number;
    try {
      out << runner.execute(line).output;
    } catch (const Error& e) {
      print_error(err, std::string(name) + ":" + std::to_string(number) + ": ", e);
      return 1;
    }
  }
  return 0;
}

int run_script(const std::filesystem::path& script, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = read_text_file(script);
  } catch (const Error& e) {
    print_error(err, "", e);
    return 1;
  }
  return run_script_text(text, script.parent_path(), script.string(), out, err);
}

void run_repl(std::istream& in, std::ostream& out, const std::filesystem::path& base_dir, bool prompt) {
  CommandRunner runner(base_dir);
  std::string line;
  while (!runner.quit_requested()) {
    if (prompt) out << "dibg> " << std::flush;
    if (!std::getline(in, line)) break;
    try {
      Outcome o = runner.execute(line);
      out << o.output;
      if (!o.ack.empty()) out << o.ack << "\n";
      if (o.state_changed && runner.session().mode() == Mode::Debug) out << format_snapshot(runner.session().snapshot());
    } catch (const Error& e) {
      print_error(out, "", e);
    }
    out << std::flush;
  }
}

int exec_program(const std::filesystem::path& file, const std::vector<std::int64_t>& args, bool print_trace,
                 std::ostream& out, std::ostream& err) {
  try {
    auto compiled = compile(read_text_file(file));
    if (auto* diags = std::get_if<std::vector<Diagnostic>>(&compiled)) {
      for (const auto& d : *diags) err << file.string() << ":" << format(d) << "\n";
      return 1;
    }
    Trace trace = execute(std::get<std::shared_ptr<const CheckedProgram>>(compiled), args);
    if (print_trace) out << format_trace(trace);
    out << to_string(trace.final_status()) << "\n";
    return 0;
  } catch (const Error& e) {
    print_error(err, "", e);
    return 1;
  }
}

}  // namespace dibg::cli
