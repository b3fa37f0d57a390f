#include "dibg/service.hpp"

#include <istream>
#include <limits>
#include <ostream>

#include "dibg/persistence.hpp"

namespace dibg::service {

namespace {

struct ParamError {
  std::string message;
};

struct UnknownMethod {};

const Json& param(const Json& params, const char* key) {
  auto it = params.find(key);
  if (it == params.end()) throw ParamError{std::string("missing parameter '") + key + "'"};
  return *it;
}

const Json* optional_param(const Json& params, const char* key) {
  auto it = params.find(key);
  return it == params.end() || it->is_null() ? nullptr : &*it;
}

std::int64_t int_param(const Json& v, const char* key) {
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw ParamError{std::string("'") + key + "' is out of range"};
    }
    return static_cast<std::int64_t>(u);
  }
  if (!v.is_number_integer()) throw ParamError{std::string("'") + key + "' must be an integer"};
  return v.get<std::int64_t>();
}

int small_param(const Json& params, const char* key) {
  std::int64_t v = int_param(param(params, key), key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ParamError{std::string("'") + key + "' is out of range"};
  }
  return static_cast<int>(v);
}

std::string string_param(const Json& params, const char* key) {
  const Json& v = param(params, key);
  if (!v.is_string()) throw ParamError{std::string("'") + key + "' must be a string"};
  return v.get<std::string>();
}

ProgramId pid_param(const Json& params) {
  auto pid = ProgramId::parse(string_param(params, "pid"));
  if (!pid) throw ParamError{"'pid' must be a single letter A-Z"};
  return *pid;
}

std::vector<std::int64_t> ints_param(const Json& params, const char* key) {
  const Json& v = param(params, key);
  if (!v.is_array()) throw ParamError{std::string("'") + key + "' must be an array of integers"};
  std::vector<std::int64_t> out;
  for (const Json& x : v) out.push_back(int_param(x, key));
  return out;
}

ScopeSpec scope_param(const Json& params) {
  ScopeSpec scope;
  const Json* v = optional_param(params, "scope");
  if (!v) return scope;
  if (!v->is_object()) throw ParamError{"'scope' must be an object like {\"A\": [3, 9]}"};
  for (const auto& [key, range] : v->items()) {
    auto pid = ProgramId::parse(key);
    if (!pid || !range.is_array() || range.size() != 2) {
      throw ParamError{"'scope' must be an object like {\"A\": [3, 9]}"};
    }
    std::int64_t a = int_param(range[0], "scope");
    std::int64_t b = int_param(range[1], "scope");
    if (a < 1 || b > std::numeric_limits<int>::max() || a > b) {
      throw Error(ErrorCode::InvalidArgument, "invalid scope for program " + key + ": need 1 <= start <= end");
    }
    scope[*pid] = {static_cast<int>(a), static_cast<int>(b)};
  }
  return scope;
}

Json scope_to_json(const ScopeSpec& scope) {
  Json out = Json::object();
  for (const auto& [pid, range] : scope) out[pid.str()] = Json::array({range.start_line, range.end_line});
  return out;
}

Json value_to_json(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<IntArray>(v).elements;
}

Json diagnostics_to_json(const std::map<ProgramId, std::vector<Diagnostic>>& diags) {
  Json out = Json::object();
  for (const auto& [pid, list] : diags) {
    Json arr = Json::array();
    for (const auto& d : list) {
      arr.push_back({{"line", d.line}, {"column", d.column}, {"kind", to_string(d.kind)}, {"message", d.message}});
    }
    out[pid.str()] = arr;
  }
  return out;
}

Json error_response(const Json& id, int code, const std::string& message, Json data = nullptr) {
  Json err = {{"code", code}, {"message", message}};
  if (!data.is_null()) err["data"] = std::move(data);
  return {{"id", id}, {"error", err}};
}

}  // namespace

Json to_json(const Status& s) {
  Json out = std::visit(
      [](const auto& st) -> Json {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, status::Running>) {
          return {{"kind", "running"}};
        } else if constexpr (std::is_same_v<T, status::Returned>) {
          return {{"kind", "returned"}, {"value", st.value}};
        } else if constexpr (std::is_same_v<T, status::Error>) {
          return {{"kind", "error"}, {"fault", to_string(st.kind)}, {"message", st.message}};
        } else {
          return {{"kind", "budget_exceeded"}};
        }
      },
      s);
  out["text"] = to_string(s);
  return out;
}

Json to_json(const EvalResult& r) {
  Json value = nullptr;
  if (const auto* i = std::get_if<std::int64_t>(&r)) value = *i;
  if (const auto* b = std::get_if<bool>(&r)) value = *b;
  return {{"value", value}, {"text", to_string(r)}};
}

Json to_json(const HaltReason& h) {
  return std::visit(
      [](const auto& r) -> Json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, halt::None>) {
          return {{"kind", "none"}};
        } else if constexpr (std::is_same_v<T, halt::Breakpoint>) {
          return {{"kind", "breakpoint"}, {"pid", r.pid.str()}, {"line", r.line}};
        } else if constexpr (std::is_same_v<T, halt::Conditional>) {
          return {{"kind", "conditional"}, {"cbid", r.cbid}};
        } else {
          return {{"kind", "all_terminated"}};
        }
      },
      h);
}

Json to_json(const SessionSnapshot& snap) {
  Json slots = Json::array();
  for (const auto& s : snap.slots) {
    Json bindings = Json::array();
    for (const auto& b : s.bindings) {
      bindings.push_back({{"name", b.name}, {"value", value_to_json(b.value)}, {"text", to_string(b.value)}});
    }
    slots.push_back({
        {"pid", s.pid.str()},
        {"name", s.name},
        {"cursor", s.cursor},
        {"trace_length", s.trace_length},
        {"line", s.line},
        {"depth", s.depth},
        {"function", s.function},
        {"status", to_json(s.status)},
        {"bindings", bindings},
        {"final_status", to_json(s.final_status)},
        {"step_size", s.step_size},
        {"breakpoints", s.breakpoints},
    });
  }
  Json watches = Json::array();
  for (const auto& w : snap.watches) {
    Json entry = to_json(w.value);
    entry["wid"] = w.wid;
    entry["expr"] = w.text;
    watches.push_back(entry);
  }
  return {{"slots", slots}, {"watches", watches}, {"halt_reason", to_json(snap.halt)}};
}

Json state_to_json(const DebugSession& session) {
  Json programs = Json::array();
  for (const auto& s : session.slots()) {
    programs.push_back({
        {"pid", s.pid.str()},
        {"name", s.name},
        {"source", s.source},
        {"inputs", s.inputs},
        {"step_size", s.step_size},
        {"breakpoints", s.breakpoints},
    });
  }
  Json conds = Json::array();
  for (const auto& c : session.conditional_breakpoints()) {
    conds.push_back({{"cbid", c.cbid}, {"text", c.expr.text}, {"scope", scope_to_json(c.scope)}, {"enabled", c.enabled}});
  }
  Json watches = Json::array();
  for (const auto& w : session.watches()) {
    watches.push_back({{"wid", w.wid}, {"text", w.expr.text}, {"scope", scope_to_json(w.scope)}});
  }
  Json next = nullptr;
  if (auto n = session.next_program_id()) next = n->str();
  return {
      {"mode", std::string(to_string(session.mode()))},
      {"programs", programs},
      {"conditional_breakpoints", conds},
      {"watches", watches},
      {"next_pid", next},
      {"snapshot", session.mode() == Mode::Debug ? to_json(session.snapshot()) : Json(nullptr)},
  };
}

Dispatcher::Dispatcher(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

Json Dispatcher::state() {
  std::lock_guard lock(mu_);
  return state_to_json(session_);
}

void Dispatcher::with_session(const std::function<void(DebugSession&)>& f) {
  std::lock_guard lock(mu_);
  f(session_);
}

Dispatcher::Reply Dispatcher::handle_text(std::string_view text) {
  Json request;
  try {
    request = Json::parse(text);
  } catch (const Json::parse_error& e) {
    return {error_response(nullptr, kParseError, std::string("malformed JSON: ") + e.what()), std::nullopt};
  }
  return handle(request);
}

Dispatcher::Reply Dispatcher::handle(const Json& request) {
  if (!request.is_object()) return {error_response(nullptr, kInvalidRequest, "request must be an object"), std::nullopt};
  Json id = request.contains("id") ? request["id"] : Json(nullptr);
  if (!id.is_null() && !id.is_number_integer() && !id.is_string()) {
    return {error_response(nullptr, kInvalidRequest, "'id' must be an integer or a string"), std::nullopt};
  }
  auto m = request.find("method");
  if (m == request.end() || !m->is_string()) {
    return {error_response(id, kInvalidRequest, "missing 'method'"), std::nullopt};
  }
  Json params = request.contains("params") ? request["params"] : Json::object();
  if (params.is_null()) params = Json::object();
  if (!params.is_object()) return {error_response(id, kInvalidParams, "'params' must be an object"), std::nullopt};

  std::lock_guard lock(mu_);
  bool changed = false;
  try {
    Json result = call(m->get<std::string>(), params, changed);
    Reply reply{{{"id", id}, {"result", result}}, std::nullopt};
    if (changed) reply.event = Json{{"event", "snapshot"}, {"data", state_to_json(session_)}};
    return reply;
  } catch (const ParamError& e) {
    return {error_response(id, kInvalidParams, e.message), std::nullopt};
  } catch (const UnknownMethod&) {
    return {error_response(id, kMethodNotFound, "unknown method '" + m->get<std::string>() + "'"), std::nullopt};
  } catch (const CompileFailure& e) {
    return {error_response(id, static_cast<int>(e.code()), e.what(), {{"diagnostics", diagnostics_to_json(e.diagnostics())}}),
            std::nullopt};
  } catch (const Error& e) {
    return {error_response(id, static_cast<int>(e.code()), e.what()), std::nullopt};
  }
}

Json Dispatcher::call(const std::string& method, const Json& params, bool& changed) {
  DebugSession& s = session_;
  auto resolve = [&](const std::string& path) {
    std::filesystem::path p(path);
    return p.is_absolute() ? p : base_dir_ / p;
  };
  Json result = Json::object();
  changed = true;

  if (method == "program.add") {
    result["pid"] = s.add_program().str();
  } else if (method == "program.remove") {
    s.remove_program(pid_param(params));
  } else if (method == "program.setSource") {
    ProgramId pid = pid_param(params);
    std::string source = string_param(params, "source");
    std::optional<std::string> name;
    if (optional_param(params, "name")) name = string_param(params, "name");
    s.set_source(pid, std::move(source));
    if (name) s.set_name(pid, *name);
  } else if (method == "program.setInputs") {
    ProgramId pid = pid_param(params);
    s.set_inputs(pid, ints_param(params, "inputs"));
  } else if (method == "program.setStepSize") {
    ProgramId pid = pid_param(params);
    s.set_step_size(pid, small_param(params, "step_size"));
  } else if (method == "debug.start") {
    s.start_debug();
  } else if (method == "debug.stop") {
    s.stop_debug();
  } else if (method == "debug.step") {
    s.step();
  } else if (method == "debug.stepBack") {
    s.step_back();
  } else if (method == "debug.stepOver") {
    s.step_over();
  } else if (method == "debug.stepOut") {
    s.step_out();
  } else if (method == "debug.singleStep") {
    s.single_step(pid_param(params));
  } else if (method == "debug.continue") {
    s.continue_run();
    result["rounds"] = s.last_continue_rounds();
  } else if (method == "bp.toggle") {
    ProgramId pid = pid_param(params);
    int line = small_param(params, "line");
    s.toggle_breakpoint(pid, line);
    result["set"] = s.slot(pid).breakpoints.contains(line);
  } else if (method == "cbp.add") {
    std::string text = string_param(params, "text");
    result["cbid"] = s.add_conditional_breakpoint(text, scope_param(params));
  } else if (method == "cbp.remove") {
    s.remove_conditional_breakpoint(small_param(params, "cbid"));
  } else if (method == "cbp.enable") {
    int cbid = small_param(params, "cbid");
    const Json& e = param(params, "enabled");
    if (!e.is_boolean()) throw ParamError{"'enabled' must be true or false"};
    s.set_conditional_enabled(cbid, e.get<bool>());
  } else if (method == "watch.add") {
    std::string text = string_param(params, "text");
    result["wid"] = s.add_watch(text, scope_param(params));
  } else if (method == "watch.remove") {
    s.remove_watch(small_param(params, "wid"));
  } else if (method == "state.get") {
    changed = false;
    result = state_to_json(s);
  } else if (method == "session.save") {
    changed = false;
    if (optional_param(params, "path")) {
      save_session_file(s, resolve(string_param(params, "path")));
    } else {
      result["document"] = save_session(s);
    }
  } else if (method == "session.open") {
    if (s.mode() != Mode::Edit) throw Error(ErrorCode::WrongMode, "session.open requires edit mode");
    if (optional_param(params, "path")) {
      session_ = load_session_file(resolve(string_param(params, "path")));
    } else {
      session_ = load_session(string_param(params, "document"), base_dir_);
    }
  } else if (method == "cex.import") {
    Counterexample cex;
    if (optional_param(params, "path")) {
      cex = read_counterexample_file(resolve(string_param(params, "path")));
    } else if (const Json* entries = optional_param(params, "entries")) {
      cex = parse_counterexample(entries->dump());
    } else {
      cex = parse_counterexample(string_param(params, "document"));
    }
    import_counterexample(s, cex);
  } else {
    throw UnknownMethod{};
  }
  return result;
}

void serve_stdio(Dispatcher& dispatcher, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Dispatcher::Reply reply = dispatcher.handle_text(line);
    out << reply.response.dump() << "\n";
    if (reply.event) out << reply.event->dump() << "\n";
    out << std::flush;
  }
}

}  // namespace dibg::service
