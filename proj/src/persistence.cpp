#include "dibg/persistence.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dibg {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Document, where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(where, std::string("missing field '") + key + "'");
  return *it;
}

const json* optional_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) bad(where, "integer out of range");
    return static_cast<std::int64_t>(u);
  }
  if (!v.is_number_integer()) bad(where, "expected an integer");
  return v.get<std::int64_t>();
}

int as_small_int(const json& v, const std::string& where) {
  std::int64_t i = as_int(v, where);
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) bad(where, "integer out of range");
  return static_cast<int>(i);
}

const std::string& as_string(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where, "expected a string");
  return v.get_ref<const std::string&>();
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array");
  return v;
}

const json& as_object(const json& v, const std::string& where) {
  if (!v.is_object()) bad(where, "expected an object");
  return v;
}

ProgramId as_pid(const json& v, const std::string& where) {
  auto pid = ProgramId::parse(as_string(v, where));
  if (!pid) bad(where, "program identifier must be a single uppercase letter A-Z");
  return *pid;
}

std::vector<std::int64_t> as_inputs(const json& v, const std::string& where) {
  std::vector<std::int64_t> out;
  const json& arr = as_array(v, where);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_int(arr[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

json parse_json(std::string_view bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Document, std::string("malformed JSON: ") + e.what());
  }
}

json scope_to_json(const ScopeSpec& scope) {
  json out = json::object();
  for (const auto& [pid, range] : scope) out[pid.str()] = json::array({range.start_line, range.end_line});
  return out;
}

ScopeSpec scope_from_json(const json& v, const std::string& where) {
  ScopeSpec out;
  for (const auto& [key, range] : as_object(v, where).items()) {
    auto pid = ProgramId::parse(key);
    if (!pid) bad(where, "scope key '" + key + "' is not a program identifier");
    const json& arr = as_array(range, where + "." + key);
    if (arr.size() != 2) bad(where + "." + key, "expected [start_line, end_line]");
    out[*pid] = {as_small_int(arr[0], where + "." + key), as_small_int(arr[1], where + "." + key)};
  }
  return out;
}

template <typename F>
void as_document_error(const std::string& where, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Document || e.code() == ErrorCode::Io) throw;
    bad(where, e.what());
  }
}

}  // namespace

std::string save_session(const DebugSession& session) {
  if (session.mode() != Mode::Edit) {
    throw Error(ErrorCode::WrongMode, "save requires edit mode (traces are never saved)");
  }
  json programs = json::array();
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
  json conds = json::array();
  for (const auto& c : session.conditional_breakpoints()) {
    conds.push_back({{"text", c.expr.text}, {"scope", scope_to_json(c.scope)}, {"enabled", c.enabled}});
  }
  json watches = json::array();
  for (const auto& w : session.watches()) {
    watches.push_back({{"text", w.expr.text}, {"scope", scope_to_json(w.scope)}});
  }
  json doc = {
      {"version", kSessionFileVersion},
      {"programs", programs},
      {"conditional_breakpoints", conds},
      {"watches", watches},
  };
  return doc.dump(2) + "\n";
}

DebugSession load_session(std::string_view bytes, const std::filesystem::path& base_dir) {
  json doc = parse_json(bytes);
  as_object(doc, "session");

  int version = as_small_int(field(doc, "version", "session"), "version");
  if (version != kSessionFileVersion) {
    bad("version", "unsupported session file version " + std::to_string(version) + " (expected " +
                       std::to_string(kSessionFileVersion) + ")");
  }

  const json& programs = as_array(field(doc, "programs", "session"), "programs");
  if (programs.empty()) bad("programs", "a session needs at least one program");

  std::vector<ProgramId> pids;
  std::set<ProgramId> seen;
  for (std::size_t i = 0; i < programs.size(); ++i) {
    std::string where = "programs[" + std::to_string(i) + "]";
    ProgramId pid = as_pid(field(as_object(programs[i], where), "pid", where), where + ".pid");
    if (!seen.insert(pid).second) bad(where, "duplicate program " + pid.str());
    pids.push_back(pid);
  }

  DebugSession session(pids);
  for (std::size_t i = 0; i < programs.size(); ++i) {
    std::string where = "programs[" + std::to_string(i) + "]";
    const json& p = programs[i];
    ProgramId pid = pids[i];

    const json* source = optional_field(p, "source");
    const json* path = optional_field(p, "path");
    if ((source != nullptr) == (path != nullptr)) bad(where, "exactly one of 'source' and 'path' is required");
    if (source) {
      session.set_source(pid, as_string(*source, where + ".source"));
    } else {
      session.set_source(pid, read_text_file(base_dir / as_string(*path, where + ".path")));
    }
    if (const json* name = optional_field(p, "name")) {
      session.set_name(pid, as_string(*name, where + ".name"));
    } else if (path) {
      session.set_name(pid, path->get<std::string>());
    }
    if (const json* inputs = optional_field(p, "inputs")) session.set_inputs(pid, as_inputs(*inputs, where + ".inputs"));
    if (const json* size = optional_field(p, "step_size")) {
      int n = as_small_int(*size, where + ".step_size");
      as_document_error(where + ".step_size", [&] { session.set_step_size(pid, n); });
    }
    if (const json* bps = optional_field(p, "breakpoints")) {
      std::set<int> lines;
      for (const json& b : as_array(*bps, where + ".breakpoints")) {
        int line = as_small_int(b, where + ".breakpoints");
        if (line < 1) bad(where + ".breakpoints", "line numbers start at 1");
        lines.insert(line);
      }
      for (int line : lines) session.toggle_breakpoint(pid, line);
    }
  }

  if (const json* conds = optional_field(doc, "conditional_breakpoints")) {
    const json& arr = as_array(*conds, "conditional_breakpoints");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string where = "conditional_breakpoints[" + std::to_string(i) + "]";
      const json& c = as_object(arr[i], where);
      const std::string& text = as_string(field(c, "text", where), where + ".text");
      ScopeSpec scope;
      if (const json* s = optional_field(c, "scope")) scope = scope_from_json(*s, where + ".scope");
      bool enabled = true;
      if (const json* e = optional_field(c, "enabled")) {
        if (!e->is_boolean()) bad(where + ".enabled", "expected true or false");
        enabled = e->get<bool>();
      }
      as_document_error(where, [&] {
        int cbid = session.add_conditional_breakpoint(text, scope);
        if (!enabled) session.set_conditional_enabled(cbid, false);
      });
    }
  }

  if (const json* watches = optional_field(doc, "watches")) {
    const json& arr = as_array(*watches, "watches");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string where = "watches[" + std::to_string(i) + "]";
      const json& w = as_object(arr[i], where);
      const std::string& text = as_string(field(w, "text", where), where + ".text");
      ScopeSpec scope;
      if (const json* s = optional_field(w, "scope")) scope = scope_from_json(*s, where + ".scope");
      as_document_error(where, [&] { session.add_watch(text, scope); });
    }
  }
  return session;
}

void save_session_file(const DebugSession& session, const std::filesystem::path& file) {
  write_text_file(file, save_session(session));
}

DebugSession load_session_file(const std::filesystem::path& file) {
  return load_session(read_text_file(file), file.parent_path());
}

Counterexample parse_counterexample(std::string_view bytes) {
  json doc = parse_json(bytes);
  const json& arr = as_array(doc, "counterexample");
  Counterexample out;
  std::set<ProgramId> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string where = "counterexample[" + std::to_string(i) + "]";
    const json& e = as_object(arr[i], where);
    ProgramId pid = as_pid(field(e, "pid", where), where + ".pid");
    if (!seen.insert(pid).second) bad(where, "duplicate program " + pid.str());
    out.push_back({pid, as_inputs(field(e, "inputs", where), where + ".inputs")});
  }
  return out;
}

Counterexample read_counterexample_file(const std::filesystem::path& file) {
  return parse_counterexample(read_text_file(file));
}

void import_counterexample(DebugSession& session, const Counterexample& cex) {
  if (session.mode() != Mode::Edit) throw Error(ErrorCode::WrongMode, "importing inputs requires edit mode");
  for (const auto& e : cex) session.slot(e.pid);
  for (const auto& e : cex) session.set_inputs(e.pid, e.inputs);
}

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "error while reading " + file.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& file, std::string_view text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + file.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Io, "error while writing " + file.string());
}

}  // namespace dibg
