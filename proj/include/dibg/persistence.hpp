#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dibg/program_id.hpp"
#include "dibg/session.hpp"

namespace dibg {

inline constexpr int kSessionFileVersion = 1;

// Canonical JSON (sorted keys, two-space indent, trailing newline) holding
// every program's name, source, inputs, step size and breakpoints plus the
// conditional breakpoints and watches. Sources are always embedded.
// Requires edit mode.
std::string save_session(const DebugSession& session);

// Inverse of save_session. A program entry may give "path" (relative to
// `base_dir`) instead of "source". Throws Error(Document) for malformed or
// inconsistent documents and Error(Io) for unreadable source paths.
DebugSession load_session(std::string_view bytes, const std::filesystem::path& base_dir = {});

void save_session_file(const DebugSession& session, const std::filesystem::path& file);
DebugSession load_session_file(const std::filesystem::path& file);

struct CounterexampleEntry {
  ProgramId pid;
  std::vector<std::int64_t> inputs;

  friend bool operator==(const CounterexampleEntry&, const CounterexampleEntry&) = default;
};

using Counterexample = std::vector<CounterexampleEntry>;

// `[{"pid": "A", "inputs": [2, 4]}, ...]` with unique pids.
Counterexample parse_counterexample(std::string_view bytes);
Counterexample read_counterexample_file(const std::filesystem::path& file);

// Sets the inputs of each listed program and nothing else. All pids are
// checked before anything changes.
void import_counterexample(DebugSession& session, const Counterexample& cex);

std::string read_text_file(const std::filesystem::path& file);
void write_text_file(const std::filesystem::path& file, std::string_view text);

}  // namespace dibg
