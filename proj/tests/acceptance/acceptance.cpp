// Headless acceptance run: one PASS/FAIL line per criterion, exit status 1
// if any criterion fails.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "dibg/cli.hpp"
#include "dibg/error.hpp"
#include "dibg/frontend.hpp"
#include "dibg/interpreter.hpp"
#include "dibg/persistence.hpp"
#include "dibg/relational.hpp"
#include "dibg/session.hpp"
#include "support/persisted.hpp"
#include "support/random.hpp"
#include "support/relational_oracle.hpp"

using namespace dibg;
namespace fs = std::filesystem;

namespace {

const fs::path kSamples = DIBG_SAMPLES_DIR;
const ProgramId A('A');
const ProgramId B('B');

// Collects failure messages for one criterion.
struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::shared_ptr<const CheckedProgram> compile_or_throw(const std::string& src) {
  auto r = compile(src);
  if (auto* diags = std::get_if<std::vector<Diagnostic>>(&r)) throw Error(ErrorCode::Compile, format(*diags));
  return std::get<std::shared_ptr<const CheckedProgram>>(r);
}

std::string sample(const char* name) { return read_text_file(kSamples / name); }

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

bool has_line(const std::string& text, const std::string& line) {
  for (const auto& l : split_lines(text)) {
    if (l == line) return true;
  }
  return false;
}

std::int64_t scalar(const SlotSnapshot& s, const std::string& name) {
  for (const auto& b : s.bindings) {
    if (b.name == name) {
      if (const auto* v = std::get_if<std::int64_t>(&b.value)) return *v;
    }
  }
  throw Error(ErrorCode::InvalidArgument, s.pid.str() + "." + name + " is not a visible scalar");
}

// Independent point count for the broken Euclid listing on (b, a): one
// point for the entry, the declaration, each loop-condition test, each loop
// body statement and the return.
std::size_t count_points_gcd_broken(std::int64_t b, std::int64_t a) {
  std::size_t points = 2;
  std::int64_t i = 0;
  for (;;) {
    ++points;
    if (!(a != b && i < 500)) break;
    i = i + 1;
    points += 3;
    if (b > a) a = a - b; else b = b - a;
  }
  return points + 1;
}

// Same for the correct listing on (a, b).
std::size_t count_points_gcd_correct(std::int64_t a, std::int64_t b) {
  std::size_t points = 2;
  std::int64_t i = 0;
  for (;;) {
    ++points;
    if (!(a != b && i < 500)) break;
    i = i + 1;
    points += 3;
    if (a > b) a = a - b; else b = b - a;
  }
  return points + 1;
}

std::size_t trace_lines(const std::string& out) {
  static const std::regex point_line(R"(^\d+ line \d+ depth \d+ .*)");
  std::size_t n = 0;
  for (const auto& l : split_lines(out)) n += std::regex_match(l, point_line);
  return n;
}

// ---------------------------------------------------------------------------

void gcd_return_values(Check& c) {
  auto t0 = Clock::now();
  std::ostringstream out1, out2, err;
  int rc1 = cli::exec_program(kSamples / "gcd1.wl", {2, 4}, false, out1, err);
  int rc2 = cli::exec_program(kSamples / "gcd2.wl", {2, 4}, false, out2, err);
  c.expect(rc1 == 0 && rc2 == 0, "exec exit status " + std::to_string(rc1) + "/" + std::to_string(rc2) + ": " + err.str());
  c.expect(out1.str() == "returned(2)\n", "gcd1 printed " + out1.str());
  c.expect(out2.str() == "returned(-1998)\n", "gcd2 printed " + out2.str());

  std::vector<std::int64_t> in{2, 4};
  auto p1 = compile_or_throw(sample("gcd1.wl"));
  auto p2 = compile_or_throw(sample("gcd2.wl"));
  c.expect(execute(p1, in).final_status() == Status{status::Returned{2}}, "execute gcd1");
  c.expect(execute(p2, in).final_status() == Status{status::Returned{-1998}}, "execute gcd2");
  double dt = seconds_since(t0);
  c.expect(dt < 1.0, "took " + std::to_string(dt) + " s");
}

void halt_scenario(Check& c) {
  auto t0 = Clock::now();
  std::ostringstream out, err;
  int rc = cli::run_script(kSamples / "gcd_halt.dbs", out, err);
  double dt = seconds_since(t0);
  c.expect(rc == 0, "script failed: " + err.str());
  const std::string text = out.str();
  c.expect(has_line(text, "halt conditional 0"), "no conditional halt");
  c.expect(has_line(text, "A line 8 status running cursor 5/8 result returned(2)"), "A not at line 8, cursor 5");
  c.expect(has_line(text, "B line 8 status running cursor 5/2004 result returned(-1998)"), "B not at line 8, cursor 5");
  c.expect(has_line(text, "A.a = 2"), "A.a != 2");
  c.expect(has_line(text, "B.b = -2"), "B.b != -2");
  c.expect(dt < 1.0, "took " + std::to_string(dt) + " s");

  DebugSession s;
  s.add_program();
  s.set_source(A, sample("gcd1.wl"));
  s.set_source(B, sample("gcd2.wl"));
  s.set_inputs(A, {2, 4});
  s.set_inputs(B, {2, 4});
  s.add_conditional_breakpoint("A.a != B.b");
  s.start_debug();
  auto snap = s.continue_run();
  c.expect(snap.halt == HaltReason{halt::Conditional{0}}, "api halt " + to_string(snap.halt));
  c.expect(snap.slots.size() == 2, "two slots");
  if (snap.slots.size() == 2) {
    c.expect(snap.slots[0].line == 8 && snap.slots[1].line == 8, "api lines");
    c.expect(snap.slots[0].cursor == 5 && snap.slots[1].cursor == 5, "api cursors");
    c.expect(scalar(snap.slots[0], "a") == 2 && scalar(snap.slots[1], "b") == -2, "api values");
  }
}

void fix_scenario(Check& c) {
  std::ostringstream out, err;
  int rc = cli::run_script(kSamples / "gcd_fix.dbs", out, err);
  c.expect(rc == 0, "script failed: " + err.str());
  c.expect(has_line(out.str(), "A line 10 status returned(2) cursor 7/8 result returned(2)"), "A not returned(2)");
  c.expect(has_line(out.str(), "B line 10 status returned(2) cursor 7/8 result returned(2)"), "B not returned(2)");

  // The fixed listing is the broken one with the then/else bodies swapped.
  auto broken = split_lines(sample("gcd2.wl"));
  auto swapped = broken;
  c.expect(swapped.size() >= 8, "gcd2.wl too short");
  if (swapped.size() >= 8) std::swap(swapped[5], swapped[7]);
  c.expect(join_lines(swapped) == sample("gcd2_fixed.wl"), "gcd2_fixed.wl is not the swapped listing");

  DebugSession s;
  s.add_program();
  s.set_source(A, sample("gcd1.wl"));
  s.set_source(B, sample("gcd2.wl"));
  s.set_inputs(A, {2, 4});
  s.set_inputs(B, {2, 4});
  s.start_debug();
  s.stop_debug();
  s.set_source(B, join_lines(swapped));
  auto snap = s.start_debug();
  for (const auto& slot : snap.slots) {
    c.expect(slot.final_status == Status{status::Returned{2}}, slot.pid.str() + " final " + to_string(slot.final_status));
  }
}

void trace_lengths(Check& c) {
  c.expect(count_points_gcd_broken(2, 4) == 2004, "counting oracle gcd2");
  c.expect(count_points_gcd_correct(2, 4) == 8, "counting oracle gcd1");
  std::vector<std::int64_t> in{2, 4};
  auto t1 = execute(compile_or_throw(sample("gcd1.wl")), in);
  auto t2 = execute(compile_or_throw(sample("gcd2.wl")), in);
  c.expect(t1.size() == count_points_gcd_correct(2, 4), "gcd1 has " + std::to_string(t1.size()) + " points");
  c.expect(t2.size() == count_points_gcd_broken(2, 4), "gcd2 has " + std::to_string(t2.size()) + " points");

  std::ostringstream o1, o2, err;
  cli::exec_program(kSamples / "gcd1.wl", in, true, o1, err);
  cli::exec_program(kSamples / "gcd2.wl", in, true, o2, err);
  c.expect(trace_lines(o1.str()) == 8, "exec --print-trace gcd1 lines");
  c.expect(trace_lines(o2.str()) == 2004, "exec --print-trace gcd2 lines");
}

void property_suite(Check& c) {
  constexpr int kPrograms = 150;
  testing::ProgramGenerator gen(424242);
  testing::Rng rng(99);
  ExecutionLimits limits{.max_points = 20000, .max_stack_depth = 64};
  int det = 0, agree = 0, depth = 0;
  for (int n = 0; n < kPrograms; ++n) {
    auto g = gen.generate();
    auto prog = compile_or_throw(g.source);
    std::vector<std::int64_t> in;
    for (int i = 0; i < g.arity; ++i) in.push_back(rng.small());
    auto t1 = execute(prog, in, limits);
    auto t2 = execute(prog, in, limits);
    bool same = t1.size() == t2.size();
    for (std::size_t i = 0; same && i < t1.size(); ++i) same = t1[i] == t2[i];
    det += same;
    agree += same_outcome(run_result(*prog, in, limits), t1.final_status());
    bool steps = true;
    for (std::size_t i = 1; i < t1.size(); ++i) {
      auto d0 = static_cast<long>(t1[i - 1].stack.depth());
      auto d1 = static_cast<long>(t1[i].stack.depth());
      steps = steps && d1 - d0 >= -1 && d1 - d0 <= 1;
    }
    depth += steps;
  }
  c.expect(det == kPrograms, "(a) determinism " + std::to_string(det) + "/" + std::to_string(kPrograms));
  c.expect(agree == kPrograms, "(b) run_result agreement " + std::to_string(agree) + "/" + std::to_string(kPrograms));
  c.expect(depth == kPrograms, "(c) depth delta " + std::to_string(depth) + "/" + std::to_string(kPrograms));

  // (d) and (f) over random two-program sessions.
  int identity_checks = 0, identity_ok = 0, continues = 0, continues_ok = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    testing::Rng r(seed);
    testing::ProgramGenerator pg(seed * 31);
    DebugSession s;
    s.add_program();
    for (ProgramId pid : {A, B}) {
      auto g = pg.generate();
      s.set_source(pid, g.source);
      std::vector<std::int64_t> in;
      for (int i = 0; i < g.arity; ++i) in.push_back(r.small());
      s.set_inputs(pid, in);
      s.set_step_size(pid, r.range(1, 5));
      for (int k = r.range(0, 2); k > 0; --k) s.toggle_breakpoint(pid, r.range(1, 20));
    }
    if (r.chance(0.5)) s.add_conditional_breakpoint("A.p0 != B.p0");
    s.set_limits(limits);
    s.start_debug();
    for (int op = 0; op < 30; ++op) {
      std::vector<std::size_t> before;
      bool clamped = false;
      for (const auto& slot : s.slots()) {
        before.push_back(slot.cursor);
        if (slot.cursor + static_cast<std::size_t>(slot.step_size) > slot.trace->last_index()) clamped = true;
      }
      switch (r.range(0, 3)) {
        case 0:
        case 1: {
          s.step();
          s.step_back();
          if (!clamped) {
            ++identity_checks;
            bool same = true;
            for (std::size_t i = 0; i < s.slots().size(); ++i) same = same && s.slots()[i].cursor == before[i];
            identity_ok += same;
          }
          break;
        }
        case 2: {
          s.continue_run();
          std::size_t total = 0;
          for (const auto& slot : s.slots()) total += slot.trace->size();
          ++continues;
          continues_ok += s.last_continue_rounds() <= total;
          break;
        }
        default: s.single_step(r.chance(0.5) ? A : B);
      }
    }
  }
  c.expect(identity_checks > 100 && identity_ok == identity_checks,
           "(d) step_back after step " + std::to_string(identity_ok) + "/" + std::to_string(identity_checks));
  c.expect(continues > 50 && continues_ok == continues,
           "(f) continue rounds " + std::to_string(continues_ok) + "/" + std::to_string(continues));

  // (e) relational evaluation against the substitution oracle.
  constexpr int kExprs = 1500;
  testing::Rng er(20240611);
  int matched = 0;
  std::string first_mismatch;
  for (int n = 0; n < kExprs; ++n) {
    auto rc = testing::random_relational_case(er);
    auto parsed = parse_relational(rc.qualified);
    auto want = testing::substitution_oracle(rc.substituted, rc.boolean);
    const auto* expr = std::get_if<RelationalExpression>(&parsed);
    if (expr && want && evaluate(*expr, rc.tuple()) == *want) {
      ++matched;
    } else if (first_mismatch.empty()) {
      first_mismatch = rc.qualified;
    }
  }
  c.expect(matched == kExprs, "(e) oracle agreement " + std::to_string(matched) + "/" + std::to_string(kExprs) +
                                  (first_mismatch.empty() ? "" : " first mismatch: " + first_mismatch));

  // (g) save/load round trip.
  constexpr int kSessions = 100;
  int round_trips = 0;
  for (int seed = 1; seed <= kSessions; ++seed) {
    auto s = testing::random_session(static_cast<std::uint64_t>(seed));
    auto text = save_session(s);
    auto loaded = load_session(text);
    round_trips += testing::persisted(loaded) == testing::persisted(s) && save_session(loaded) == text;
  }
  c.expect(round_trips == kSessions, "(g) round trip " + std::to_string(round_trips) + "/" + std::to_string(kSessions));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"gcd return values", gcd_return_values},
      {"halt scenario", halt_scenario},
      {"fix scenario", fix_scenario},
      {"trace lengths", trace_lengths},
      {"property suite", property_suite},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    try {
      run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    std::cout << (c.failures.empty() ? "PASS " : "FAIL ") << name;
    for (const auto& f : c.failures) std::cout << "\n    " << f;
    std::cout << "\n";
    failed += !c.failures.empty();
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
