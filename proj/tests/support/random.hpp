#pragma once

// Hand-rolled generators for the property tests: random WLANG programs and
// random relational expressions, both rendered as source text.

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace dibg::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen_); }
  std::int64_t small() { return range(-9, 9); }

  std::int64_t any_int() {
    switch (range(0, 3)) {
      case 0: return small();
      case 1: return range(-1000, 1000);
      case 2: return std::uniform_int_distribution<std::int64_t>(std::numeric_limits<std::int64_t>::min(),
                                                                  std::numeric_limits<std::int64_t>::max())(gen_);
      default: return chance(0.5) ? std::numeric_limits<std::int64_t>::min() : std::numeric_limits<std::int64_t>::max();
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(range(0, static_cast<int>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 gen_;
};

// Integer literal text that also covers INT64_MIN.
inline std::string int_text(std::int64_t v) {
  if (v == std::numeric_limits<std::int64_t>::min()) return "(-9223372036854775807 - 1)";
  if (v < 0) return "(-" + std::to_string(-v) + ")";
  return std::to_string(v);
}

// Random small WLANG programs. Loops are bounded by a fresh counter, calls
// only go to lower-numbered helpers (plus one guarded self-recursion), so
// almost every program terminates; the occasional division by zero or
// out-of-range index exercises the fault paths.
class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed) : rng_(seed) {}

  struct Generated {
    std::string source;
    int arity = 0;
  };

  Generated generate() {
    out_.clear();
    fresh_ = 0;
    int helpers = rng_.range(0, 2);
    helper_arity_.clear();
    for (int h = 0; h < helpers; ++h) {
      int arity = rng_.range(1, 2);
      helper_arity_.push_back(arity);
      function("h" + std::to_string(h), arity, h);
    }
    int arity = rng_.range(0, 3);
    function("main", arity, helpers);
    return {out_, arity};
  }

 private:
  void line(int indent, const std::string& text) {
    out_ += std::string(static_cast<std::size_t>(indent) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

  void function(const std::string& name, int arity, int callable_helpers) {
    callable_ = callable_helpers;
    current_ = name;
    std::string sig = "int " + name + "(";
    vars_.clear();
    arrays_.clear();
    for (int i = 0; i < arity; ++i) {
      std::string p = "p" + std::to_string(i);
      sig += (i ? ", int " : "int ") + p;
      vars_.push_back(p);
    }
    sig += ") {";
    line(0, sig);
    if (name != "main" && arity >= 1 && rng_.chance(0.3)) {
      // Guarded recursion on the first parameter.
      line(1, "if (p0 > 0 && p0 < 6) return p0 + " + name + "(p0 - 1" + std::string(arity == 2 ? ", p1" : "") + ");");
    }
    block_body(1, rng_.range(1, 5), 0);
    line(1, "return " + int_expr(2) + ";");
    line(0, "}");
  }

  void block_body(int indent, int count, int nesting) {
    std::size_t scalars_mark = vars_.size();
    std::size_t arrays_mark = arrays_.size();
    for (int i = 0; i < count; ++i) statement(indent, nesting);
    vars_.resize(scalars_mark);
    arrays_.resize(arrays_mark);
  }

  std::string fresh(const char* prefix) { return prefix + std::to_string(fresh_++); }

  void statement(int indent, int nesting) {
    int kind = rng_.range(0, nesting >= 2 ? 4 : 7);
    switch (kind) {
      case 0:
      case 1: {
        std::string v = fresh("v");
        line(indent, "int " + v + " = " + int_expr(2) + ";");
        vars_.push_back(v);
        break;
      }
      case 2:
        if (!vars_.empty()) {
          line(indent, rng_.pick(vars_) + " = " + int_expr(2) + ";");
          break;
        }
        [[fallthrough]];
      case 3: {
        std::string a = fresh("arr");
        int n = rng_.range(1, 4);
        line(indent, "int " + a + "[" + std::to_string(n) + "];");
        arrays_.push_back({a, n});
        break;
      }
      case 4:
        if (!arrays_.empty()) {
          const auto& [a, n] = rng_.pick(arrays_);
          // Mostly in range; sometimes one past the end.
          std::string idx = rng_.chance(0.9) ? std::to_string(rng_.range(0, n - 1)) : std::to_string(n);
          line(indent, a + "[" + idx + "] = " + int_expr(2) + ";");
          break;
        }
        if (callable_ > 0) {
          line(indent, call_expr(1) + ";");
          break;
        }
        line(indent, "int " + fresh("v") + " = 0;");
        break;
      case 5: {
        line(indent, "if (" + cond_expr(2) + ") {");
        block_body(indent + 1, rng_.range(1, 3), nesting + 1);
        if (rng_.chance(0.5)) {
          line(indent, "} else {");
          block_body(indent + 1, rng_.range(1, 3), nesting + 1);
        }
        line(indent, "}");
        break;
      }
      case 6: {
        std::string k = fresh("k");
        line(indent, "int " + k + " = 0;");
        vars_.push_back(k);
        line(indent, "while (" + k + " < " + std::to_string(rng_.range(0, 4)) + " && " + cond_expr(1) + ") {");
        std::size_t mark = vars_.size();
        // The counter must not be reassigned inside the body.
        vars_.pop_back();
        line(indent + 1, k + " = " + k + " + 1;");
        block_body(indent + 1, rng_.range(1, 3), nesting + 1);
        vars_.resize(mark - 1);
        vars_.push_back(k);
        line(indent, "}");
        break;
      }
      default: {
        std::string v = fresh("v");
        line(indent, "int " + v + " = " + (callable_ > 0 ? call_expr(1) : int_expr(1)) + ";");
        vars_.push_back(v);
      }
    }
  }

  std::string call_expr(int depth) {
    int h = rng_.range(0, callable_ - 1);
    std::string s = "h" + std::to_string(h) + "(";
    for (int i = 0; i < helper_arity_[static_cast<std::size_t>(h)]; ++i) {
      if (i) s += ", ";
      s += int_expr(depth);
    }
    return s + ")";
  }

  std::string int_expr(int depth) {
    int choice = rng_.range(0, depth <= 0 ? 2 : 8);
    switch (choice) {
      case 0: return int_text(rng_.small());
      case 1:
      case 2:
        if (!vars_.empty()) return rng_.pick(vars_);
        return int_text(rng_.small());
      case 3:
        if (!arrays_.empty()) {
          const auto& [a, n] = rng_.pick(arrays_);
          return a + "[" + std::to_string(rng_.range(0, n - 1)) + "]";
        }
        return int_text(rng_.small());
      case 4: return "-" + int_expr(depth - 1);
      case 5:
        if (callable_ > 0 && rng_.chance(0.5)) return call_expr(depth - 1);
        [[fallthrough]];
      default: {
        static const std::vector<std::string> ops{"+", "-", "*", "/", "%", "+", "-"};
        return "(" + int_expr(depth - 1) + " " + rng_.pick(ops) + " " + int_expr(depth - 1) + ")";
      }
    }
  }

  std::string cond_expr(int depth) {
    int choice = rng_.range(0, depth <= 0 ? 0 : 3);
    static const std::vector<std::string> cmps{"==", "!=", "<", "<=", ">", ">="};
    switch (choice) {
      case 0: return int_expr(1) + " " + rng_.pick(cmps) + " " + int_expr(1);
      case 1: return "!(" + cond_expr(depth - 1) + ")";
      case 2: return "(" + cond_expr(depth - 1) + " && " + cond_expr(depth - 1) + ")";
      default: return "(" + cond_expr(depth - 1) + " || " + cond_expr(depth - 1) + ")";
    }
  }

  Rng rng_;
  std::string out_;
  std::string current_;
  int fresh_ = 0;
  int callable_ = 0;
  std::vector<int> helper_arity_;
  std::vector<std::string> vars_;
  std::vector<std::pair<std::string, int>> arrays_;
};

}  // namespace dibg::testing
