#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dibg {

class CheckedProgram;

struct IntArray {
  std::vector<std::int64_t> elements;

  friend bool operator==(const IntArray&, const IntArray&) = default;
};

using Value = std::variant<std::int64_t, IntArray>;

std::string to_string(const Value& v);

struct Binding {
  std::string name;
  Value value;

  friend bool operator==(const Binding&, const Binding&) = default;
};

// One activation record. Bindings are the parameters followed by the
// variables of every entered block, in declaration order.
struct Frame {
  std::string function;
  int call_line = 0;  // 0 for main
  std::vector<Binding> bindings;

  const Value* find(std::string_view name) const;

  friend bool operator==(const Frame&, const Frame&) = default;
};

// Persistent call stack: consecutive execution points share every frame
// that did not change.
class CallStack {
 public:
  CallStack() = default;

  std::size_t depth() const { return top_ ? top_->depth : 0; }
  bool empty() const { return !top_; }
  const Frame& innermost() const { return *top_->frame; }

  // Outermost first.
  std::vector<const Frame*> frames() const;

  CallStack push(std::shared_ptr<const Frame> frame) const;

  friend bool operator==(const CallStack& a, const CallStack& b);

 private:
  struct Node {
    std::shared_ptr<const Frame> frame;
    std::shared_ptr<const Node> parent;
    std::size_t depth = 0;
  };
  explicit CallStack(std::shared_ptr<const Node> top) : top_(std::move(top)) {}

  std::shared_ptr<const Node> top_;
};

enum class FaultKind {
  DivisionByZero,
  ModuloByZero,
  IndexOutOfBounds,
  StackOverflow,
  MissingReturn,
};

std::string_view to_string(FaultKind kind);

namespace status {
struct Running {
  friend bool operator==(Running, Running) = default;
};
struct Returned {
  std::int64_t value = 0;
  friend bool operator==(Returned, Returned) = default;
};
struct Error {
  FaultKind kind = FaultKind::DivisionByZero;
  std::string message;
  friend bool operator==(const Error&, const Error&) = default;
};
struct BudgetExceeded {
  friend bool operator==(BudgetExceeded, BudgetExceeded) = default;
};
}  // namespace status

using Status = std::variant<status::Running, status::Returned, status::Error, status::BudgetExceeded>;

inline bool is_running(const Status& s) { return std::holds_alternative<status::Running>(s); }

// "running", "returned(2)", "error(division_by_zero)", "budget_exceeded".
std::string to_string(const Status& s);

// Same terminal outcome, ignoring fault messages.
bool same_outcome(const Status& a, const Status& b);

struct ExecutionPoint {
  std::size_t index = 0;
  int line = 0;  // line of the statement or condition just executed
  CallStack stack;
  Status status;

  friend bool operator==(const ExecutionPoint&, const ExecutionPoint&) = default;
};

struct ExecutionLimits {
  std::size_t max_points = 1'000'000;
  std::size_t max_stack_depth = 1'024;
};

// The complete, immutable run of one program on one input vector.
class Trace {
 public:
  Trace(std::shared_ptr<const CheckedProgram> program, std::vector<std::int64_t> inputs,
        std::vector<ExecutionPoint> points)
      : program_(std::move(program)), inputs_(std::move(inputs)), points_(std::move(points)) {}

  const std::vector<ExecutionPoint>& points() const { return points_; }
  const ExecutionPoint& operator[](std::size_t i) const { return points_[i]; }
  const ExecutionPoint& back() const { return points_.back(); }
  std::size_t size() const { return points_.size(); }
  std::size_t last_index() const { return points_.size() - 1; }

  const std::vector<std::int64_t>& inputs() const { return inputs_; }
  const CheckedProgram& program() const { return *program_; }
  const Status& final_status() const { return points_.back().status; }

 private:
  std::shared_ptr<const CheckedProgram> program_;
  std::vector<std::int64_t> inputs_;
  std::vector<ExecutionPoint> points_;
};

}  // namespace dibg
