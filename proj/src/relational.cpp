#include "dibg/relational.hpp"

#include <optional>

#include "dibg/arith.hpp"
#include "dibg/error.hpp"

namespace dibg {

namespace {

void collect_programs(const Expr& e, std::set<ProgramId>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          if (n.program) out.insert(*n.program);
        } else if constexpr (std::is_same_v<T, IndexRef>) {
          if (n.program) out.insert(*n.program);
          collect_programs(*n.index, out);
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          collect_programs(*n.operand, out);
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          collect_programs(*n.lhs, out);
          collect_programs(*n.rhs, out);
        }
      },
      e.node);
}

struct Indeterminate {};

class Evaluator {
 public:
  explicit Evaluator(const PointTuple& points) : points_(points) {}

  const Frame& frame_of(ProgramId pid) const { return points_.at(pid)->stack.innermost(); }

  // Every occurrence must resolve, including ones a short-circuit would skip.
  bool leaves_resolve(const Expr& e) const {
    return std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarRef>) {
            const Value* v = frame_of(*n.program).find(n.name);
            return v && std::holds_alternative<std::int64_t>(*v);
          } else if constexpr (std::is_same_v<T, IndexRef>) {
            const Value* v = frame_of(*n.program).find(n.name);
            return v && std::holds_alternative<IntArray>(*v) && leaves_resolve(*n.index);
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            return leaves_resolve(*n.operand);
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            return leaves_resolve(*n.lhs) && leaves_resolve(*n.rhs);
          } else {
            return true;
          }
        },
        e.node);
  }

  std::int64_t integer(const Expr& e) const {
    return std::visit(
        [&](const auto& n) -> std::int64_t {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLiteral>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, VarRef>) {
            return std::get<std::int64_t>(*frame_of(*n.program).find(n.name));
          } else if constexpr (std::is_same_v<T, IndexRef>) {
            const auto& elems = std::get<IntArray>(*frame_of(*n.program).find(n.name)).elements;
            std::int64_t i = integer(*n.index);
            if (i < 0 || i >= static_cast<std::int64_t>(elems.size())) throw Indeterminate{};
            return elems[static_cast<std::size_t>(i)];
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            return arith::neg(integer(*n.operand));
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            std::int64_t l = integer(*n.lhs);
            std::int64_t r = integer(*n.rhs);
            std::optional<std::int64_t> out;
            switch (n.op) {
              case BinaryOp::Add: return arith::add(l, r);
              case BinaryOp::Sub: return arith::sub(l, r);
              case BinaryOp::Mul: return arith::mul(l, r);
              case BinaryOp::Div: out = arith::div(l, r); break;
              case BinaryOp::Mod: out = arith::mod(l, r); break;
              default: throw std::logic_error("condition in integer position");
            }
            if (!out) throw Indeterminate{};
            return *out;
          } else {
            throw std::logic_error("call in relational expression");
          }
        },
        e.node);
  }

  bool truth(const Expr& e) const {
    if (const auto* u = std::get_if<UnaryExpr>(&e.node)) return !truth(*u->operand);
    const auto& b = std::get<BinaryExpr>(e.node);
    switch (b.op) {
      case BinaryOp::And: return truth(*b.lhs) && truth(*b.rhs);
      case BinaryOp::Or: return truth(*b.lhs) || truth(*b.rhs);
      default: break;
    }
    std::int64_t l = integer(*b.lhs);
    std::int64_t r = integer(*b.rhs);
    switch (b.op) {
      case BinaryOp::Eq: return l == r;
      case BinaryOp::Ne: return l != r;
      case BinaryOp::Lt: return l < r;
      case BinaryOp::Le: return l <= r;
      case BinaryOp::Gt: return l > r;
      case BinaryOp::Ge: return l >= r;
      default: throw std::logic_error("integer in condition position");
    }
  }

 private:
  const PointTuple& points_;
};

const ExecutionPoint& point_for(const PointTuple& points, ProgramId pid) {
  auto it = points.find(pid);
  if (it == points.end() || !it->second) {
    throw Error(ErrorCode::UnknownProgram, "no current execution point for program " + pid.str());
  }
  return *it->second;
}

}  // namespace

std::variant<RelationalExpression, Diagnostic> parse_relational(std::string_view text) {
  auto parsed = parse_expression(text, ExprDialect::Relational);
  if (auto* d = std::get_if<Diagnostic>(&parsed)) return *d;
  RelationalExpression out;
  out.text = std::string(text);
  out.tree = std::get<ExprPtr>(std::move(parsed));
  auto sort = expression_sort(*out.tree);
  if (auto* d = std::get_if<Diagnostic>(&sort)) return *d;
  out.kind = std::get<Sort>(sort);
  collect_programs(*out.tree, out.programs);
  return out;
}

void validate_scope(const ScopeSpec& scope) {
  for (const auto& [pid, range] : scope) {
    if (range.start_line < 1 || range.start_line > range.end_line) {
      throw Error(ErrorCode::InvalidArgument, "invalid scope for program " + pid.str() + ": need 1 <= start <= end, got " +
                                                  std::to_string(range.start_line) + ".." +
                                                  std::to_string(range.end_line));
    }
  }
}

std::string to_string(const EvalResult& r) {
  if (const auto* i = std::get_if<std::int64_t>(&r)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&r)) return *b ? "true" : "false";
  return "unknown";
}

EvalResult evaluate(const RelationalExpression& expr, const PointTuple& points, const ScopeSpec& scope) {
  for (ProgramId pid : expr.programs) point_for(points, pid);

  for (const auto& [pid, range] : scope) {
    if (!range.contains(point_for(points, pid).line)) return Unknown{};
  }
  for (ProgramId pid : expr.programs) {
    if (!is_running(point_for(points, pid).status)) return Unknown{};
  }

  Evaluator ev(points);
  if (!ev.leaves_resolve(*expr.tree)) return Unknown{};
  try {
    if (expr.is_boolean()) return ev.truth(*expr.tree);
    return ev.integer(*expr.tree);
  } catch (const Indeterminate&) {
    return Unknown{};
  }
}

}  // namespace dibg
