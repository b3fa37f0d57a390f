#include "dibg/trace.hpp"

#include <algorithm>

namespace dibg {

std::string to_string(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  const auto& arr = std::get<IntArray>(v);
  std::string out = "[";
  for (std::size_t i = 0; i < arr.elements.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(arr.elements[i]);
  }
  out += "]";
  return out;
}

const Value* Frame::find(std::string_view name) const {
  for (const auto& b : bindings) {
    if (b.name == name) return &b.value;
  }
  return nullptr;
}

std::vector<const Frame*> CallStack::frames() const {
  std::vector<const Frame*> out;
  for (const Node* n = top_.get(); n; n = n->parent.get()) out.push_back(n->frame.get());
  std::reverse(out.begin(), out.end());
  return out;
}

CallStack CallStack::push(std::shared_ptr<const Frame> frame) const {
  auto node = std::make_shared<Node>();
  node->frame = std::move(frame);
  node->parent = top_;
  node->depth = depth() + 1;
  return CallStack(std::move(node));
}

bool operator==(const CallStack& a, const CallStack& b) {
  const CallStack::Node* x = a.top_.get();
  const CallStack::Node* y = b.top_.get();
  while (x && y) {
    if (x == y) return true;
    if (x->depth != y->depth) return false;
    if (x->frame != y->frame && !(*x->frame == *y->frame)) return false;
    x = x->parent.get();
    y = y->parent.get();
  }
  return x == y;
}

std::string_view to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::DivisionByZero: return "division_by_zero";
    case FaultKind::ModuloByZero: return "modulo_by_zero";
    case FaultKind::IndexOutOfBounds: return "index_out_of_bounds";
    case FaultKind::StackOverflow: return "stack_overflow";
    case FaultKind::MissingReturn: return "missing_return";
  }
  return "unknown";
}

std::string to_string(const Status& s) {
  return std::visit(
      [](const auto& st) -> std::string {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, status::Running>) {
          return "running";
        } else if constexpr (std::is_same_v<T, status::Returned>) {
          return "returned(" + std::to_string(st.value) + ")";
        } else if constexpr (std::is_same_v<T, status::Error>) {
          return "error(" + std::string(to_string(st.kind)) + ")";
        } else {
          return "budget_exceeded";
        }
      },
      s);
}

bool same_outcome(const Status& a, const Status& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ea = std::get_if<status::Error>(&a)) return ea->kind == std::get<status::Error>(b).kind;
  return a == b;
}

}  // namespace dibg
