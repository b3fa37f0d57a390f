#pragma once

#include <cstdint>
#include <memory>
#include <span>

#include "dibg/frontend.hpp"
#include "dibg/trace.hpp"

namespace dibg {

// Runs `program` on `inputs` (bound positionally to main's parameters) and
// records one execution point per executed statement and per evaluated
// if/while condition, each holding the state after it. Point 0 is the entry
// of main; every call likewise records an entry point on the callee's
// signature line, so stack depth moves by at most one between points.
//
// Runtime faults end the trace with an error point. A running point that
// would land at index max_points is recorded as budget_exceeded instead, so
// points below max_points never depend on the budget.
//
// Throws Error(InputArity) if the input count differs from main's arity and
// Error(InvalidArgument) for non-positive limits.
Trace execute(std::shared_ptr<const CheckedProgram> program, std::span<const std::int64_t> inputs,
              const ExecutionLimits& limits = {});

// Final status only, computed by a separate direct evaluator that keeps no
// trace. Agrees with execute(...).final_status() up to fault messages.
Status run_result(const CheckedProgram& program, std::span<const std::int64_t> inputs,
                  const ExecutionLimits& limits = {});

}  // namespace dibg
