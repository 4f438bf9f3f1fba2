#pragma once

#include "cliq/diagnostics.hpp"
#include "cliq/execution.hpp"
#include "cliq/qasm_ast.hpp"

#include <optional>

namespace cliq {

struct QasmExecutionOptions {
    ExecutionResult::Mode mode = ExecutionResult::Mode::Exact;
    std::vector<int32_t> forced_outcomes; // Forced mode, by measurement event order
    uint64_t shots = 0;                   // Sampled mode
    uint64_t seed = 0;                    // Sampled mode
};

/// Executes a program of the documented subset. Classical statements use
/// the same numeric semantics as the reference interpreter.
///
///  - Exact: enumerates every measurement outcome with probability > 0
///    and conditions downstream classical execution on each, yielding the
///    full branch tree plus per-event marginal distributions.
///  - Forced: follows one prescribed outcome per measurement event, even
///    through zero-probability outcomes.
///  - Sampled: draws outcomes from the documented xorshift64* generator;
///    identical (program, seed, shots) triples reproduce bit-identical
///    counts.
///
/// Errors: E060 classical runtime error, E062 subset violation,
/// E063 qubit budget exceeded.
std::optional<ExecutionResult> interpret_qasm(const QasmProgram& program,
                                              const QasmExecutionOptions& options,
                                              Diagnostics& diags);

} // namespace cliq
