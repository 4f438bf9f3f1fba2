#pragma once

#include "cliq/checker.hpp"
#include "cliq/diagnostics.hpp"
#include "cliq/execution.hpp"

#include <optional>
#include <vector>

namespace cliq {

/// Replaces a matched search block with externally chosen results during
/// reference evaluation. Used by the differential checker to replay each
/// quantum measurement outcome through the classical semantics: when
/// execution reaches init_stmt, the next value is popped, assigned to
/// found_name, and the loop statement is skipped.
struct SearchOverride {
    const AstNode* init_stmt = nullptr;
    const AstNode* loop_stmt = nullptr;
    std::string found_name;
    std::vector<int32_t> values;
};

/// Big-step evaluation of a classical program: 32-bit wrapping Int,
/// IEEE-754 double Float, print sites observed in source order. Runtime
/// failures (division by zero, out-of-range index, step budget) are E060.
std::optional<ExecutionResult> reference_eval(const TypedProgram& tp, Diagnostics& diags,
                                              const std::vector<SearchOverride>& overrides = {});

/// Step budget shared by both interpreters.
constexpr uint64_t kExecutionFuel = 50'000'000;

} // namespace cliq
