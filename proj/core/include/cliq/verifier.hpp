#pragma once

#include "cliq/diagnostics.hpp"
#include "cliq/execution.hpp"
#include "cliq/mapping.hpp"
#include "cliq/source.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cliq {

/// Outcome of one differential check. Classical path: reference outputs
/// against interpreted QASM outputs, bit-exact for Int/Bool and within
/// 1e-9 relative error for Float. Optimized path: every measurement
/// branch must reproduce the classical semantics with the search result
/// forced to that branch's (verified) outcome, and each measurement
/// event's marked-outcome mass must match the analytic success model
/// within 1e-9.
struct Verdict {
    bool pass = false;
    bool optimized = false;
    std::string detail; // first failure explanation, empty on PASS
    std::vector<Value> reference_outputs;
    std::optional<size_t> first_divergence; // output index
    size_t branch_count = 0;
    size_t site_count = 0;
    double success_probability = -1.0; // first measurement event, optimized path
    double model_probability = -1.0;

    std::string to_json() const;
};

/// Translates `src` (optionally applying every executable QPLP site) and
/// checks semantic preservation end to end. Stage failures (diagnostics)
/// produce a FAIL verdict carrying the first diagnostic.
Verdict differential_check(const SourceModule& src, bool optimize, const MappingRuleSet& rules,
                           Diagnostics& diags);

/// Float comparison used by the verdict: exact, or within 1e-9 relative.
bool outputs_match(const Value& reference, const Value& candidate);

} // namespace cliq
