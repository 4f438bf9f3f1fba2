#pragma once

#include "cliq/checker.hpp"
#include "cliq/diagnostics.hpp"
#include "cliq/grover.hpp"
#include "cliq/qasm_ast.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cliq {

/// One catalog pattern. Executable entries pair a classical block shape
/// with a quantum subroutine generator; metadata-only entries document
/// known patterns without an implementation.
struct QplpEntry {
    std::string id;
    std::string description;
    std::string citation;
    bool executable = false;
};

/// The built-in catalog. Exactly one entry is executable:
/// "qplp.search.grover", the constant-array linear search.
const std::vector<QplpEntry>& qplp_catalog();

const QplpEntry* find_qplp_entry(const std::string& id);

/// Successful match of the search shape:
///     found = -1
///     for i in range(0, N):
///         if a[i] == target:
///             found = i
///             break
/// against a two-statement window, with every applicability condition
/// satisfied (constant array, constant target, N a power of two, at
/// least one marked element).
struct SearchMatch {
    QuantumBlockInfo info;
    Span span; // init statement begin .. loop end
    const AstNode* init_stmt = nullptr;
    const AstNode* loop_stmt = nullptr;
    std::string loop_var;
};

struct NoMatch {
    std::string reason;
};

using MatchOutcome = std::variant<SearchMatch, NoMatch>;

/// Tries to match `entry` against the window starting at stmts[at].
/// No-match is a value, not an error.
MatchOutcome match_block(const TypedProgram& tp, const QplpEntry& entry,
                         const std::vector<AstPtr>& stmts, size_t at);

/// Gate sequences of the instantiated circuit, exposed for direct
/// simulation in tests. The oracle flips the phase of every marked basis
/// state via X-conjugated multi-controlled Z; the diffusion operator is
/// the H/X-conjugated multi-controlled Z (inversion about the mean up to
/// a global phase).
std::vector<QasmGate> grover_oracle_gates(const GroverParams& params, const std::string& reg);
std::vector<QasmGate> grover_diffusion_gates(int qubit_count, const std::string& reg);

/// The quantum subroutine as program-fragment text: register
/// declarations plus the statement sequence (reset, H layer, k rounds of
/// oracle + diffusion, joint measurement, result conversion, classical
/// fallback check). Fails with E041 when the register would exceed the
/// simulator limit.
struct GroverFragment {
    std::vector<std::string> decl_lines;
    std::vector<std::string> stmt_lines;
};

std::optional<GroverFragment> instantiate_grover(const QuantumBlockInfo& info, int site_index,
                                                 Diagnostics& diags);

/// Register names used by site `site_index` in lowered programs.
std::string grover_qubit_reg(int site_index);
std::string grover_bit_reg(int site_index);

} // namespace cliq
