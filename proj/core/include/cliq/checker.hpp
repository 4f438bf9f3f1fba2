#pragma once

#include "cliq/ast.hpp"
#include "cliq/diagnostics.hpp"
#include "cliq/types.hpp"
#include "cliq/value.hpp"

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace cliq {

struct SymbolInfo {
    CliqType type;
    bool is_const = false;            // one top-level assignment with a foldable value
    std::optional<Value> const_value;
    bool array_mutated = false;       // some element of the array is assigned somewhere
    std::vector<int32_t> array_init;  // IntArray initializer elements
    Span decl_span;
};

struct FuncInfo {
    const AstNode* def = nullptr;
    std::vector<CliqType> param_types;
    CliqType ret;
    std::map<std::string, SymbolInfo> locals; // body variables, excluding parameters
};

/// The resolved, type-annotated program. Node maps are keyed by node
/// address; the tree is owned here, so keys stay valid for the lifetime
/// of the TypedProgram.
struct TypedProgram {
    AstPtr root;
    std::unordered_map<const AstNode*, CliqType> types;  // every expression node
    std::unordered_map<const AstNode*, Value> folded;    // compile-time constants
    std::map<std::string, SymbolInfo> module_symbols;
    std::map<std::string, FuncInfo> functions;
    std::vector<const AstNode*> print_sites; // Call nodes, source order

    const CliqType* type_of(const AstNode& node) const {
        auto it = types.find(&node);
        return it == types.end() ? nullptr : &it->second;
    }
    const Value* folded_of(const AstNode& node) const {
        auto it = folded.find(&node);
        return it == folded.end() ? nullptr : &it->second;
    }
};

/// Names of the built-in functions of the source language.
bool is_builtin_name(const std::string& name);

/// Resolves names and infers types over the whole module. Takes ownership
/// of the tree. Collects up to a bounded number of independent errors.
/// Accepts QuantumBlock statements (produced by the optimizer) so rewritten
/// programs can be re-checked before lowering.
std::optional<TypedProgram> check_program(AstPtr root, Diagnostics& diags);

} // namespace cliq
