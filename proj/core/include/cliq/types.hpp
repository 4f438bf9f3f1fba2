#pragma once

#include <cstdint>
#include <string>

namespace cliq {

/// The classical type domain of the source language, chosen to line up
/// one-to-one with the OpenQASM 3.0 classical types used by lowering:
/// Int -> int[32], Float -> float[64], Bool -> bool,
/// IntArray -> array[int[32], size].
struct CliqType {
    enum class Tag : uint8_t { Int, Float, Bool, IntArray };

    Tag tag = Tag::Int;
    int32_t size = 0; // element count, IntArray only (>= 1)

    static CliqType make_int() { return {Tag::Int, 0}; }
    static CliqType make_float() { return {Tag::Float, 0}; }
    static CliqType make_bool() { return {Tag::Bool, 0}; }
    static CliqType make_array(int32_t n) { return {Tag::IntArray, n}; }

    bool is_int() const { return tag == Tag::Int; }
    bool is_float() const { return tag == Tag::Float; }
    bool is_bool() const { return tag == Tag::Bool; }
    bool is_array() const { return tag == Tag::IntArray; }
    bool is_scalar() const { return !is_array(); }
    bool is_numeric() const { return is_int() || is_float(); }

    friend bool operator==(const CliqType&, const CliqType&) = default;
};

inline std::string to_string(const CliqType& t) {
    switch (t.tag) {
    case CliqType::Tag::Int: return "int";
    case CliqType::Tag::Float: return "float";
    case CliqType::Tag::Bool: return "bool";
    case CliqType::Tag::IntArray: return "int[" + std::to_string(t.size) + "]";
    }
    return "?";
}

/// Type name as used in mapping-rule signatures.
inline std::string signature_name(const CliqType& t) {
    switch (t.tag) {
    case CliqType::Tag::Int: return "int";
    case CliqType::Tag::Float: return "float";
    case CliqType::Tag::Bool: return "bool";
    case CliqType::Tag::IntArray: return "intarray";
    }
    return "?";
}

} // namespace cliq
