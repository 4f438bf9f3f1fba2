#pragma once

#include "cliq/value.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cliq {

/// One leaf of the measurement-outcome tree: the sequence of outcomes
/// taken (by measurement event order), the probability of that path, and
/// the classical observables at the end of it.
struct Branch {
    double probability = 1.0;
    std::vector<int32_t> outcomes;
    std::vector<std::string> outcome_registers; // measured register per event
    std::vector<Value> outputs; // final values of the print sites / __out_k registers
    std::map<std::string, Value> final_scalars;
};

/// Marginal outcome distribution of one measurement event (exact mode).
struct MeasurementEvent {
    std::string register_name;
    std::vector<double> distribution; // index = outcome
};

struct ExecutionResult {
    enum class Mode : uint8_t { Classical, Exact, Forced, Sampled };

    Mode mode = Mode::Classical;
    std::vector<Branch> branches;         // Classical/Forced: exactly one
    std::vector<MeasurementEvent> trace;  // Exact mode only
    uint64_t shots = 0;
    uint64_t seed = 0;
    std::map<std::vector<int32_t>, uint64_t> sample_counts; // Sampled mode

    /// Single-branch accessor for classical programs.
    const std::vector<Value>& outputs() const { return branches.at(0).outputs; }
};

/// The documented deterministic PRNG for sampled mode (xorshift64*).
/// Seed 0 is remapped to a fixed nonzero constant; the generator state
/// must never be zero.
struct Xorshift64Star {
    uint64_t state;

    explicit Xorshift64Star(uint64_t seed) : state(seed ? seed : 0x9E3779B97F4A7C15ULL) {}

    uint64_t next() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

} // namespace cliq
