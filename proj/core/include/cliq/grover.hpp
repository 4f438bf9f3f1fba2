#pragma once

#include <cstdint>
#include <vector>

namespace cliq {

/// Parameters of one amplitude-amplification instance over an n-qubit
/// index register: N = 2^n basis states, `marked` the indices whose
/// amplitude is amplified, `iterations` the number of oracle+diffusion
/// rounds.
struct GroverParams {
    int qubit_count = 0;         // n, 1..16
    std::vector<int32_t> marked; // ascending, subset of [0, 2^n)
    int iterations = 0;          // k >= 0

    int64_t search_space() const { return int64_t{1} << qubit_count; }

    friend bool operator==(const GroverParams&, const GroverParams&) = default;
};

/// Iteration count that maximizes the success probability:
/// floor((pi/4) * sqrt(N / M)). Requires 1 <= M <= N. Returns 0 when
/// M == N (every state already marked).
int grover_iterations(int64_t search_space, int64_t marked_count);

/// Closed-form success probability after k iterations:
/// sin^2((2k + 1) * theta) with theta = arcsin(sqrt(M / N)).
double grover_success_probability(int64_t search_space, int64_t marked_count, int iterations);

} // namespace cliq
