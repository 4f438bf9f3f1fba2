#pragma once

// Brute-force amplitude-amplification oracle, independent of the library's
// gate-based simulator. The oracle negates marked amplitudes directly and
// the diffusion step is literal inversion about the mean, so agreement
// with the circuit construction is meaningful evidence.

#include <cmath>
#include <cstdint>
#include <vector>

namespace cliq::test {

struct BruteForceGrover {
    int64_t space;
    std::vector<int32_t> marked;

    // Success probability (total marked mass) after k iterations starting
    // from the uniform superposition.
    double success_after(int iterations) const {
        std::vector<double> amps(static_cast<size_t>(space),
                                 1.0 / std::sqrt(static_cast<double>(space)));
        std::vector<bool> is_marked(static_cast<size_t>(space), false);
        for (int32_t m : marked) is_marked[static_cast<size_t>(m)] = true;

        for (int it = 0; it < iterations; ++it) {
            for (size_t i = 0; i < amps.size(); ++i) {
                if (is_marked[i]) amps[i] = -amps[i];
            }
            double mean = 0.0;
            for (double a : amps) mean += a;
            mean /= static_cast<double>(space);
            for (double& a : amps) a = 2.0 * mean - a;
        }

        double mass = 0.0;
        for (size_t i = 0; i < amps.size(); ++i) {
            if (is_marked[i]) mass += amps[i] * amps[i];
        }
        return mass;
    }

    // Iteration count k in [0, limit] maximizing the success probability,
    // preferring the smallest k on ties.
    int best_iterations(int limit = 64) const {
        int best_k = 0;
        double best_p = success_after(0);
        for (int k = 1; k <= limit; ++k) {
            double p = success_after(k);
            if (p > best_p + 1e-12) {
                best_p = p;
                best_k = k;
            }
        }
        return best_k;
    }
};

} // namespace cliq::test
