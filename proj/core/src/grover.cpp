#include "cliq/grover.hpp"

#include <cassert>
#include <cmath>

namespace cliq {

int grover_iterations(int64_t search_space, int64_t marked_count) {
    assert(marked_count >= 1 && marked_count <= search_space);
    double ratio = static_cast<double>(search_space) / static_cast<double>(marked_count);
    return static_cast<int>(std::floor((M_PI / 4.0) * std::sqrt(ratio)));
}

double grover_success_probability(int64_t search_space, int64_t marked_count, int iterations) {
    assert(marked_count >= 1 && marked_count <= search_space);
    double theta =
        std::asin(std::sqrt(static_cast<double>(marked_count) / static_cast<double>(search_space)));
    double s = std::sin((2.0 * iterations + 1.0) * theta);
    return s * s;
}

} // namespace cliq
