#include "cliq/statevector.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace cliq {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
}

StateVector::StateVector(int qubit_count) : n_(qubit_count) {
    if (qubit_count < 1 || qubit_count > kMaxQubits) {
        throw std::invalid_argument("qubit count out of range");
    }
    amps_.assign(size_t{1} << n_, {0.0, 0.0});
    amps_[0] = {1.0, 0.0};
}

void StateVector::apply_h(int target) { apply_single('h', target, {}); }
void StateVector::apply_x(int target) { apply_single('x', target, {}); }
void StateVector::apply_z(int target) { apply_single('z', target, {}); }

void StateVector::apply_gate(const std::string& gate, int ctrl_count,
                             const std::vector<int>& operands) {
    assert(static_cast<int>(operands.size()) >= ctrl_count + 1);
    std::vector<int> controls(operands.begin(), operands.begin() + ctrl_count);
    if (gate == "cx") {
        // cx adds one more control on top of any ctrl(n) modifier.
        controls.push_back(operands[ctrl_count]);
        apply_single('x', operands[ctrl_count + 1], controls);
        return;
    }
    assert(gate.size() == 1);
    apply_single(gate[0], operands[ctrl_count], controls);
}

void StateVector::apply_single(char gate, int target, const std::vector<int>& controls) {
    assert(target >= 0 && target < n_);
    uint64_t ctrl_mask = 0;
    for (int c : controls) {
        assert(c >= 0 && c < n_ && c != target);
        ctrl_mask |= uint64_t{1} << c;
    }
    const uint64_t tbit = uint64_t{1} << target;
    const uint64_t dim = amps_.size();

    switch (gate) {
    case 'h':
        for (uint64_t i = 0; i < dim; ++i) {
            if ((i & tbit) || (i & ctrl_mask) != ctrl_mask) continue;
            std::complex<double> a = amps_[i];
            std::complex<double> b = amps_[i | tbit];
            amps_[i] = (a + b) * kInvSqrt2;
            amps_[i | tbit] = (a - b) * kInvSqrt2;
        }
        break;
    case 'x':
        for (uint64_t i = 0; i < dim; ++i) {
            if ((i & tbit) || (i & ctrl_mask) != ctrl_mask) continue;
            std::swap(amps_[i], amps_[i | tbit]);
        }
        break;
    case 'z':
        for (uint64_t i = 0; i < dim; ++i) {
            if (!(i & tbit) || (i & ctrl_mask) != ctrl_mask) continue;
            amps_[i] = -amps_[i];
        }
        break;
    default: throw std::invalid_argument("unknown gate");
    }
    check_norm();
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> out(amps_.size());
    for (size_t i = 0; i < amps_.size(); ++i) out[i] = std::norm(amps_[i]);
    return out;
}

void StateVector::collapse_to(int64_t outcome) {
    assert(outcome >= 0 && static_cast<size_t>(outcome) < amps_.size());
    double p = std::norm(amps_[static_cast<size_t>(outcome)]);
    if (p <= 0.0) {
        // Forced zero-probability branch: land exactly on the basis state.
        for (auto& a : amps_) a = {0.0, 0.0};
        amps_[static_cast<size_t>(outcome)] = {1.0, 0.0};
        return;
    }
    double scale = 1.0 / std::sqrt(p);
    for (size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] = i == static_cast<size_t>(outcome) ? amps_[i] * scale
                                                     : std::complex<double>{0.0, 0.0};
    }
}

void StateVector::reset() {
    for (auto& a : amps_) a = {0.0, 0.0};
    amps_[0] = {1.0, 0.0};
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::check_norm() const {
#ifndef NDEBUG
    assert(std::fabs(norm() - 1.0) < 1e-10);
#endif
}

} // namespace cliq
