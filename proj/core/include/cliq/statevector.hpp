#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace cliq {

/// Exact simulator state for one qubit register, up to 16 qubits.
/// Little-endian basis convention: qubit j holds bit j of the basis
/// index, so |index⟩ has amplitude amps()[index].
class StateVector {
  public:
    static constexpr int kMaxQubits = 16;

    explicit StateVector(int qubit_count);

    int qubit_count() const { return n_; }
    size_t dimension() const { return amps_.size(); }
    const std::vector<std::complex<double>>& amps() const { return amps_; }
    std::vector<std::complex<double>>& mutable_amps() { return amps_; }

    void apply_h(int target);
    void apply_x(int target);
    void apply_z(int target);

    /// Applies the base gate ("h", "x", "z", "cx") with the leading
    /// operands acting as controls. `operands` = controls then targets.
    void apply_gate(const std::string& gate, int ctrl_count, const std::vector<int>& operands);

    /// |amplitude|^2 per basis outcome.
    std::vector<double> probabilities() const;

    /// Collapses to the given outcome. If the outcome has (numerically)
    /// zero probability the state becomes the exact basis state, which is
    /// what forced-outcome execution needs.
    void collapse_to(int64_t outcome);

    /// Back to |0...0⟩.
    void reset();

    double norm() const;

  private:
    int n_;
    std::vector<std::complex<double>> amps_;

    void apply_single(char gate, int target, const std::vector<int>& controls);
    void check_norm() const;
};

} // namespace cliq
