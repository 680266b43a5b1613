// Dense statevector engine for the tiny registers this simulator needs
// (at most 4 qubits). Values are immutable: every operation returns a new
// state.
//
// Qubit indexing is 0-based and reads kets left to right: qubit 0 is the
// leftmost ket character (particle 1 in report numbering) and maps to the
// most significant bit of the amplitude index, so |100> has index 4 on a
// 3-qubit register. Report surfaces add 1 to match particle labels.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qpce/rng.hpp"

namespace qpce::qsim {

using cplx = std::complex<double>;

// Invariant tolerances: norm-1 and Hermiticity at 1e-10, closed-form
// amplitude comparisons at 1e-12 (double precision on dimension-8 vectors).
inline constexpr double kStateTol = 1e-10;
inline constexpr double kClosedFormTol = 1e-12;

class StateVector {
public:
    // |0...0> on `num_qubits` wires.
    explicit StateVector(int num_qubits);

    // From explicit amplitudes; must have length 2^num_qubits and unit norm
    // within 1e-10.
    StateVector(int num_qubits, std::vector<cplx> amplitudes);

    // Computational basis state |index>.
    static StateVector basis(int num_qubits, std::size_t index);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    const cplx& amp(std::size_t index) const { return amps_[index]; }

    double norm_sq() const;

    // Bit of `index` on wire `qubit` under the MSB-first convention.
    int bit_at(std::size_t index, int qubit) const;

private:
    int num_qubits_;
    std::vector<cplx> amps_;
};

struct Gate {
    std::string name;
    std::array<cplx, 4> m;  // row-major 2x2

    bool is_unitary(double tol = 1e-12) const;

    static Gate identity();
    static Gate pauli_x();    // sigma_x = |0><1| + |1><0|
    static Gate i_pauli_y();  // i sigma_y = |0><1| - |1><0|
    static Gate pauli_z();
    static Gate hadamard();
    static Gate by_name(const std::string& name);

    Gate adjoint() const;
};

struct MeasurementRecord {
    std::vector<int> qubit_indices;
    std::vector<int> outcomes;  // one bit per measured qubit, same order
    StateVector post_state;
};

StateVector apply_gate(const StateVector& state, const Gate& gate, int target);

// Gate on `target` within the subspace where `control` reads `control_value`;
// control_value = 0 gives an anti-controlled gate.
StateVector apply_controlled(const StateVector& state, const Gate& gate,
                             int control, int control_value, int target);

// Born probabilities of every outcome pattern over `qubits`. Pattern p has
// bit j = outcome of qubits[j], with qubits[0] the most significant bit.
std::vector<double> z_probabilities(const StateVector& state,
                                    const std::vector<int>& qubits);

// Joint Z-basis measurement; outcome sampled with a single uniform draw,
// post_state collapsed and renormalised.
MeasurementRecord measure_z(const StateVector& state,
                            const std::vector<int>& qubits, Rng& rng);

cplx inner_product(const StateVector& a, const StateVector& b);

// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace qpce::qsim
