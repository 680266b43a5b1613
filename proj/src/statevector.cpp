#include "qpce/statevector.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace qpce::qsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_qubit(int qubit, int num_qubits, const char* what) {
    if (qubit < 0 || qubit >= num_qubits) {
        throw std::out_of_range(std::string(what) + " index out of range");
    }
}

}  // namespace

StateVector::StateVector(int num_qubits)
    : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {
    if (num_qubits < 1) throw std::invalid_argument("num_qubits must be >= 1");
    amps_[0] = cplx{1.0, 0.0};
}

StateVector::StateVector(int num_qubits, std::vector<cplx> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (num_qubits < 1) throw std::invalid_argument("num_qubits must be >= 1");
    if (amps_.size() != (std::size_t{1} << num_qubits)) {
        throw std::invalid_argument("amplitude vector length must be 2^num_qubits");
    }
    if (std::abs(norm_sq() - 1.0) > kStateTol) {
        throw std::invalid_argument("state is not normalised");
    }
}

StateVector StateVector::basis(int num_qubits, std::size_t index) {
    StateVector s(num_qubits);
    if (index >= s.dim()) throw std::out_of_range("basis state out of range");
    s.amps_[0] = cplx{0.0, 0.0};
    s.amps_[index] = cplx{1.0, 0.0};
    return s;
}

double StateVector::norm_sq() const {
    double n = 0.0;
    for (const auto& a : amps_) n += std::norm(a);
    return n;
}

int StateVector::bit_at(std::size_t index, int qubit) const {
    return static_cast<int>((index >> (num_qubits_ - 1 - qubit)) & 1u);
}

bool Gate::is_unitary(double tol) const {
    // m^dag m == I entry-wise
    const cplx c00 = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    const cplx c01 = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    const cplx c10 = std::conj(m[1]) * m[0] + std::conj(m[3]) * m[2];
    const cplx c11 = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
    return std::abs(c00 - 1.0) <= tol && std::abs(c01) <= tol &&
           std::abs(c10) <= tol && std::abs(c11 - 1.0) <= tol;
}

Gate Gate::identity() { return {"I", {cplx{1}, cplx{0}, cplx{0}, cplx{1}}}; }
Gate Gate::pauli_x() { return {"X", {cplx{0}, cplx{1}, cplx{1}, cplx{0}}}; }
Gate Gate::i_pauli_y() { return {"iY", {cplx{0}, cplx{1}, cplx{-1}, cplx{0}}}; }
Gate Gate::pauli_z() { return {"Z", {cplx{1}, cplx{0}, cplx{0}, cplx{-1}}}; }
Gate Gate::hadamard() {
    return {"H", {cplx{kInvSqrt2}, cplx{kInvSqrt2}, cplx{kInvSqrt2}, cplx{-kInvSqrt2}}};
}

Gate Gate::by_name(const std::string& name) {
    if (name == "I") return identity();
    if (name == "X") return pauli_x();
    if (name == "iY") return i_pauli_y();
    if (name == "Z") return pauli_z();
    if (name == "H") return hadamard();
    throw std::invalid_argument("unknown gate name: " + name);
}

Gate Gate::adjoint() const {
    return {name + "^dag",
            {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

StateVector apply_gate(const StateVector& state, const Gate& gate, int target) {
    check_qubit(target, state.num_qubits(), "target");
    const std::size_t stride = std::size_t{1} << (state.num_qubits() - 1 - target);
    std::vector<cplx> out = state.amplitudes();
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i & stride) continue;  // visit each (|..0..>, |..1..>) pair once
        const std::size_t j = i | stride;
        const cplx a0 = out[i];
        const cplx a1 = out[j];
        out[i] = gate.m[0] * a0 + gate.m[1] * a1;
        out[j] = gate.m[2] * a0 + gate.m[3] * a1;
    }
    return StateVector(state.num_qubits(), std::move(out));
}

StateVector apply_controlled(const StateVector& state, const Gate& gate,
                             int control, int control_value, int target) {
    check_qubit(control, state.num_qubits(), "control");
    check_qubit(target, state.num_qubits(), "target");
    if (control == target) throw std::invalid_argument("control equals target");
    if (control_value != 0 && control_value != 1) {
        throw std::invalid_argument("control_value must be 0 or 1");
    }
    const std::size_t cmask = std::size_t{1} << (state.num_qubits() - 1 - control);
    const std::size_t stride = std::size_t{1} << (state.num_qubits() - 1 - target);
    const std::size_t want = control_value ? cmask : 0;
    std::vector<cplx> out = state.amplitudes();
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i & stride) continue;
        if ((i & cmask) != want) continue;
        const std::size_t j = i | stride;
        const cplx a0 = out[i];
        const cplx a1 = out[j];
        out[i] = gate.m[0] * a0 + gate.m[1] * a1;
        out[j] = gate.m[2] * a0 + gate.m[3] * a1;
    }
    return StateVector(state.num_qubits(), std::move(out));
}

std::vector<double> z_probabilities(const StateVector& state,
                                    const std::vector<int>& qubits) {
    if (qubits.empty()) throw std::invalid_argument("no qubits to measure");
    std::unordered_set<int> seen;
    for (int q : qubits) {
        check_qubit(q, state.num_qubits(), "measured qubit");
        if (!seen.insert(q).second) {
            throw std::invalid_argument("duplicate qubit index in measurement");
        }
    }
    const std::size_t patterns = std::size_t{1} << qubits.size();
    std::vector<double> probs(patterns, 0.0);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        std::size_t pattern = 0;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            pattern = (pattern << 1) | static_cast<std::size_t>(state.bit_at(i, qubits[k]));
        }
        probs[pattern] += std::norm(state.amp(i));
    }
    return probs;
}

MeasurementRecord measure_z(const StateVector& state,
                            const std::vector<int>& qubits, Rng& rng) {
    const std::vector<double> probs = z_probabilities(state, qubits);
    const double u = rng.real01();
    // If u lands beyond the accumulated total (float round-off at the top
    // end), the walk ends on the last pattern that actually has weight.
    std::size_t pattern = 0;
    double acc = 0.0;
    for (std::size_t p = 0; p < probs.size(); ++p) {
        if (probs[p] <= 0.0) continue;
        pattern = p;
        acc += probs[p];
        if (u < acc) break;
    }
    // Collapse: zero every amplitude whose measured bits disagree.
    std::vector<cplx> out = state.amplitudes();
    double kept = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            const int want = static_cast<int>((pattern >> (qubits.size() - 1 - k)) & 1u);
            if (state.bit_at(i, qubits[k]) != want) {
                match = false;
                break;
            }
        }
        if (!match) {
            out[i] = cplx{0.0, 0.0};
        } else {
            kept += std::norm(out[i]);
        }
    }
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& a : out) a *= scale;

    MeasurementRecord rec{qubits, {}, StateVector(state.num_qubits(), std::move(out))};
    rec.outcomes.resize(qubits.size());
    for (std::size_t k = 0; k < qubits.size(); ++k) {
        rec.outcomes[k] = static_cast<int>((pattern >> (qubits.size() - 1 - k)) & 1u);
    }
    return rec;
}

cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("dimension mismatch");
    }
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        acc += std::conj(a.amp(i)) * b.amp(i);
    }
    return acc;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

}  // namespace qpce::qsim
