// Constructors for every quantum resource the protocols use, the preparation
// circuit for the asymmetric W state, and a Clifford-reachability search that
// demonstrates the state cannot be built from {NOT, CNOT, H} alone.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpce/statevector.hpp"

namespace qpce::states {

using qsim::StateVector;

struct WStateParams {
    double n = 1.0;      // asymmetry parameter, >= 0
    double gamma = 0.0;  // phase of the |010> term, radians
    double delta = 0.0;  // phase of the |001> term, radians
};

// (1/sqrt(2+2n)) (|100> + sqrt(n) e^{i gamma} |010> + sqrt(n+1) e^{i delta} |001>)
StateVector make_wn(const WStateParams& params);

// (1/2)(|100> + |010> + sqrt(2)|001>)
StateVector make_w1();

// (1/2)(|10+> + |01+> + sqrt(2)|00->)  ==  H on particle 3 of make_w1()
StateVector make_w1_prime();

enum class SymmetricVariant { phi1, phi2 };

// phi1 = (1/sqrt(3))(|100> + |010> + |001>); phi2 = H on particle 3 of phi1.
StateVector make_symmetric_w(SymmetricVariant variant);

// |phi+> = (1/sqrt(2))(|01> + |10>)
StateVector make_epr();

enum class DecoyKind { zero, one, plus, minus };

StateVector make_decoy(DecoyKind kind);

// Z eigenstates carry basis 0, X eigenstates basis 1; the eigenvalue bit is
// what an honest measurement in the preparation basis must reproduce.
int decoy_basis(DecoyKind kind);
int decoy_value(DecoyKind kind);
DecoyKind decoy_from_bits(int basis, int value);
std::string decoy_name(DecoyKind kind);

struct CircuitStep {
    std::string gate;             // "H", "X", ...
    std::optional<int> control;   // 0-based wire; empty = single-qubit step
    int control_value = 1;        // 0 realises an anti-control
    int target = 0;               // 0-based wire
};

struct CircuitDescription {
    int num_qubits = 0;
    std::vector<CircuitStep> steps;
};

// Preparation circuit whose replay on |000> yields make_w1().
// H(q2); H(q0) anti-controlled on q2; CNOT(q0 -> q1); X(q1) anti-controlled
// on q2 (0-based wires).
CircuitDescription w1_circuit();

StateVector replay(const CircuitDescription& circuit);

// Elementary gate count after expanding anti-controls into X conjugations
// and cancelling adjacent X pairs that commute past intervening steps.
int elementary_gate_count(const CircuitDescription& circuit);

// Exhaustive closure of states reachable from |000> with {X, CNOT, H},
// held exactly as integer vectors over sqrt(2) powers.
struct StabilizerSearchResult {
    std::size_t reachable_states = 0;
    int closure_depth = 0;        // BFS depth at which no new state appeared
    bool all_flat = false;        // every state has a single nonzero magnitude
    bool w1_reachable = false;
    double max_fidelity_to_w1 = 0.0;
};

StabilizerSearchResult stabilizer_search(int max_depth = 12);

}  // namespace qpce::states
