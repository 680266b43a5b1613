#include "qpce/states.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

namespace qpce::states {

using qsim::cplx;
using qsim::Gate;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Ket |abc> lives at index a*4 + b*2 + c (qubit 0 = leftmost = MSB).
constexpr std::size_t k100 = 4, k010 = 2, k001 = 1;

}  // namespace

StateVector make_wn(const WStateParams& params) {
    if (params.n < 0.0) throw std::invalid_argument("asymmetry parameter must be >= 0");
    if (!std::isfinite(params.gamma) || !std::isfinite(params.delta)) {
        throw std::invalid_argument("phases must be finite");
    }
    const double norm = 1.0 / std::sqrt(2.0 + 2.0 * params.n);
    std::vector<cplx> amps(8, cplx{0.0, 0.0});
    amps[k100] = norm;
    amps[k010] = norm * std::sqrt(params.n) * std::polar(1.0, params.gamma);
    amps[k001] = norm * std::sqrt(params.n + 1.0) * std::polar(1.0, params.delta);
    return StateVector(3, std::move(amps));
}

StateVector make_w1() {
    std::vector<cplx> amps(8, cplx{0.0, 0.0});
    amps[k100] = 0.5;
    amps[k010] = 0.5;
    amps[k001] = kInvSqrt2;
    return StateVector(3, std::move(amps));
}

StateVector make_w1_prime() {
    return qsim::apply_gate(make_w1(), Gate::hadamard(), 2);
}

StateVector make_symmetric_w(SymmetricVariant variant) {
    const double s = 1.0 / std::sqrt(3.0);
    std::vector<cplx> amps(8, cplx{0.0, 0.0});
    amps[k100] = s;
    amps[k010] = s;
    amps[k001] = s;
    StateVector phi1(3, std::move(amps));
    if (variant == SymmetricVariant::phi1) return phi1;
    return qsim::apply_gate(phi1, Gate::hadamard(), 2);
}

StateVector make_epr() {
    std::vector<cplx> amps(4, cplx{0.0, 0.0});
    amps[1] = kInvSqrt2;  // |01>
    amps[2] = kInvSqrt2;  // |10>
    return StateVector(2, std::move(amps));
}

StateVector make_decoy(DecoyKind kind) {
    switch (kind) {
        case DecoyKind::zero: return StateVector::basis(1, 0);
        case DecoyKind::one: return StateVector::basis(1, 1);
        case DecoyKind::plus:
            return StateVector(1, {cplx{kInvSqrt2}, cplx{kInvSqrt2}});
        case DecoyKind::minus:
            return StateVector(1, {cplx{kInvSqrt2}, cplx{-kInvSqrt2}});
    }
    throw std::invalid_argument("unknown decoy kind");
}

int decoy_basis(DecoyKind kind) {
    return (kind == DecoyKind::plus || kind == DecoyKind::minus) ? 1 : 0;
}

int decoy_value(DecoyKind kind) {
    return (kind == DecoyKind::one || kind == DecoyKind::minus) ? 1 : 0;
}

DecoyKind decoy_from_bits(int basis, int value) {
    if (basis == 0) return value ? DecoyKind::one : DecoyKind::zero;
    return value ? DecoyKind::minus : DecoyKind::plus;
}

std::string decoy_name(DecoyKind kind) {
    switch (kind) {
        case DecoyKind::zero: return "0";
        case DecoyKind::one: return "1";
        case DecoyKind::plus: return "+";
        case DecoyKind::minus: return "-";
    }
    return "?";
}

CircuitDescription w1_circuit() {
    CircuitDescription c;
    c.num_qubits = 3;
    c.steps = {
        {"H", std::nullopt, 1, 2},
        {"H", 2, 0, 0},
        {"X", 0, 1, 1},
        {"X", 2, 0, 1},
    };
    return c;
}

StateVector replay(const CircuitDescription& circuit) {
    StateVector state(circuit.num_qubits);
    for (const auto& step : circuit.steps) {
        const Gate g = Gate::by_name(step.gate);
        if (step.control.has_value()) {
            state = qsim::apply_controlled(state, g, *step.control,
                                           step.control_value, step.target);
        } else {
            state = qsim::apply_gate(state, g, step.target);
        }
    }
    return state;
}

int elementary_gate_count(const CircuitDescription& circuit) {
    // Expand each anti-control into X(control), controlled-step, X(control),
    // then cancel X pairs on the same wire separated only by steps that do
    // not touch that wire.
    struct Elem {
        bool is_x_fixup;
        int wire;  // only meaningful for fixups
    };
    std::vector<Elem> seq;
    std::vector<std::vector<int>> touched;  // wires used by each element
    for (const auto& step : circuit.steps) {
        const bool anti = step.control.has_value() && step.control_value == 0;
        if (anti) {
            seq.push_back({true, *step.control});
            touched.push_back({*step.control});
        }
        seq.push_back({false, -1});
        std::vector<int> wires{step.target};
        if (step.control.has_value()) wires.push_back(*step.control);
        touched.push_back(std::move(wires));
        if (anti) {
            seq.push_back({true, *step.control});
            touched.push_back({*step.control});
        }
    }
    std::vector<bool> removed(seq.size(), false);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (removed[i] || !seq[i].is_x_fixup) continue;
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            if (removed[j]) continue;
            const bool touches = std::find(touched[j].begin(), touched[j].end(),
                                           seq[i].wire) != touched[j].end();
            if (!touches) continue;
            if (seq[j].is_x_fixup && seq[j].wire == seq[i].wire) {
                removed[i] = removed[j] = true;
            }
            break;
        }
    }
    int count = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!removed[i]) ++count;
    }
    return count;
}

namespace {

// Amplitudes held exactly as integers over a shared sqrt(2)^-e scale, so
// state identity is an integer comparison instead of a float tolerance.
struct ExactState {
    int e = 0;
    std::array<std::int64_t, 8> n{};

    void reduce() {
        auto all_even = [this] {
            return std::all_of(n.begin(), n.end(),
                               [](std::int64_t v) { return v % 2 == 0; });
        };
        while (e >= 2 && all_even()) {
            for (auto& v : n) v /= 2;
            e -= 2;
        }
        for (const auto& v : n) {
            if (v != 0) {
                if (v < 0) {
                    for (auto& w : n) w = -w;  // fix global sign
                }
                break;
            }
        }
    }

    bool operator<(const ExactState& o) const {
        if (e != o.e) return e < o.e;
        return n < o.n;
    }
};

int bit3(std::size_t idx, int q) { return static_cast<int>((idx >> (2 - q)) & 1u); }

ExactState apply_x(const ExactState& s, int q) {
    ExactState out = s;
    for (std::size_t i = 0; i < 8; ++i) {
        out.n[i ^ (std::size_t{1} << (2 - q))] = s.n[i];
    }
    out.reduce();
    return out;
}

ExactState apply_cnot(const ExactState& s, int control, int target) {
    ExactState out = s;
    for (std::size_t i = 0; i < 8; ++i) {
        const std::size_t j =
            bit3(i, control) ? i ^ (std::size_t{1} << (2 - target)) : i;
        out.n[j] = s.n[i];
    }
    out.reduce();
    return out;
}

ExactState apply_h(const ExactState& s, int q) {
    ExactState out;
    out.e = s.e + 1;
    const std::size_t stride = std::size_t{1} << (2 - q);
    for (std::size_t i = 0; i < 8; ++i) {
        if (i & stride) continue;
        const std::size_t j = i | stride;
        out.n[i] = s.n[i] + s.n[j];
        out.n[j] = s.n[i] - s.n[j];
    }
    out.reduce();
    return out;
}

double fidelity_to_w1(const ExactState& s) {
    const double scale = std::pow(2.0, -0.5 * s.e);
    double overlap = 0.0;
    overlap += 0.5 * scale * static_cast<double>(s.n[4]);
    overlap += 0.5 * scale * static_cast<double>(s.n[2]);
    overlap += kInvSqrt2 * scale * static_cast<double>(s.n[1]);
    return overlap * overlap;
}

bool is_flat(const ExactState& s) {
    std::int64_t mag = -1;
    for (const auto& v : s.n) {
        if (v == 0) continue;
        const std::int64_t a = std::abs(v);
        if (mag < 0) {
            mag = a;
        } else if (a != mag) {
            return false;
        }
    }
    return true;
}

}  // namespace

StabilizerSearchResult stabilizer_search(int max_depth) {
    ExactState start;
    start.n[0] = 1;

    std::map<ExactState, int> seen;
    seen.emplace(start, 0);
    std::vector<ExactState> frontier{start};

    StabilizerSearchResult result;
    result.all_flat = true;
    int depth = 0;
    while (!frontier.empty() && depth < max_depth) {
        ++depth;
        std::vector<ExactState> next;
        for (const auto& s : frontier) {
            std::vector<ExactState> neighbours;
            for (int q = 0; q < 3; ++q) {
                neighbours.push_back(apply_x(s, q));
                neighbours.push_back(apply_h(s, q));
            }
            for (int c = 0; c < 3; ++c) {
                for (int t = 0; t < 3; ++t) {
                    if (c != t) neighbours.push_back(apply_cnot(s, c, t));
                }
            }
            for (auto& ns : neighbours) {
                if (seen.emplace(ns, depth).second) next.push_back(ns);
            }
        }
        if (next.empty()) break;  // closure reached
        frontier = std::move(next);
    }

    result.reachable_states = seen.size();
    result.closure_depth = depth;
    for (const auto& [s, d] : seen) {
        if (!is_flat(s)) result.all_flat = false;
        const double f = fidelity_to_w1(s);
        result.max_fidelity_to_w1 = std::max(result.max_fidelity_to_w1, f);
        if (f >= 1.0 - qsim::kClosedFormTol) result.w1_reachable = true;
    }
    return result;
}

}  // namespace qpce::states
