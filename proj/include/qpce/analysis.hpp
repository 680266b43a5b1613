// Closed-form security and correctness analytics: reduced states of encoded
// carriers, the optimal-guess bound, its Monte Carlo companion, and the
// exact enumeration that reproduces the per-bit comparison table.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpce/density.hpp"
#include "qpce/protocol.hpp"

namespace qpce::analysis {

enum class Resource { w1, w1_prime, symmetric_w, epr };

std::string resource_name(Resource r);

// Travel-particle reduced states of the bit-0 and bit-1 encoded carrier.
std::pair<qsim::DensityMatrix, qsim::DensityMatrix> encoded_reduced_states(
    Resource resource, protocol::Encoding encoding);

// Helstrom bound on guessing the encoded bit from the travel particle alone.
double leak_bound(Resource resource, protocol::Encoding encoding);

struct LeakReport {
    Resource resource = Resource::w1;
    protocol::Encoding encoding = protocol::Encoding::i_sigma_y;
    qsim::DensityMatrix rho0{1};
    qsim::DensityMatrix rho1{1};
    double bound = 0.0;
    double empirical = 0.0;
    std::size_t trials = 0;
    std::size_t correct = 0;
};

// Uniform secret bits, Z measurement of the travel particle, max-likelihood
// guess from the reduced-state diagonals. For these carriers the reduced
// states are diagonal, so this strategy attains the bound.
LeakReport leak_monte_carlo(Resource resource, protocol::Encoding encoding,
                            std::size_t trials, std::uint64_t seed);

// One reachable measurement branch of one (x, y, kinds) cell. Pair outcomes
// |01> and |10> carry the same comparison bit and are merged into one row.
struct ScanRow {
    int x = 0, y = 0;
    protocol::InitialKind kind_a = protocol::InitialKind::plain;
    protocol::InitialKind kind_b = protocol::InitialKind::plain;
    std::string m_a1, m_b2, m_b1, m_a2;
    int c_a1 = 0, c_b2 = 0, c_b1 = 0, c_a2 = 0;
    int c_a = 0, c_b = 0, c = 0;
    double probability = 0.0;  // within its (x, y, kinds) cell
    bool consistent = false;   // c == x ^ y
};

struct CorrectnessScan {
    protocol::Variant variant = protocol::Variant::AW;
    protocol::Encoding encoding = protocol::Encoding::i_sigma_y;
    std::vector<ScanRow> rows;
    bool all_consistent = false;
};

// Exhaustive: every (x, y), every initial-kind pair, every reachable
// measurement branch, probabilities computed from amplitudes (no sampling).
CorrectnessScan correctness_scan(protocol::Variant variant,
                                 protocol::Encoding encoding);

// Scan rows aggregated over initial kinds (uniform prior), giving one row
// per distinct measurement/comparison combination within each (x, y) block.
struct TableRow {
    int x = 0, y = 0;
    std::string m_a1, m_b2, m_b1, m_a2;
    int c_a1 = 0, c_b2 = 0, c_b1 = 0, c_a2 = 0;
    int c_a = 0, c_b = 0, c = 0;
    double probability = 0.0;  // within its (x, y) block
    bool consistent = false;
    std::vector<std::string> kinds;  // contributing "kindA+kindB" labels
};

std::vector<TableRow> table1_view(const CorrectnessScan& scan);

nlohmann::json scan_to_json(const CorrectnessScan& scan);
std::string scan_to_text(const CorrectnessScan& scan);

nlohmann::json leak_to_json(const LeakReport& report);
std::string leak_to_text(const LeakReport& report);

}  // namespace qpce::analysis
