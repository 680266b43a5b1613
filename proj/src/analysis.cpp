#include "qpce/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "qpce/states.hpp"

namespace qpce::analysis {

using protocol::Encoding;
using protocol::InitialKind;
using protocol::Variant;
using qsim::DensityMatrix;
using qsim::StateVector;

namespace {

StateVector resource_state(Resource r) {
    switch (r) {
        case Resource::w1: return states::make_w1();
        case Resource::w1_prime: return states::make_w1_prime();
        case Resource::symmetric_w:
            return states::make_symmetric_w(states::SymmetricVariant::phi1);
        case Resource::epr: return states::make_epr();
    }
    throw std::invalid_argument("unknown resource");
}

int resource_travel(Resource r) { return r == Resource::epr ? 1 : 2; }

// The receiver-aligned state whose measurement statistics Step 3 sees:
// carriers prepared in the Hadamard-rotated kind get the receiver's H after
// the encoding operation.
StateVector aligned_encoded_state(Variant variant, InitialKind kind, int bit,
                                  Encoding encoding) {
    StateVector s = protocol::initial_state(variant, kind);
    const int travel = protocol::travel_qubit(variant);
    s = protocol::encode_secret_bit(s, bit, encoding, travel);
    if (variant != Variant::LWG12 && kind == InitialKind::hadamard) {
        s = qsim::apply_gate(s, qsim::Gate::hadamard(), travel);
    }
    return s;
}

struct PartyBranch {
    std::string m_own;     // retained-particle outcome ("00", "01 or 10", "0", "1")
    std::string m_travel;  // travel-particle outcome ("0" / "1")
    int c_own = 0;
    int c_travel = 0;
    double probability = 0.0;
};

std::vector<PartyBranch> party_branches(Variant variant, InitialKind kind, int bit,
                                        Encoding encoding) {
    const StateVector s = aligned_encoded_state(variant, kind, bit, encoding);
    std::vector<PartyBranch> branches;
    if (variant == Variant::LWG12) {
        const auto probs = qsim::z_probabilities(s, {0, 1});
        for (int own = 0; own < 2; ++own) {
            for (int trav = 0; trav < 2; ++trav) {
                const double p = probs[static_cast<std::size_t>(own) * 2 + static_cast<std::size_t>(trav)];
                if (p < 1e-12) continue;
                branches.push_back({own ? "1" : "0", trav ? "1" : "0", own, trav, p});
            }
        }
        return branches;
    }
    const auto probs = qsim::z_probabilities(s, {0, 1, 2});
    for (int trav = 0; trav < 2; ++trav) {
        // |00> branch and the merged |01>/|10> branch.
        const auto t = static_cast<std::size_t>(trav);
        const double p00 = probs[t];
        const double p01 = probs[2 + t];
        const double p10 = probs[4 + t];
        const double p11 = probs[6 + t];
        if (p11 > 1e-12) {
            throw protocol::IntegrityError("pair branch |11> has nonzero probability");
        }
        if (p00 > 1e-12) {
            branches.push_back({"00", trav ? "1" : "0", 0, trav, p00});
        }
        if (p01 + p10 > 1e-12) {
            branches.push_back({"01 or 10", trav ? "1" : "0", 1, trav, p01 + p10});
        }
    }
    return branches;
}

std::vector<InitialKind> variant_kinds(Variant variant) {
    if (variant == Variant::LWG12) return {InitialKind::plain};
    return {InitialKind::plain, InitialKind::hadamard};
}

std::string format_ket(const std::string& merged) {
    if (merged == "01 or 10") return "|01> or |10>";
    return "|" + merged + ">";
}

nlohmann::json matrix_json(const DensityMatrix& rho) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < rho.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < rho.dim(); ++c) {
            row.push_back({rho.at(r, c).real(), rho.at(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string resource_name(Resource r) {
    switch (r) {
        case Resource::w1: return "w1";
        case Resource::w1_prime: return "w1'";
        case Resource::symmetric_w: return "symmetric_w";
        case Resource::epr: return "epr";
    }
    return "?";
}

std::pair<DensityMatrix, DensityMatrix> encoded_reduced_states(Resource resource,
                                                               Encoding encoding) {
    const StateVector base = resource_state(resource);
    const int travel = resource_travel(resource);
    const StateVector encoded = protocol::encode_secret_bit(base, 1, encoding, travel);
    return {qsim::partial_trace(DensityMatrix::from_state(base), {travel}),
            qsim::partial_trace(DensityMatrix::from_state(encoded), {travel})};
}

double leak_bound(Resource resource, Encoding encoding) {
    const auto [rho0, rho1] = encoded_reduced_states(resource, encoding);
    return qsim::helstrom(rho0, rho1);
}

LeakReport leak_monte_carlo(Resource resource, Encoding encoding,
                            std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    LeakReport report;
    report.resource = resource;
    report.encoding = encoding;
    report.trials = trials;
    auto reduced = encoded_reduced_states(resource, encoding);
    report.rho0 = std::move(reduced.first);
    report.rho1 = std::move(reduced.second);
    report.bound = qsim::helstrom(report.rho0, report.rho1);

    const StateVector base = resource_state(resource);
    const int travel = resource_travel(resource);
    const StateVector encoded = protocol::encode_secret_bit(base, 1, encoding, travel);
    const double p0[2] = {report.rho0.at(0, 0).real(), report.rho0.at(1, 1).real()};
    const double p1[2] = {report.rho1.at(0, 0).real(), report.rho1.at(1, 1).real()};

    Rng rng(seed);
    for (std::size_t k = 0; k < trials; ++k) {
        const int bit = rng.bit();
        const auto rec = qsim::measure_z(bit ? encoded : base, {travel}, rng);
        const int o = rec.outcomes[0];
        int guess;
        if (p0[o] > p1[o]) {
            guess = 0;
        } else if (p1[o] > p0[o]) {
            guess = 1;
        } else {
            guess = rng.bit();
        }
        if (guess == bit) ++report.correct;
    }
    report.empirical =
        static_cast<double>(report.correct) / static_cast<double>(trials);
    return report;
}

CorrectnessScan correctness_scan(Variant variant, Encoding encoding) {
    CorrectnessScan scan;
    scan.variant = variant;
    scan.encoding = encoding;
    scan.all_consistent = true;
    const auto kinds = variant_kinds(variant);
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (InitialKind ka : kinds) {
                for (InitialKind kb : kinds) {
                    const auto branches_a = party_branches(variant, ka, x, encoding);
                    const auto branches_b = party_branches(variant, kb, y, encoding);
                    for (const auto& ba : branches_a) {
                        for (const auto& bb : branches_b) {
                            ScanRow row;
                            row.x = x;
                            row.y = y;
                            row.kind_a = ka;
                            row.kind_b = kb;
                            row.m_a1 = ba.m_own;
                            row.m_a2 = ba.m_travel;
                            row.m_b1 = bb.m_own;
                            row.m_b2 = bb.m_travel;
                            row.c_a1 = ba.c_own;
                            row.c_a2 = ba.c_travel;
                            row.c_b1 = bb.c_own;
                            row.c_b2 = bb.c_travel;
                            row.c_a = row.c_a1 ^ row.c_b2;
                            row.c_b = row.c_b1 ^ row.c_a2;
                            row.c = row.c_a ^ row.c_b;
                            row.probability = ba.probability * bb.probability;
                            row.consistent = row.c == (x ^ y);
                            if (!row.consistent) scan.all_consistent = false;
                            scan.rows.push_back(std::move(row));
                        }
                    }
                }
            }
        }
    }
    return scan;
}

std::vector<TableRow> table1_view(const CorrectnessScan& scan) {
    const double kind_combos =
        static_cast<double>(variant_kinds(scan.variant).size());
    const double prior = 1.0 / (kind_combos * kind_combos);

    using Key = std::tuple<int, int, std::string, std::string, std::string,
                           std::string, int, int, int, int>;
    std::map<Key, TableRow> grouped;
    for (const auto& row : scan.rows) {
        const Key key{row.x, row.y, row.m_a1, row.m_b2, row.m_b1, row.m_a2,
                      row.c_a1, row.c_b2, row.c_b1, row.c_a2};
        auto it = grouped.find(key);
        if (it == grouped.end()) {
            TableRow t;
            t.x = row.x;
            t.y = row.y;
            t.m_a1 = row.m_a1;
            t.m_b2 = row.m_b2;
            t.m_b1 = row.m_b1;
            t.m_a2 = row.m_a2;
            t.c_a1 = row.c_a1;
            t.c_b2 = row.c_b2;
            t.c_b1 = row.c_b1;
            t.c_a2 = row.c_a2;
            t.c_a = row.c_a;
            t.c_b = row.c_b;
            t.c = row.c;
            t.consistent = row.consistent;
            it = grouped.emplace(key, std::move(t)).first;
        }
        it->second.probability += row.probability * prior;
        const std::string kind_pair =
            protocol::kind_label(scan.variant, row.kind_a) + "+" +
            protocol::kind_label(scan.variant, row.kind_b);
        auto& ks = it->second.kinds;
        if (std::find(ks.begin(), ks.end(), kind_pair) == ks.end()) {
            ks.push_back(kind_pair);
        }
    }
    std::vector<TableRow> out;
    out.reserve(grouped.size());
    for (auto& [key, row] : grouped) out.push_back(std::move(row));
    return out;
}

nlohmann::json scan_to_json(const CorrectnessScan& scan) {
    nlohmann::json j;
    j["schema"] = 1;
    j["variant"] = protocol::variant_name(scan.variant);
    j["encoding"] = protocol::encoding_name(scan.encoding);
    j["all_consistent"] = scan.all_consistent;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : scan.rows) {
        j["rows"].push_back({{"x", row.x},
                             {"y", row.y},
                             {"kind_a", protocol::kind_label(scan.variant, row.kind_a)},
                             {"kind_b", protocol::kind_label(scan.variant, row.kind_b)},
                             {"m_a1", row.m_a1},
                             {"m_b2", row.m_b2},
                             {"m_b1", row.m_b1},
                             {"m_a2", row.m_a2},
                             {"c_a1", row.c_a1},
                             {"c_b2", row.c_b2},
                             {"c_b1", row.c_b1},
                             {"c_a2", row.c_a2},
                             {"c_a", row.c_a},
                             {"c_b", row.c_b},
                             {"c", row.c},
                             {"probability", row.probability},
                             {"consistent", row.consistent}});
    }
    j["table"] = nlohmann::json::array();
    for (const auto& row : table1_view(scan)) {
        j["table"].push_back({{"x", row.x},
                              {"y", row.y},
                              {"m_a1", row.m_a1},
                              {"m_b2", row.m_b2},
                              {"m_b1", row.m_b1},
                              {"m_a2", row.m_a2},
                              {"c_a1", row.c_a1},
                              {"c_b2", row.c_b2},
                              {"c_b1", row.c_b1},
                              {"c_a2", row.c_a2},
                              {"c_a", row.c_a},
                              {"c_b", row.c_b},
                              {"c", row.c},
                              {"probability", row.probability},
                              {"consistent", row.consistent},
                              {"kinds", row.kinds}});
    }
    return j;
}

std::string scan_to_text(const CorrectnessScan& scan) {
    // Probability and kind columns are diagnostics this tool adds; the
    // measurement and comparison columns mirror the source table's order.
    std::ostringstream os;
    os << "variant=" << protocol::variant_name(scan.variant)
       << " encoding=" << protocol::encoding_name(scan.encoding) << "\n";
    os << std::left << std::setw(4) << "x_i" << std::setw(4) << "y_i"
       << std::setw(14) << "M_A1" << std::setw(6) << "M_B2" << std::setw(14)
       << "M_B1" << std::setw(6) << "M_A2" << std::setw(5) << "C_A1"
       << std::setw(5) << "C_B2" << std::setw(5) << "C_B1" << std::setw(5)
       << "C_A2" << std::setw(4) << "C_A" << std::setw(4) << "C_B"
       << std::setw(4) << "C_i"
       << "| " << std::setw(8) << "P" << "kinds\n";
    int mismatches = 0;
    for (const auto& row : table1_view(scan)) {
        std::ostringstream p;
        p << std::setprecision(6) << row.probability;
        os << std::left << std::setw(4) << row.x << std::setw(4) << row.y
           << std::setw(14) << format_ket(row.m_a1) << std::setw(6)
           << format_ket(row.m_b2) << std::setw(14) << format_ket(row.m_b1)
           << std::setw(6) << format_ket(row.m_a2) << std::setw(5) << row.c_a1
           << std::setw(5) << row.c_b2 << std::setw(5) << row.c_b1 << std::setw(5)
           << row.c_a2 << std::setw(4) << row.c_a << std::setw(4) << row.c_b
           << std::setw(4) << row.c << "| " << std::setw(8) << p.str();
        for (std::size_t i = 0; i < row.kinds.size(); ++i) {
            os << (i ? "," : "") << row.kinds[i];
        }
        if (!row.consistent) {
            os << "  <-- C_i != x_i XOR y_i";
            ++mismatches;
        }
        os << "\n";
    }
    if (mismatches > 0) {
        os << mismatches << " row(s) violate C_i = x_i XOR y_i\n";
    }
    return os.str();
}

nlohmann::json leak_to_json(const LeakReport& report) {
    nlohmann::json j;
    j["schema"] = 1;
    j["resource"] = resource_name(report.resource);
    j["encoding"] = protocol::encoding_name(report.encoding);
    j["rho0"] = matrix_json(report.rho0);
    j["rho1"] = matrix_json(report.rho1);
    j["bound"] = report.bound;
    j["empirical"] = report.empirical;
    j["trials"] = report.trials;
    j["correct"] = report.correct;
    return j;
}

std::string leak_to_text(const LeakReport& report) {
    std::ostringstream os;
    os << "resource=" << resource_name(report.resource)
       << " encoding=" << protocol::encoding_name(report.encoding) << "\n";
    auto print_matrix = [&os](const char* name, const DensityMatrix& rho) {
        os << name << " =\n";
        for (std::size_t r = 0; r < rho.dim(); ++r) {
            os << "  [";
            for (std::size_t c = 0; c < rho.dim(); ++c) {
                os << (c ? ", " : " ") << std::setprecision(6) << rho.at(r, c).real();
                if (std::abs(rho.at(r, c).imag()) > 1e-12) {
                    os << (rho.at(r, c).imag() >= 0 ? "+" : "") << rho.at(r, c).imag()
                       << "i";
                }
            }
            os << " ]\n";
        }
    };
    print_matrix("rho0", report.rho0);
    print_matrix("rho1", report.rho1);
    os << "helstrom bound = " << std::setprecision(12) << report.bound << "\n";
    os << "empirical      = " << std::setprecision(12) << report.empirical << " ("
       << report.correct << "/" << report.trials << " trials)\n";
    return os.str();
}

}  // namespace qpce::analysis
