// Party state machines for the private-comparison protocols: the
// asymmetric-W protocol (AW) plus replicas of the two earlier designs it is
// measured against (LWJ11: symmetric W states; LWG12: EPR carriers). A run
// produces a ComparisonReport and a full Transcript.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpce/crypto.hpp"
#include "qpce/states.hpp"
#include "qpce/statevector.hpp"
#include "qpce/transcript.hpp"

namespace qpce::protocol {

class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Signals a branch that is unreachable in a noiseless run; hitting one means
// the simulator itself is broken.
class IntegrityError : public std::logic_error {
public:
    explicit IntegrityError(const std::string& what) : std::logic_error(what) {}
};

enum class Variant { AW, LWJ11, LWG12 };
enum class Encoding { sigma_x, i_sigma_y };

// Every variant draws its carrier from a base state and (except LWG12) its
// Hadamard-rotated partner: W1/W1', phi1/phi2.
enum class InitialKind { plain, hadamard };

std::string variant_name(Variant v);
std::string encoding_name(Encoding e);
std::string kind_label(Variant v, InitialKind k);

struct ProtocolConfig {
    Variant variant = Variant::AW;
    std::size_t bit_length = 8;    // N, length of the compared secrets
    std::size_t mix_length = 8;    // L, random bits mixed in before TP sees anything
    std::size_t decoy_count = 16;  // per direction
    Encoding encoding = Encoding::i_sigma_y;
    double error_threshold = 0.0;  // abort when a decoy error rate exceeds this
    std::uint64_t seed = 0;

    // Test hooks.
    bool allow_empty_mix = false;
    std::optional<std::vector<InitialKind>> forced_kinds_alice;
    std::optional<std::vector<InitialKind>> forced_kinds_bob;

    void validate() const;  // throws ConfigError
};

enum class Verdict { equal, not_equal, aborted_eavesdrop };

std::string verdict_name(Verdict v);

struct PerBitRow {
    std::size_t index = 0;  // 0-based bit position (x_i is the 2^i coefficient)
    int x = 0, y = 0;
    InitialKind kind_a = InitialKind::plain;
    InitialKind kind_b = InitialKind::plain;
    std::string m_a1, m_b2, m_b1, m_a2;  // measured patterns, table column order
    int c_a1 = 0, c_b2 = 0, c_b1 = 0, c_a2 = 0;
    int c_a = 0, c_b = 0, c = 0;
};

struct DirectionCheck {
    std::size_t checked = 0;
    std::size_t errors = 0;
    double error_rate = 0.0;
    bool failed = false;
};

struct ComparisonReport {
    Verdict verdict = Verdict::equal;
    std::size_t r = 0;
    std::size_t r_prime = 0;
    std::vector<PerBitRow> per_bit;
    DirectionCheck check_a_to_b;
    DirectionCheck check_b_to_a;
    std::vector<std::string> flags;
};

// A quantum-channel tap (the intercept-resend adversary implements this).
// Called once per transiting particle, in wire order; returns the joint
// register state after whatever the adversary did to the travel qubit.
class ChannelTap {
public:
    virtual ~ChannelTap() = default;
    virtual qsim::StateVector intercept(const qsim::StateVector& joint,
                                        int travel_qubit,
                                        const std::string& direction) = 0;
};

struct RunResult {
    ComparisonReport report;
    Transcript transcript;
    // TP's legitimate private view; the tp_classical attack needs it.
    crypto::SharedKey key_at;
    crypto::SharedKey key_bt;
};

RunResult run_protocol(const ProtocolConfig& config, std::uint64_t x, std::uint64_t y,
                       ChannelTap* tap = nullptr);

nlohmann::json report_to_json(const ComparisonReport& report,
                              const ProtocolConfig& config,
                              std::uint64_t x, std::uint64_t y);

// --- building blocks, exposed for tests and the analysis module ---

// Fresh carrier state for a variant; LWG12 ignores `kind` (single EPR kind).
qsim::StateVector initial_state(Variant v, InitialKind kind);

// 0-based index of the particle that leaves the preparer's lab.
int travel_qubit(Variant v);

// bit = 1 applies the encoding operator to the travel qubit; bit = 0 is I.
qsim::StateVector encode_secret_bit(const qsim::StateVector& state, int bit,
                                    Encoding encoding, int travel);

qsim::Gate encoding_gate(Encoding encoding);

// Pair outcome to comparison bit: |00> -> 0, |01>/|10> -> 1, |11> impossible.
int pair_bit(int b0, int b1);

// Insert `mix` into `base` so mix bit j lands at merged index positions[j]
// (strictly increasing positions into the merged sequence).
crypto::Bits merge_sequences(const crypto::Bits& base, const crypto::Bits& mix,
                             const std::vector<std::size_t>& positions);

// Inverse of merge_sequences: drop the mixed positions.
crypto::Bits remove_positions(const crypto::Bits& merged,
                              const std::vector<std::size_t>& positions);

crypto::Bits secret_to_bits(std::uint64_t value, std::size_t bit_length);

// Number of key bits each pair must provision so Step 4 cannot exhaust a key.
std::size_t key_budget_ab(const ProtocolConfig& config);
std::size_t key_budget_tp(const ProtocolConfig& config);

}  // namespace qpce::protocol
