// Attack scenarios: an intercept-resend eavesdropper on the quantum channel,
// the third party reading the classical channel, and a dishonest participant
// measuring intercepted travel particles.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpce/analysis.hpp"
#include "qpce/protocol.hpp"

namespace qpce::adversary {

using analysis::Resource;

enum class ChannelDirection { a_to_b, b_to_a, both };

std::string direction_name(ChannelDirection d);
ChannelDirection direction_from_name(const std::string& name);

// Sub-stream tags off a run seed (the protocol itself uses 1..3).
inline constexpr std::uint64_t kEveRngTag = 4;
inline constexpr std::uint64_t kTpAttackRngTag = 5;

// Measures every transiting particle in a uniformly random basis (Z or X)
// and forwards the collapsed state.
class EveInterceptResend : public protocol::ChannelTap {
public:
    EveInterceptResend(Rng rng, ChannelDirection direction)
        : rng_(std::move(rng)), direction_(direction) {}

    qsim::StateVector intercept(const qsim::StateVector& joint, int travel_qubit,
                                const std::string& direction) override;

    std::size_t intercepted() const { return intercepted_; }

private:
    Rng rng_;
    ChannelDirection direction_;
    std::size_t intercepted_ = 0;
};

// P(detect) for threshold 0 with d decoys on one direction: 1 - (3/4)^d.
double detection_probability(std::size_t decoy_count);

// Per-decoy error probability induced by intercept-resend, computed by exact
// enumeration of decoy kinds x Eve bases x outcome branches.
double intercept_resend_error_rate();

// --- TP reading the classical channel -----------------------------------

struct TpAttackOutcome {
    std::optional<std::size_t> recovered_r;        // both methods agree when set
    std::optional<std::size_t> recovered_r_via_mix;   // method (1): R' - R''
    std::optional<std::size_t> recovered_r_via_unmerge;  // method (2): strip S_q
    bool methods_agree = false;
    bool r_prime_zero = false;  // side channel: R' = 0 forces R = 0
    std::size_t r_prime = 0;
    int blind_guess_equal = -1;  // AW only: coin-flip equality guess
    std::optional<std::size_t> random_unmerge_r;  // AW only: R from a guessed S_q
};

// TP's view: the public transcript plus the keys he legitimately holds.
TpAttackOutcome tp_classical_attack(const protocol::Transcript& transcript,
                                    const crypto::SharedKey& key_at,
                                    const crypto::SharedKey& key_bt,
                                    const protocol::ProtocolConfig& config,
                                    Rng& rng);

// --- batch runners (deterministic per-trial seeds) -----------------------

struct InterceptResendStats {
    std::size_t runs = 0;
    std::size_t decoys_per_direction = 0;
    std::size_t aborted_runs = 0;
    std::size_t detected_a_to_b = 0;
    std::size_t detected_b_to_a = 0;
    std::size_t decoy_errors = 0;
    std::size_t decoys_checked = 0;
    double closed_form_detection = 0.0;
    double per_decoy_error_closed_form = 0.0;
};

InterceptResendStats run_intercept_resend_batch(const protocol::ProtocolConfig& base,
                                                ChannelDirection direction,
                                                std::size_t runs,
                                                std::uint64_t master_seed);

struct TpAttackStats {
    std::size_t runs = 0;
    std::size_t recovered = 0;        // runs where recovered_r == honest R
    std::size_t methods_agreed = 0;
    std::size_t guess_trials = 0;     // runs entering the blind guess (R' > 0)
    std::size_t guess_correct = 0;
    std::size_t r_prime_zero_runs = 0;
    std::size_t r_prime_zero_equal = 0;     // ground truth among those runs
    std::size_t unmerge_guess_matches = 0;  // random-S_q attempts that hit R
    std::size_t baseline_matches = 0;       // fresh random S_q, for comparison
};

TpAttackStats run_tp_attack_batch(const protocol::ProtocolConfig& base,
                                  std::size_t runs, std::uint64_t master_seed);

struct DishonestOutcome {
    std::size_t trials = 0;
    std::size_t correct = 0;
    double success_rate = 0.0;
    double helstrom_bound = 0.0;
};

// Dishonest receiver strategy: Z-measure each intercepted travel particle,
// guess the encoded bit by maximum likelihood under the known encoding.
DishonestOutcome dishonest_participant_attack(Resource resource,
                                              protocol::Encoding encoding,
                                              std::size_t trials,
                                              std::uint64_t master_seed);

nlohmann::json tp_outcome_to_json(const TpAttackOutcome& outcome);
nlohmann::json tp_stats_to_json(const TpAttackStats& stats);
nlohmann::json intercept_stats_to_json(const InterceptResendStats& stats);
nlohmann::json dishonest_to_json(const DishonestOutcome& outcome, Resource resource,
                                 protocol::Encoding encoding);

}  // namespace qpce::adversary
