#include "qpce/adversary.hpp"

#include <cmath>

#include "qpce/density.hpp"

namespace qpce::adversary {

using crypto::Bits;
using protocol::Encoding;
using protocol::ProtocolConfig;
using protocol::Variant;
using qsim::Gate;
using qsim::StateVector;

namespace {

constexpr std::uint64_t kTagAttack = 11;
constexpr std::uint64_t kTagSecrets = 10;
constexpr std::uint64_t kTagTrialBase = 0x7261696c;

std::uint64_t trial_seed(std::uint64_t master, std::size_t k) {
    return splitmix64(master ^ splitmix64(kTagTrialBase + k));
}

std::uint64_t random_secret(Rng& rng, std::size_t bits) {
    if (bits >= 64) return rng.u64();
    return rng.below(std::uint64_t{1} << bits);
}

}  // namespace

std::string direction_name(ChannelDirection d) {
    switch (d) {
        case ChannelDirection::a_to_b: return "a_to_b";
        case ChannelDirection::b_to_a: return "b_to_a";
        case ChannelDirection::both: return "both";
    }
    return "?";
}

ChannelDirection direction_from_name(const std::string& name) {
    if (name == "a_to_b") return ChannelDirection::a_to_b;
    if (name == "b_to_a") return ChannelDirection::b_to_a;
    if (name == "both") return ChannelDirection::both;
    throw protocol::ConfigError("unknown channel direction: " + name);
}

StateVector EveInterceptResend::intercept(const StateVector& joint, int travel_qubit,
                                          const std::string& direction) {
    const bool active = direction_ == ChannelDirection::both ||
                        (direction_ == ChannelDirection::a_to_b && direction == "A->B") ||
                        (direction_ == ChannelDirection::b_to_a && direction == "B->A");
    if (!active) return joint;
    ++intercepted_;
    const int basis = rng_.bit();
    StateVector s = joint;
    if (basis == 1) s = qsim::apply_gate(s, Gate::hadamard(), travel_qubit);
    s = qsim::measure_z(s, {travel_qubit}, rng_).post_state;
    // Resend the observed eigenstate: rotate back out of Eve's frame.
    if (basis == 1) s = qsim::apply_gate(s, Gate::hadamard(), travel_qubit);
    return s;
}

double detection_probability(std::size_t decoy_count) {
    return 1.0 - std::pow(0.75, static_cast<double>(decoy_count));
}

double intercept_resend_error_rate() {
    using states::DecoyKind;
    const DecoyKind kinds[] = {DecoyKind::zero, DecoyKind::one, DecoyKind::plus,
                               DecoyKind::minus};
    double total = 0.0;
    for (DecoyKind kind : kinds) {
        const int prep_basis = states::decoy_basis(kind);
        const int value = states::decoy_value(kind);
        for (int eve_basis = 0; eve_basis < 2; ++eve_basis) {
            StateVector s = states::make_decoy(kind);
            if (eve_basis == 1) s = qsim::apply_gate(s, Gate::hadamard(), 0);
            const auto eve_probs = qsim::z_probabilities(s, {0});
            for (int outcome = 0; outcome < 2; ++outcome) {
                if (eve_probs[static_cast<std::size_t>(outcome)] <= 0.0) continue;
                // Eve resends the eigenstate she saw.
                StateVector resent = states::make_decoy(
                    states::decoy_from_bits(eve_basis, outcome));
                if (prep_basis == 1) {
                    resent = qsim::apply_gate(resent, Gate::hadamard(), 0);
                }
                const auto recv_probs = qsim::z_probabilities(resent, {0});
                total += 0.25 * 0.5 * eve_probs[static_cast<std::size_t>(outcome)] *
                         recv_probs[static_cast<std::size_t>(1 - value)];
            }
        }
    }
    return total;
}

TpAttackOutcome tp_classical_attack(const protocol::Transcript& transcript,
                                    const crypto::SharedKey& key_at,
                                    const crypto::SharedKey& key_bt,
                                    const ProtocolConfig& config, Rng& rng) {
    TpAttackOutcome out;
    const auto* msg_a = transcript.find("C''_A");
    const auto* msg_b = transcript.find("C''_B");
    if (msg_a == nullptr || msg_b == nullptr) return out;
    const Bits merged_a = crypto::otp_decrypt(key_at, *msg_a);
    const Bits merged_b = crypto::otp_decrypt(key_bt, *msg_b);
    out.r_prime = crypto::hamming_distance(merged_a, merged_b);
    out.r_prime_zero = out.r_prime == 0;

    const auto* mix_a = transcript.find("C'_A");
    const auto* mix_b = transcript.find("C'_B");
    const auto* s_q = transcript.find("S_q");
    const std::size_t merged_len = merged_a.size();

    if (config.variant != Variant::AW && mix_a != nullptr && mix_b != nullptr &&
        s_q != nullptr && !mix_a->encrypted) {
        // Method (1): subtract the mix distance read off the public channel.
        const std::size_t r_mix = crypto::hamming_distance(mix_a->payload, mix_b->payload);
        if (out.r_prime >= r_mix) out.recovered_r_via_mix = out.r_prime - r_mix;
        // Method (2): strip the announced insertion positions.
        const auto positions = crypto::decode_positions(s_q->payload, merged_len);
        const Bits c_a = protocol::remove_positions(merged_a, positions);
        const Bits c_b = protocol::remove_positions(merged_b, positions);
        out.recovered_r_via_unmerge = crypto::hamming_distance(c_a, c_b);
        out.methods_agree = out.recovered_r_via_mix.has_value() &&
                            *out.recovered_r_via_mix == *out.recovered_r_via_unmerge;
        if (out.methods_agree) out.recovered_r = out.recovered_r_via_unmerge;
        return out;
    }

    // AW: the mix and position payloads are one-time-pad ciphertext, so both
    // methods are out of reach. TP can only guess: a coin flip on equality,
    // plus an un-merge attempt with a uniformly random position set (all
    // C(N+L, L) candidates look alike from his view).
    out.blind_guess_equal = rng.bit();
    if (mix_a != nullptr) {
        const std::size_t l = mix_a->payload.size();
        const auto guess = rng.sample_positions(l, merged_len);
        out.random_unmerge_r = crypto::hamming_distance(
            protocol::remove_positions(merged_a, guess),
            protocol::remove_positions(merged_b, guess));
    }
    return out;
}

InterceptResendStats run_intercept_resend_batch(const ProtocolConfig& base,
                                                ChannelDirection direction,
                                                std::size_t runs,
                                                std::uint64_t master_seed) {
    InterceptResendStats stats;
    stats.runs = runs;
    stats.decoys_per_direction = base.decoy_count;
    stats.closed_form_detection = detection_probability(base.decoy_count);
    stats.per_decoy_error_closed_form = intercept_resend_error_rate();

    Rng secrets(splitmix64(master_seed ^ kTagSecrets));
    for (std::size_t k = 0; k < runs; ++k) {
        ProtocolConfig config = base;
        config.seed = trial_seed(master_seed, k);
        const std::uint64_t x = random_secret(secrets, config.bit_length);
        const std::uint64_t y = random_secret(secrets, config.bit_length);
        EveInterceptResend eve(Rng(config.seed).derive(kEveRngTag), direction);
        const auto result = protocol::run_protocol(config, x, y, &eve);
        const auto& rep = result.report;
        if (rep.verdict == protocol::Verdict::aborted_eavesdrop) ++stats.aborted_runs;
        if (rep.check_a_to_b.failed) ++stats.detected_a_to_b;
        if (rep.check_b_to_a.failed) ++stats.detected_b_to_a;
        if (direction != ChannelDirection::b_to_a) {
            stats.decoy_errors += rep.check_a_to_b.errors;
            stats.decoys_checked += rep.check_a_to_b.checked;
        }
        if (direction != ChannelDirection::a_to_b) {
            stats.decoy_errors += rep.check_b_to_a.errors;
            stats.decoys_checked += rep.check_b_to_a.checked;
        }
    }
    return stats;
}

TpAttackStats run_tp_attack_batch(const ProtocolConfig& base, std::size_t runs,
                                  std::uint64_t master_seed) {
    TpAttackStats stats;
    stats.runs = runs;
    Rng secrets(splitmix64(master_seed ^ kTagSecrets));
    Rng attack_rng(splitmix64(master_seed ^ kTagAttack));
    for (std::size_t k = 0; k < runs; ++k) {
        ProtocolConfig config = base;
        config.seed = trial_seed(master_seed, k);
        // 50% equal prior.
        const bool equal = secrets.bit() == 1;
        const std::uint64_t x = random_secret(secrets, config.bit_length);
        std::uint64_t y = x;
        if (!equal) {
            do {
                y = random_secret(secrets, config.bit_length);
            } while (y == x);
        }
        const auto result = protocol::run_protocol(config, x, y);
        const auto outcome = tp_classical_attack(result.transcript, result.key_at,
                                                 result.key_bt, config, attack_rng);
        if (outcome.methods_agree) ++stats.methods_agreed;
        if (outcome.recovered_r.has_value() &&
            *outcome.recovered_r == result.report.r) {
            ++stats.recovered;
        }
        if (config.variant == Variant::AW) {
            if (outcome.r_prime_zero) {
                ++stats.r_prime_zero_runs;
                if (x == y) ++stats.r_prime_zero_equal;
            } else if (outcome.blind_guess_equal >= 0) {
                ++stats.guess_trials;
                if ((outcome.blind_guess_equal == 1) == (x == y)) ++stats.guess_correct;
            }
            if (outcome.random_unmerge_r.has_value() &&
                *outcome.random_unmerge_r == result.report.r) {
                ++stats.unmerge_guess_matches;
            }
            // Chance baseline: an independent random position set.
            const auto* mix_msg = result.transcript.find("C'_A");
            const auto* merged_msg = result.transcript.find("C''_A");
            if (mix_msg != nullptr && merged_msg != nullptr) {
                const auto baseline_pos = attack_rng.sample_positions(
                    mix_msg->payload.size(), merged_msg->payload.size());
                const Bits ma = crypto::otp_decrypt(result.key_at, *merged_msg);
                const Bits mb =
                    crypto::otp_decrypt(result.key_bt, *result.transcript.find("C''_B"));
                const std::size_t r_base = crypto::hamming_distance(
                    protocol::remove_positions(ma, baseline_pos),
                    protocol::remove_positions(mb, baseline_pos));
                if (r_base == result.report.r) ++stats.baseline_matches;
            }
        }
    }
    return stats;
}

DishonestOutcome dishonest_participant_attack(Resource resource, Encoding encoding,
                                              std::size_t trials,
                                              std::uint64_t master_seed) {
    const auto report = analysis::leak_monte_carlo(resource, encoding, trials, master_seed);
    DishonestOutcome out;
    out.trials = report.trials;
    out.correct = report.correct;
    out.success_rate = report.empirical;
    out.helstrom_bound = report.bound;
    return out;
}

nlohmann::json tp_outcome_to_json(const TpAttackOutcome& outcome) {
    nlohmann::json j;
    j["kind"] = "tp_classical";
    j["r_prime"] = outcome.r_prime;
    j["r_prime_zero"] = outcome.r_prime_zero;
    j["recovered_R"] = outcome.recovered_r.has_value()
                           ? nlohmann::json(*outcome.recovered_r)
                           : nlohmann::json(nullptr);
    j["recovered_R_via_mix"] = outcome.recovered_r_via_mix.has_value()
                                   ? nlohmann::json(*outcome.recovered_r_via_mix)
                                   : nlohmann::json(nullptr);
    j["recovered_R_via_unmerge"] =
        outcome.recovered_r_via_unmerge.has_value()
            ? nlohmann::json(*outcome.recovered_r_via_unmerge)
            : nlohmann::json(nullptr);
    j["methods_agree"] = outcome.methods_agree;
    j["blind_guess_equal"] = outcome.blind_guess_equal < 0
                                 ? nlohmann::json(nullptr)
                                 : nlohmann::json(outcome.blind_guess_equal == 1);
    j["random_unmerge_R"] = outcome.random_unmerge_r.has_value()
                                ? nlohmann::json(*outcome.random_unmerge_r)
                                : nlohmann::json(nullptr);
    return j;
}

nlohmann::json tp_stats_to_json(const TpAttackStats& stats) {
    nlohmann::json j;
    j["kind"] = "tp_classical";
    j["runs"] = stats.runs;
    j["recovered_runs"] = stats.recovered;
    j["methods_agreed_runs"] = stats.methods_agreed;
    j["guess_trials"] = stats.guess_trials;
    j["guess_correct"] = stats.guess_correct;
    j["guess_success_rate"] =
        stats.guess_trials == 0
            ? nullptr
            : nlohmann::json(static_cast<double>(stats.guess_correct) /
                             static_cast<double>(stats.guess_trials));
    j["r_prime_zero"] = {{"runs", stats.r_prime_zero_runs},
                         {"actually_equal", stats.r_prime_zero_equal}};
    j["unmerge_guess_matches"] = stats.unmerge_guess_matches;
    j["unmerge_baseline_matches"] = stats.baseline_matches;
    return j;
}

nlohmann::json intercept_stats_to_json(const InterceptResendStats& stats) {
    nlohmann::json j;
    j["kind"] = "intercept_resend";
    j["runs"] = stats.runs;
    j["decoys_per_direction"] = stats.decoys_per_direction;
    j["aborted_runs"] = stats.aborted_runs;
    j["detected"] = {{"a_to_b", stats.detected_a_to_b},
                     {"b_to_a", stats.detected_b_to_a}};
    j["closed_form_detection"] = stats.closed_form_detection;
    j["per_decoy_error_rate"] =
        stats.decoys_checked == 0
            ? nullptr
            : nlohmann::json(static_cast<double>(stats.decoy_errors) /
                             static_cast<double>(stats.decoys_checked));
    j["per_decoy_error_closed_form"] = stats.per_decoy_error_closed_form;
    return j;
}

nlohmann::json dishonest_to_json(const DishonestOutcome& outcome, Resource resource,
                                 Encoding encoding) {
    nlohmann::json j;
    j["kind"] = "dishonest_participant";
    j["resource"] = analysis::resource_name(resource);
    j["encoding"] = protocol::encoding_name(encoding);
    j["trials"] = outcome.trials;
    j["correct"] = outcome.correct;
    j["success_rate"] = outcome.success_rate;
    j["helstrom_bound"] = outcome.helstrom_bound;
    return j;
}

}  // namespace qpce::adversary
