#include "qpce/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpce::protocol {

using crypto::Bits;
using crypto::ClassicalMessage;
using crypto::SharedKey;
using qsim::Gate;
using qsim::StateVector;
using states::DecoyKind;

namespace {

constexpr std::uint64_t kTagKeys = 1;
constexpr std::uint64_t kTagAlice = 2;
constexpr std::uint64_t kTagBob = 3;

std::string pattern_string(const std::vector<int>& outcomes) {
    std::string s;
    for (int b : outcomes) s.push_back(b ? '1' : '0');
    return s;
}

Bits u16_bits(std::size_t value) {
    Bits out(16);
    for (int b = 0; b < 16; ++b) {
        out[static_cast<std::size_t>(b)] =
            static_cast<std::uint8_t>((value >> (15 - b)) & 1u);
    }
    return out;
}

// One party's Step-1 output: encoded carriers plus the decoy book.
struct Preparation {
    std::vector<InitialKind> kinds;
    std::vector<StateVector> registers;
    std::vector<DecoyKind> decoy_kinds;          // in ascending position order
    std::vector<std::size_t> decoy_positions;    // into the outbound sequence
    std::vector<StateVector> decoy_states;
};

Preparation prepare_party(const ProtocolConfig& config, const Bits& secret,
                          const std::optional<std::vector<InitialKind>>& forced,
                          Rng& rng) {
    const std::size_t n = config.bit_length;
    Preparation prep;
    prep.kinds.resize(n, InitialKind::plain);
    if (config.variant != Variant::LWG12) {
        if (forced.has_value()) {
            if (forced->size() != n) {
                throw ConfigError("forced kind list must have one entry per bit");
            }
            prep.kinds = *forced;
        } else {
            for (auto& k : prep.kinds) {
                k = rng.bit() ? InitialKind::hadamard : InitialKind::plain;
            }
        }
    }
    const int travel = travel_qubit(config.variant);
    prep.registers.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        prep.registers.push_back(encode_secret_bit(
            initial_state(config.variant, prep.kinds[i]), secret[i],
            config.encoding, travel));
    }
    for (std::size_t j = 0; j < config.decoy_count; ++j) {
        const DecoyKind kind = states::decoy_from_bits(rng.bit(), rng.bit());
        prep.decoy_kinds.push_back(kind);
        prep.decoy_states.push_back(states::make_decoy(kind));
    }
    prep.decoy_positions =
        rng.sample_positions(config.decoy_count, n + config.decoy_count);
    return prep;
}

// Channel transit in wire order; the tap cannot tell decoys from carriers.
void transmit(Preparation& prep, int travel, const std::string& direction,
              ChannelTap* tap) {
    if (tap == nullptr) return;
    std::size_t decoy_idx = 0;
    std::size_t message_idx = 0;
    const std::size_t total = prep.registers.size() + prep.decoy_states.size();
    for (std::size_t pos = 0; pos < total; ++pos) {
        const bool is_decoy = decoy_idx < prep.decoy_positions.size() &&
                              prep.decoy_positions[decoy_idx] == pos;
        if (is_decoy) {
            prep.decoy_states[decoy_idx] =
                tap->intercept(prep.decoy_states[decoy_idx], 0, direction);
            ++decoy_idx;
        } else {
            prep.registers[message_idx] =
                tap->intercept(prep.registers[message_idx], travel, direction);
            ++message_idx;
        }
    }
}

// Decoy reveal payload: positions, then one basis bit per decoy.
Bits decoy_reveal_payload(const Preparation& prep, std::size_t domain) {
    Bits payload = crypto::encode_positions(prep.decoy_positions, domain);
    for (DecoyKind kind : prep.decoy_kinds) {
        payload.push_back(static_cast<std::uint8_t>(states::decoy_basis(kind)));
    }
    return payload;
}

// Receiver measures each decoy in its revealed preparation basis.
Bits measure_decoys(const Preparation& prep, Rng& rng) {
    Bits outcomes;
    outcomes.reserve(prep.decoy_states.size());
    for (std::size_t j = 0; j < prep.decoy_states.size(); ++j) {
        StateVector s = prep.decoy_states[j];
        if (states::decoy_basis(prep.decoy_kinds[j]) == 1) {
            s = qsim::apply_gate(s, Gate::hadamard(), 0);
        }
        const auto rec = qsim::measure_z(s, {0}, rng);
        outcomes.push_back(static_cast<std::uint8_t>(rec.outcomes[0]));
    }
    return outcomes;
}

DirectionCheck compare_decoys(const Preparation& prep, const Bits& outcomes,
                              double threshold) {
    DirectionCheck check;
    check.checked = prep.decoy_kinds.size();
    for (std::size_t j = 0; j < prep.decoy_kinds.size(); ++j) {
        if (outcomes[j] != states::decoy_value(prep.decoy_kinds[j])) ++check.errors;
    }
    check.error_rate =
        check.checked == 0 ? 0.0
                           : static_cast<double>(check.errors) /
                                 static_cast<double>(check.checked);
    check.failed = check.error_rate > threshold;
    return check;
}

Bits kinds_payload(const std::vector<InitialKind>& kinds) {
    Bits out;
    out.reserve(kinds.size());
    for (InitialKind k : kinds) {
        out.push_back(static_cast<std::uint8_t>(k == InitialKind::hadamard));
    }
    return out;
}

}  // namespace

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::AW: return "aw";
        case Variant::LWJ11: return "lwj11";
        case Variant::LWG12: return "lwg12";
    }
    return "?";
}

std::string encoding_name(Encoding e) {
    return e == Encoding::sigma_x ? "sigma_x" : "i_sigma_y";
}

std::string kind_label(Variant v, InitialKind k) {
    switch (v) {
        case Variant::AW: return k == InitialKind::plain ? "W1" : "W1'";
        case Variant::LWJ11: return k == InitialKind::plain ? "phi1" : "phi2";
        case Variant::LWG12: return "phi+";
    }
    return "?";
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::equal: return "equal";
        case Verdict::not_equal: return "not_equal";
        case Verdict::aborted_eavesdrop: return "aborted_eavesdrop";
    }
    return "?";
}

void ProtocolConfig::validate() const {
    if (bit_length < 1) throw ConfigError("bit length N must be >= 1");
    if (bit_length > 64) throw ConfigError("bit length N must be <= 64");
    if (mix_length < 1 && !allow_empty_mix) {
        throw ConfigError("mix length L must be >= 1");
    }
    if (mix_length > 0xffff) throw ConfigError("mix length L too large");
    if (decoy_count > 0xffff) throw ConfigError("decoy count too large");
    if (error_threshold < 0.0 || error_threshold >= 1.0) {
        throw ConfigError("error threshold must lie in [0, 1)");
    }
    if (forced_kinds_alice.has_value() && forced_kinds_alice->size() != bit_length) {
        throw ConfigError("forced kind list must have one entry per bit");
    }
    if (forced_kinds_bob.has_value() && forced_kinds_bob->size() != bit_length) {
        throw ConfigError("forced kind list must have one entry per bit");
    }
}

StateVector initial_state(Variant v, InitialKind kind) {
    switch (v) {
        case Variant::AW:
            return kind == InitialKind::plain ? states::make_w1()
                                              : states::make_w1_prime();
        case Variant::LWJ11:
            return states::make_symmetric_w(kind == InitialKind::plain
                                                ? states::SymmetricVariant::phi1
                                                : states::SymmetricVariant::phi2);
        case Variant::LWG12:
            return states::make_epr();
    }
    throw ConfigError("unknown variant");
}

int travel_qubit(Variant v) { return v == Variant::LWG12 ? 1 : 2; }

Gate encoding_gate(Encoding encoding) {
    return encoding == Encoding::sigma_x ? Gate::pauli_x() : Gate::i_pauli_y();
}

StateVector encode_secret_bit(const StateVector& state, int bit,
                              Encoding encoding, int travel) {
    if (bit == 0) return state;
    return qsim::apply_gate(state, encoding_gate(encoding), travel);
}

int pair_bit(int b0, int b1) {
    if (b0 == 1 && b1 == 1) {
        throw IntegrityError("pair outcome |11> is unreachable for these carriers");
    }
    return (b0 || b1) ? 1 : 0;
}

Bits merge_sequences(const Bits& base, const Bits& mix,
                     const std::vector<std::size_t>& positions) {
    if (positions.size() != mix.size()) {
        throw std::invalid_argument("one position per mix bit required");
    }
    const std::size_t total = base.size() + mix.size();
    Bits merged(total);
    std::size_t base_idx = 0;
    std::size_t mix_idx = 0;
    for (std::size_t pos = 0; pos < total; ++pos) {
        if (mix_idx < positions.size() && positions[mix_idx] == pos) {
            merged[pos] = mix[mix_idx++];
        } else {
            if (base_idx >= base.size()) {
                throw std::invalid_argument("positions do not fit merged length");
            }
            merged[pos] = base[base_idx++];
        }
    }
    if (mix_idx != mix.size()) {
        throw std::invalid_argument("positions do not fit merged length");
    }
    return merged;
}

Bits remove_positions(const Bits& merged, const std::vector<std::size_t>& positions) {
    Bits base;
    base.reserve(merged.size() - positions.size());
    std::size_t mix_idx = 0;
    for (std::size_t pos = 0; pos < merged.size(); ++pos) {
        if (mix_idx < positions.size() && positions[mix_idx] == pos) {
            ++mix_idx;
        } else {
            base.push_back(merged[pos]);
        }
    }
    if (mix_idx != positions.size()) {
        throw std::invalid_argument("position out of range");
    }
    return base;
}

Bits secret_to_bits(std::uint64_t value, std::size_t bit_length) {
    Bits out(bit_length);
    for (std::size_t i = 0; i < bit_length; ++i) {
        out[i] = static_cast<std::uint8_t>((value >> i) & 1u);
    }
    return out;
}

std::size_t key_budget_ab(const ProtocolConfig& config) {
    const std::size_t merged = config.bit_length + config.mix_length;
    const auto width = static_cast<std::size_t>(crypto::position_bit_width(merged));
    return 2 * config.mix_length + 16 + config.mix_length * width;
}

std::size_t key_budget_tp(const ProtocolConfig& config) {
    return config.bit_length + config.mix_length;
}

RunResult run_protocol(const ProtocolConfig& config, std::uint64_t x, std::uint64_t y,
                       ChannelTap* tap) {
    config.validate();
    if (config.bit_length < 64) {
        const std::uint64_t limit = std::uint64_t{1} << config.bit_length;
        if (x >= limit || y >= limit) {
            throw ConfigError("secret does not fit in N bits");
        }
    }

    const Rng root(config.seed);
    Rng rng_keys = root.derive(kTagKeys);
    Rng rng_alice = root.derive(kTagAlice);
    Rng rng_bob = root.derive(kTagBob);

    const std::size_t n = config.bit_length;
    const std::size_t l = config.mix_length;
    const std::size_t d = config.decoy_count;
    const bool plaintext_mix = config.variant != Variant::AW;

    RunResult result;
    Transcript& t = result.transcript;
    ComparisonReport& report = result.report;
    if (config.variant == Variant::LWJ11) {
        report.flags.push_back("lwj11-eavesdrop-check-replaced-by-decoy-photons");
    }
    if (config.encoding == Encoding::sigma_x) {
        report.flags.push_back("sigma-x-literal-encoding");
    }

    // Prerequisite: key establishment. The earlier designs provision no
    // Alice-Bob key, which is exactly why their mix exchange goes out in the
    // clear.
    std::optional<SharedKey> key_ab;
    if (config.variant == Variant::AW) {
        key_ab = crypto::qkd_establish("Alice", "Bob",
                                       std::max<std::size_t>(key_budget_ab(config), 1),
                                       rng_keys);
        t.add_event("qkd-establish",
                    "Alice-Bob:" + std::to_string(key_ab->bits.size()));
    }
    result.key_at =
        crypto::qkd_establish("Alice", "TP", key_budget_tp(config), rng_keys);
    t.add_event("qkd-establish", "Alice-TP:" + std::to_string(result.key_at.bits.size()));
    result.key_bt =
        crypto::qkd_establish("Bob", "TP", key_budget_tp(config), rng_keys);
    t.add_event("qkd-establish", "Bob-TP:" + std::to_string(result.key_bt.bits.size()));

    // Step 1: prepare carriers, encode secrets, lace in decoys, transmit.
    const Bits x_bits = secret_to_bits(x, n);
    const Bits y_bits = secret_to_bits(y, n);
    Preparation prep_a =
        prepare_party(config, x_bits, config.forced_kinds_alice, rng_alice);
    Preparation prep_b =
        prepare_party(config, y_bits, config.forced_kinds_bob, rng_bob);

    const int travel = travel_qubit(config.variant);
    t.add_quantum("Alice", "Bob", n + d);
    transmit(prep_a, travel, "A->B", tap);
    t.add_quantum("Bob", "Alice", n + d);
    transmit(prep_b, travel, "B->A", tap);

    // Step 2: decoy reveal and per-direction error check first (H alignment
    // cannot be targeted while decoys still hide among the carriers), then
    // initial-state announcements and alignment.
    t.add_classical({0, "Alice", "Bob", "decoy reveal", false,
                     decoy_reveal_payload(prep_a, n + d), std::nullopt});
    const Bits outcomes_a = measure_decoys(prep_a, rng_bob);
    t.add_classical({0, "Bob", "Alice", "decoy reveal", false, outcomes_a, std::nullopt});
    report.check_a_to_b = compare_decoys(prep_a, outcomes_a, config.error_threshold);

    t.add_classical({0, "Bob", "Alice", "decoy reveal", false,
                     decoy_reveal_payload(prep_b, n + d), std::nullopt});
    const Bits outcomes_b = measure_decoys(prep_b, rng_alice);
    t.add_classical({0, "Alice", "Bob", "decoy reveal", false, outcomes_b, std::nullopt});
    report.check_b_to_a = compare_decoys(prep_b, outcomes_b, config.error_threshold);

    {
        std::ostringstream os;
        os << "A->B errors=" << report.check_a_to_b.errors << "/"
           << report.check_a_to_b.checked << " rate=" << report.check_a_to_b.error_rate;
        t.add_event("eavesdrop-check", os.str());
        os.str("");
        os << "B->A errors=" << report.check_b_to_a.errors << "/"
           << report.check_b_to_a.checked << " rate=" << report.check_b_to_a.error_rate;
        t.add_event("eavesdrop-check", os.str());
    }
    if (report.check_a_to_b.failed || report.check_b_to_a.failed) {
        t.add_event("abort", "decoy error rate above threshold");
        report.verdict = Verdict::aborted_eavesdrop;
        return result;
    }

    t.add_classical({0, "Alice", "Bob", "initial-state announcement", false,
                     kinds_payload(prep_a.kinds), std::nullopt});
    t.add_classical({0, "Bob", "Alice", "initial-state announcement", false,
                     kinds_payload(prep_b.kinds), std::nullopt});
    for (std::size_t i = 0; i < n; ++i) {
        if (prep_a.kinds[i] == InitialKind::hadamard) {
            prep_a.registers[i] =
                qsim::apply_gate(prep_a.registers[i], Gate::hadamard(), travel);
        }
        if (prep_b.kinds[i] == InitialKind::hadamard) {
            prep_b.registers[i] =
                qsim::apply_gate(prep_b.registers[i], Gate::hadamard(), travel);
        }
    }

    // Step 3: Z measurements and the per-bit comparison bits.
    Bits c_a(n), c_b(n);
    report.per_bit.resize(n);
    const bool epr = config.variant == Variant::LWG12;
    const std::vector<int> own_qubits = epr ? std::vector<int>{0} : std::vector<int>{0, 1};
    for (std::size_t i = 0; i < n; ++i) {
        PerBitRow& row = report.per_bit[i];
        row.index = i;
        row.x = x_bits[i];
        row.y = y_bits[i];
        row.kind_a = prep_a.kinds[i];
        row.kind_b = prep_b.kinds[i];

        const auto rec_a1 = qsim::measure_z(prep_a.registers[i], own_qubits, rng_alice);
        const auto rec_a2 = qsim::measure_z(rec_a1.post_state, {travel}, rng_bob);
        row.m_a1 = pattern_string(rec_a1.outcomes);
        row.m_a2 = pattern_string(rec_a2.outcomes);
        row.c_a1 = epr ? rec_a1.outcomes[0]
                       : pair_bit(rec_a1.outcomes[0], rec_a1.outcomes[1]);
        row.c_a2 = rec_a2.outcomes[0];

        const auto rec_b1 = qsim::measure_z(prep_b.registers[i], own_qubits, rng_bob);
        const auto rec_b2 = qsim::measure_z(rec_b1.post_state, {travel}, rng_alice);
        row.m_b1 = pattern_string(rec_b1.outcomes);
        row.m_b2 = pattern_string(rec_b2.outcomes);
        row.c_b1 = epr ? rec_b1.outcomes[0]
                       : pair_bit(rec_b1.outcomes[0], rec_b1.outcomes[1]);
        row.c_b2 = rec_b2.outcomes[0];

        row.c_a = row.c_a1 ^ row.c_b2;
        row.c_b = row.c_b1 ^ row.c_a2;
        row.c = row.c_a ^ row.c_b;
        c_a[i] = static_cast<std::uint8_t>(row.c_a);
        c_b[i] = static_cast<std::uint8_t>(row.c_b);
    }

    // Step 4: mix-up exchange, merge, and delivery to TP.
    const Bits mix_a = rng_alice.bits(l);
    const Bits mix_b = rng_bob.bits(l);
    if (plaintext_mix) {
        t.add_classical({0, "Alice", "Bob", "C'_A", false, mix_a, std::nullopt});
        t.add_classical({0, "Bob", "Alice", "C'_B", false, mix_b, std::nullopt});
    } else {
        t.add_classical(crypto::otp_encrypt(*key_ab, mix_a, "Alice", "Bob", "C'_A"));
        t.add_classical(crypto::otp_encrypt(*key_ab, mix_b, "Bob", "Alice", "C'_B"));
    }

    const std::vector<std::size_t> s_q = rng_alice.sample_positions(l, n + l);
    const Bits s_q_payload = crypto::encode_positions(s_q, n + l);
    if (plaintext_mix) {
        t.add_classical({0, "Alice", "Bob", "S_q", false, s_q_payload, std::nullopt});
    } else {
        t.add_classical(crypto::otp_encrypt(*key_ab, s_q_payload, "Alice", "Bob", "S_q"));
    }

    const Bits merged_a = merge_sequences(c_a, mix_a, s_q);
    const Bits merged_b = merge_sequences(c_b, mix_b, s_q);
    t.add_classical(crypto::otp_encrypt(result.key_at, merged_a, "Alice", "TP", "C''_A"));
    t.add_classical(crypto::otp_encrypt(result.key_bt, merged_b, "Bob", "TP", "C''_B"));

    // Step 5: TP decrypts and publishes the masked distance.
    const Bits tp_a = crypto::otp_decrypt(result.key_at, *t.find("C''_A"));
    const Bits tp_b = crypto::otp_decrypt(result.key_bt, *t.find("C''_B"));
    report.r_prime = crypto::hamming_distance(tp_a, tp_b);
    t.add_classical({0, "TP", "Alice", "R'", false, u16_bits(report.r_prime), std::nullopt});
    t.add_classical({0, "TP", "Bob", "R'", false, u16_bits(report.r_prime), std::nullopt});

    // Step 6: both participants strip the mix contribution.
    const std::size_t mix_distance = crypto::hamming_distance(mix_a, mix_b);
    if (report.r_prime < mix_distance) {
        throw IntegrityError("masked distance smaller than mix distance");
    }
    report.r = report.r_prime - mix_distance;
    report.verdict = report.r == 0 ? Verdict::equal : Verdict::not_equal;
    t.add_event("verdict", verdict_name(report.verdict) + (", R=" + std::to_string(report.r)));
    return result;
}

nlohmann::json report_to_json(const ComparisonReport& report,
                              const ProtocolConfig& config,
                              std::uint64_t x, std::uint64_t y) {
    nlohmann::json j;
    j["schema"] = 1;
    j["variant"] = variant_name(config.variant);
    j["encoding"] = encoding_name(config.encoding);
    j["bits"] = config.bit_length;
    j["mix"] = config.mix_length;
    j["decoys"] = config.decoy_count;
    j["threshold"] = config.error_threshold;
    j["seed"] = config.seed;
    {
        std::ostringstream os;
        os << std::hex << x;
        j["x_hex"] = os.str();
        os.str("");
        os << std::hex << y;
        j["y_hex"] = os.str();
    }
    j["verdict"] = verdict_name(report.verdict);
    if (report.verdict == Verdict::aborted_eavesdrop) {
        j["R"] = nullptr;
        j["R_prime"] = nullptr;
    } else {
        j["R"] = report.r;
        j["R_prime"] = report.r_prime;
    }
    j["error_rates"] = {
        {"a_to_b",
         {{"checked", report.check_a_to_b.checked},
          {"errors", report.check_a_to_b.errors},
          {"rate", report.check_a_to_b.error_rate}}},
        {"b_to_a",
         {{"checked", report.check_b_to_a.checked},
          {"errors", report.check_b_to_a.errors},
          {"rate", report.check_b_to_a.error_rate}}}};
    j["flags"] = report.flags;
    j["per_bit"] = nlohmann::json::array();
    for (const auto& row : report.per_bit) {
        j["per_bit"].push_back({{"i", row.index},
                                {"x", row.x},
                                {"y", row.y},
                                {"kind_a", kind_label(config.variant, row.kind_a)},
                                {"kind_b", kind_label(config.variant, row.kind_b)},
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
                                {"c", row.c}});
    }
    return j;
}

}  // namespace qpce::protocol
