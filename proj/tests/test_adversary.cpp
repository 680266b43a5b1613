#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qpce/adversary.hpp"
#include "test_util.hpp"

using namespace qpce;
using namespace test_util;
using adversary::ChannelDirection;
using adversary::Resource;
using protocol::Encoding;
using protocol::ProtocolConfig;
using protocol::Variant;

TEST_CASE("intercept-resend induces exactly 1/4 error per decoy") {
    CHECK(adversary::intercept_resend_error_rate() ==
          doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("matching-basis interception is invisible") {
    // Find a seed whose first draw picks the Z basis, then intercept |0>.
    std::uint64_t z_seed = 0;
    while (Rng(z_seed).bit() != 0) ++z_seed;
    adversary::EveInterceptResend eve(Rng(z_seed), ChannelDirection::both);
    const auto out = eve.intercept(qsim::StateVector::basis(1, 0), 0, "A->B");
    check_state(out, qsim::StateVector::basis(1, 0).amplitudes(), 1e-12);
    CHECK(eve.intercepted() == 1);
}

TEST_CASE("wrong-basis interception collapses the decoy") {
    // Z-basis Eve turns |+> into |0> or |1>.
    std::uint64_t z_seed = 0;
    while (Rng(z_seed).bit() != 0) ++z_seed;
    adversary::EveInterceptResend eve(Rng(z_seed), ChannelDirection::both);
    const auto out =
        eve.intercept(states::make_decoy(states::DecoyKind::plus), 0, "A->B");
    const bool is_zero = std::abs(out.amp(0)) > 1.0 - 1e-9;
    const bool is_one = std::abs(out.amp(1)) > 1.0 - 1e-9;
    CHECK((is_zero || is_one));
}

TEST_CASE("direction-limited Eve ignores the other channel") {
    adversary::EveInterceptResend eve(Rng(3), ChannelDirection::a_to_b);
    const auto w1 = states::make_w1();
    const auto untouched = eve.intercept(w1, 2, "B->A");
    check_state(untouched, w1.amplitudes(), 0.0);
    CHECK(eve.intercepted() == 0);
}

TEST_CASE("closed-form detection probability") {
    CHECK(adversary::detection_probability(0) == 0.0);
    double expect = 1.0;
    for (int i = 0; i < 16; ++i) expect *= 0.75;
    expect = 1.0 - expect;
    CHECK(adversary::detection_probability(16) ==
          doctest::Approx(expect).epsilon(1e-15));
    CHECK(expect == doctest::Approx(0.98997).epsilon(1e-4));
}

TEST_CASE("Monte Carlo detection tracks the closed form") {
    ProtocolConfig config;
    config.bit_length = 4;
    config.mix_length = 4;
    config.decoy_count = 16;
    const std::size_t runs = 2000;
    const auto stats = adversary::run_intercept_resend_batch(
        config, ChannelDirection::both, runs, 77);
    const double p = stats.closed_form_detection;
    CHECK(std::abs(static_cast<double>(stats.detected_a_to_b) / runs - p) <=
          three_sigma(p, runs));
    CHECK(std::abs(static_cast<double>(stats.detected_b_to_a) / runs - p) <=
          three_sigma(p, runs));
    const double err = static_cast<double>(stats.decoy_errors) /
                       static_cast<double>(stats.decoys_checked);
    CHECK(std::abs(err - 0.25) <= three_sigma(0.25, stats.decoys_checked));
    CHECK(stats.aborted_runs >= stats.detected_a_to_b);
}

TEST_CASE("at 32 decoys per direction, aborts are near-certain") {
    ProtocolConfig config;
    config.bit_length = 2;
    config.mix_length = 2;
    config.decoy_count = 32;
    const std::size_t runs = 1000;
    const auto stats = adversary::run_intercept_resend_batch(
        config, ChannelDirection::both, runs, 11);
    const double p = adversary::detection_probability(32);
    CHECK(std::abs(static_cast<double>(stats.detected_a_to_b) / runs - p) <=
          three_sigma(p, runs));
    CHECK(std::abs(static_cast<double>(stats.detected_b_to_a) / runs - p) <=
          three_sigma(p, runs));
}

TEST_CASE("attack batches replay deterministically") {
    ProtocolConfig config;
    config.bit_length = 4;
    config.decoy_count = 8;
    const auto a = adversary::run_intercept_resend_batch(
        config, ChannelDirection::both, 200, 5);
    const auto b = adversary::run_intercept_resend_batch(
        config, ChannelDirection::both, 200, 5);
    CHECK(a.detected_a_to_b == b.detected_a_to_b);
    CHECK(a.decoy_errors == b.decoy_errors);
}

TEST_CASE("TP recovers R from a plaintext-mix transcript, both methods agreeing") {
    for (Variant variant : {Variant::LWJ11, Variant::LWG12}) {
        ProtocolConfig config;
        config.variant = variant;
        config.bit_length = 8;
        config.mix_length = 6;
        config.seed = 13;
        const auto result = protocol::run_protocol(config, 0xA7, 0x15);
        Rng rng(0);
        const auto outcome = adversary::tp_classical_attack(
            result.transcript, result.key_at, result.key_bt, config, rng);
        REQUIRE(outcome.recovered_r.has_value());
        CHECK(*outcome.recovered_r == result.report.r);
        CHECK(*outcome.recovered_r_via_mix == *outcome.recovered_r_via_unmerge);
        CHECK(outcome.methods_agree);
        CHECK(result.report.r == 4);  // Hamming(0xA7, 0x15)
    }
}

TEST_CASE("TP recovery works across a batch of runs") {
    for (Variant variant : {Variant::LWJ11, Variant::LWG12}) {
        ProtocolConfig config;
        config.variant = variant;
        config.bit_length = 10;
        config.mix_length = 5;
        const auto stats = adversary::run_tp_attack_batch(config, 50, 21);
        CHECK(stats.recovered == 50);
        CHECK(stats.methods_agreed == 50);
    }
}

TEST_CASE("encrypted transcripts leave TP at chance level") {
    ProtocolConfig config;
    config.bit_length = 8;
    config.mix_length = 8;
    const std::size_t runs = 600;
    const auto stats = adversary::run_tp_attack_batch(config, runs, 99);
    CHECK(stats.recovered == 0);
    CHECK(stats.methods_agreed == 0);
    CHECK(stats.guess_trials + stats.r_prime_zero_runs == runs);
    const double rate = static_cast<double>(stats.guess_correct) /
                        static_cast<double>(stats.guess_trials);
    CHECK(std::abs(rate - 0.5) <= three_sigma(0.5, stats.guess_trials));
}

TEST_CASE("the R'=0 side channel is certain but reported separately") {
    ProtocolConfig config;
    config.bit_length = 2;
    config.mix_length = 2;  // short mix makes R' = 0 common
    const auto stats = adversary::run_tp_attack_batch(config, 400, 7);
    CHECK(stats.r_prime_zero_runs > 0);
    CHECK(stats.r_prime_zero_equal == stats.r_prime_zero_runs);
}

TEST_CASE("random un-merge attempts do no better than an independent baseline") {
    ProtocolConfig config;
    config.bit_length = 8;
    config.mix_length = 8;
    const std::size_t runs = 600;
    const auto stats = adversary::run_tp_attack_batch(config, runs, 3);
    const double attack = static_cast<double>(stats.unmerge_guess_matches) /
                          static_cast<double>(runs);
    const double baseline = static_cast<double>(stats.baseline_matches) /
                            static_cast<double>(runs);
    // Difference of two ~Bernoulli(p) rates; allow 3 combined sigmas.
    const double p = std::max({attack, baseline, 0.05});
    const double tol = 3.0 * std::sqrt(2.0 * p * (1.0 - p) / runs);
    CHECK(std::abs(attack - baseline) <= tol);
}

TEST_CASE("dishonest receiver hits the discrimination bound per carrier") {
    const std::size_t trials = 20000;
    const auto symw = adversary::dishonest_participant_attack(
        Resource::symmetric_w, Encoding::i_sigma_y, trials, 4);
    CHECK(symw.helstrom_bound == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(std::abs(symw.success_rate - 2.0 / 3.0) <=
          three_sigma(2.0 / 3.0, trials));

    const auto w1 = adversary::dishonest_participant_attack(
        Resource::w1, Encoding::i_sigma_y, trials, 5);
    CHECK(w1.helstrom_bound == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(w1.success_rate - 0.5) <= three_sigma(0.5, trials));

    const auto epr = adversary::dishonest_participant_attack(
        Resource::epr, Encoding::i_sigma_y, trials, 6);
    CHECK(std::abs(epr.success_rate - 0.5) <= three_sigma(0.5, trials));
}

TEST_CASE("no dishonest strategy beats its bound beyond sampling noise") {
    const std::size_t trials = 20000;
    std::uint64_t seed = 50;
    for (Resource resource : {Resource::w1, Resource::w1_prime,
                              Resource::symmetric_w, Resource::epr}) {
        for (Encoding encoding : {Encoding::sigma_x, Encoding::i_sigma_y}) {
            const auto out = adversary::dishonest_participant_attack(
                resource, encoding, trials, seed++);
            CHECK(out.success_rate <=
                  out.helstrom_bound + three_sigma(out.helstrom_bound, trials));
        }
    }
}

TEST_CASE("attack outcomes serialise") {
    ProtocolConfig config;
    config.variant = Variant::LWJ11;
    config.bit_length = 4;
    const auto stats = adversary::run_tp_attack_batch(config, 10, 1);
    const auto j = adversary::tp_stats_to_json(stats);
    CHECK(j["runs"] == 10);
    CHECK(j["recovered_runs"] == 10);

    const auto out = adversary::dishonest_participant_attack(
        Resource::w1, Encoding::i_sigma_y, 10, 1);
    const auto jd = adversary::dishonest_to_json(out, Resource::w1,
                                                 Encoding::i_sigma_y);
    CHECK(jd["resource"] == "w1");
    CHECK(jd["trials"] == 10);
}
