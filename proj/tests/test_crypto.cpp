#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qpce/crypto.hpp"
#include "test_util.hpp"

using namespace qpce;
using crypto::Bits;

TEST_CASE("key establishment hands both ends the same bits") {
    Rng rng(11);
    const auto key = crypto::qkd_establish("Alice", "Bob", 8, rng);
    CHECK(key.bits.size() == 8);
    CHECK(key.cursor == 0);
    CHECK_THROWS(crypto::qkd_establish("Alice", "Bob", 0, rng));
}

TEST_CASE("independent establishments give independent keys") {
    Rng rng_a(1), rng_b(2);
    const auto key_a = crypto::qkd_establish("Alice", "Bob", 128, rng_a);
    const auto key_b = crypto::qkd_establish("Alice", "Bob", 128, rng_b);
    CHECK(key_a.bits != key_b.bits);
}

TEST_CASE("zero key leaves the payload visible; matching key cancels it") {
    crypto::SharedKey zero_key{"Alice", "Bob", Bits(4, 0), 0};
    const Bits payload{1, 0, 1, 1};
    const auto msg = crypto::otp_encrypt(zero_key, payload, "Alice", "Bob", "t");
    CHECK(msg.payload == payload);

    crypto::SharedKey self_key{"Alice", "Bob", payload, 0};
    const auto msg2 = crypto::otp_encrypt(self_key, payload, "Alice", "Bob", "t");
    CHECK(msg2.payload == Bits(4, 0));
}

TEST_CASE("round trip restores random payloads and advances the cursor") {
    Rng rng(21);
    crypto::SharedKey key = crypto::qkd_establish("Alice", "Bob", 1024, rng);
    std::size_t used = 0;
    for (int rep = 0; rep < 6; ++rep) {
        const Bits payload = rng.bits(128);
        const auto msg = crypto::otp_encrypt(key, payload, "Alice", "Bob", "m");
        CHECK(*msg.key_offset == used);
        used += payload.size();
        CHECK(key.cursor == used);
        CHECK(crypto::otp_decrypt(key, msg) == payload);
    }
}

TEST_CASE("key exhaustion is an explicit error, never a wrap") {
    Rng rng(3);
    crypto::SharedKey key = crypto::qkd_establish("Alice", "Bob", 16, rng);
    const Bits payload = rng.bits(12);
    CHECK_NOTHROW(crypto::otp_encrypt(key, payload, "Alice", "Bob", "m"));
    CHECK_THROWS_AS(crypto::otp_encrypt(key, payload, "Alice", "Bob", "m"),
                    crypto::KeyExhausted);
    CHECK(key.cursor == 12);  // failed call consumed nothing
}

TEST_CASE("ciphertext bits of a fixed payload look uniform over fresh keys") {
    const Bits payload(32, 1);
    const std::size_t trials = 2000;
    std::vector<std::size_t> ones(payload.size(), 0);
    Rng rng(77);
    for (std::size_t k = 0; k < trials; ++k) {
        crypto::SharedKey key = crypto::qkd_establish("A", "B", payload.size(), rng);
        const auto msg = crypto::otp_encrypt(key, payload, "A", "B", "m");
        for (std::size_t i = 0; i < payload.size(); ++i) ones[i] += msg.payload[i];
    }
    const double tol = test_util::three_sigma(0.5, trials);
    for (std::size_t i = 0; i < payload.size(); ++i) {
        const double rate = static_cast<double>(ones[i]) / static_cast<double>(trials);
        CHECK(std::abs(rate - 0.5) <= tol);
    }
}

TEST_CASE("ciphertexts of two distinct payloads are indistinguishable") {
    // Bit-level chi-square: for each position, compare one-counts across the
    // two payloads' ciphertext ensembles. 1 dof per cell; sum compared
    // against a generous chi-square quantile.
    const Bits payload_a(16, 0);
    Bits payload_b(16, 0);
    for (std::size_t i = 0; i < payload_b.size(); i += 2) payload_b[i] = 1;
    const std::size_t trials = 4000;
    std::vector<std::size_t> ones_a(16, 0), ones_b(16, 0);
    Rng rng(123);
    for (std::size_t k = 0; k < trials; ++k) {
        crypto::SharedKey key_a = crypto::qkd_establish("A", "B", 16, rng);
        crypto::SharedKey key_b = crypto::qkd_establish("A", "B", 16, rng);
        const auto msg_a = crypto::otp_encrypt(key_a, payload_a, "A", "B", "m");
        const auto msg_b = crypto::otp_encrypt(key_b, payload_b, "A", "B", "m");
        for (std::size_t i = 0; i < 16; ++i) {
            ones_a[i] += msg_a.payload[i];
            ones_b[i] += msg_b.payload[i];
        }
    }
    double chi2 = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        const double pa = static_cast<double>(ones_a[i]);
        const double pb = static_cast<double>(ones_b[i]);
        const double expect = (pa + pb) / 2.0;
        chi2 += (pa - expect) * (pa - expect) / expect +
                (pb - expect) * (pb - expect) / expect;
    }
    // 16 dof; P(chi2 > 39.3) ~ 0.001.
    CHECK(chi2 < 39.3);
}

TEST_CASE("positions wire format: fixed examples") {
    CHECK(crypto::encode_positions({}, 10) == Bits(16, 0));
    // count 2 as 16-bit big-endian, then 2-bit positions 00 and 10.
    const Bits expect{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, /**/ 0, 0, 1, 0};
    CHECK(crypto::encode_positions({0, 2}, 4) == expect);
}

TEST_CASE("positions codec is a bijection on valid inputs") {
    Rng rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t domain = 1 + rng.below(40);
        const std::size_t count = rng.below(domain + 1);
        const auto positions = rng.sample_positions(count, domain);
        const auto bits = crypto::encode_positions(positions, domain);
        CHECK(crypto::decode_positions(bits, domain) == positions);
    }
}

TEST_CASE("positions codec rejects invalid input") {
    CHECK_THROWS(crypto::encode_positions({4}, 4));
    CHECK_THROWS(crypto::encode_positions({2, 1}, 4));
    CHECK_THROWS(crypto::encode_positions({1, 1}, 4));
    CHECK_THROWS(crypto::decode_positions(Bits(8, 0), 4));   // truncated header
    CHECK_THROWS(crypto::decode_positions(Bits(17, 0), 4));  // length mismatch
}

TEST_CASE("hex rendering pads trailing bits with zeros") {
    CHECK(crypto::bits_to_hex({}) == "");
    CHECK(crypto::bits_to_hex({1, 0, 1, 1}) == "b");
    CHECK(crypto::bits_to_hex({1, 1, 1, 1, 1}) == "f8");
}

TEST_CASE("hamming distance and xor helpers") {
    CHECK(crypto::hamming_distance({1, 0, 1, 0}, {1, 0, 0, 1}) == 2);
    CHECK(crypto::hamming_distance({}, {}) == 0);
    CHECK(crypto::xor_bits({1, 1, 0}, {1, 0, 0}) == Bits{0, 1, 0});
    CHECK_THROWS(crypto::hamming_distance({1}, {1, 0}));
}
