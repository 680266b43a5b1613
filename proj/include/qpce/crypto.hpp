// Simulated key establishment and one-time-pad framing for the classical
// channels. Key establishment is a trusted oracle handing both endpoints the
// same uniform bits; nothing about its internals is modelled.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpce/rng.hpp"

namespace qpce::crypto {

using Bits = std::vector<std::uint8_t>;  // one 0/1 value per element

class KeyExhausted : public std::runtime_error {
public:
    explicit KeyExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct SharedKey {
    std::string party_a;
    std::string party_b;
    Bits bits;
    std::size_t cursor = 0;  // next unused bit; only ever advances

    std::size_t remaining() const { return bits.size() - cursor; }
};

struct ClassicalMessage {
    int seq = 0;
    std::string sender;
    std::string receiver;
    std::string label;
    bool encrypted = false;
    Bits payload;                          // ciphertext when encrypted
    std::optional<std::size_t> key_offset; // key region start, encrypted only
};

// Both endpoints end up holding the same `length` uniform bits; no other
// party sees them.
SharedKey qkd_establish(const std::string& a, const std::string& b,
                        std::size_t length, Rng& rng);

// XOR with the next `payload.size()` unused key bits; advances the cursor.
// Throws KeyExhausted when the key cannot cover the payload.
ClassicalMessage otp_encrypt(SharedKey& key, const Bits& payload,
                             const std::string& sender, const std::string& receiver,
                             const std::string& label);

// Reads the key region recorded in the message; does not advance the cursor
// (both sides consume the region the encryptor reserved).
Bits otp_decrypt(const SharedKey& key, const ClassicalMessage& message);

// Fixed-width wire format for a strictly increasing position sequence:
// 16-bit big-endian count, then each position as ceil(log2(domain_size))
// big-endian bits.
Bits encode_positions(const std::vector<std::size_t>& positions,
                      std::size_t domain_size);
std::vector<std::size_t> decode_positions(const Bits& bits, std::size_t domain_size);

int position_bit_width(std::size_t domain_size);

std::string bits_to_hex(const Bits& bits);

Bits xor_bits(const Bits& a, const Bits& b);

std::size_t hamming_distance(const Bits& a, const Bits& b);

}  // namespace qpce::crypto
