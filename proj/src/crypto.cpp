#include "qpce/crypto.hpp"

#include <bit>
#include <stdexcept>

namespace qpce::crypto {

SharedKey qkd_establish(const std::string& a, const std::string& b,
                        std::size_t length, Rng& rng) {
    if (length == 0) throw std::invalid_argument("key length must be positive");
    return SharedKey{a, b, rng.bits(length), 0};
}

ClassicalMessage otp_encrypt(SharedKey& key, const Bits& payload,
                             const std::string& sender, const std::string& receiver,
                             const std::string& label) {
    if (key.remaining() < payload.size()) {
        throw KeyExhausted("key " + key.party_a + "-" + key.party_b +
                           " exhausted: need " + std::to_string(payload.size()) +
                           " bits, have " + std::to_string(key.remaining()));
    }
    ClassicalMessage msg;
    msg.sender = sender;
    msg.receiver = receiver;
    msg.label = label;
    msg.encrypted = true;
    msg.key_offset = key.cursor;
    msg.payload.resize(payload.size());
    for (std::size_t i = 0; i < payload.size(); ++i) {
        msg.payload[i] = payload[i] ^ key.bits[key.cursor + i];
    }
    key.cursor += payload.size();
    return msg;
}

Bits otp_decrypt(const SharedKey& key, const ClassicalMessage& message) {
    if (!message.encrypted || !message.key_offset.has_value()) {
        throw std::invalid_argument("message is not encrypted");
    }
    const std::size_t offset = *message.key_offset;
    if (offset + message.payload.size() > key.bits.size()) {
        throw KeyExhausted("key region out of range for decrypt");
    }
    Bits out(message.payload.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = message.payload[i] ^ key.bits[offset + i];
    }
    return out;
}

int position_bit_width(std::size_t domain_size) {
    if (domain_size <= 1) return 0;
    return static_cast<int>(std::bit_width(domain_size - 1));
}

Bits encode_positions(const std::vector<std::size_t>& positions,
                      std::size_t domain_size) {
    if (positions.size() > 0xffff) {
        throw std::invalid_argument("too many positions for a 16-bit count");
    }
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] >= domain_size) {
            throw std::out_of_range("position out of domain");
        }
        if (i > 0 && positions[i] <= positions[i - 1]) {
            throw std::invalid_argument("positions must be strictly increasing");
        }
    }
    const int width = position_bit_width(domain_size);
    Bits out;
    out.reserve(16 + positions.size() * static_cast<std::size_t>(width));
    for (int b = 15; b >= 0; --b) {
        out.push_back(static_cast<std::uint8_t>((positions.size() >> b) & 1u));
    }
    for (std::size_t p : positions) {
        for (int b = width - 1; b >= 0; --b) {
            out.push_back(static_cast<std::uint8_t>((p >> b) & 1u));
        }
    }
    return out;
}

std::vector<std::size_t> decode_positions(const Bits& bits, std::size_t domain_size) {
    if (bits.size() < 16) throw std::invalid_argument("truncated position header");
    std::size_t count = 0;
    for (int b = 0; b < 16; ++b) count = (count << 1) | bits[static_cast<std::size_t>(b)];
    const int width = position_bit_width(domain_size);
    if (bits.size() != 16 + count * static_cast<std::size_t>(width)) {
        throw std::invalid_argument("position payload length mismatch");
    }
    std::vector<std::size_t> out(count);
    std::size_t at = 16;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t p = 0;
        for (int b = 0; b < width; ++b) p = (p << 1) | bits[at++];
        if (p >= domain_size) throw std::out_of_range("decoded position out of domain");
        if (i > 0 && p <= out[i - 1]) {
            throw std::invalid_argument("decoded positions not increasing");
        }
        out[i] = p;
    }
    return out;
}

std::string bits_to_hex(const Bits& bits) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        unsigned nibble = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            nibble <<= 1;
            if (i + j < bits.size()) nibble |= bits[i + j];
        }
        out.push_back(digits[nibble]);
    }
    return out;
}

Bits xor_bits(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
    Bits out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

std::size_t hamming_distance(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

}  // namespace qpce::crypto
