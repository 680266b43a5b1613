// Append-only log of everything an outside observer could see during a
// protocol run: classical messages (ciphertext when encrypted), quantum
// transmission records, and check/abort events.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qpce/crypto.hpp"

namespace qpce::protocol {

struct QuantumRecord {
    int seq = 0;
    std::string sender;
    std::string receiver;
    std::size_t qubit_count = 0;  // message particles + decoys; split not visible
};

struct Event {
    int seq = 0;
    std::string type;
    std::string detail;
};

class Transcript {
public:
    void add_classical(crypto::ClassicalMessage msg) {
        msg.seq = next_seq_++;
        classical_.push_back(std::move(msg));
    }

    void add_quantum(const std::string& sender, const std::string& receiver,
                     std::size_t qubit_count) {
        quantum_.push_back({next_seq_++, sender, receiver, qubit_count});
    }

    void add_event(const std::string& type, const std::string& detail) {
        events_.push_back({next_seq_++, type, detail});
    }

    const std::vector<crypto::ClassicalMessage>& classical() const { return classical_; }
    const std::vector<QuantumRecord>& quantum() const { return quantum_; }
    const std::vector<Event>& events() const { return events_; }

    // First classical message with the given label, or nullptr.
    const crypto::ClassicalMessage* find(const std::string& label) const;

    nlohmann::json to_json() const;

private:
    int next_seq_ = 0;
    std::vector<crypto::ClassicalMessage> classical_;
    std::vector<QuantumRecord> quantum_;
    std::vector<Event> events_;
};

}  // namespace qpce::protocol
