#include "qpce/transcript.hpp"

namespace qpce::protocol {

const crypto::ClassicalMessage* Transcript::find(const std::string& label) const {
    for (const auto& msg : classical_) {
        if (msg.label == label) return &msg;
    }
    return nullptr;
}

nlohmann::json Transcript::to_json() const {
    nlohmann::json j;
    j["classical"] = nlohmann::json::array();
    for (const auto& m : classical_) {
        nlohmann::json e;
        e["seq"] = m.seq;
        e["sender"] = m.sender;
        e["receiver"] = m.receiver;
        e["label"] = m.label;
        e["encrypted"] = m.encrypted;
        e["payload_hex"] = crypto::bits_to_hex(m.payload);
        e["bits"] = m.payload.size();
        if (m.key_offset.has_value()) {
            e["key_offset"] = *m.key_offset;
        } else {
            e["key_offset"] = nullptr;
        }
        j["classical"].push_back(std::move(e));
    }
    j["quantum"] = nlohmann::json::array();
    for (const auto& q : quantum_) {
        j["quantum"].push_back({{"seq", q.seq},
                                {"sender", q.sender},
                                {"receiver", q.receiver},
                                {"qubits", q.qubit_count}});
    }
    j["events"] = nlohmann::json::array();
    for (const auto& ev : events_) {
        j["events"].push_back({{"seq", ev.seq}, {"type", ev.type}, {"detail", ev.detail}});
    }
    return j;
}

}  // namespace qpce::protocol
