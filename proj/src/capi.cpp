#include "qpce/qpce.h"

#include <cstdint>
#include <exception>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qpce/adversary.hpp"
#include "qpce/analysis.hpp"
#include "qpce/protocol.hpp"
#include "qpce/states.hpp"

using nlohmann::json;
using namespace qpce;

struct qpce_result {
    std::string json_text;
    std::string text;
};

namespace {

thread_local std::string g_last_error;

protocol::Variant parse_variant(const std::string& name) {
    if (name == "aw") return protocol::Variant::AW;
    if (name == "lwj11") return protocol::Variant::LWJ11;
    if (name == "lwg12") return protocol::Variant::LWG12;
    throw protocol::ConfigError("unknown variant: " + name);
}

protocol::Encoding parse_encoding(const std::string& name) {
    if (name == "isy") return protocol::Encoding::i_sigma_y;
    if (name == "sx") return protocol::Encoding::sigma_x;
    throw protocol::ConfigError("unknown encoding: " + name + " (expect isy or sx)");
}

analysis::Resource parse_resource(const std::string& name) {
    if (name == "w1") return analysis::Resource::w1;
    if (name == "w1p") return analysis::Resource::w1_prime;
    if (name == "symw") return analysis::Resource::symmetric_w;
    if (name == "epr") return analysis::Resource::epr;
    throw protocol::ConfigError("unknown resource: " + name);
}

std::uint64_t parse_hex(const std::string& hex, std::size_t bits) {
    if (hex.empty() || hex.size() > 16) {
        throw protocol::ConfigError("secret must be 1..16 hex digits");
    }
    std::uint64_t value = 0;
    for (char ch : hex) {
        int digit;
        if (ch >= '0' && ch <= '9') {
            digit = ch - '0';
        } else if (ch >= 'a' && ch <= 'f') {
            digit = ch - 'a' + 10;
        } else if (ch >= 'A' && ch <= 'F') {
            digit = ch - 'A' + 10;
        } else {
            throw protocol::ConfigError(std::string("malformed hex digit: ") + ch);
        }
        value = (value << 4) | static_cast<std::uint64_t>(digit);
    }
    if (bits < 64 && value >= (std::uint64_t{1} << bits)) {
        throw protocol::ConfigError("secret does not fit in N bits");
    }
    return value;
}

json parse_request(const char* request_json) {
    if (request_json == nullptr) throw protocol::ConfigError("null request");
    json req = json::parse(request_json, nullptr, false);
    if (req.is_discarded() || !req.is_object()) {
        throw protocol::ConfigError("request is not a JSON object");
    }
    return req;
}

// Unsigned fields must not arrive negative and silently wrap.
std::uint64_t req_uint(const json& req, const char* key, std::uint64_t fallback) {
    if (!req.contains(key)) return fallback;
    const auto& v = req.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw protocol::ConfigError(std::string(key) + " must be a non-negative integer");
}

protocol::ProtocolConfig config_from_request(const json& req) {
    protocol::ProtocolConfig config;
    config.variant = parse_variant(req.value("variant", "aw"));
    config.bit_length = req_uint(req, "bits", 8);
    config.mix_length = req_uint(req, "mix", 8);
    config.decoy_count = req_uint(req, "decoys", 16);
    config.encoding = parse_encoding(req.value("encoding", "isy"));
    config.error_threshold = req.value("threshold", 0.0);
    config.seed = req_uint(req, "seed", 0);
    return config;
}

int finish(qpce_result** out, std::string json_text, std::string text, int status) {
    auto* result = new qpce_result{std::move(json_text), std::move(text)};
    *out = result;
    return status;
}

template <typename Fn>
int guarded(qpce_result** out, Fn&& fn) {
    if (out == nullptr) {
        g_last_error = "null output pointer";
        return QPCE_ERR_CONFIG;
    }
    *out = nullptr;
    try {
        return fn();
    } catch (const protocol::ConfigError& err) {
        g_last_error = err.what();
        return QPCE_ERR_CONFIG;
    } catch (const json::exception& err) {
        g_last_error = err.what();
        return QPCE_ERR_CONFIG;
    } catch (const std::invalid_argument& err) {
        g_last_error = err.what();
        return QPCE_ERR_CONFIG;
    } catch (const std::exception& err) {
        g_last_error = err.what();
        return QPCE_ERR_INTERNAL;
    }
}

std::string run_text(const protocol::ComparisonReport& report,
                     const protocol::ProtocolConfig& config) {
    std::ostringstream os;
    os << "variant=" << protocol::variant_name(config.variant)
       << " encoding=" << protocol::encoding_name(config.encoding)
       << " N=" << config.bit_length << " L=" << config.mix_length
       << " decoys=" << config.decoy_count << " seed=" << config.seed << "\n";
    os << "verdict: " << protocol::verdict_name(report.verdict) << "\n";
    if (report.verdict != protocol::Verdict::aborted_eavesdrop) {
        os << "R=" << report.r << " R'=" << report.r_prime << "\n";
    }
    os << "decoy errors: A->B " << report.check_a_to_b.errors << "/"
       << report.check_a_to_b.checked << ", B->A " << report.check_b_to_a.errors
       << "/" << report.check_b_to_a.checked << "\n";
    for (const auto& flag : report.flags) os << "note: " << flag << "\n";
    return os.str();
}

std::string transcript_text(const protocol::Transcript& transcript) {
    // Interleave classical, quantum and event entries back into wire order.
    std::ostringstream os;
    os << "transcript:\n";
    auto cl = transcript.classical().begin();
    auto qu = transcript.quantum().begin();
    auto ev = transcript.events().begin();
    const int total = static_cast<int>(transcript.classical().size() +
                                       transcript.quantum().size() +
                                       transcript.events().size());
    for (int seq = 0; seq < total; ++seq) {
        if (cl != transcript.classical().end() && cl->seq == seq) {
            os << "  [c] " << cl->sender << "->" << cl->receiver << " "
               << cl->label << ": " << cl->payload.size() << " bits, "
               << (cl->encrypted ? "encrypted" : "plaintext");
            if (!cl->payload.empty()) {
                os << ", 0x" << crypto::bits_to_hex(cl->payload);
            }
            os << "\n";
            ++cl;
        } else if (qu != transcript.quantum().end() && qu->seq == seq) {
            os << "  [q] " << qu->sender << "->" << qu->receiver << " "
               << qu->qubit_count << " qubits\n";
            ++qu;
        } else if (ev != transcript.events().end() && ev->seq == seq) {
            os << "  [.] " << ev->type << ": " << ev->detail << "\n";
            ++ev;
        }
    }
    return os.str();
}

json circuit_json(bool stabilizer_check) {
    const auto circuit = states::w1_circuit();
    const auto produced = states::replay(circuit);
    const double fid = qsim::fidelity(produced, states::make_w1());

    json j;
    j["schema"] = 1;
    j["num_qubits"] = circuit.num_qubits;
    j["steps"] = json::array();
    for (const auto& step : circuit.steps) {
        // Wires are reported 1-based to match particle labels.
        j["steps"].push_back(
            {{"gate", step.gate},
             {"control", step.control.has_value() ? json(*step.control + 1) : json(nullptr)},
             {"control_value",
              step.control.has_value() ? json(step.control_value) : json(nullptr)},
             {"target", step.target + 1}});
    }
    j["logical_steps"] = circuit.steps.size();
    j["elementary_gates"] = states::elementary_gate_count(circuit);
    j["fidelity"] = fid;
    j["verified"] = fid >= 1.0 - qsim::kClosedFormTol;
    j["note"] =
        "amplitude magnitudes {1/2, 1/2, sqrt(2)/2} are not reachable with "
        "NOT/CNOT/H alone; this construction adds one anti-controlled Hadamard";
    if (stabilizer_check) {
        const auto sr = states::stabilizer_search();
        j["stabilizer_search"] = {{"reachable_states", sr.reachable_states},
                                  {"closure_depth", sr.closure_depth},
                                  {"all_flat", sr.all_flat},
                                  {"w1_reachable", sr.w1_reachable},
                                  {"max_fidelity_to_w1", sr.max_fidelity_to_w1}};
    }
    return j;
}

std::string circuit_text(const json& j) {
    std::ostringstream os;
    os << "preparation circuit on " << j["num_qubits"].get<int>()
       << " qubits (wires numbered 1..n):\n";
    for (const auto& step : j["steps"]) {
        os << "  " << step["gate"].get<std::string>() << " target=q"
           << step["target"].get<int>();
        if (!step["control"].is_null()) {
            os << " control=q" << step["control"].get<int>() << "=="
               << step["control_value"].get<int>();
        }
        os << "\n";
    }
    os << "logical steps: " << j["logical_steps"].get<std::size_t>()
       << ", elementary gates: " << j["elementary_gates"].get<int>() << "\n";
    os << "replay fidelity to closed form: " << std::setprecision(15)
       << j["fidelity"].get<double>() << "\n";
    if (j.contains("stabilizer_search")) {
        const auto& s = j["stabilizer_search"];
        os << "Clifford-subset search: " << s["reachable_states"].get<std::size_t>()
           << " reachable states (closure at depth "
           << s["closure_depth"].get<int>() << "), target reachable: "
           << (s["w1_reachable"].get<bool>() ? "yes" : "no")
           << ", best fidelity " << std::setprecision(6)
           << s["max_fidelity_to_w1"].get<double>() << "\n";
    }
    os << "note: " << j["note"].get<std::string>() << "\n";
    return os.str();
}

}  // namespace

extern "C" {

int qpce_run(const char* request_json, qpce_result** out) {
    return guarded(out, [&]() -> int {
        const json req = parse_request(request_json);
        protocol::ProtocolConfig config = config_from_request(req);
        if (!req.contains("x_hex") || !req.contains("y_hex")) {
            throw protocol::ConfigError("x_hex and y_hex are required");
        }
        config.validate();
        const std::uint64_t x =
            parse_hex(req["x_hex"].get<std::string>(), config.bit_length);
        const std::uint64_t y =
            parse_hex(req["y_hex"].get<std::string>(), config.bit_length);

        const std::string adversary_kind = req.value("adversary", "");
        protocol::RunResult result;
        if (adversary_kind == "intercept_resend") {
            adversary::EveInterceptResend eve(
                Rng(config.seed).derive(adversary::kEveRngTag),
                adversary::direction_from_name(req.value("direction", "both")));
            result = protocol::run_protocol(config, x, y, &eve);
        } else if (adversary_kind.empty() || adversary_kind == "tp_classical") {
            result = protocol::run_protocol(config, x, y);
        } else {
            throw protocol::ConfigError("unknown adversary: " + adversary_kind);
        }

        json j = protocol::report_to_json(result.report, config, x, y);
        if (adversary_kind == "tp_classical") {
            Rng attack_rng = Rng(config.seed).derive(adversary::kTpAttackRngTag);
            const auto outcome = adversary::tp_classical_attack(
                result.transcript, result.key_at, result.key_bt, config, attack_rng);
            j["attack"] = adversary::tp_outcome_to_json(outcome);
        }
        std::string text = run_text(result.report, config);
        if (req.value("transcript", false)) {
            j["transcript"] = result.transcript.to_json();
            text += transcript_text(result.transcript);
        }
        const int status =
            result.report.verdict == protocol::Verdict::aborted_eavesdrop
                ? QPCE_ABORTED_EAVESDROP
                : QPCE_OK;
        return finish(out, j.dump(), std::move(text), status);
    });
}

int qpce_table1(const char* request_json, qpce_result** out) {
    return guarded(out, [&]() -> int {
        const json req = parse_request(request_json);
        const auto variant = parse_variant(req.value("variant", "aw"));
        const auto encoding = parse_encoding(req.value("encoding", "isy"));
        const auto scan = analysis::correctness_scan(variant, encoding);
        const int status = scan.all_consistent ? QPCE_OK : QPCE_SCAN_MISMATCH;
        return finish(out, analysis::scan_to_json(scan).dump(),
                      analysis::scan_to_text(scan), status);
    });
}

int qpce_analyze(const char* request_json, qpce_result** out) {
    return guarded(out, [&]() -> int {
        const json req = parse_request(request_json);
        const auto resource = parse_resource(req.value("resource", "w1"));
        const auto encoding = parse_encoding(req.value("encoding", "isy"));
        const auto trials = req_uint(req, "trials", 100000);
        if (trials < 1) throw protocol::ConfigError("trials must be >= 1");
        const auto seed = req_uint(req, "seed", 0);
        const auto report = analysis::leak_monte_carlo(resource, encoding, trials, seed);
        return finish(out, analysis::leak_to_json(report).dump(),
                      analysis::leak_to_text(report), QPCE_OK);
    });
}

int qpce_attack(const char* request_json, qpce_result** out) {
    return guarded(out, [&]() -> int {
        const json req = parse_request(request_json);
        const std::string kind = req.value("kind", "");
        const auto seed = req_uint(req, "seed", 0);
        json j;
        std::ostringstream text;
        if (kind == "intercept_resend") {
            protocol::ProtocolConfig config = config_from_request(req);
            config.validate();
            const auto direction =
                adversary::direction_from_name(req.value("direction", "both"));
            const auto runs = req_uint(req, "runs", 1000);
            if (runs < 1) throw protocol::ConfigError("runs must be >= 1");
            const auto stats =
                adversary::run_intercept_resend_batch(config, direction, runs, seed);
            j = adversary::intercept_stats_to_json(stats);
            j["schema"] = 1;
            j["direction"] = adversary::direction_name(direction);
            j["seed"] = seed;
            text << "intercept-resend over " << stats.runs << " runs, "
                 << stats.decoys_per_direction << " decoys/direction\n"
                 << "detected: A->B " << stats.detected_a_to_b << ", B->A "
                 << stats.detected_b_to_a << " (closed form per direction "
                 << stats.closed_form_detection << ")\n"
                 << "per-decoy error rate: "
                 << (stats.decoys_checked
                         ? static_cast<double>(stats.decoy_errors) /
                               static_cast<double>(stats.decoys_checked)
                         : 0.0)
                 << " (closed form " << stats.per_decoy_error_closed_form << ")\n";
        } else if (kind == "tp_classical") {
            protocol::ProtocolConfig config = config_from_request(req);
            config.validate();
            const auto runs = req_uint(req, "runs", 100);
            if (runs < 1) throw protocol::ConfigError("runs must be >= 1");
            const auto stats = adversary::run_tp_attack_batch(config, runs, seed);
            j = adversary::tp_stats_to_json(stats);
            j["schema"] = 1;
            j["variant"] = protocol::variant_name(config.variant);
            j["seed"] = seed;
            text << "tp_classical over " << stats.runs << " "
                 << protocol::variant_name(config.variant) << " runs\n"
                 << "R recovered exactly: " << stats.recovered
                 << ", methods agreed: " << stats.methods_agreed << "\n";
            if (stats.guess_trials > 0) {
                text << "blind equality guess: " << stats.guess_correct << "/"
                     << stats.guess_trials << "\n";
            }
            text << "R'=0 side channel: " << stats.r_prime_zero_runs
                 << " runs (equal in " << stats.r_prime_zero_equal << ")\n";
        } else if (kind == "dishonest") {
            const auto resource = parse_resource(req.value("resource", "w1"));
            const auto encoding = parse_encoding(req.value("encoding", "isy"));
            const auto trials = req_uint(req, "trials", 100000);
            if (trials < 1) throw protocol::ConfigError("trials must be >= 1");
            const auto outcome =
                adversary::dishonest_participant_attack(resource, encoding, trials, seed);
            j = adversary::dishonest_to_json(outcome, resource, encoding);
            j["schema"] = 1;
            j["seed"] = seed;
            text << "dishonest participant, resource="
                 << analysis::resource_name(resource) << ": success "
                 << outcome.success_rate << " over " << outcome.trials
                 << " trials (bound " << outcome.helstrom_bound << ")\n";
        } else {
            throw protocol::ConfigError(
                "kind must be intercept_resend, tp_classical or dishonest");
        }
        return finish(out, j.dump(), text.str(), QPCE_OK);
    });
}

int qpce_circuit(const char* request_json, qpce_result** out) {
    return guarded(out, [&]() -> int {
        const json req = parse_request(request_json == nullptr ? "{}" : request_json);
        const json j = circuit_json(req.value("stabilizer_check", false));
        const int status = j["verified"].get<bool>() ? QPCE_OK : QPCE_ERR_INTERNAL;
        return finish(out, j.dump(), circuit_text(j), status);
    });
}

const char* qpce_result_json(const qpce_result* result) {
    return result == nullptr ? nullptr : result->json_text.c_str();
}

const char* qpce_result_text(const qpce_result* result) {
    return result == nullptr ? nullptr : result->text.c_str();
}

void qpce_result_free(qpce_result* result) { delete result; }

const char* qpce_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
