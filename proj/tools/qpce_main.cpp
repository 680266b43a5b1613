// Command-line front end. Flags are turned into JSON requests for the C
// API; status codes pass straight through as exit codes (0 ok, 1 config
// error, 2 protocol abort, 3 consistency-scan failure).

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpce/qpce.h"

namespace {

using nlohmann::json;

int emit(int status, qpce_result* result, const std::string& format) {
    if (result != nullptr) {
        if (format == "text") {
            std::cout << qpce_result_text(result);
        } else {
            std::cout << qpce_result_json(result) << "\n";
        }
        qpce_result_free(result);
    } else {
        std::cerr << "error: " << qpce_last_error() << "\n";
    }
    return status;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("QPCE_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and analysis toolkit for quantum private comparison "
                 "of equality protocols"};
    app.require_subcommand(1);

    const std::uint64_t seed_default = default_seed();

    // run
    auto* run = app.add_subcommand("run", "Execute one protocol run");
    std::string run_variant = "aw", run_x, run_y, run_encoding = "isy";
    std::string run_adversary, run_direction = "both", run_format = "json";
    std::size_t run_bits = 0, run_mix = 8, run_decoys = 16;
    double run_threshold = 0.0;
    std::uint64_t run_seed = seed_default;
    bool run_transcript = false;
    run->add_option("--variant", run_variant, "Protocol variant")
        ->check(CLI::IsMember({"aw", "lwj11", "lwg12"}));
    run->add_option("--x", run_x, "Alice's secret, hex")->required();
    run->add_option("--y", run_y, "Bob's secret, hex")->required();
    run->add_option("--bits", run_bits, "Secret bit length N (1..64)")->required();
    run->add_option("--mix", run_mix, "Mix-sequence length L");
    run->add_option("--decoys", run_decoys, "Decoy photons per direction");
    run->add_option("--encoding", run_encoding, "Encoding operator (default isy)")
        ->check(CLI::IsMember({"isy", "sx"}));
    run->add_option("--threshold", run_threshold, "Decoy error abort threshold");
    run->add_option("--seed", run_seed, "RNG seed (default 0 or QPCE_SEED)");
    run->add_option("--adversary", run_adversary, "Attach an attack scenario")
        ->check(CLI::IsMember({"intercept_resend", "tp_classical"}));
    run->add_option("--direction", run_direction, "Eavesdropped channel direction")
        ->check(CLI::IsMember({"a_to_b", "b_to_a", "both"}));
    run->add_flag("--transcript", run_transcript, "Include the full transcript");
    run->add_option("--format", run_format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));

    // table1
    auto* table1 = app.add_subcommand(
        "table1", "Exact per-bit measurement-case enumeration");
    std::string t1_encoding = "isy", t1_variant = "aw", t1_format = "json";
    table1->add_option("--encoding", t1_encoding, "Encoding operator (default isy)")
        ->check(CLI::IsMember({"isy", "sx"}));
    table1->add_option("--variant", t1_variant, "Protocol variant")
        ->check(CLI::IsMember({"aw", "lwj11", "lwg12"}));
    table1->add_option("--format", t1_format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));

    // analyze
    auto* analyze =
        app.add_subcommand("analyze", "Reduced states, leak bound, Monte Carlo");
    std::string an_resource = "w1", an_encoding = "isy", an_format = "json";
    std::size_t an_trials = 100000;
    std::uint64_t an_seed = seed_default;
    analyze->add_option("--resource", an_resource, "Carrier under attack")
        ->check(CLI::IsMember({"w1", "w1p", "symw", "epr"}));
    analyze->add_option("--encoding", an_encoding, "Encoding operator")
        ->check(CLI::IsMember({"isy", "sx"}));
    analyze->add_option("--trials", an_trials, "Monte Carlo trials");
    analyze->add_option("--seed", an_seed, "RNG seed");
    analyze->add_option("--format", an_format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));

    // attack
    auto* attack = app.add_subcommand("attack", "Run an attack batch");
    std::string at_kind, at_variant = "aw", at_encoding = "isy";
    std::string at_resource = "w1", at_direction = "both", at_format = "json";
    std::size_t at_runs = 1000, at_trials = 100000;
    std::size_t at_bits = 8, at_mix = 8, at_decoys = 16;
    double at_threshold = 0.0;
    std::uint64_t at_seed = seed_default;
    attack->add_option("--kind", at_kind, "Attack scenario")
        ->required()
        ->check(CLI::IsMember({"intercept_resend", "tp_classical", "dishonest"}));
    attack->add_option("--variant", at_variant, "Protocol variant")
        ->check(CLI::IsMember({"aw", "lwj11", "lwg12"}));
    attack->add_option("--bits", at_bits, "Secret bit length N");
    attack->add_option("--mix", at_mix, "Mix-sequence length L");
    attack->add_option("--decoys", at_decoys, "Decoy photons per direction");
    attack->add_option("--threshold", at_threshold, "Decoy error abort threshold");
    attack->add_option("--encoding", at_encoding, "Encoding operator")
        ->check(CLI::IsMember({"isy", "sx"}));
    attack->add_option("--runs", at_runs, "Protocol runs in the batch");
    attack->add_option("--trials", at_trials, "Trials for dishonest-participant");
    attack->add_option("--resource", at_resource, "Carrier for dishonest-participant")
        ->check(CLI::IsMember({"w1", "w1p", "symw", "epr"}));
    attack->add_option("--direction", at_direction, "Eavesdropped direction")
        ->check(CLI::IsMember({"a_to_b", "b_to_a", "both"}));
    attack->add_option("--seed", at_seed, "RNG seed");
    attack->add_option("--format", at_format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));

    // circuit
    auto* circuit =
        app.add_subcommand("circuit", "Preparation circuit and verification");
    bool c_show_steps = false, c_stab = false;
    std::string c_format = "json";
    circuit->add_flag("--show-steps", c_show_steps, "List the logical steps");
    circuit->add_flag("--stabilizer-check", c_stab,
                      "Exhaustive NOT/CNOT/H reachability search");
    circuit->add_option("--format", c_format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    qpce_result* result = nullptr;
    if (run->parsed()) {
        json req{{"variant", run_variant}, {"x_hex", run_x},
                 {"y_hex", run_y},         {"bits", run_bits},
                 {"mix", run_mix},         {"decoys", run_decoys},
                 {"encoding", run_encoding}, {"threshold", run_threshold},
                 {"seed", run_seed},       {"transcript", run_transcript},
                 {"direction", run_direction}};
        if (!run_adversary.empty()) req["adversary"] = run_adversary;
        const int status = qpce_run(req.dump().c_str(), &result);
        return emit(status, result, run_format);
    }
    if (table1->parsed()) {
        const json req{{"encoding", t1_encoding}, {"variant", t1_variant}};
        const int status = qpce_table1(req.dump().c_str(), &result);
        return emit(status, result, t1_format);
    }
    if (analyze->parsed()) {
        const json req{{"resource", an_resource},
                       {"encoding", an_encoding},
                       {"trials", an_trials},
                       {"seed", an_seed}};
        const int status = qpce_analyze(req.dump().c_str(), &result);
        return emit(status, result, an_format);
    }
    if (attack->parsed()) {
        const json req{{"kind", at_kind},       {"variant", at_variant},
                       {"bits", at_bits},       {"mix", at_mix},
                       {"decoys", at_decoys},   {"threshold", at_threshold},
                       {"encoding", at_encoding}, {"runs", at_runs},
                       {"trials", at_trials},   {"resource", at_resource},
                       {"direction", at_direction}, {"seed", at_seed}};
        const int status = qpce_attack(req.dump().c_str(), &result);
        return emit(status, result, at_format);
    }
    if (circuit->parsed()) {
        const json req{{"stabilizer_check", c_stab}};
        const std::string format = c_show_steps ? "text" : c_format;
        const int status = qpce_circuit(req.dump().c_str(), &result);
        return emit(status, result, format);
    }
    return 1;
}
