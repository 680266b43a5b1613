#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include <json.hpp>

#include "qpce/qpce.h"

using nlohmann::json;

namespace {

struct Result {
    int status = -1;
    json body;
    std::string raw;
    std::string text;
};

template <typename Fn>
Result call(Fn fn, const std::string& request) {
    Result r;
    qpce_result* handle = nullptr;
    r.status = fn(request.c_str(), &handle);
    if (handle != nullptr) {
        r.raw = qpce_result_json(handle);
        r.text = qpce_result_text(handle);
        r.body = json::parse(r.raw);
        qpce_result_free(handle);
    }
    return r;
}

}  // namespace

TEST_CASE("run: equal secrets produce verdict equal with status 0") {
    const auto r = call(qpce_run, R"({"x_hex":"a","y_hex":"a","bits":4,"seed":3})");
    CHECK(r.status == QPCE_OK);
    CHECK(r.body["schema"] == 1);
    CHECK(r.body["verdict"] == "equal");
    CHECK(r.body["R"] == 0);
    CHECK_FALSE(r.text.empty());
}

TEST_CASE("run: one differing bit gives R = 1") {
    const auto r = call(qpce_run, R"({"x_hex":"a","y_hex":"8","bits":4})");
    CHECK(r.status == QPCE_OK);
    CHECK(r.body["verdict"] == "not_equal");
    CHECK(r.body["R"] == 1);
}

TEST_CASE("run: transcript included on request") {
    const auto r = call(qpce_run,
                        R"({"x_hex":"3","y_hex":"3","bits":2,"transcript":true})");
    CHECK(r.status == QPCE_OK);
    REQUIRE(r.body.contains("transcript"));
    CHECK(r.body["transcript"]["classical"].size() > 0);
    CHECK(r.body["transcript"]["quantum"].size() == 2);
}

TEST_CASE("run: intercept-resend adversary aborts with status 2") {
    // 64 decoys per direction at threshold 0: detection is morally certain,
    // and exactly reproducible for a fixed seed.
    const auto r = call(
        qpce_run,
        R"({"x_hex":"a","y_hex":"a","bits":4,"decoys":64,"seed":1,"adversary":"intercept_resend"})");
    CHECK(r.status == QPCE_ABORTED_EAVESDROP);
    CHECK(r.body["verdict"] == "aborted_eavesdrop");
    CHECK(r.body["R"].is_null());
}

TEST_CASE("run: embedded tp_classical attack on a plaintext variant") {
    const auto r = call(
        qpce_run,
        R"({"variant":"lwj11","x_hex":"a","y_hex":"1","bits":4,"adversary":"tp_classical"})");
    CHECK(r.status == QPCE_OK);
    REQUIRE(r.body.contains("attack"));
    CHECK(r.body["attack"]["recovered_R"] == r.body["R"]);
    CHECK(r.body["attack"]["methods_agree"] == true);
}

TEST_CASE("run: config errors give status 1 and a message, no result") {
    qpce_result* handle = nullptr;
    CHECK(qpce_run(R"({"x_hex":"zz","y_hex":"a","bits":4})", &handle) ==
          QPCE_ERR_CONFIG);
    CHECK(handle == nullptr);
    CHECK(std::string(qpce_last_error()).find("hex") != std::string::npos);

    CHECK(qpce_run(R"({"bits":4})", &handle) == QPCE_ERR_CONFIG);
    CHECK(qpce_run("not json", &handle) == QPCE_ERR_CONFIG);
    CHECK(qpce_run(nullptr, &handle) == QPCE_ERR_CONFIG);
    CHECK(qpce_run(R"({"x_hex":"0","y_hex":"0","bits":0})", &handle) ==
          QPCE_ERR_CONFIG);
    CHECK(qpce_run(R"({"x_hex":"0","y_hex":"0","bits":-4})", &handle) ==
          QPCE_ERR_CONFIG);
    CHECK(qpce_attack(R"({"kind":"dishonest","trials":-1})", &handle) ==
          QPCE_ERR_CONFIG);
}

TEST_CASE("table1: consistent scan exits 0, sigma_x scan exits 3") {
    const auto ok = call(qpce_table1, R"({"encoding":"isy"})");
    CHECK(ok.status == QPCE_OK);
    CHECK(ok.body["table"].size() == 16);
    CHECK(ok.body["all_consistent"] == true);

    const auto bad = call(qpce_table1, R"({"encoding":"sx"})");
    CHECK(bad.status == QPCE_SCAN_MISMATCH);
    CHECK(bad.body["all_consistent"] == false);
}

TEST_CASE("analyze: bounds come back exact") {
    const auto r = call(qpce_analyze, R"({"resource":"symw","trials":200,"seed":1})");
    CHECK(r.status == QPCE_OK);
    CHECK(r.body["bound"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    const auto epr = call(qpce_analyze, R"({"resource":"epr","trials":200})");
    CHECK(epr.body["bound"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("attack: each kind runs and reports") {
    const auto dis = call(
        qpce_attack,
        R"({"kind":"dishonest","resource":"symw","trials":2000,"seed":2})");
    CHECK(dis.status == QPCE_OK);
    CHECK(dis.body["helstrom_bound"].get<double>() ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const auto tp = call(
        qpce_attack,
        R"({"kind":"tp_classical","variant":"lwg12","bits":4,"runs":10,"seed":2})");
    CHECK(tp.status == QPCE_OK);
    CHECK(tp.body["recovered_runs"] == 10);

    const auto eve = call(
        qpce_attack,
        R"({"kind":"intercept_resend","bits":2,"decoys":8,"runs":50,"seed":2})");
    CHECK(eve.status == QPCE_OK);
    CHECK(eve.body["closed_form_detection"].get<double>() > 0.8);

    qpce_result* handle = nullptr;
    CHECK(qpce_attack(R"({"kind":"nope"})", &handle) == QPCE_ERR_CONFIG);
}

TEST_CASE("circuit: verified construction, optional reachability search") {
    const auto r = call(qpce_circuit, R"({})");
    CHECK(r.status == QPCE_OK);
    CHECK(r.body["fidelity"].get<double>() >= 1.0 - 1e-12);
    CHECK(r.body["logical_steps"] == 4);
    CHECK(r.body["elementary_gates"] == 6);
    CHECK(r.body["steps"].size() == 4);
    CHECK(r.body["steps"][0]["target"] == 3);  // 1-based in reports

    const auto s = call(qpce_circuit, R"({"stabilizer_check":true})");
    CHECK(s.body["stabilizer_search"]["w1_reachable"] == false);
    CHECK(s.body["stabilizer_search"]["all_flat"] == true);
}

TEST_CASE("identical requests produce byte-identical JSON") {
    const std::string reqs[] = {
        R"({"x_hex":"5","y_hex":"1","bits":3,"seed":9})",
        R"({"encoding":"isy"})",
    };
    const auto a1 = call(qpce_run, reqs[0]);
    const auto a2 = call(qpce_run, reqs[0]);
    CHECK(a1.raw == a2.raw);
    const auto b1 = call(qpce_table1, reqs[1]);
    const auto b2 = call(qpce_table1, reqs[1]);
    CHECK(b1.raw == b2.raw);
}

TEST_CASE("result accessors tolerate null") {
    CHECK(qpce_result_json(nullptr) == nullptr);
    CHECK(qpce_result_text(nullptr) == nullptr);
    qpce_result_free(nullptr);
}
