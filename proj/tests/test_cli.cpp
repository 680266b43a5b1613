// End-to-end checks of the CLI contract that the acceptance criteria do not
// already cover: the QPCE_SEED default, text rendering, stderr logging.
// The binary path arrives via the QPCE_CLI_PATH environment variable.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <sys/wait.h>

namespace {

std::string cli_path() {
    const char* path = std::getenv("QPCE_CLI_PATH");
    REQUIRE(path != nullptr);
    return path;
}

int run_shell(const std::string& cmd, std::string& output) {
    output.clear();
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        output.append(buf.data(), n);
    }
    const int rc = pclose(pipe);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("QPCE_SEED provides the default seed") {
    std::string via_env, via_flag, different;
    const std::string base = " run --x 2f --y 11 --bits 6 2>/dev/null";
    CHECK(run_shell("QPCE_SEED=5 " + cli_path() + base, via_env) == 0);
    CHECK(run_shell(cli_path() + base + " --seed 5", via_flag) == 0);
    CHECK(via_env == via_flag);
    CHECK(run_shell(cli_path() + base + " --seed 6", different) == 0);
    CHECK(via_env != different);
}

TEST_CASE("an explicit --seed wins over the environment") {
    std::string via_both, via_flag;
    const std::string base = " run --x 1 --y 1 --bits 1 2>/dev/null";
    CHECK(run_shell("QPCE_SEED=5 " + cli_path() + base + " --seed 9", via_both) == 0);
    CHECK(run_shell(cli_path() + base + " --seed 9", via_flag) == 0);
    CHECK(via_both == via_flag);
}

TEST_CASE("text format renders a human summary") {
    std::string out;
    CHECK(run_shell(cli_path() + " run --x a --y a --bits 4 --format text 2>/dev/null",
                    out) == 0);
    CHECK(out.find("verdict: equal") != std::string::npos);
}

TEST_CASE("errors go to stderr, not stdout") {
    std::string out;
    CHECK(run_shell(cli_path() + " run --x zz --y 0 --bits 4 2>/dev/null", out) == 1);
    CHECK(out.empty());
    std::string err;
    CHECK(run_shell(cli_path() + " run --x zz --y 0 --bits 4 2>&1 1>/dev/null", err) == 1);
    CHECK(err.find("hex") != std::string::npos);
}

TEST_CASE("unknown flags are rejected") {
    std::string out;
    CHECK(run_shell(cli_path() + " table1 --frobnicate 2>/dev/null", out) == 1);
}

TEST_CASE("help exits zero") {
    std::string out;
    CHECK(run_shell(cli_path() + " --help 2>/dev/null", out) == 0);
    CHECK(out.find("run") != std::string::npos);
}
