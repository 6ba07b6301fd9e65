#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string bin() {
    const char* env = std::getenv("BOSEQ_BIN");
    REQUIRE_MESSAGE(env != nullptr, "BOSEQ_BIN must point at the CLI binary");
    return env;
}

std::string workdir() {
    static std::string dir = [] {
        char tmpl[] = "/tmp/boseq_cli_XXXXXX";
        REQUIRE(mkdtemp(tmpl) != nullptr);
        return std::string(tmpl);
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = bin() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("deterministic byte-identical reruns") {
    const std::string d = workdir();
    CHECK(run("entangler --n 1,5 --steps 64 --out-dir " + d) == 0);
    const std::string first = slurp(d + "/entangler_N5.csv");
    CHECK(run("entangler --n 1,5 --steps 64 --out-dir " + d) == 0);
    CHECK(slurp(d + "/entangler_N5.csv") == first);

    CHECK(first.rfind("# boseq ", 0) == 0);
    CHECK(first.find("# config: entangler") != std::string::npos);
    CHECK(first.find("t,entropy_bits,entropy_norm") != std::string::npos);
    CHECK(first.find('\r') == std::string::npos);
}

TEST_CASE("parallel sweep matches sequential output") {
    const std::string d = workdir();
    CHECK(run("entangler --n 2,3,4 --steps 32 --out-dir " + d) == 0);
    const std::string seq = slurp(d + "/entangler_N3.csv");
    CHECK(run("entangler --n 2,3,4 --steps 32 --jobs 3 --out-dir " + d) == 0);
    CHECK(slurp(d + "/entangler_N3.csv") == seq);
}

TEST_CASE("oracle run emits the classification") {
    const std::string d = workdir();
    CHECK(run("deutsch --oracle BAL10 --n 20 --out-dir " + d) == 0);
    const auto j = nlohmann::json::parse(slurp(d + "/deutsch_BAL10.json"));
    CHECK(j["runs"][0]["classification"] == "balanced");
    CHECK(double(j["runs"][0]["overlap_minus"]) > 1.0 - 1e-9);
}

TEST_CASE("schedule compile and run") {
    const std::string d = workdir();
    put(d + "/oracle.bsched",
        "qubits 2\nterm 1.0 Z1 Z2\nterm 1.0 Z2\nterm -1.0 I\nevolve pi/4\nmeasure 1 x\n");
    CHECK(run("compile --in " + d + "/oracle.bsched --n 5") == 0);
    const std::string compiled = slurp(d + "/oracle_N5.bsched");
    CHECK(compiled.find("bosons 5") != std::string::npos);
    CHECK(compiled.find("term -25 I") != std::string::npos);
    CHECK(compiled.find("term 5 Z2") != std::string::npos);
    CHECK(compiled.find("evolve 0.25*pi/N") != std::string::npos);

    CHECK(run("run-schedule --in " + d + "/oracle_N5.bsched --out " + d + "/out.json") == 0);
    const auto j = nlohmann::json::parse(slurp(d + "/out.json"));
    CHECK(j["measurements"][0]["site"] == 1);
}

TEST_CASE("exit codes") {
    const std::string d = workdir();
    CHECK(run("deutsch --oracle NOPE --out-dir " + d) == 2);
    CHECK(run("entangler --n 0 --out-dir " + d) == 2);
    CHECK(run("no-such-command") == 2);
    put(d + "/bad.bsched", "qubits 2\nterm 1.0 Q9\n");
    CHECK(run("run-schedule --in " + d + "/bad.bsched") == 2);

    // cap refusal is distinguishable from plain validation errors
    const int code = std::system(("BOSEQ_DIM_CAP=4 " + bin() +
                                  " grover --m 2 --n 5 --out-dir " + d + " >/dev/null 2>&1")
                                     .c_str());
    CHECK(WEXITSTATUS(code) == 3);
}
