#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(UNCLONE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("unclone_cli_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version and report envelope") {
    CHECK(run("--version").out == "0.3.0\n");
    const auto r = run("detsig vectors --n 4 --digest-bits 8 --seed 3 --messages 4");
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["artifact_version"] == "0.3.0");
    CHECK(doc["experiment"] == "detsig vectors");
    CHECK(doc["seed"] == 3);
    CHECK(doc["status"] == "ok");
    CHECK(doc.contains("wall_time_s"));
}

TEST_CASE("sign then verify, and a bad signature exits 2") {
    const auto s = run("detsig sign --n 4 --digest-bits 8 --seed 5 --message 0a");
    REQUIRE(s.code == 0);
    const auto doc = nlohmann::json::parse(s.out);
    std::string sig = doc["results"]["signature"];
    const std::string vk = doc["results"]["vk"];
    const std::string base = "detsig verify --n 4 --digest-bits 8 --seed 5 --message 0a --vk " + vk;
    CHECK(run(base + " --signature " + sig).code == 0);
    sig[10] = sig[10] == '0' ? '1' : '0';
    const auto bad = run(base + " --signature " + sig);
    CHECK(bad.code == 2);
    CHECK(nlohmann::json::parse(bad.out)["status"] == "threshold-failed");
}

TEST_CASE("usage errors exit 1") {
    CHECK(run("").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("detsig vectors --n 4").code == 1);
    CHECK(run("detsig vectors --n 4 --seed 1 --format xml").code == 1);
    CHECK(run("detsig sign --n 4 --digest-bits 8 --seed 1 --message zz").code == 1);
    CHECK(run("coin demo --seed 1 --attack forge").code == 1);
}

TEST_CASE("csv output and the output file") {
    const auto path = scratch("out.csv");
    const auto r = run("detsig vectors --n 4 --digest-bits 8 --seed 3 --messages 2 --format csv -o " + path.string());
    REQUIRE(r.code == 0);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "key,value");
    std::string line;
    bool saw_status = false;
    while (std::getline(in, line)) saw_status = saw_status || line == "status,ok";
    CHECK(saw_status);
    std::filesystem::remove(path);
}

TEST_CASE("config files fill in flags that were not given") {
    const auto path = scratch("run.cfg");
    {
        std::ofstream cfg(path);
        cfg << "# detsig run\nn=4\ndigest-bits=8\nseed=11\nmessages=2\n";
    }
    const auto from_file = nlohmann::json::parse(run("detsig vectors --config " + path.string()).out);
    CHECK(from_file["seed"] == 11);
    CHECK(from_file["config"]["n"] == 4);
    const auto override = nlohmann::json::parse(run("detsig vectors --config " + path.string() + " --seed 12").out);
    CHECK(override["seed"] == 12);
    {
        std::ofstream cfg(path);
        cfg << "n=4\nseed=1\nflavour=mint\n";
    }
    CHECK(run("detsig vectors --config " + path.string()).code == 1);
    std::filesystem::remove(path);
}

TEST_CASE("identical invocations give identical results") {
    const std::string args = "coin demo --variant eqsup --id-bits 2 --mini-n 4 --digest-bits 16 --attack zero-pad "
                             "--t 1 --trials 20 --seed 9";
    auto a = nlohmann::json::parse(run(args).out);
    auto b = nlohmann::json::parse(run(args).out);
    a.erase("wall_time_s");
    b.erase("wall_time_s");
    CHECK(a == b);
}

}  // TEST_SUITE
