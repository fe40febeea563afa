#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "noncyclic/cli.hpp"

namespace fs = std::filesystem;
using noncyclic::cli::ExitCode;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = noncyclic::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path & p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const std::string & s)
{
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        v.push_back(l);
    return v;
}

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("noncyclic_cli_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string & name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("usage errors exit 1")
{
    CHECK(run({}).code == ExitCode::usage);
    CHECK(run({"frobnicate"}).code == ExitCode::usage);
    CHECK(run({"classgroup", "--d", "12"}).code == ExitCode::usage);
    CHECK(run({"classgroup", "--d", "0"}).code == ExitCode::usage);
    CHECK(run({"rank2", "--g", "4"}).code == ExitCode::usage);
    CHECK(run({"density", "--poly", "2x"}).code == ExitCode::usage);
    CHECK(run({"rank2", "--format", "xml"}).code == ExitCode::usage);
    // 5 | 2a - 3b with a = 4, b = 1
    const Result r = run({"h2", "--l", "1", "--primes", "5", "--a-offsets", "4", "--b-offsets", "1", "--m-range",
                          "1:10", "--n-range", "1:10", "--t-range", "2:3"});
    CHECK(r.code == ExitCode::usage);
    CHECK(r.err.find("index 1") != std::string::npos);
}

TEST_CASE("classgroup")
{
    Result r = run({"classgroup", "--d", "23"});
    CHECK(r.code == ExitCode::ok);
    CHECK(r.out.find("h = 3") != std::string::npos);
    r = run({"classgroup", "--delta", "-3896"});
    CHECK(r.code == ExitCode::ok);
    CHECK(r.out.find("[3,12]") != std::string::npos);
    r = run({"classgroup", "--d", "3"});
    CHECK(r.out.find("h = 1") != std::string::npos);
}

TEST_CASE("budget violations exit 2")
{
    TempDir tmp;
    CHECK(run({"rank2", "--budget-tuples", "3"}).code == ExitCode::budget);
    CHECK(run({"census", "--x", "1000", "--budget-x", "10"}).code == ExitCode::budget);
    CHECK(run({"density", "--p-max", "100", "--mode", "brute", "--budget-points", "1000"}).code == ExitCode::budget);
    CHECK(run({"classgroup", "--d", "999999999989", "--budget-delta", "1000"}).code == ExitCode::budget);
}

TEST_CASE("rank2 files, schema and replay")
{
    TempDir tmp;
    const std::string out = tmp / "r.csv";
    const Result r = run({"rank2", "--a-range", "1:2", "--b-range", "1:2", "--n-range", "1:2", "--out", out});
    REQUIRE(r.code == ExitCode::ok);
    const auto rows = lines(slurp(out));
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "#schema=noncyclic.rank2.v1");
    const auto summary = nlohmann::json::parse(slurp(out + ".summary.json"));
    CHECK(summary["tuples"] == "8");
    CHECK(summary["admissible"] == "0");
    const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
    CHECK(manifest["command"] == "rank2");
    CHECK(manifest["exit_code"] == 0);

    const std::string again = tmp / "r2.csv";
    REQUIRE(run({"replay", out + ".manifest.json", "--out", again}).code == ExitCode::ok);
    CHECK(slurp(again) == slurp(out));
    CHECK(slurp(again + ".summary.json") == slurp(out + ".summary.json"));
}

TEST_CASE("rank2 json lines")
{
    TempDir tmp;
    const std::string out = tmp / "r.jsonl";
    REQUIRE(run({"rank2", "--g", "3", "--a-range", "1:15", "--b-range", "1:15", "--n-range", "3:3", "--format", "json",
                 "--out", out})
                .code == ExitCode::ok);
    const auto rows = lines(slurp(out));
    REQUIRE(rows.size() == 225);
    std::size_t verified = 0;
    for (const auto & l : rows) {
        const auto j = nlohmann::json::parse(l);
        CHECK(j["schema"] == "noncyclic.rank2.v1");
        CHECK(j["D"].is_string());
        verified += j["verified"] == true;
    }
    CHECK(verified > 0);
}

TEST_CASE("h2 outputs")
{
    TempDir tmp;
    const std::string empty = tmp / "e.csv";
    Result r = run({"h2", "--m-range", "1:0", "--n-range", "1:10", "--t-range", "2:3", "--out", empty});
    REQUIRE(r.code == ExitCode::ok);
    CHECK(lines(slurp(empty)).size() == 2);
    const auto s = nlohmann::json::parse(slurp(empty + ".summary.json"));
    CHECK(s["moments_h2"]["S1"] == "0");
    CHECK(s["moments_h2"]["S2"] == "0");

    const std::string out = tmp / "h.csv";
    r = run({"h2", "--l", "1", "--primes", "5", "--a-offsets", "1", "--b-offsets", "0", "--m-range", "1:6000",
             "--n-range", "1:1000000", "--t-range", "2:40", "--out", out});
    REQUIRE(r.code == ExitCode::ok);
    const auto rows = lines(slurp(out));
    CHECK(rows.size() > 2);
    CHECK(rows[0] == "#schema=noncyclic.h2.v1");
}

TEST_CASE("density and census outputs")
{
    TempDir tmp;
    const std::string out = tmp / "d.json";
    REQUIRE(run({"density", "--p-max", "7", "--format", "json", "--out", out}).code == ExitCode::ok);
    const auto doc = nlohmann::json::parse(slurp(out));
    CHECK(doc["schema"] == "noncyclic.density.v1");
    REQUIRE(doc["per_prime"].size() == 4);
    CHECK(doc["per_prime"][0]["rho"] == "32");
    CHECK(doc["per_prime"][1]["local_factor"] == "58/81");

    const Result one = run({"density", "--p-max", "1"});
    CHECK(one.out.find("partial product = 1.000000000000") != std::string::npos);

    const std::string cs = tmp / "c.csv";
    REQUIRE(run({"census", "--x", "100", "--checkpoints", "1", "--out", cs}).code == ExitCode::ok);
    const auto crow = lines(slurp(cs));
    REQUIRE(crow.size() == 3);
    CHECK(crow[2].find(",61,") != std::string::npos);
}

TEST_CASE("verify-lemma32 is reproducible")
{
    TempDir tmp;
    const std::string out = tmp / "l.csv";
    REQUIRE(run({"verify-lemma32", "--g", "3,5", "--trials", "4", "--seed", "7", "--format", "csv", "--out", out}).code ==
            ExitCode::ok);
    const std::string again = tmp / "l2.csv";
    REQUIRE(run({"replay", out + ".manifest.json", "--out", again}).code == ExitCode::ok);
    CHECK(slurp(again) == slurp(out));
    CHECK(lines(slurp(out)).size() == 10);
}
