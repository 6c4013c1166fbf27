#include "fafchain/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

using fafchain::cli::run;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class TempDir {
public:
    TempDir() : path_(std::filesystem::temp_directory_path() / "fafchain_cli_test")
    {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

} // namespace

TEST_CASE("energy of a ground state is zero")
{
    const auto r = invoke({"energy", "--alpha", "2", "--n", "50", "--constant", "theta-alpha", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["energy"].get<double>()) < 1e-12);
    CHECK(j["metadata"]["command"] == "energy");
}

TEST_CASE("crease command writes the documented JSON fields")
{
    TempDir dir;
    const auto path = dir.file("c2.json");
    const auto r = invoke({"crease", "--alpha", "2", "--rel-tol", "1e-8", "--out", path});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(path));
    for (const char* key : {"alpha", "C", "N_final", "converged", "history"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["C"].get<double>() > 0.0);
    CHECK(j["C"].get<double>() <= 1.5);
    CHECK(j["converged"] == true);
    CHECK(j["history"].size() >= 2);
}

TEST_CASE("fit-asymptotics exponent")
{
    const auto r = invoke({"fit-asymptotics", "--alpha-min", "3.9", "--alpha-max", "3.999", "--points", "12",
                           "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["exponent"].get<double>() >= 1.45);
    CHECK(j["exponent"].get<double>() <= 1.55);
}

TEST_CASE("validation errors exit with 1")
{
    CHECK(invoke({"bogus"}).code == 1);
    const auto unknown_flag = invoke({"energy", "--alpha", "1", "--nope"});
    CHECK(unknown_flag.code == 1);
    CHECK_FALSE(unknown_flag.err.empty());
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"energy", "--alpha", "-1"}).code == 1);
    CHECK(invoke({"minimize", "--alpha", "1", "--n", "2"}).code == 1);
    CHECK(invoke({"minimize", "--alpha", "1", "--n", "20", "--jumps", "3"}).code == 1);
    CHECK(invoke({"crease", "--alpha", "2", "--rel-tol", "0"}).code == 1);
    CHECK(invoke({"energy", "--alpha", "1", "--format", "xml"}).code == 1);
    CHECK(invoke({"energy", "--alpha", "1", "--out", "/nonexistent-dir/x/out.csv"}).code == 1);

    for (const char* cmd : {"crease", "regimes", "mm-compare"}) {
        std::vector<std::string> args{cmd, "--alpha", "4"};
        if (std::string(cmd) != "crease") {
            args.insert(args.end(), {"--n", "100"});
        }
        const auto r = invoke(args);
        CHECK(r.code == 1);
        CHECK(r.err.find("singular point") != std::string::npos);
    }
}

TEST_CASE("help goes to the output stream")
{
    const auto r = invoke({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("phase-diagram") != std::string::npos);
}

TEST_CASE("non-convergence exits with 2")
{
    const auto r = invoke({"minimize", "--alpha", "3", "--n", "200", "--jumps", "2", "--max-iter", "2"});
    CHECK(r.code == 2);
    CHECK(r.out.find("false") != std::string::npos);
}

TEST_CASE("seeded runs are byte-identical across reruns and thread counts")
{
    const std::vector<std::string> energy{"energy", "--alpha", "3", "--n", "40", "--random", "--seed", "17"};
    const auto a = invoke(energy);
    const auto b = invoke(energy);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto other_seed = energy;
    other_seed.back() = "18";
    CHECK(invoke(other_seed).out != a.out);

    std::vector<std::string> phase{"phase-diagram", "--n-values", "10,40,160", "--alpha-values", "3.9,3.99,3.9999",
                                   "--seed", "5"};
    auto one = phase;
    one.insert(one.end(), {"--threads", "1"});
    auto three = phase;
    three.insert(three.end(), {"--threads", "3"});
    const auto r1 = invoke(one);
    const auto r3 = invoke(three);
    REQUIRE(r1.code == 0);
    CHECK(r1.out == r3.out);
    CHECK(invoke(one).out == r1.out);
}

TEST_CASE("phase diagram 10 x 10 has unique (n, alpha) keys")
{
    TempDir dir;
    const auto path = dir.file("phase.json");
    const auto r = invoke({"phase-diagram", "--n-values", "4,5,6,7,8,9,10,11,12,13", "--alpha-min", "3.9",
                           "--alpha-max", "3.99999", "--alpha-points", "10", "--out", path, "--gnuplot"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(path));
    REQUIRE(j["rows"].size() == 100);
    std::set<std::pair<long long, double>> keys;
    for (const auto& row : j["rows"]) {
        keys.emplace(row["n"].get<long long>(), row["alpha"].get<double>());
        CHECK(row.contains("regime"));
        CHECK(row.contains("converged"));
    }
    CHECK(keys.size() == 100);
    CHECK(std::filesystem::exists(dir.file("phase.dat")));
}

TEST_CASE("csv output to a file")
{
    TempDir dir;
    const auto path = dir.file("m.csv");
    const auto r = invoke({"minimize", "--alpha", "2", "--n", "30", "--out", path});
    REQUIRE(r.code == 0);
    const std::string text = slurp(path);
    CHECK(text.find("# command=minimize") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(invoke({"--gnuplot", "minimize", "--alpha", "2", "--n", "30"}).code == 1);
}
