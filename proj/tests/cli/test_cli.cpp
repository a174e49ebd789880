#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "thfield/io.hpp"

namespace {

const std::string kCli = THFIELD_CLI_PATH;
const std::string kDir = std::string(THFIELD_TEST_DIR) + "/cli_scratch";

int run(const std::string& args, std::string* out = nullptr) {
    const std::string cmd = kCli + " " + args + " > " + kDir + "/stdout.txt 2>&1";
    const int rc = std::system(cmd.c_str());
    if (out) {
        std::ifstream is(kDir + "/stdout.txt");
        std::stringstream ss;
        ss << is.rdbuf();
        *out = ss.str();
    }
    return WEXITSTATUS(rc);
}

std::vector<char> slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    return std::vector<char>(std::istreambuf_iterator<char>(is), {});
}

struct ScratchDir {
    ScratchDir() { std::system(("mkdir -p " + kDir).c_str()); }
};
const ScratchDir kScratch;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes reproducible output with a sidecar") {
    const std::string base = "simulate --k 1 --h 0.7,0.7 --lambda 1,1 --grid 8x8 --tmax 2,2 "
                             "--seed 42 --method cholesky -o ";
    CHECK(run(base + kDir + "/z1.bin") == 0);
    CHECK(run(base + kDir + "/z2.bin") == 0);
    CHECK(slurp(kDir + "/z1.bin") == slurp(kDir + "/z2.bin"));

    std::ifstream js(kDir + "/z1.json");
    REQUIRE(js.good());
    const auto j = nlohmann::json::parse(js);
    CHECK(j["method"] == "cholesky");
    CHECK(j["params"]["H"][0] == 0.7);

    // re-running the sidecar's recorded command reproduces the bytes
    std::string recorded = j["command"];
    const auto pos = recorded.find(' ');
    REQUIRE(pos != std::string::npos);
    std::string args = recorded.substr(pos + 1);
    const auto opos = args.find(kDir + "/z1.bin");
    REQUIRE(opos != std::string::npos);
    args.replace(opos, (kDir + "/z1.bin").size(), kDir + "/z3.bin");
    CHECK(run(args) == 0);
    CHECK(slurp(kDir + "/z1.bin") == slurp(kDir + "/z3.bin"));
}

TEST_CASE("simulate rejects the semimartingale method below H = 1") {
    std::string out;
    const int rc = run("simulate --k 1 --h 0.7,0.7 --lambda 1,1 --grid 4x4 --tmax 1,1 "
                       "--seed 1 --method semimartingale -o " + kDir + "/bad.bin", &out);
    CHECK(rc == 2);
    CHECK(out.find("not a semimartingale") != std::string::npos);
}

TEST_CASE("simulate rejects invalid parameters with a usage error") {
    CHECK(run("simulate --k 0 --h 0.7,0.7 -o " + kDir + "/bad.bin") == 2);
    CHECK(run("simulate --h 0.4,0.7 -o " + kDir + "/bad.bin") == 2);
    CHECK(run("bogus-subcommand") == 2);
}

TEST_CASE("covariance table has the documented columns") {
    CHECK(run("covariance --k 1 --h 0.7,0.8 --lambda 1,1 --t 0.5,1 --s 0.5,1 -o " + kDir +
              "/cov.csv") == 0);
    std::ifstream is(kDir + "/cov.csv");
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,s,u,v,cov");
    int rows = 0;
    std::string line;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 16);  // 4 anchors, full pair table
}

TEST_CASE("operator round trip through files") {
    // write a smooth input field, integrate then differentiate, compare
    using namespace thfield;
    const Grid2D g{-40.0, -40.0, 80.0 / 192, 80.0 / 192, 192, 192};
    const double w = 2.5;
    const Field2D f = tabulate(g, [w](double x, double y) {
        return std::exp(-(x * x + y * y) / (w * w));
    });
    io::write_field(kDir + "/in.bin", f, "{}", "test");
    CHECK(run("operator --input " + kDir + "/in.bin --op integral --side plus "
              "--route fourier --alpha 0.4,0.6 --lambda 1,1 -o " + kDir + "/mid.bin") == 0);
    CHECK(run("operator --input " + kDir + "/mid.bin --op derivative --side plus "
              "--route fourier --alpha 0.4,0.6 --lambda 1,1 -o " + kDir + "/back.bin") == 0);
    const io::LoadedField back = io::read_field(kDir + "/back.bin");
    double num = 0, den = 0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double d = back.field.values[i] - f.values[i];
        num += d * d;
        den += f.values[i] * f.values[i];
    }
    CHECK(std::sqrt(num / den) <= 1e-6);
}

TEST_CASE("verify quick suite exits zero and writes reports") {
    std::string out;
    const int rc = run("verify --suite fractional --quick --json " + kDir +
                       "/report.json --text " + kDir + "/report.txt", &out);
    CHECK(rc == 0);
    CHECK(out.find("[PASS]") != std::string::npos);
    std::ifstream js(kDir + "/report.json");
    const auto j = nlohmann::json::parse(js);
    CHECK(j.is_array());
    CHECK(!j.empty());
}

TEST_CASE("version flag") {
    std::string out;
    CHECK(run("--version", &out) == 0);
    CHECK(out.find("0.1.0") != std::string::npos);
}

}  // TEST_SUITE
