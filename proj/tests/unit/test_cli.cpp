#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "hbeta/cli.hpp"
#include "hbeta/io.hpp"
#include "hbeta/manifest.hpp"
#include "hbeta/random.hpp"

using namespace hbeta;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hbeta_cli_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write_normals(const std::string& file, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::ofstream out(file);
    for (std::size_t i = 0; i < n; ++i) out << rng.normal(rng.uniform() < 0.8 ? 0.0 : 2.5, 1.0) << "\n";
}

std::vector<std::string> csv_column(const std::string& file, const std::string& name) {
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
    const auto col = static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
    std::vector<std::string> out;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string cell;
        for (std::size_t k = 0; k <= col; ++k) std::getline(ls, cell, ',');
        out.push_back(cell);
    }
    return out;
}

}  // namespace

TEST_CASE("deconvolve happy path, manifest and replay") {
    TempDir tmp;
    write_normals(tmp / "y.csv", 300, 1);
    const std::string out = tmp / "run";
    REQUIRE(cli::run({"deconvolve", "--y", tmp / "y.csv", "--likelihood", "normal:1", "--levels", "5", "--range", "-5", "5",
                      "--iterations", "60", "--burn-in", "20", "--chains", "2", "--query", "2.5", "--out", out}) == cli::kOk);
    for (const char* f : {"draws.hbd", "cdf_band.csv", "density.csv", "posterior.csv", "manifest.json"}) CHECK(fs::exists(fs::path(out) / f));

    const PosteriorDraws d = io::load_draws(fs::path(out) / "draws.hbd");
    CHECK(d.size() == 80);
    CHECK(d.grid.levels() == 5);
    const RunManifest m = read_manifest(fs::path(out) / kManifestName);
    CHECK(m.command == "deconvolve");
    CHECK(m.inputs.size() == 1);
    CHECK(m.outputs.size() == 4);

    CHECK(cli::run({"replay", out, "--out", tmp / "again"}) == cli::kOk);
    CHECK(io::read_file(fs::path(out) / "cdf_band.csv") == io::read_file(tmp / "again/cdf_band.csv"));

    // A recorded digest that no longer matches makes the replay fail.
    RunManifest tampered = read_manifest(fs::path(out) / kManifestName);
    tampered.outputs[0].sha256 = std::string(64, '0');
    io::write_file_atomic(fs::path(out) / kManifestName, to_json(tampered).dump(2));
    CHECK(cli::run({"replay", out, "--out", tmp / "third"}) == cli::kRuntime);
}

TEST_CASE("usage errors exit with 1") {
    TempDir tmp;
    write_normals(tmp / "y.csv", 20, 2);
    CHECK(cli::run({}) == cli::kUsage);
    CHECK(cli::run({"deconvolve", "--out", tmp / "o"}) == cli::kUsage);
    CHECK(cli::run({"deconvolve", "--y", tmp / "y.csv", "--out", tmp / "o", "--bogus"}) == cli::kUsage);
    CHECK(cli::run({"deconvolve", "--y", tmp / "nope.csv", "--out", tmp / "o"}) == cli::kUsage);
    CHECK(cli::run({"deconvolve", "--y", tmp / "y.csv", "--range", "3", "-3", "--out", tmp / "o"}) == cli::kUsage);
    CHECK(cli::run({"deconvolve", "--y", tmp / "y.csv", "--likelihood", "cauchy", "--out", tmp / "o"}) == cli::kUsage);
    CHECK(cli::run({"test-fdr", "--y", tmp / "y.csv", "--alpha", "1.5", "--out", tmp / "o"}) == cli::kUsage);
    CHECK(cli::run({"reproduce", "table9", "--out", tmp / "o"}) == cli::kUsage);
    CHECK(cli::run({"frobnicate"}) == cli::kUsage);
    CHECK(cli::run({"--help"}) == cli::kOk);
}

TEST_CASE("data errors exit with 2") {
    TempDir tmp;
    std::ofstream(tmp / "bad.csv") << "1\n2\nthree\n";
    CHECK(cli::run({"deconvolve", "--y", tmp / "bad.csv", "--out", tmp / "o"}) == cli::kRuntime);
    std::ofstream(tmp / "far.csv") << "1e6\n";
    CHECK(cli::run({"deconvolve", "--y", tmp / "far.csv", "--likelihood", "normal:0.001", "--mode", "exact", "--out", tmp / "o2"}) ==
          cli::kRuntime);
}

TEST_CASE("test-fdr writes curves and selections") {
    TempDir tmp;
    write_normals(tmp / "y.csv", 400, 3);
    const std::string out = tmp / "fdr";
    REQUIRE(cli::run({"test-fdr", "--y", tmp / "y.csv", "--levels", "5", "--range", "-5", "5", "--iterations", "40",
                      "--burn-in", "10", "--chains", "1", "--out", out}) == cli::kOk);
    for (const char* f : {"fdr_curve.csv", "selected.csv", "summary.json", "manifest.json", "draws.hbd"})
        CHECK(fs::exists(fs::path(out) / f));
    // Reusing the draws gives the same curve.
    REQUIRE(cli::run({"test-fdr", "--y", tmp / "y.csv", "--draws", out + "/draws.hbd", "--out", tmp / "fdr2"}) == cli::kOk);
    CHECK(io::read_file(fs::path(out) / "fdr_curve.csv") == io::read_file(tmp / "fdr2/fdr_curve.csv"));
}

TEST_CASE("accident table carries the exact Robbins column") {
    TempDir tmp;
    const std::string out = tmp / "acc";
    REQUIRE(cli::run({"accident", "--chains", "2", "--iterations", "30", "--burn-in", "10", "--em-starts", "2", "--out", out}) ==
            cli::kOk);
    const auto robbins = csv_column(out + "/table2.csv", "robbins");
    REQUIRE(robbins.size() == 8);
    const std::vector<double> table{0.168, 0.363, 0.527, 1.333, 1.429, 6.000, 1.750, 0.000};
    for (std::size_t y = 0; y < 8; ++y) CHECK(std::round(std::stod(robbins[y]) * 1000.0) / 1000.0 == doctest::Approx(table[y]));
}

TEST_CASE("npmle and logistic commands") {
    TempDir tmp;
    {
        std::ofstream c(tmp / "counts.csv");
        Rng rng(4);
        for (int i = 0; i < 500; ++i) c << rng.poisson(rng.uniform() < 0.7 ? 0.3 : 3.0) << "\n";
    }
    REQUIRE(cli::run({"npmle", "--counts", tmp / "counts.csv", "--k", "2", "--starts", "3", "--out", tmp / "np"}) == cli::kOk);
    CHECK(fs::exists(tmp / "np/manifest.json"));

    {
        Rng rng(5);
        std::ofstream x(tmp / "x.csv"), y(tmp / "lab.csv");
        for (int r = 0; r < 120; ++r) {
            const double a = rng.normal(), b = rng.normal(), c = rng.normal();
            x << a << "," << b << "," << c << "\n";
            y << (rng.uniform() < 1.0 / (1.0 + std::exp(-(2.0 * a - b))) ? 1 : 0) << "\n";
        }
    }
    REQUIRE(cli::run({"logistic", "--x", tmp / "x.csv", "--y", tmp / "lab.csv", "--levels", "3", "--range", "-8", "8",
                      "--iters", "40", "--burn", "10", "--out", tmp / "lg"}) == cli::kOk);
    for (const char* f : {"draws.hbd", "beta.csv", "q.csv", "manifest.json"}) CHECK(fs::exists(fs::path(tmp / "lg") / f));
    CHECK(io::load_draws(tmp / "lg/draws.hbd").theta_draws.size() == 30);
}

TEST_CASE("reproduce at smoke scale") {
    TempDir tmp;
    REQUIRE(cli::run({"reproduce", "exa00", "--scale", "smoke", "--out", tmp / "e0"}) == cli::kOk);
    CHECK(fs::exists(tmp / "e0/exa00_sd.csv"));
    CHECK(cli::run({"replay", tmp / "e0", "--out", tmp / "e0b"}) == cli::kOk);
}
