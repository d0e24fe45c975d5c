#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "moebius/csv.hpp"
#include "moebius/errors.hpp"
#include "moebius/mu_table.hpp"
#include "moebius/spectral.hpp"
#include "moebius/stats.hpp"
#include "moebius/table_io.hpp"

using namespace moebius;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("moebius_io_test_" +
                                                  std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("fnv-1a 64 reference vectors") {
    CHECK(fnv1a64("", 0) == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar", 6) == 0x85944171f73967e8ull);
}

TEST_CASE("cache round trip is exact and the layout is pinned") {
    TempDir dir;
    const fs::path path = dir.path / "table.mut";
    const MuTable table = build_mu_recursive(258);
    write_mu_cache(table, path.string());

    CHECK(fs::file_size(path) == 258 + 12);

    const std::string raw = slurp(path);
    REQUIRE(raw.size() == 270);
    CHECK(raw.substr(0, 4) == "MUT1");
    // n_max = 258 = 0x102, little endian
    CHECK(static_cast<unsigned char>(raw[4]) == 0x02);
    CHECK(static_cast<unsigned char>(raw[5]) == 0x01);
    for (int i = 6; i < 12; ++i) {
        REQUIRE(raw[static_cast<std::size_t>(i)] == 0);
    }
    CHECK(static_cast<signed char>(raw[12]) == 1);   // mu(1)
    CHECK(static_cast<signed char>(raw[13]) == -1);  // mu(2)

    const MuTable loaded = load_mu_cache(path.string());
    CHECK(loaded.n_max == table.n_max);
    CHECK(loaded.values == table.values);
    CHECK(loaded.provenance == Provenance::Loaded);
}

TEST_CASE("cache loading rejects malformed files") {
    TempDir dir;
    const auto write_raw = [&](const std::string& name, const std::string& bytes) {
        const fs::path p = dir.path / name;
        std::ofstream os(p, std::ios::binary);
        os << bytes;
        return p.string();
    };

    CHECK_THROWS_AS(load_mu_cache((dir.path / "missing.mut").string()), io_error);
    CHECK_THROWS_AS(load_mu_cache(write_raw("magic.mut", "NOPE")), io_error);
    CHECK_THROWS_AS(load_mu_cache(write_raw("short.mut", "MUT1\x02\x00")), io_error);

    std::string header = "MUT1";
    header += std::string("\x03\x00\x00\x00\x00\x00\x00\x00", 8);
    CHECK_THROWS_AS(load_mu_cache(write_raw("trunc.mut", header + "\x01")), io_error);
    CHECK_THROWS_AS(load_mu_cache(write_raw("extra.mut",
                                            header + std::string("\x01\xff\x00\x00", 4))),
                    io_error);

    std::string zero = "MUT1" + std::string(8, '\0');
    CHECK_THROWS_AS(load_mu_cache(write_raw("empty.mut", zero)), io_error);

    // header claiming an absurd table must not drive a huge allocation
    std::string absurd = "MUT1";
    absurd += std::string("\x00\x00\x00\x00\x00\x00\x00\x01", 8);  // 2^56
    CHECK_THROWS_AS(load_mu_cache(write_raw("absurd.mut", absurd + "\x01\x01")), io_error);
}

TEST_CASE("write failures surface as io errors") {
    const MuTable table = build_mu_recursive(4);
    CHECK_THROWS_AS(write_mu_cache(table, "/nonexistent_dir_xyz/t.mut"), io_error);
}

TEST_CASE("block stats csv schema") {
    const MuTable six = build_mu_recursive(6);
    const auto rows = block_frequencies(six, 6, 1);
    std::ostringstream os;
    write_block_stats_csv(os, rows, theoretical_distribution(false));
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line ==
          "block,len,n_minus,n_zero,n_plus,pe_minus,pe_zero,pe_plus,"
          "pt_minus,pt_zero,pt_plus");
    std::getline(is, line);
    CHECK(line.rfind("1,6,3,1,2,0.5,", 0) == 0);
    CHECK_FALSE(std::getline(is, line));  // exactly one data row
}

TEST_CASE("histogram csv carries the normal overlay") {
    Eigen::VectorXd samples(3);
    samples << -0.1, 0.0, 0.1;
    const auto bins = histogram(samples, 1, {-4.0, 4.0});
    std::ostringstream os;
    write_histogram_csv(os, bins);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "bin_center,density,normal_density");
    std::getline(is, line);
    // single bin centered at 0: density 1/8, overlay 1/sqrt(2 pi)
    CHECK(line.rfind("0,0.125,0.3989422", 0) == 0);
}

TEST_CASE("psd csv has one row per frequency bin") {
    MuTable t;
    t.n_max = 4096;
    t.values.assign(4096, 0);
    t.values[0] = 1;
    const PsdEstimate psd = welch_psd(t, 256, 0.5, Window::Hann);
    std::ostringstream os;
    write_psd_csv(os, psd);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "freq,power");
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
    }
    CHECK(rows == 129);  // 256/2 + 1
}

TEST_CASE("mertens csv rows") {
    const MertensSeries m = mertens_prefix(build_mu_recursive(10));
    std::ostringstream os;
    write_mertens_csv(os, m, 10);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,mertens,running_mean");
    std::getline(is, line);
    CHECK(line == "1,1,1");
    std::getline(is, line);
    CHECK(line == "2,0,0");
}

TEST_CASE("csv emitters are deterministic") {
    const MuTable t = build_mu_recursive(600);
    const auto rows = block_frequencies(t, 100, 6);
    std::ostringstream a;
    std::ostringstream b;
    write_block_stats_csv(a, rows, theoretical_distribution(false));
    write_block_stats_csv(b, rows, theoretical_distribution(false));
    CHECK(a.str() == b.str());
}
