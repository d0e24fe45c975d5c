// Acceptance suite: end-to-end checks on the full-scale tables, one
// pass/fail line per criterion.  Exits with the number of failed criteria.
//
// Usage: acceptance_tests --cli <path-to-cli-binary> --workdir <scratch-dir>

#include <sys/resource.h>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "moebius/matrices.hpp"
#include "moebius/mu_table.hpp"
#include "moebius/parallel.hpp"
#include "moebius/spectral.hpp"
#include "moebius/stats.hpp"
#include "moebius/table_io.hpp"

namespace {

namespace fs = std::filesystem;
using moebius::MuTable;

constexpr std::int64_t kFullScale = 20'000'000;
constexpr std::int64_t kCiScale = 1'000'000;

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) {
            detail += ", ";
        }
        detail += what + (ok ? " ok" : " FAILED");
    }
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

double peak_rss_gb() {
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return static_cast<double>(usage.ru_maxrss) / (1024.0 * 1024.0);  // KiB -> GiB
}

int run_command(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) {
        return -1;
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::vector<char> read_bytes(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    const std::string s = os.str();
    return {s.begin(), s.end()};
}

double sample_mean(const Eigen::VectorXd& v) { return v.mean(); }

double sample_variance(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

MuTable synthetic_sign_noise(std::int64_t n, std::uint32_t seed) {
    std::mt19937 rng(seed);
    MuTable t;
    t.n_max = n;
    t.values.resize(static_cast<std::size_t>(n));
    for (auto& v : t.values) {
        v = (rng() & 1u) ? std::int8_t{1} : std::int8_t{-1};
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    std::string workdir = "acceptance_work";
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--cli") {
            cli = argv[i + 1];
        } else if (flag == "--workdir") {
            workdir = argv[i + 1];
        }
    }
    if (cli.empty()) {
        std::cerr << "usage: acceptance_tests --cli <binary> [--workdir <dir>]\n";
        return 2;
    }
    fs::create_directories(workdir);
    const unsigned workers = moebius::resolve_workers(0);

    std::vector<std::pair<std::string, bool>> results;
    auto record = [&results](int id, const std::string& name, const Check& c) {
        std::printf("[%s] criterion %d: %s (%s)\n", c.pass ? "PASS" : "FAIL", id,
                    name.c_str(), c.detail.c_str());
        std::fflush(stdout);
        results.emplace_back(name, c.pass);
    };

    // Shared full-scale oracle table, built during criterion 1.
    moebius::SieveTables oracle;

    // ----- 1: recursive sweep vs sieve oracle, CI scale and full scale -----
    {
        Check c;
        const auto t_ci = std::chrono::steady_clock::now();
        {
            const MuTable rec = moebius::build_mu_recursive(kCiScale);
            const moebius::SieveTables sv = moebius::build_mu_sieve(kCiScale, workers);
            c.require(rec.values == sv.mu.values, "equal at 1e6");
        }
        const double ci_seconds = seconds_since(t_ci);
        c.require(ci_seconds < 30.0, "1e6 in " + fmt(ci_seconds) + "s < 30s");

        const auto t_gate = std::chrono::steady_clock::now();
        {
            const MuTable rec = moebius::build_mu_recursive(kFullScale);
            oracle = moebius::build_mu_sieve(kFullScale, workers);
            c.require(rec.values == oracle.mu.values, "equal at 2e7");
        }
        const double gate_seconds = seconds_since(t_gate);
        const double rss = peak_rss_gb();
        c.require(gate_seconds < 600.0, "2e7 in " + fmt(gate_seconds) + "s < 600s");
        c.require(rss < 1.0, "peak rss " + fmt(rss) + " GiB < 1 GiB");
        record(1, "recursive sweep matches the factorization sieve", c);
    }

    // ----- 2: primitive-roots sum agrees with the sieve for n <= 1000 -----
    {
        Check c;
        std::int64_t first_mismatch = 0;
        for (std::int64_t n = 1; n <= 1000 && first_mismatch == 0; ++n) {
            try {
                if (moebius::mu_root_of_unity(n) != oracle.mu.value(n)) {
                    first_mismatch = n;
                }
            } catch (const std::exception&) {
                first_mismatch = n;
            }
        }
        c.require(first_mismatch == 0,
                  first_mismatch == 0 ? "all n <= 1000"
                                      : "mismatch at n=" + std::to_string(first_mismatch));
        record(2, "roots-of-unity oracle", c);
    }

    // ----- 3: inverse-pair and determinant identities for n <= 128 -----
    {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        const moebius::MertensSeries mertens = [&] {
            MuTable head;
            head.n_max = 128;
            head.values.assign(oracle.mu.values.begin(), oracle.mu.values.begin() + 128);
            return moebius::mertens_prefix(head);
        }();
        std::int64_t first_failure = 0;
        for (Eigen::Index n = 1; n <= 128 && first_failure == 0; ++n) {
            if (!moebius::verify_inverse(n, oracle.mu) ||
                moebius::redheffer_determinant(n) != mertens.value(n)) {
                first_failure = n;
            }
        }
        const double elapsed = seconds_since(t0);
        c.require(first_failure == 0,
                  first_failure == 0 ? "U*V = I and det(R_n) = M(n) for n <= 128"
                                     : "failure at n=" + std::to_string(first_failure));
        c.require(elapsed < 10.0, fmt(elapsed) + "s < 10s");
        record(3, "matrix identities", c);
    }

    // ----- 4: probability that M(n) exceeds sqrt(n) -----
    {
        Check c;
        const double p = moebius::mertens_type_prob(1.0);
        c.require(p >= 0.0993 && p <= 0.1003, "P = " + fmt(p, 6) + " in [0.0993, 0.1003]");
        record(4, "Mertens-type exceedance probability", c);
    }

    // ----- 5: exceedance trichotomy boundary -----
    {
        Check c;
        const double q = moebius::kSquarefreeDensity;
        c.require(std::abs(moebius::abs_sum_exceedance(q, 100) - 0.5) <= 1e-10,
                  "boundary at n=1e2");
        c.require(std::abs(moebius::abs_sum_exceedance(q, 1'000'000) - 0.5) <= 1e-10,
                  "boundary at n=1e6");
        const double above = moebius::abs_sum_exceedance(q + 0.1, 100'000'000);
        const double below = moebius::abs_sum_exceedance(q - 0.1, 100'000'000);
        c.require(above < 1e-15, "C above density: " + fmt(above, 3) + " < 1e-15");
        c.require(below > 1.0 - 1e-15, "C below density: 1-" + fmt(1.0 - below, 3) + " > 1-1e-15");
        record(5, "squarefree-count exceedance limits", c);
    }

    // ----- 6: empirical vs theoretical outcome probabilities -----
    {
        Check c;
        const auto rule = moebius::theoretical_distribution(false);
        std::int64_t c_minus = 0;
        std::int64_t c_zero = 0;
        for (std::int8_t v : oracle.mu.values) {
            c_minus += v < 0;
            c_zero += v == 0;
        }
        const double total = static_cast<double>(kFullScale);
        const double dev_minus = std::abs(c_minus / total - rule.probs[0]);
        const double dev_zero = std::abs(c_zero / total - rule.probs[1]);
        const double dev_plus =
            std::abs((kFullScale - c_minus - c_zero) / total - rule.probs[2]);
        const double global_dev = std::max({dev_minus, dev_zero, dev_plus});
        c.require(global_dev < 5e-4, "global max|pe-pt| = " + fmt(global_dev) + " < 5e-4");

        const auto rows = moebius::block_frequencies(oracle.mu, 100'000, 200);
        double block_dev = 0.0;
        for (const auto& row : rows) {
            block_dev = std::max({block_dev, std::abs(row.pe_minus - rule.probs[0]),
                                  std::abs(row.pe_zero - rule.probs[1]),
                                  std::abs(row.pe_plus - rule.probs[2])});
        }
        c.require(rows.size() == 200, "200 blocks of 1e5");
        c.require(block_dev < 1e-2, "block max|pe-pt| = " + fmt(block_dev) + " < 1e-2");
        record(6, "outcome probability consistency", c);
    }

    // ----- 7: squarefree density residuals -----
    {
        Check c;
        for (std::int64_t x : {10'000LL, 100'000LL, 1'000'000LL, 10'000'000LL}) {
            const double r = moebius::squarefree_residual(oracle.mu, x);
            c.require(std::abs(r) < 2.0, "x=1e" + std::to_string((int)std::log10((double)x)) +
                                             ": " + fmt(r, 3));
        }
        record(7, "squarefree density error term", c);
    }

    // ----- 8: CLT shape of normalized block sums of mu -----
    {
        Check c;
        const Eigen::VectorXd samples =
            moebius::normalized_mertens_samples(oracle.mu, 100'000);
        c.require(samples.size() == 200, "200 samples");
        const double mean = sample_mean(samples);
        const double variance = sample_variance(samples);
        c.require(mean >= -0.25 && mean <= 0.25, "mean = " + fmt(mean) + " in [-0.25, 0.25]");
        c.require(variance >= 0.7 && variance <= 1.4,
                  "variance = " + fmt(variance) + " in [0.7, 1.4]");
        const auto bins = moebius::histogram(samples, 41, {-4.0, 4.0});
        double max_dev = 0.0;
        for (const auto& bin : bins) {
            if (std::abs(bin.center) <= 2.0) {
                const double phi = std::exp(-0.5 * bin.center * bin.center) /
                                   std::sqrt(2.0 * std::numbers::pi);
                max_dev = std::max(max_dev, std::abs(bin.density - phi));
            }
        }
        c.require(max_dev <= 0.15,
                  "histogram max|density-phi| on [-2,2] = " + fmt(max_dev) + " <= 0.15");
        record(8, "normalized Mertens block sums vs standard normal", c);
    }

    // ----- 9: CLT shape of standardized squarefree block counts -----
    {
        Check c;
        const Eigen::VectorXd samples =
            moebius::normalized_abs_sum_samples(oracle.mu, 100'000);
        c.require(samples.size() == 200, "200 samples");
        const double variance = sample_variance(samples);
        c.require(variance >= 0.7 && variance <= 1.4,
                  "variance = " + fmt(variance) + " in [0.7, 1.4]");
        record(9, "standardized squarefree block counts", c);
    }

    // ----- 10: spectral flatness of the mu sequence -----
    {
        Check c;
        const moebius::PsdEstimate psd_mu =
            moebius::welch_psd(oracle.mu, 65'536, 0.5, moebius::Window::Hann, workers);
        c.require(psd_mu.n_segments >= 256,
                  std::to_string(psd_mu.n_segments) + " segments >= 256");
        const double ratio_mu = moebius::peak_ratio(psd_mu);
        c.require(ratio_mu < 2.0, "mu peak ratio = " + fmt(ratio_mu) + " < 2");

        const MuTable noise = synthetic_sign_noise(kFullScale, 0x5eed);
        const moebius::PsdEstimate psd_noise =
            moebius::welch_psd(noise, 65'536, 0.5, moebius::Window::Hann, workers);
        const double ratio_noise = moebius::peak_ratio(psd_noise);
        const double rel = std::abs(ratio_noise - ratio_mu) / ratio_mu;
        c.require(rel <= 0.20, "i.i.d. noise ratio " + fmt(ratio_noise) +
                                   " within 20% of mu ratio (" + fmt(100.0 * rel, 3) + "%)");
        record(10, "spectral flatness", c);
    }

    // ----- 11: determinism and fault detection through the CLI -----
    {
        Check c;
        const fs::path dir = fs::path(workdir);
        const std::string cache_a = (dir / "det_a.mut").string();
        const std::string cache_b = (dir / "det_b.mut").string();
        const std::string log = (dir / "cli_log.txt").string();
        const std::int64_t n = 50'000;

        int rc = run_command(cli + " compute --n " + std::to_string(n) + " --cache " +
                             cache_a + " > " + log + " 2>&1");
        c.require(rc == 0, "compute A exit " + std::to_string(rc));
        rc = run_command(cli + " compute --n " + std::to_string(n) + " --cache " +
                         cache_b + " > " + log + " 2>&1");
        c.require(rc == 0, "compute B exit " + std::to_string(rc));
        c.require(read_bytes(cache_a) == read_bytes(cache_b), "caches byte-identical");

        rc = run_command(cli + " stats --cache " + cache_a + " --block 1000 --out " +
                         (dir / "csv_a").string() + " > " + log + " 2>&1");
        c.require(rc == 0, "stats A exit " + std::to_string(rc));
        rc = run_command(cli + " stats --cache " + cache_a + " --block 1000 --out " +
                         (dir / "csv_b").string() + " > " + log + " 2>&1");
        c.require(rc == 0, "stats B exit " + std::to_string(rc));
        c.require(read_bytes(dir / "csv_a" / "block_stats.csv") ==
                      read_bytes(dir / "csv_b" / "block_stats.csv"),
                  "csv byte-identical");

        rc = run_command(cli + " verify --cache " + cache_a + " > " + log + " 2>&1");
        c.require(rc == 0, "clean cache verifies");

        const std::vector<char> clean = read_bytes(cache_a);
        std::mt19937 rng(0xfa017);
        std::uniform_int_distribution<std::int64_t> pos(12, 12 + n - 1);
        std::uniform_int_distribution<int> byte(0, 255);
        int detected = 0;
        const int injections = 100;
        const std::string corrupted_path = (dir / "det_corrupt.mut").string();
        for (int trial = 0; trial < injections; ++trial) {
            std::vector<char> corrupted = clean;
            const std::int64_t at = pos(rng);
            char replacement = static_cast<char>(byte(rng));
            while (replacement == corrupted[static_cast<std::size_t>(at)]) {
                replacement = static_cast<char>(byte(rng));
            }
            corrupted[static_cast<std::size_t>(at)] = replacement;
            {
                std::ofstream os(corrupted_path, std::ios::binary | std::ios::trunc);
                os.write(corrupted.data(), static_cast<std::streamsize>(corrupted.size()));
            }
            rc = run_command(cli + " verify --cache " + corrupted_path + " > " + log +
                             " 2>&1");
            detected += rc != 0;
        }
        c.require(detected == injections, std::to_string(detected) + "/" +
                                              std::to_string(injections) +
                                              " corruptions detected");
        record(11, "determinism and fault detection", c);
    }

    int failures = 0;
    for (const auto& [name, pass] : results) {
        failures += !pass;
    }
    std::printf("%zu/%zu criteria passed\n", results.size() - failures, results.size());
    return failures;
}
