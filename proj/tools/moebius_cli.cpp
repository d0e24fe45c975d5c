// Command-line surface for the mu-table pipeline: compute and cache the
// table, verify it against independent constructions, and emit the block
// statistics, Mertens series, bound reports, and power spectrum as CSV/JSON.
//
// Exit codes: 0 success, 64 usage, 65 verification failure, 74 I/O,
// 70 internal (resource exhaustion or numerical failure outside verify).

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "moebius/csv.hpp"
#include "moebius/errors.hpp"
#include "moebius/matrices.hpp"
#include "moebius/mu_table.hpp"
#include "moebius/parallel.hpp"
#include "moebius/spectral.hpp"
#include "moebius/stats.hpp"
#include "moebius/table_io.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 64;
constexpr int kExitVerifyFail = 65;
constexpr int kExitInternal = 70;
constexpr int kExitIo = 74;

constexpr std::int64_t kDefaultNMax = 20'000'000;
constexpr std::int64_t kDefaultBlockLen = 100'000;
constexpr std::int64_t kDefaultSegmentLen = 65'536;
constexpr std::int64_t kMaxStatsBlocks = 200;
constexpr std::int64_t kHistogramBins = 41;
constexpr double kHistogramHalfRange = 4.0;

struct Options {
    std::int64_t n = 0;  // 0 = unset
    std::string cache;
    std::int64_t block = kDefaultBlockLen;
    std::vector<double> alphas;
    std::int64_t segment = kDefaultSegmentLen;
    std::string format = "csv";
    std::string out = ".";
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw moebius::io_error("cannot open for writing: " + path.string());
    }
    os << text;
    os.flush();
    if (!os) {
        throw moebius::io_error("write failed: " + path.string());
    }
}

fs::path output_path(const Options& opt, const std::string& stem) {
    fs::create_directories(opt.out);
    return fs::path(opt.out) / (stem + (opt.format == "json" ? ".json" : ".csv"));
}

moebius::MuTable load_cache_or_fail(const Options& opt) {
    if (opt.cache.empty()) {
        throw std::invalid_argument("a --cache file is required for this command");
    }
    return moebius::load_mu_cache(opt.cache);
}

json bound_to_json(const char* kind, const moebius::BoundReport& one_sided,
                   const moebius::BoundReport& two_sided) {
    json j;
    j["kind"] = kind;
    j["n"] = one_sided.n;
    j["alpha"] = one_sided.alpha;
    j["confidence"] = 1.0 - one_sided.alpha;
    j["quantile"] = one_sided.quantile;
    j["bound"] = one_sided.bound;
    j["observed_m"] = one_sided.observed_m;
    j["holds"] = one_sided.holds;
    j["holds_two_sided"] = two_sided.holds;
    j["mean_half_width"] = one_sided.mean_half_width;
    return j;
}

// ---------------------------------------------------------------------------

int cmd_compute(Options opt) {
    const std::int64_t n = opt.n > 0 ? opt.n : kDefaultNMax;
    if (opt.cache.empty()) {
        opt.cache = "mu.mut";
    }
    const auto start = std::chrono::steady_clock::now();
    const moebius::MuTable table = moebius::build_mu_recursive(n);
    std::int64_t mertens = 0;
    for (std::int8_t v : table.values) {
        mertens += v;
    }
    moebius::write_mu_cache(table, opt.cache);

    json summary;
    summary["n_max"] = table.n_max;
    summary["elapsed_seconds"] = seconds_since(start);
    summary["mertens_at_n_max"] = mertens;
    summary["checksum"] =
        hex64(moebius::fnv1a64(table.values.data(), table.values.size()));
    summary["cache"] = opt.cache;
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

int cmd_verify(const Options& opt) {
    moebius::MuTable loaded;
    const bool have_cache = !opt.cache.empty();
    if (have_cache) {
        loaded = moebius::load_mu_cache(opt.cache);
    }
    const std::int64_t n = have_cache ? loaded.n_max : (opt.n > 0 ? opt.n : 1'000'000);
    const unsigned workers = moebius::resolve_workers(0);

    bool all_pass = true;
    auto report = [&all_pass](const char* check, bool pass, json detail) {
        detail["check"] = check;
        detail["pass"] = pass;
        std::cout << detail.dump() << "\n";
        all_pass = all_pass && pass;
    };

    const moebius::SieveTables sieve = moebius::build_mu_sieve(n, workers);
    const moebius::MuTable recursive = moebius::build_mu_recursive(n);

    {
        std::int64_t first_mismatch = 0;
        for (std::int64_t i = 1; i <= n; ++i) {
            if (recursive.value(i) != sieve.mu.value(i)) {
                first_mismatch = i;
                break;
            }
        }
        report("recursive_vs_sieve", first_mismatch == 0,
               first_mismatch ? json{{"first_mismatch", first_mismatch}} : json::object());
    }
    if (have_cache) {
        std::int64_t first_mismatch = 0;
        for (std::int64_t i = 1; i <= n; ++i) {
            if (loaded.value(i) != sieve.mu.value(i)) {
                first_mismatch = i;
                break;
            }
        }
        report("cache_vs_sieve", first_mismatch == 0,
               first_mismatch ? json{{"first_mismatch", first_mismatch}} : json::object());
    }
    {
        std::int64_t first_mismatch = 0;
        try {
            for (std::int64_t i = 1; i <= std::min<std::int64_t>(n, 1000); ++i) {
                if (moebius::mu_root_of_unity(i) != sieve.mu.value(i)) {
                    first_mismatch = i;
                    break;
                }
            }
        } catch (const moebius::numerical_error&) {
            first_mismatch = -1;
        }
        report("roots_of_unity", first_mismatch == 0,
               first_mismatch ? json{{"first_mismatch", first_mismatch}} : json::object());
    }
    {
        const moebius::MertensSeries mertens = moebius::mertens_prefix(sieve.mu);
        std::int64_t first_failure = 0;
        for (std::int64_t m = 1; m <= std::min<std::int64_t>(n, 128); ++m) {
            if (!moebius::verify_inverse(m, sieve.mu) ||
                moebius::redheffer_determinant(m) != mertens.value(m)) {
                first_failure = m;
                break;
            }
        }
        report("matrix_identities", first_failure == 0,
               first_failure ? json{{"first_failure", first_failure}} : json::object());
    }
    return all_pass ? kExitOk : kExitVerifyFail;
}

int cmd_stats(const Options& opt) {
    const moebius::MuTable table = load_cache_or_fail(opt);
    const std::int64_t available = table.n_max / opt.block;
    const std::int64_t blocks = std::min<std::int64_t>(kMaxStatsBlocks, available);
    const auto rows = moebius::block_frequencies(table, opt.block, blocks);
    const auto rule = moebius::theoretical_distribution(false);

    json summary;
    summary["n_max"] = table.n_max;
    summary["block_len"] = opt.block;
    summary["blocks"] = blocks;
    json outputs = json::array();

    {
        const fs::path path = output_path(opt, "block_stats");
        if (opt.format == "json") {
            json arr = json::array();
            for (const auto& row : rows) {
                arr.push_back({{"block", row.block_index},
                               {"len", row.block_len},
                               {"n_minus", row.count_minus},
                               {"n_zero", row.count_zero},
                               {"n_plus", row.count_plus},
                               {"pe_minus", row.pe_minus},
                               {"pe_zero", row.pe_zero},
                               {"pe_plus", row.pe_plus},
                               {"pt_minus", rule.probs[0]},
                               {"pt_zero", rule.probs[1]},
                               {"pt_plus", rule.probs[2]}});
            }
            write_text_file(path, arr.dump(2) + "\n");
        } else {
            std::ostringstream os;
            moebius::write_block_stats_csv(os, rows, rule);
            write_text_file(path, os.str());
        }
        outputs.push_back(path.string());
    }

    // Normalized block-sum histograms need the CLT regime; smaller caches
    // still get the block table above.
    if (opt.block >= 10'000 && available >= 30) {
        const moebius::Interval range{-kHistogramHalfRange, kHistogramHalfRange};
        const struct {
            const char* stem;
            Eigen::VectorXd samples;
        } jobs[] = {
            {"hist_mertens", moebius::normalized_mertens_samples(table, opt.block)},
            {"hist_abs", moebius::normalized_abs_sum_samples(table, opt.block)},
        };
        for (const auto& job : jobs) {
            const auto bins = moebius::histogram(job.samples, kHistogramBins, range);
            const fs::path path = output_path(opt, job.stem);
            if (opt.format == "json") {
                json arr = json::array();
                for (const auto& bin : bins) {
                    arr.push_back({{"bin_center", bin.center}, {"density", bin.density}});
                }
                write_text_file(path, arr.dump(2) + "\n");
            } else {
                std::ostringstream os;
                moebius::write_histogram_csv(os, bins);
                write_text_file(path, os.str());
            }
            outputs.push_back(path.string());
        }
    } else {
        summary["histograms_skipped"] =
            "need block length >= 10000 and >= 30 full blocks";
    }

    // Whole-table empirical probabilities for quick consistency checks.
    std::int64_t c_minus = 0;
    std::int64_t c_zero = 0;
    for (std::int8_t v : table.values) {
        c_minus += v < 0;
        c_zero += v == 0;
    }
    const double total = static_cast<double>(table.n_max);
    summary["global"] = {{"pe_minus", static_cast<double>(c_minus) / total},
                         {"pe_zero", static_cast<double>(c_zero) / total},
                         {"pe_plus", static_cast<double>(table.n_max - c_minus - c_zero) / total},
                         {"pt_minus", rule.probs[0]},
                         {"pt_zero", rule.probs[1]},
                         {"pt_plus", rule.probs[2]}};
    summary["outputs"] = outputs;
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

int cmd_mertens(const Options& opt) {
    const moebius::MuTable table = load_cache_or_fail(opt);
    const moebius::MertensSeries series = moebius::mertens_prefix(table);
    const std::int64_t limit = opt.n > 0 ? std::min(opt.n, series.n_max) : series.n_max;

    const fs::path path = output_path(opt, "mertens");
    if (opt.format == "json") {
        json arr = json::array();
        for (std::int64_t n = 1; n <= limit; ++n) {
            const std::int64_t m = series.value(n);
            arr.push_back({{"n", n},
                           {"mertens", m},
                           {"running_mean", static_cast<double>(m) / static_cast<double>(n)}});
        }
        write_text_file(path, arr.dump(2) + "\n");
    } else {
        std::ostringstream os;
        moebius::write_mertens_csv(os, series, limit);
        write_text_file(path, os.str());
    }

    json summary;
    summary["n_max"] = series.n_max;
    summary["rows"] = limit;
    summary["mertens_at_n_max"] = series.value(series.n_max);
    summary["running_mean_at_n_max"] =
        static_cast<double>(series.value(series.n_max)) /
        static_cast<double>(series.n_max);
    summary["outputs"] = json::array({path.string()});
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

int cmd_bound(Options opt) {
    if (opt.alphas.empty()) {
        opt.alphas.push_back(0.05);
    }
    const moebius::MuTable table = load_cache_or_fail(opt);
    const std::int64_t n = opt.n > 0 ? opt.n : table.n_max;
    if (n > table.n_max) {
        throw std::invalid_argument("--n exceeds the cached table");
    }
    const unsigned workers = moebius::resolve_workers(0);
    const moebius::MertensSeries series = moebius::mertens_prefix(table);
    const moebius::OmegaTable omega = moebius::build_mu_sieve(n, workers).omega;

    json reports = json::array();
    for (double alpha : opt.alphas) {
        reports.push_back(bound_to_json(
            "clt", moebius::clt_bound(n, alpha, series, false),
            moebius::clt_bound(n, alpha, series, true)));
        reports.push_back(bound_to_json(
            "chebyshev", moebius::chebyshev_bound(n, alpha, series, omega, false),
            moebius::chebyshev_bound(n, alpha, series, omega, true)));
    }

    fs::create_directories(opt.out);
    fs::path path = fs::path(opt.out) / (opt.format == "json" ? "bound.json" : "bound.csv");
    if (opt.format == "json") {
        write_text_file(path, reports.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "kind,n,alpha,quantile,bound,observed_m,holds,holds_two_sided\n";
        for (const auto& r : reports) {
            char line[256];
            std::snprintf(line, sizeof(line), "%s,%lld,%.17g,%.17g,%.17g,%lld,%d,%d\n",
                          r["kind"].get<std::string>().c_str(),
                          static_cast<long long>(r["n"].get<std::int64_t>()),
                          r["alpha"].get<double>(), r["quantile"].get<double>(),
                          r["bound"].get<double>(),
                          static_cast<long long>(r["observed_m"].get<std::int64_t>()),
                          r["holds"].get<bool>() ? 1 : 0,
                          r["holds_two_sided"].get<bool>() ? 1 : 0);
            os << line;
        }
        write_text_file(path, os.str());
    }

    json summary;
    summary["n"] = n;
    summary["reports"] = reports;
    summary["outputs"] = json::array({path.string()});
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

int cmd_psd(const Options& opt) {
    const moebius::MuTable table = load_cache_or_fail(opt);
    const unsigned workers = moebius::resolve_workers(0);
    const moebius::PsdEstimate psd = moebius::welch_psd(
        table, opt.segment, 0.5, moebius::Window::Hann, workers);

    const fs::path path = output_path(opt, "psd");
    if (opt.format == "json") {
        json arr = json::array();
        for (Eigen::Index k = 0; k < psd.freqs.size(); ++k) {
            arr.push_back({{"freq", psd.freqs[k]}, {"power", psd.power[k]}});
        }
        write_text_file(path, arr.dump(2) + "\n");
    } else {
        std::ostringstream os;
        moebius::write_psd_csv(os, psd);
        write_text_file(path, os.str());
    }

    json summary;
    summary["n_max"] = table.n_max;
    summary["segment_len"] = psd.segment_len;
    summary["n_segments"] = psd.n_segments;
    summary["peak_ratio"] = moebius::peak_ratio(psd);
    summary["outputs"] = json::array({path.string()});
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moebius function tables, verification, statistics, and spectra"};
    app.require_subcommand(1);

    Options opt;

    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--cache", opt.cache, "mu table cache file")->required();
        sub->add_option("--out", opt.out, "output directory")->capture_default_str();
        sub->add_option("--format", opt.format, "bulk output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    };

    auto* compute = app.add_subcommand("compute", "build the table and write the cache");
    compute->add_option("--n", opt.n, "table length")->check(CLI::PositiveNumber);
    compute->add_option("--cache", opt.cache, "cache file to write (default mu.mut)");

    auto* verify = app.add_subcommand(
        "verify", "check the table against independent constructions");
    verify->add_option("--n", opt.n, "table length when no cache is given")
        ->check(CLI::PositiveNumber);
    verify->add_option("--cache", opt.cache, "mu table cache file");

    auto* stats = app.add_subcommand("stats", "block frequencies and histograms");
    add_common(stats);
    stats->add_option("--block", opt.block, "block length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* mertens = app.add_subcommand("mertens", "Mertens series and running mean");
    add_common(mertens);
    mertens->add_option("--n", opt.n, "emit rows for n = 1..N (default: whole table)")
        ->check(CLI::PositiveNumber);

    auto* bound = app.add_subcommand("bound", "upper-bound reports for M(n)");
    add_common(bound);
    bound->add_option("--n", opt.n, "evaluation point (default: table length)")
        ->check(CLI::PositiveNumber);
    bound->add_option("--alpha", opt.alphas, "tail probability (repeatable, default 0.05)")
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));

    auto* psd = app.add_subcommand("psd", "Welch power spectral density");
    add_common(psd);
    psd->add_option("--segment", opt.segment, "segment length (power of two)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (compute->parsed()) {
            return cmd_compute(opt);
        }
        if (verify->parsed()) {
            return cmd_verify(opt);
        }
        if (stats->parsed()) {
            return cmd_stats(opt);
        }
        if (mertens->parsed()) {
            return cmd_mertens(opt);
        }
        if (bound->parsed()) {
            return cmd_bound(opt);
        }
        if (psd->parsed()) {
            return cmd_psd(opt);
        }
    } catch (const moebius::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
