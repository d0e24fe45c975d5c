#include "moebius/csv.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace moebius {

namespace {

// Fixed "%.17g" rendering keeps output locale-free and byte-stable.
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double normal_density(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

void write_block_stats_csv(std::ostream& os,
                           const std::vector<BlockStatsRow>& rows,
                           const DistributionRule& rule) {
    os << "block,len,n_minus,n_zero,n_plus,pe_minus,pe_zero,pe_plus,"
          "pt_minus,pt_zero,pt_plus\n";
    const std::string pt_minus = num(rule.probs[0]);
    const std::string pt_zero = num(rule.probs[1]);
    const std::string pt_plus = num(rule.probs[2]);
    for (const auto& row : rows) {
        os << row.block_index << ',' << row.block_len << ',' << row.count_minus
           << ',' << row.count_zero << ',' << row.count_plus << ','
           << num(row.pe_minus) << ',' << num(row.pe_zero) << ','
           << num(row.pe_plus) << ',' << pt_minus << ',' << pt_zero << ','
           << pt_plus << '\n';
    }
}

void write_histogram_csv(std::ostream& os,
                         const std::vector<HistogramBin>& bins) {
    os << "bin_center,density,normal_density\n";
    for (const auto& bin : bins) {
        os << num(bin.center) << ',' << num(bin.density) << ','
           << num(normal_density(bin.center)) << '\n';
    }
}

void write_psd_csv(std::ostream& os, const PsdEstimate& psd) {
    os << "freq,power\n";
    for (Eigen::Index k = 0; k < psd.freqs.size(); ++k) {
        os << num(psd.freqs[k]) << ',' << num(psd.power[k]) << '\n';
    }
}

void write_mertens_csv(std::ostream& os, const MertensSeries& series,
                       std::int64_t limit) {
    os << "n,mertens,running_mean\n";
    for (std::int64_t n = 1; n <= limit && n <= series.n_max; ++n) {
        const std::int64_t m = series.value(n);
        os << n << ',' << m << ','
           << num(static_cast<double>(m) / static_cast<double>(n)) << '\n';
    }
}

}  // namespace moebius
