#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "moebius/mu_table.hpp"
#include "moebius/spectral.hpp"
#include "moebius/stats.hpp"

namespace moebius {

// CSV emitters for the bulk series consumed by plotters.  Output is a pure
// function of the inputs (fixed formatting, no locale, no timestamps), so
// repeated runs are byte-identical.

// Header: block,len,n_minus,n_zero,n_plus,pe_minus,pe_zero,pe_plus,
//         pt_minus,pt_zero,pt_plus
void write_block_stats_csv(std::ostream& os,
                           const std::vector<BlockStatsRow>& rows,
                           const DistributionRule& rule);

// Header: bin_center,density,normal_density
void write_histogram_csv(std::ostream& os,
                         const std::vector<HistogramBin>& bins);

// Header: freq,power
void write_psd_csv(std::ostream& os, const PsdEstimate& psd);

// Header: n,mertens,running_mean ; rows for n = 1..limit.
void write_mertens_csv(std::ostream& os, const MertensSeries& series,
                       std::int64_t limit);

}  // namespace moebius
