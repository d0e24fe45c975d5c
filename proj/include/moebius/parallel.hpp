#pragma once

#include <cstdint>
#include <functional>

namespace moebius {

// Worker count used by parallel phases: `requested` = 0 picks the hardware
// concurrency; the MOEBIUS_LAB_THREADS environment variable, when set to a
// positive value, caps the result (0 or unset leaves it alone).
unsigned resolve_workers(unsigned requested);

// Runs fn(lo, hi) over [begin, end) split into fixed-size chunks.  Chunk
// boundaries depend only on `chunk`, never on the worker count, so functions
// that write disjoint ranges produce identical output for any worker count.
void parallel_chunks(std::int64_t begin, std::int64_t end, std::int64_t chunk,
                     unsigned workers,
                     const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace moebius
