#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "moebius/mu_table.hpp"

namespace moebius {

// On-disk mu-table cache: magic bytes "MUT1", then n_max as an 8-byte
// little-endian unsigned integer, then n_max signed value bytes for
// n = 1..n_max in order.  No padding; total size is n_max + 12 bytes.

void write_mu_cache(const MuTable& table, const std::string& path);

// Validates magic, header, and exact payload length; entry values are taken
// as-is (verification against an independent sieve is the caller's job).
MuTable load_mu_cache(const std::string& path);

// 64-bit FNV-1a over a byte range; used for the compute summary checksum.
std::uint64_t fnv1a64(const void* data, std::size_t len);

}  // namespace moebius
