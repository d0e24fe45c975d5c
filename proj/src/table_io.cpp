#include "moebius/table_io.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "moebius/errors.hpp"

namespace moebius {

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'U', 'T', '1'};

std::array<char, 8> encode_u64_le(std::uint64_t v) {
    std::array<char, 8> out{};
    for (int i = 0; i < 8; ++i) {
        out[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    }
    return out;
}

std::uint64_t decode_u64_le(const std::array<char, 8>& in) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | static_cast<std::uint8_t>(in[static_cast<std::size_t>(i)]);
    }
    return v;
}

}  // namespace

void write_mu_cache(const MuTable& table, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw io_error("cannot open cache for writing: " + path);
    }
    os.write(kMagic.data(), kMagic.size());
    const auto n = encode_u64_le(static_cast<std::uint64_t>(table.n_max));
    os.write(n.data(), n.size());
    os.write(reinterpret_cast<const char*>(table.values.data()),
             static_cast<std::streamsize>(table.values.size()));
    os.flush();
    if (!os) {
        throw io_error("write failed: " + path);
    }
}

MuTable load_mu_cache(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw io_error("cannot open cache: " + path);
    }
    is.seekg(0, std::ios::end);
    const std::int64_t file_size = static_cast<std::int64_t>(is.tellg());
    is.seekg(0, std::ios::beg);
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
        throw io_error("not a mu cache (bad magic): " + path);
    }
    std::array<char, 8> header{};
    if (!is.read(header.data(), header.size())) {
        throw io_error("truncated cache header: " + path);
    }
    const std::uint64_t n_max = decode_u64_le(header);
    if (n_max == 0 || n_max > static_cast<std::uint64_t>(INT64_MAX)) {
        throw io_error("invalid table size in cache header: " + path);
    }
    // The payload must be exactly n_max bytes; checking against the real file
    // size also keeps a corrupted header from driving a huge allocation.
    if (file_size != static_cast<std::int64_t>(n_max) + 12) {
        throw io_error("cache size does not match its header: " + path);
    }
    MuTable table;
    table.n_max = static_cast<std::int64_t>(n_max);
    table.provenance = Provenance::Loaded;
    table.values.resize(n_max);
    if (!is.read(reinterpret_cast<char*>(table.values.data()),
                 static_cast<std::streamsize>(n_max))) {
        throw io_error("truncated cache payload: " + path);
    }
    return table;
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* bytes = static_cast<const std::uint8_t*>(data);
    std::uint64_t hash = 14695981039346656037ull;
    for (std::size_t i = 0; i < len; ++i) {
        hash ^= bytes[i];
        hash *= 1099511628211ull;
    }
    return hash;
}

}  // namespace moebius
