#include "core/raster.hpp"

#include "core/errors.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace dtsim {

namespace {

constexpr std::array<char, 8> kMagic = {'D', 'T', 'R', 'A', 'S', 'T', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "DTRAST01 serialization assumes a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in, const std::string& path, const char* field) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) fail(Errc::truncated, path + ": truncated before " + field);
    return v;
}

} // namespace

Raster read_raster(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot open raster file: " + path);

    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic)
        fail(Errc::bad_magic, path + ": not a DTRAST01 raster (bad magic)");

    Raster r;
    r.width = get_u32(in, path, "width");
    r.height = get_u32(in, path, "height");
    r.bands = get_u32(in, path, "bands");
    if (r.width == 0 || r.height == 0 || r.bands == 0)
        fail(Errc::invalid_argument, path + ": zero raster dimension");

    const std::size_t n = r.pixel_count() * r.bands;
    r.samples.resize(n);
    in.read(reinterpret_cast<char*>(r.samples.data()),
            static_cast<std::streamsize>(n * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != n * sizeof(float))
        fail(Errc::truncated, path + ": truncated payload");

    for (float v : r.samples)
        if (!std::isfinite(v))
            fail(Errc::non_finite, path + ": non-finite sample in payload");
    return r;
}

void write_raster(const Raster& raster, const std::string& path) {
    require(raster.width > 0 && raster.height > 0 && raster.bands > 0,
            Errc::invalid_argument, "write_raster: zero raster dimension");
    require(raster.samples.size() == raster.pixel_count() * raster.bands,
            Errc::dimension_mismatch, "write_raster: sample count mismatch");
    for (float v : raster.samples)
        if (!std::isfinite(v))
            fail(Errc::non_finite, "write_raster: non-finite sample");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot open for writing: " + path);
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, raster.width);
    put_u32(out, raster.height);
    put_u32(out, raster.bands);
    out.write(reinterpret_cast<const char*>(raster.samples.data()),
              static_cast<std::streamsize>(raster.samples.size() * sizeof(float)));
    if (!out) fail(Errc::io_error, "write failed: " + path);
}

std::uint64_t raster_hash(const Raster& raster) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    auto feed = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001B3ull;
        }
    };
    feed(&raster.width, sizeof raster.width);
    feed(&raster.height, sizeof raster.height);
    feed(&raster.bands, sizeof raster.bands);
    feed(raster.samples.data(), raster.samples.size() * sizeof(float));
    return h;
}

} // namespace dtsim
