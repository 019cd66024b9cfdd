#include "ksynth/png_io.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <vector>

#include "ksynth/errors.hpp"

namespace ksynth {

namespace {

// PNG needs a DEFLATE stream; stored (uncompressed) blocks are valid DEFLATE
// and keep this writer dependency-free.
std::uint32_t crc32_update(std::uint32_t crc, const std::uint8_t* data, std::size_t len) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    for (std::size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    return crc;
}

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void write_chunk(std::ofstream& os, const char type[4], const std::vector<std::uint8_t>& payload) {
    std::vector<std::uint8_t> head;
    put_u32_be(head, static_cast<std::uint32_t>(payload.size()));
    os.write(reinterpret_cast<const char*>(head.data()), 4);
    os.write(type, 4);
    if (!payload.empty())
        os.write(reinterpret_cast<const char*>(payload.data()),
                 static_cast<std::streamsize>(payload.size()));
    std::uint32_t crc = crc32_update(0xFFFFFFFFu, reinterpret_cast<const std::uint8_t*>(type), 4);
    crc = crc32_update(crc, payload.data(), payload.size()) ^ 0xFFFFFFFFu;
    std::vector<std::uint8_t> tail;
    put_u32_be(tail, crc);
    os.write(reinterpret_cast<const char*>(tail.data()), 4);
}

std::vector<std::uint8_t> deflate_stored(const std::vector<std::uint8_t>& raw) {
    std::vector<std::uint8_t> out;
    out.push_back(0x78);  // zlib header, 32K window, no preset dict
    out.push_back(0x01);
    std::size_t pos = 0;
    do {
        const std::size_t chunk = std::min<std::size_t>(raw.size() - pos, 65535);
        const bool final = pos + chunk == raw.size();
        out.push_back(final ? 0x01 : 0x00);
        out.push_back(static_cast<std::uint8_t>(chunk & 0xFF));
        out.push_back(static_cast<std::uint8_t>(chunk >> 8));
        out.push_back(static_cast<std::uint8_t>(~chunk & 0xFF));
        out.push_back(static_cast<std::uint8_t>((~chunk >> 8) & 0xFF));
        out.insert(out.end(), raw.begin() + static_cast<std::ptrdiff_t>(pos),
                   raw.begin() + static_cast<std::ptrdiff_t>(pos + chunk));
        pos += chunk;
    } while (pos < raw.size());
    std::uint32_t s1 = 1, s2 = 0;
    for (std::uint8_t byte : raw) {
        s1 = (s1 + byte) % 65521;
        s2 = (s2 + s1) % 65521;
    }
    put_u32_be(out, (s2 << 16) | s1);
    return out;
}

}  // namespace

void save_png16(const std::string& path, const Image& img, double lo, double hi) {
    const std::size_t n = img.size();
    if (!(hi > lo)) hi = lo + 1.0;
    std::vector<std::uint8_t> raw;
    raw.reserve(n * (1 + 2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        raw.push_back(0);  // filter: none
        for (std::size_t j = 0; j < n; ++j) {
            double t = (img.at(i, j) - lo) / (hi - lo);
            t = std::clamp(t, 0.0, 1.0);
            const auto v = static_cast<std::uint16_t>(t * 65535.0 + 0.5);
            raw.push_back(static_cast<std::uint8_t>(v >> 8));
            raw.push_back(static_cast<std::uint8_t>(v & 0xFF));
        }
    }

    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write PNG: " + path);
    static const std::uint8_t signature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    os.write(reinterpret_cast<const char*>(signature), 8);

    std::vector<std::uint8_t> ihdr;
    put_u32_be(ihdr, static_cast<std::uint32_t>(n));
    put_u32_be(ihdr, static_cast<std::uint32_t>(n));
    ihdr.push_back(16);  // bit depth
    ihdr.push_back(0);   // grayscale
    ihdr.push_back(0);   // deflate
    ihdr.push_back(0);   // filter method
    ihdr.push_back(0);   // no interlace
    write_chunk(os, "IHDR", ihdr);
    write_chunk(os, "IDAT", deflate_stored(raw));
    write_chunk(os, "IEND", {});
    if (!os) throw IoError("PNG write failed: " + path);
}

void save_png16(const std::string& path, const Image& img) {
    save_png16(path, img, img.min(), img.max());
}

}  // namespace ksynth
