#include "iqgan/image_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>

namespace iqgan {

namespace {

constexpr int kGutter = 2;

struct GridBytes {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
};

GridBytes rasterize_grid(const std::vector<std::vector<double>>& images, int side, int per_row) {
    if (images.empty()) throw ValidationError("image grid: no images");
    if (side < 1) throw ValidationError("image grid: side must be >= 1");
    if (per_row < 1) throw ValidationError("image grid: per_row must be >= 1");
    for (const auto& img : images) {
        if (static_cast<int>(img.size()) != side * side) {
            throw ValidationError("image grid: image size does not match side*side");
        }
    }

    const int count = static_cast<int>(images.size());
    const int cols = std::min(per_row, count);
    const int rows = (count + cols - 1) / cols;

    GridBytes grid;
    grid.width = cols * side + (cols + 1) * kGutter;
    grid.height = rows * side + (rows + 1) * kGutter;
    grid.pixels.assign(static_cast<std::size_t>(grid.width) * grid.height, 0);

    for (int i = 0; i < count; ++i) {
        const int r = i / cols;
        const int c = i % cols;
        const int y0 = kGutter + r * (side + kGutter);
        const int x0 = kGutter + c * (side + kGutter);
        for (int y = 0; y < side; ++y) {
            for (int x = 0; x < side; ++x) {
                const double v = std::clamp(images[i][y * side + x], 0.0, 1.0);
                grid.pixels[static_cast<std::size_t>(y0 + y) * grid.width + x0 + x] =
                    static_cast<std::uint8_t>(std::lround(v * 255.0));
            }
        }
    }
    return grid;
}

std::uint32_t crc32(const std::uint8_t* data, std::size_t len, std::uint32_t crc = 0xffffffffu) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    for (std::size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xff] ^ (crc >> 8);
    return crc;
}

void push_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void push_chunk(std::vector<std::uint8_t>& out, const char type[4],
                const std::vector<std::uint8_t>& payload) {
    push_be32(out, static_cast<std::uint32_t>(payload.size()));
    std::vector<std::uint8_t> body(type, type + 4);
    body.insert(body.end(), payload.begin(), payload.end());
    out.insert(out.end(), body.begin(), body.end());
    push_be32(out, crc32(body.data(), body.size()) ^ 0xffffffffu);
}

} // namespace

void write_pgm_grid(const std::vector<std::vector<double>>& images, int side, int per_row,
                    const std::string& path) {
    const GridBytes grid = rasterize_grid(images, side, per_row);
    std::ofstream out(path);
    if (!out) throw DataError("cannot create image file: " + path);
    out << "P2\n" << grid.width << " " << grid.height << "\n255\n";
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            out << static_cast<int>(grid.pixels[static_cast<std::size_t>(y) * grid.width + x]);
            out << (x + 1 == grid.width ? '\n' : ' ');
        }
    }
    if (!out) throw DataError("failed writing image file: " + path);
}

void write_png_grid(const std::vector<std::vector<double>>& images, int side, int per_row,
                    const std::string& path) {
    const GridBytes grid = rasterize_grid(images, side, per_row);

    // one filter byte (0 = none) per scanline
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(grid.height) * (grid.width + 1));
    for (int y = 0; y < grid.height; ++y) {
        raw.push_back(0);
        const auto* row = grid.pixels.data() + static_cast<std::size_t>(y) * grid.width;
        raw.insert(raw.end(), row, row + grid.width);
    }

    std::uint32_t s1 = 1, s2 = 0;
    for (std::uint8_t b : raw) {
        s1 = (s1 + b) % 65521u;
        s2 = (s2 + s1) % 65521u;
    }
    const std::uint32_t adler = (s2 << 16) | s1;

    // zlib stream with stored (uncompressed) deflate blocks
    std::vector<std::uint8_t> idat{0x78, 0x01};
    std::size_t offset = 0;
    while (offset < raw.size()) {
        const std::size_t len = std::min<std::size_t>(65535, raw.size() - offset);
        const bool final_block = offset + len == raw.size();
        idat.push_back(final_block ? 1 : 0);
        idat.push_back(static_cast<std::uint8_t>(len & 0xff));
        idat.push_back(static_cast<std::uint8_t>(len >> 8));
        idat.push_back(static_cast<std::uint8_t>(~len & 0xff));
        idat.push_back(static_cast<std::uint8_t>((~len >> 8) & 0xff));
        idat.insert(idat.end(), raw.begin() + offset, raw.begin() + offset + len);
        offset += len;
    }
    push_be32(idat, adler);

    std::vector<std::uint8_t> ihdr;
    push_be32(ihdr, static_cast<std::uint32_t>(grid.width));
    push_be32(ihdr, static_cast<std::uint32_t>(grid.height));
    ihdr.push_back(8); // bit depth
    ihdr.push_back(0); // grayscale
    ihdr.push_back(0); // compression
    ihdr.push_back(0); // filter
    ihdr.push_back(0); // no interlace

    std::vector<std::uint8_t> png{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    push_chunk(png, "IHDR", ihdr);
    push_chunk(png, "IDAT", idat);
    push_chunk(png, "IEND", {});

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot create image file: " + path);
    out.write(reinterpret_cast<const char*>(png.data()), static_cast<std::streamsize>(png.size()));
    if (!out) throw DataError("failed writing image file: " + path);
}

} // namespace iqgan
