#pragma once

#include <string>
#include <vector>

#include "iqgan/common.hpp"

namespace iqgan {

// Square grayscale images tiled into one grid with a 2-pixel gutter. Pixel
// values are clamped to [0, 1] and quantized to 8 bits at export time.

// Plain (ASCII) PGM, bit-exact across runs; the golden-file format.
void write_pgm_grid(const std::vector<std::vector<double>>& images, int side, int per_row,
                    const std::string& path);

// Minimal 8-bit grayscale PNG (stored deflate blocks, no external encoder).
void write_png_grid(const std::vector<std::vector<double>>& images, int side, int per_row,
                    const std::string& path);

} // namespace iqgan
