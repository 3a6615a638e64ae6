#include "iqgan/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace iqgan {

namespace {

struct Segment {
    double x0, y0, x1, y1;
};

// Seven-segment layout in the unit square: indices
// 0 top, 1 top-left, 2 top-right, 3 middle, 4 bottom-left, 5 bottom-right, 6 bottom.
constexpr std::array<Segment, 7> kSegments{{
    {0.25, 0.18, 0.75, 0.18},
    {0.25, 0.18, 0.25, 0.50},
    {0.75, 0.18, 0.75, 0.50},
    {0.25, 0.50, 0.75, 0.50},
    {0.25, 0.50, 0.25, 0.82},
    {0.75, 0.50, 0.75, 0.82},
    {0.25, 0.82, 0.75, 0.82},
}};

constexpr std::array<std::uint8_t, 10> kDigitMask{
    0b1110111, // 0
    0b0100100, // 1
    0b1011101, // 2
    0b1101101, // 3
    0b0101110, // 4
    0b1101011, // 5
    0b1111011, // 6
    0b0100101, // 7
    0b1111111, // 8
    0b1101111, // 9
};

double point_segment_distance(double px, double py, const Segment& s) {
    const double dx = s.x1 - s.x0;
    const double dy = s.y1 - s.y0;
    const double len_sq = dx * dx + dy * dy;
    double t = len_sq > 0 ? ((px - s.x0) * dx + (py - s.y0) * dy) / len_sq : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double cx = s.x0 + t * dx;
    const double cy = s.y0 + t * dy;
    return std::hypot(px - cx, py - cy);
}

} // namespace

std::vector<Sample> make_synthetic_digits(int per_class, std::span<const int> classes,
                                          std::uint64_t seed) {
    if (per_class < 1) throw ValidationError("make_synthetic_digits: per_class must be >= 1");
    if (classes.empty()) throw ValidationError("make_synthetic_digits: no classes requested");
    for (int c : classes) {
        if (c < 0 || c > 9) throw ValidationError("make_synthetic_digits: labels must be 0-9");
    }

    constexpr int kSide = 28;
    Rng rng(seed);
    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(per_class) * classes.size());

    for (int c : classes) {
        for (int i = 0; i < per_class; ++i) {
            // Ink fade dominates the style variation. Its exponential tail
            // means a few washed-out samples set the feature range while the
            // bulk stays tightly clustered, as in handwritten digit sets.
            const double fade = -0.045 * std::log(1.0 - rng.uniform());
            const double intensity = std::max(0.9 - fade, 0.35);
            const double shift_x = rng.normal(0.0, 0.006);
            const double shift_y = rng.normal(0.0, 0.006);
            const double thickness = std::clamp(rng.normal(0.064, 0.0015), 0.055, 0.075);

            Sample s;
            s.label = c;
            s.pixels.resize(kSide * kSide);
            for (int row = 0; row < kSide; ++row) {
                for (int col = 0; col < kSide; ++col) {
                    const double px = (col + 0.5) / kSide - shift_x;
                    const double py = (row + 0.5) / kSide - shift_y;
                    double best = 1e9;
                    for (std::size_t seg = 0; seg < kSegments.size(); ++seg) {
                        if (!(kDigitMask[c] >> seg & 1)) continue;
                        best = std::min(best, point_segment_distance(px, py, kSegments[seg]));
                    }
                    // soft-edged stroke plus per-pixel noise
                    double v = intensity * std::clamp((thickness - best) / 0.02 + 0.5, 0.0, 1.0);
                    v += rng.uniform(-0.02, 0.02);
                    s.pixels[row * kSide + col] = std::clamp(v, 0.0, 1.0);
                }
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

} // namespace iqgan
