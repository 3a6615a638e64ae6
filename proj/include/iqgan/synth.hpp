#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iqgan/data.hpp"

namespace iqgan {

// Deterministic digit-style dataset in the MNIST layout (28x28 grayscale,
// labels 0-9): seven-segment glyphs with seeded translation, intensity and
// pixel jitter. Desk-scale stand-in for experiments when no real IDX files
// are at hand.
std::vector<Sample> make_synthetic_digits(int per_class, std::span<const int> classes,
                                          std::uint64_t seed);

} // namespace iqgan
