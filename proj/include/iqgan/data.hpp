#pragma once

#include <span>
#include <string>
#include <vector>

#include "iqgan/common.hpp"

namespace iqgan {

struct Sample {
    std::vector<double> pixels; // scaled to [0, 1]
    int label = 0;
};

// IDX-format ingestion (big-endian headers, magic 2051 for images and 2049
// for labels, raw unsigned bytes). Pixels come back as byte/255.
std::vector<Sample> load_idx(const std::string& images_path, const std::string& labels_path);

// Writes the same format back out; pixels are quantized to bytes.
void write_idx(const std::vector<Sample>& samples, const std::string& images_path,
               const std::string& labels_path, int rows = 28, int cols = 28);

struct PcaModel {
    std::vector<double> mean;                     // input dim
    std::vector<std::vector<double>> components;  // k rows, orthonormal
    std::vector<double> scale;                    // per-component max-abs of training projections

    int input_dim() const { return static_cast<int>(mean.size()); }
    int k() const { return static_cast<int>(components.size()); }

    static PcaModel identity(int dim);
};

// Top-k principal components of the sample cloud, deterministic: components
// ordered by descending eigenvalue, sign fixed so each row's first entry
// above 1e-12 in magnitude is positive, scale chosen so every training
// projection lands in [-1, 1].
PcaModel fit_pca(const std::vector<Sample>& samples, int k);

// ((x - mean) . components^T) / scale, clamped to [-1, 1] with a warning for
// out-of-training-range inputs.
std::vector<double> project(const PcaModel& model, std::span<const double> x);

// mean + (v * scale) . components (unclamped; image export clamps separately).
std::vector<double> reconstruct(const PcaModel& model, std::span<const double> v);

void save_pca(const PcaModel& model, const std::string& path);
PcaModel load_pca(const std::string& path);

} // namespace iqgan
