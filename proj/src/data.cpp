#include "iqgan/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include <Eigen/Dense>

namespace iqgan {

namespace {

std::uint32_t read_be32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw DataError(path + ": truncated header");
    }
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
           (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;

} // namespace

std::vector<Sample> load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw DataError("cannot open image file: " + images_path);
    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw DataError("cannot open label file: " + labels_path);

    const std::uint32_t img_magic = read_be32(img, images_path);
    if (img_magic != kImageMagic) {
        throw DataError(images_path + ": bad image magic " + std::to_string(img_magic) +
                        " (expected " + std::to_string(kImageMagic) + ")");
    }
    const std::uint32_t img_count = read_be32(img, images_path);
    const std::uint32_t rows = read_be32(img, images_path);
    const std::uint32_t cols = read_be32(img, images_path);

    const std::uint32_t lab_magic = read_be32(lab, labels_path);
    if (lab_magic != kLabelMagic) {
        throw DataError(labels_path + ": bad label magic " + std::to_string(lab_magic) +
                        " (expected " + std::to_string(kLabelMagic) + ")");
    }
    const std::uint32_t lab_count = read_be32(lab, labels_path);
    if (img_count != lab_count) {
        throw DataError("image/label count mismatch: " + std::to_string(img_count) +
                        " images vs " + std::to_string(lab_count) + " labels");
    }

    const std::size_t pixel_count = std::size_t{rows} * cols;
    std::vector<Sample> samples(img_count);
    std::vector<unsigned char> buf(pixel_count);
    for (std::uint32_t i = 0; i < img_count; ++i) {
        if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixel_count))) {
            throw DataError(images_path + ": truncated at image " + std::to_string(i));
        }
        samples[i].pixels.resize(pixel_count);
        for (std::size_t p = 0; p < pixel_count; ++p) {
            samples[i].pixels[p] = buf[p] / 255.0;
        }
        char label = 0;
        if (!lab.read(&label, 1)) {
            throw DataError(labels_path + ": truncated at label " + std::to_string(i));
        }
        samples[i].label = static_cast<unsigned char>(label);
    }
    return samples;
}

void write_idx(const std::vector<Sample>& samples, const std::string& images_path,
               const std::string& labels_path, int rows, int cols) {
    const std::size_t pixel_count = static_cast<std::size_t>(rows) * cols;
    for (const Sample& s : samples) {
        if (s.pixels.size() != pixel_count) {
            throw ValidationError("write_idx: sample pixel count does not match rows*cols");
        }
    }
    std::ofstream img(images_path, std::ios::binary);
    if (!img) throw DataError("cannot create image file: " + images_path);
    std::ofstream lab(labels_path, std::ios::binary);
    if (!lab) throw DataError("cannot create label file: " + labels_path);

    write_be32(img, kImageMagic);
    write_be32(img, static_cast<std::uint32_t>(samples.size()));
    write_be32(img, static_cast<std::uint32_t>(rows));
    write_be32(img, static_cast<std::uint32_t>(cols));
    write_be32(lab, kLabelMagic);
    write_be32(lab, static_cast<std::uint32_t>(samples.size()));

    std::vector<unsigned char> buf(pixel_count);
    for (const Sample& s : samples) {
        for (std::size_t p = 0; p < pixel_count; ++p) {
            const double v = std::clamp(s.pixels[p], 0.0, 1.0);
            buf[p] = static_cast<unsigned char>(std::lround(v * 255.0));
        }
        img.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(pixel_count));
        const char label = static_cast<char>(s.label);
        lab.write(&label, 1);
    }
}

PcaModel PcaModel::identity(int dim) {
    PcaModel m;
    m.mean.assign(dim, 0.0);
    m.scale.assign(dim, 1.0);
    m.components.assign(dim, std::vector<double>(dim, 0.0));
    for (int i = 0; i < dim; ++i) m.components[i][i] = 1.0;
    return m;
}

PcaModel fit_pca(const std::vector<Sample>& samples, int k) {
    if (samples.empty()) throw ValidationError("fit_pca: no samples");
    const int dim = static_cast<int>(samples[0].pixels.size());
    if (k < 1 || k > dim) throw ValidationError("fit_pca: k must lie in [1, input dim]");
    if (static_cast<int>(samples.size()) < k + 1) {
        throw ValidationError("fit_pca: need at least k+1 samples");
    }
    for (const Sample& s : samples) {
        if (static_cast<int>(s.pixels.size()) != dim) {
            throw ValidationError("fit_pca: inconsistent sample dimensions");
        }
    }

    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd centered(n, dim);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int j = 0; j < dim; ++j) centered(i, j) = samples[static_cast<std::size_t>(i)].pixels[j];
    }
    mean = centered.colwise().mean();
    centered.rowwise() -= mean.transpose();

    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw NumericError("fit_pca: eigendecomposition failed");
    }

    // eigenvalues come back ascending; take the top k
    const Eigen::VectorXd evals = solver.eigenvalues();
    const double top = std::max(evals(dim - 1), 0.0);
    const double tol = std::max(top, 1.0) * 1e-12;
    if (evals(dim - k) <= tol) {
        throw NumericError("fit_pca: degenerate covariance (fewer than k independent directions)");
    }

    PcaModel model;
    model.mean.assign(mean.data(), mean.data() + dim);
    model.components.resize(k);
    for (int c = 0; c < k; ++c) {
        Eigen::VectorXd v = solver.eigenvectors().col(dim - 1 - c);
        for (int j = 0; j < dim; ++j) {
            if (std::abs(v(j)) > 1e-12) {
                if (v(j) < 0) v = -v;
                break;
            }
        }
        model.components[c].assign(v.data(), v.data() + dim);
    }

    model.scale.assign(k, 0.0);
    for (int c = 0; c < k; ++c) {
        const Eigen::Map<const Eigen::VectorXd> comp(model.components[c].data(), dim);
        const Eigen::VectorXd coords = centered * comp;
        model.scale[c] = coords.cwiseAbs().maxCoeff();
        if (model.scale[c] <= 0.0) {
            throw NumericError("fit_pca: component " + std::to_string(c) + " has zero spread");
        }
    }
    return model;
}

std::vector<double> project(const PcaModel& model, std::span<const double> x) {
    const int dim = model.input_dim();
    if (static_cast<int>(x.size()) != dim) {
        throw ValidationError("project: input dimension mismatch");
    }
    std::vector<double> out(model.k());
    int clamped = 0;
    for (int c = 0; c < model.k(); ++c) {
        double dot = 0.0;
        for (int j = 0; j < dim; ++j) dot += (x[j] - model.mean[j]) * model.components[c][j];
        double v = dot / model.scale[c];
        if (v < -1.0 || v > 1.0) {
            v = std::clamp(v, -1.0, 1.0);
            ++clamped;
        }
        out[c] = v;
    }
    if (clamped > 0) {
        warn("project: clamped " + std::to_string(clamped) +
             " coordinate(s) outside the training range to [-1, 1]");
    }
    return out;
}

std::vector<double> reconstruct(const PcaModel& model, std::span<const double> v) {
    if (static_cast<int>(v.size()) != model.k()) {
        throw ValidationError("reconstruct: coordinate dimension mismatch");
    }
    std::vector<double> out(model.mean);
    for (int c = 0; c < model.k(); ++c) {
        const double coeff = v[c] * model.scale[c];
        for (int j = 0; j < model.input_dim(); ++j) out[j] += coeff * model.components[c][j];
    }
    return out;
}

void save_pca(const PcaModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot create PCA file: " + path);
    out << "iqgan-pca v1\n";
    out << "dim " << model.input_dim() << "\n";
    out << "k " << model.k() << "\n";
    char buf[32];
    auto write_row = [&](const char* tag, const std::vector<double>& row) {
        out << tag;
        for (double v : row) {
            std::snprintf(buf, sizeof(buf), " %.17g", v);
            out << buf;
        }
        out << "\n";
    };
    write_row("mean", model.mean);
    write_row("scale", model.scale);
    for (const auto& comp : model.components) write_row("component", comp);
    if (!out) throw DataError("failed writing PCA file: " + path);
}

PcaModel load_pca(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open PCA file: " + path);
    std::string header;
    std::getline(in, header);
    if (header != "iqgan-pca v1") throw DataError(path + ": not an iqgan PCA file");

    std::string tag;
    int dim = 0, k = 0;
    if (!(in >> tag >> dim) || tag != "dim") throw DataError(path + ": missing dim");
    if (!(in >> tag >> k) || tag != "k") throw DataError(path + ": missing k");
    if (dim < 1 || k < 1 || k > dim) throw DataError(path + ": invalid dimensions");

    PcaModel model;
    auto read_row = [&](const char* expect, std::vector<double>& row, int count) {
        if (!(in >> tag) || tag != expect) {
            throw DataError(path + ": expected '" + expect + "' row");
        }
        row.resize(count);
        for (int i = 0; i < count; ++i) {
            if (!(in >> row[i])) throw DataError(path + ": truncated '" + expect + "' row");
        }
    };
    read_row("mean", model.mean, dim);
    read_row("scale", model.scale, k);
    model.components.resize(k);
    for (int c = 0; c < k; ++c) read_row("component", model.components[c], dim);
    return model;
}

} // namespace iqgan
