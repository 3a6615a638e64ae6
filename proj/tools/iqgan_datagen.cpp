// Writes the deterministic synthetic digit dataset in IDX format so the
// training walkthrough works without downloading anything.

#include <cstdio>
#include <filesystem>

#include <CLI11.hpp>

#include "iqgan/synth.hpp"

using namespace iqgan;

int main(int argc, char** argv) {
    CLI::App app{"synthetic digit dataset generator (MNIST IDX layout)"};
    std::string out_dir = "data";
    int per_class = 512;
    std::vector<int> classes{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::uint64_t seed = 0;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--per-class", per_class, "samples per class");
    app.add_option("--classes", classes, "labels to generate")->delimiter(',');
    app.add_option("--seed", seed, "dataset seed");

    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(out_dir);
        const auto samples = make_synthetic_digits(per_class, classes, seed);
        const std::string images = out_dir + "/train-images.idx";
        const std::string labels = out_dir + "/train-labels.idx";
        write_idx(samples, images, labels);
        std::printf("wrote %zu samples to %s / %s\n", samples.size(), images.c_str(),
                    labels.c_str());
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
