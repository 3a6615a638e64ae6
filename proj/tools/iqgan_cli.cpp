// Command-line front end: pretrain / train / generate / cost / ablate /
// noise-sweep. Exit codes: 0 success, 2 config error, 3 data error,
// 4 numeric failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iqgan/image_io.hpp"
#include "iqgan/training.hpp"

namespace fs = std::filesystem;
using namespace iqgan;

namespace {

struct RunConfig {
    // data
    std::string images_path;
    std::string labels_path;
    std::vector<int> classes;
    // artifacts
    std::string out_dir = "out";
    std::string theta_s_path;
    std::string theta_g_path;
    std::string pca_path;
    // model + optimization
    TrainConfig train;
    std::string ansatz_name = "none";
    std::string encoder_name = "trainable";
    // experiment extras
    std::vector<std::string> ansatz_list;
    std::vector<std::uint64_t> seeds;
    std::vector<int> sizes;
    int trajectories = 1000;
    int count = 16; // generated images
    int grid_shots = 512;
    bool png = false;
    bool csv = false;
};

struct ThetaS {
    EncoderParams params;
    bool pretrained = false;
};

void save_theta_s(const ThetaS& theta, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot create theta_s file: " + path);
    out << "iqgan-theta-s v1\n";
    out << "n " << theta.params.theta_s.size() << "\n";
    out << "pretrained " << (theta.pretrained ? 1 : 0) << "\n";
    out << "values";
    char buf[32];
    for (double v : theta.params.theta_s) {
        std::snprintf(buf, sizeof(buf), " %.17g", v);
        out << buf;
    }
    out << "\n";
}

ThetaS load_theta_s(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open theta_s file: " + path);
    std::string header;
    std::getline(in, header);
    if (header != "iqgan-theta-s v1") throw DataError(path + ": not an iqgan theta_s file");
    std::string tag;
    int n = 0, pretrained = 0;
    if (!(in >> tag >> n) || tag != "n" || n < 1) throw DataError(path + ": missing n");
    if (!(in >> tag >> pretrained) || tag != "pretrained") {
        throw DataError(path + ": missing pretrained flag");
    }
    if (!(in >> tag) || tag != "values") throw DataError(path + ": missing values");
    ThetaS theta;
    theta.pretrained = pretrained != 0;
    theta.params.theta_s.resize(n);
    for (int i = 0; i < n; ++i) {
        if (!(in >> theta.params.theta_s[i])) throw DataError(path + ": truncated values");
    }
    return theta;
}

void save_theta_g(const GeneratorParams& params, int n, int b, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot create theta_g file: " + path);
    out << "iqgan-theta-g v1\n";
    out << "n " << n << "\n";
    out << "b " << b << "\n";
    out << "ansatz " << ansatz_name(params.ansatz) << "\n";
    out << "values";
    char buf[32];
    for (double v : params.theta_g) {
        std::snprintf(buf, sizeof(buf), " %.17g", v);
        out << buf;
    }
    out << "\n";
}

struct ThetaG {
    GeneratorParams params;
    int n = 0;
    int b = 0;
};

ThetaG load_theta_g(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open theta_g file: " + path);
    std::string header;
    std::getline(in, header);
    if (header != "iqgan-theta-g v1") throw DataError(path + ": not an iqgan theta_g file");
    std::string tag, name;
    ThetaG theta;
    if (!(in >> tag >> theta.n) || tag != "n" || theta.n < 1) throw DataError(path + ": missing n");
    if (!(in >> tag >> theta.b) || tag != "b" || theta.b < 1) throw DataError(path + ": missing b");
    if (!(in >> tag >> name) || tag != "ansatz") throw DataError(path + ": missing ansatz");
    theta.params.ansatz = parse_ansatz(name);
    if (!(in >> tag) || tag != "values") throw DataError(path + ": missing values");
    theta.params.theta_g.resize(generator_param_count(theta.n, theta.b, theta.params.ansatz));
    for (double& v : theta.params.theta_g) {
        if (!(in >> v)) throw DataError(path + ": truncated values");
    }
    return theta;
}

void write_manifest(const std::string& path, const std::map<std::string, std::string>& entries) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot create manifest: " + path);
    out << "iqgan-manifest v1\n";
    for (const auto& [key, value] : entries) out << key << " = " << value << "\n";
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void require_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw ValidationError("cannot create output directory: " + cfg.out_dir);
    const fs::path probe = fs::path(cfg.out_dir) / ".write_probe";
    std::ofstream f(probe);
    if (!f) throw ValidationError("output directory not writable: " + cfg.out_dir);
    f.close();
    fs::remove(probe, ec);
}

void require_file(const std::string& path, const char* what) {
    if (path.empty()) throw ValidationError(std::string(what) + " path is required");
    if (!fs::exists(path)) throw ValidationError(std::string(what) + " not found: " + path);
}

std::vector<Sample> load_class_subset(const RunConfig& cfg) {
    const std::vector<Sample> all = load_idx(cfg.images_path, cfg.labels_path);
    std::vector<Sample> subset;
    const std::set<int> wanted(cfg.classes.begin(), cfg.classes.end());
    for (const Sample& s : all) {
        if (wanted.count(s.label)) subset.push_back(s);
    }
    if (subset.empty()) {
        throw DataError("no samples found for the requested class filter");
    }
    return subset;
}

void apply_common(RunConfig& cfg) {
    cfg.train.ansatz = parse_ansatz(cfg.ansatz_name);
    if (cfg.encoder_name == "trainable") {
        cfg.train.encoder_mode = EncoderMode::TRAINABLE;
    } else if (cfg.encoder_name == "fixed") {
        cfg.train.encoder_mode = EncoderMode::FIXED;
    } else {
        throw ValidationError("unknown encoder mode '" + cfg.encoder_name +
                              "' (expected trainable|fixed)");
    }
    cfg.train.validate();
}

void common_manifest_entries(const RunConfig& cfg, std::map<std::string, std::string>& m) {
    m["seed"] = std::to_string(cfg.train.seed);
    m["n"] = std::to_string(cfg.train.n);
    m["blocks"] = std::to_string(cfg.train.b);
    m["ansatz"] = ansatz_name(cfg.train.ansatz);
    m["encoder"] = cfg.train.encoder_mode == EncoderMode::FIXED ? "fixed" : "trainable";
    m["encoder_frozen"] = cfg.train.encoder_frozen ? "1" : "0";
    m["lr"] = format_double(cfg.train.learning_rate);
    m["batch_size"] = std::to_string(cfg.train.batch_size);
    m["epochs"] = std::to_string(cfg.train.epochs);
    m["t_max"] = std::to_string(cfg.train.t_max);
    m["shots"] = std::to_string(cfg.train.shots);
    m["p_bit"] = format_double(cfg.train.noise.p_bit);
    m["p_phase"] = format_double(cfg.train.noise.p_phase);
    if (!cfg.images_path.empty()) m["images"] = cfg.images_path;
    if (!cfg.labels_path.empty()) m["labels"] = cfg.labels_path;
    if (!cfg.classes.empty()) {
        std::string list;
        for (int c : cfg.classes) list += (list.empty() ? "" : ",") + std::to_string(c);
        m["classes"] = list;
    }
}

// PCA + projection for the selected subset; reuses a serialized model when given.
struct Projected {
    PcaModel pca;
    std::vector<std::vector<double>> inputs;
    std::vector<int> labels;
    std::string pca_source;
};

Projected project_subset(const RunConfig& cfg, const std::vector<Sample>& subset) {
    Projected result;
    if (!cfg.pca_path.empty()) {
        result.pca = load_pca(cfg.pca_path);
        result.pca_source = cfg.pca_path;
        if (result.pca.k() != cfg.train.n) {
            throw ValidationError("PCA model k=" + std::to_string(result.pca.k()) +
                                  " does not match n=" + std::to_string(cfg.train.n));
        }
    } else {
        result.pca = fit_pca(subset, cfg.train.n);
        result.pca_source = "fit on selected subset";
    }
    result.inputs.reserve(subset.size());
    result.labels.reserve(subset.size());
    for (const Sample& s : subset) {
        result.inputs.push_back(project(result.pca, s.pixels));
        result.labels.push_back(s.label);
    }
    return result;
}

std::vector<double> fixed_mode_coords(std::span<const double> p0) {
    std::vector<double> coords(p0.size());
    for (std::size_t q = 0; q < p0.size(); ++q) {
        const double alpha = 2.0 * std::acos(std::sqrt(std::clamp(p0[q], 0.0, 1.0)));
        coords[q] = std::clamp(2.0 * alpha / std::numbers::pi - 1.0, -1.0, 1.0);
    }
    return coords;
}

// Decodes `count` images; with shots > 0 each image comes from its own
// measurement estimate of the qubit probabilities, so samples vary.
std::vector<std::vector<double>> sample_images(const StateVector& generated,
                                               const EncoderParams& theta_s, EncoderMode mode,
                                               const PcaModel& pca, int count, int shots,
                                               std::uint64_t seed) {
    std::vector<std::vector<double>> images;
    images.reserve(count);
    Rng rng(seed);
    std::vector<double> exact_p0(generated.num_qubits);
    for (int q = 0; q < generated.num_qubits; ++q) {
        exact_p0[q] = qubit_zero_probability(generated, q);
    }
    for (int i = 0; i < count; ++i) {
        const std::vector<double> p0 =
            shots > 0 ? measured_zero_probabilities(generated, shots, rng.next_u64())
                      : exact_p0;
        const std::vector<double> coords = mode == EncoderMode::FIXED
                                               ? fixed_mode_coords(p0)
                                               : decode_coords_from_p0(p0, theta_s);
        std::vector<double> image = reconstruct(pca, coords);
        for (double& v : image) v = std::clamp(v, 0.0, 1.0);
        images.push_back(std::move(image));
    }
    return images;
}

int image_side(const PcaModel& pca) {
    const int side = static_cast<int>(std::lround(std::sqrt(pca.input_dim())));
    if (side * side != pca.input_dim()) {
        throw ValidationError("image export expects square images");
    }
    return side;
}

int cmd_pretrain(RunConfig& cfg) {
    apply_common(cfg);
    require_file(cfg.images_path, "image file");
    require_file(cfg.labels_path, "label file");
    if (cfg.classes.size() < 2) {
        throw ValidationError("pretrain needs at least 2 classes (--classes a,b)");
    }
    if (cfg.train.n > 4) throw ValidationError("pretrain is capped at n = 4 qubits");
    require_out_dir(cfg);

    const std::vector<Sample> subset = load_class_subset(cfg);
    const Projected data = project_subset(cfg, subset);

    const EncoderParams init{std::vector<double>(cfg.train.n, 1.0)};
    const PretrainResult result = pretrain_encoder(data.inputs, data.labels, init, cfg.train);

    const fs::path out(cfg.out_dir);
    save_theta_s(ThetaS{result.theta_s, true}, (out / "theta_s.txt").string());
    save_pca(data.pca, (out / "pca.txt").string());
    {
        std::ofstream trace(out / "pretrain_trace.csv");
        trace << "iter,objective\n";
        for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
            trace << i << "," << format_double(result.objective_trace[i]) << "\n";
        }
    }
    std::map<std::string, std::string> manifest;
    manifest["command"] = "pretrain";
    common_manifest_entries(cfg, manifest);
    manifest["pca_source"] = data.pca_source;
    manifest["objective_initial"] = format_double(result.objective_trace.front());
    manifest["objective_final"] = format_double(result.objective_trace.back());
    manifest["theta_s"] = "theta_s.txt";
    manifest["pca"] = "pca.txt";
    write_manifest((out / "manifest.txt").string(), manifest);

    std::printf("pretrain: objective %.6g -> %.6g, theta_s written to %s\n",
                result.objective_trace.front(), result.objective_trace.back(),
                (out / "theta_s.txt").string().c_str());
    return 0;
}

int cmd_train(RunConfig& cfg) {
    apply_common(cfg);
    require_file(cfg.images_path, "image file");
    require_file(cfg.labels_path, "label file");
    if (cfg.classes.size() != 1) {
        throw ValidationError("train expects exactly one target class (--classes c)");
    }
    ThetaS theta{EncoderParams{std::vector<double>(cfg.train.n, 1.0)}, false};
    if (!cfg.theta_s_path.empty()) {
        require_file(cfg.theta_s_path, "theta_s artifact");
        theta = load_theta_s(cfg.theta_s_path);
        if (static_cast<int>(theta.params.theta_s.size()) != cfg.train.n) {
            throw ValidationError("theta_s artifact length does not match n");
        }
        // reuse the pretraining PCA by default so the feature space matches
        if (cfg.pca_path.empty()) {
            const fs::path sibling = fs::path(cfg.theta_s_path).parent_path() / "pca.txt";
            if (fs::exists(sibling)) cfg.pca_path = sibling.string();
        }
    }
    cfg.train.encoder_pretrained = theta.pretrained;
    if (cfg.train.encoder_mode == EncoderMode::TRAINABLE && !theta.pretrained &&
        !cfg.train.allow_unpretrained_encoder) {
        throw ValidationError(
            "trainable encoder without a pretrained theta_s artifact; run `iqgan pretrain` "
            "first or pass --allow-unpretrained-encoder");
    }
    require_out_dir(cfg);

    const std::vector<Sample> subset = load_class_subset(cfg);
    const Projected data = project_subset(cfg, subset);

    const TrainResult result = train_gan(data.inputs, theta.params, cfg.train);

    const fs::path out(cfg.out_dir);
    write_metrics_csv(result.records, (out / "metrics.csv").string());
    save_theta_g(result.theta_g, cfg.train.n, cfg.train.b, (out / "theta_g.txt").string());
    save_theta_s(ThetaS{result.theta_s, theta.pretrained}, (out / "theta_s.txt").string());
    save_pca(data.pca, (out / "pca.txt").string());

    const StateVector generated =
        run_circuit(build_generator(result.theta_g, cfg.train.n, cfg.train.b));
    const auto images =
        sample_images(generated, result.theta_s, cfg.train.encoder_mode, data.pca, 8,
                      cfg.grid_shots, Rng(cfg.train.seed).child(77).next_u64());
    const int side = image_side(data.pca);
    write_pgm_grid(images, side, 4, (out / "samples.pgm").string());
    if (cfg.png) write_png_grid(images, side, 4, (out / "samples.png").string());

    const Circuit enc_probe = build_encoder_for_mode(
        cfg.train.encoder_mode, std::vector<double>(cfg.train.n, 0.0), result.theta_s);
    const Circuit full = assemble_gan_circuit(
        enc_probe, build_generator(result.theta_g, cfg.train.n, cfg.train.b));

    std::map<std::string, std::string> manifest;
    manifest["command"] = "train";
    common_manifest_entries(cfg, manifest);
    manifest["pca_source"] = data.pca_source;
    manifest["theta_s_pretrained"] = theta.pretrained ? "1" : "0";
    manifest["final_epoch_fidelity"] = format_double(result.records.back().fidelity);
    manifest["final_fidelity_full_dataset"] = format_double(result.final_fidelity);
    manifest["qubits"] = std::to_string(full.num_qubits);
    manifest["one_qubit_gates"] = std::to_string(full.one_qubit_gate_count());
    manifest["two_qubit_gates"] = std::to_string(full.multi_qubit_gate_count());
    manifest["generator_parameters"] =
        std::to_string(static_cast<int>(result.theta_g.theta_g.size()));
    manifest["metrics"] = "metrics.csv";
    manifest["theta_g"] = "theta_g.txt";
    manifest["samples"] = "samples.pgm";
    write_manifest((out / "manifest.txt").string(), manifest);

    if (cfg.train.noise.any()) {
        std::vector<StateVector> refs;
        refs.reserve(data.inputs.size());
        for (const auto& x : data.inputs) {
            refs.push_back(
                run_circuit(build_encoder_for_mode(cfg.train.encoder_mode, x, result.theta_s)));
        }
        const TrajectoryEstimate est = noisy_mean_fidelity(
            build_generator(result.theta_g, cfg.train.n, cfg.train.b), refs, cfg.train.noise,
            cfg.trajectories, Rng(cfg.train.seed).child(88).next_u64());
        std::printf("noisy evaluation: fidelity %.6g +- %.2g (%d trajectories)\n", est.mean,
                    est.std_error, est.trajectories);
    }

    std::printf("train: final epoch fidelity %.6g (full dataset %.6g), artifacts in %s\n",
                result.records.back().fidelity, result.final_fidelity, cfg.out_dir.c_str());
    return 0;
}

int cmd_generate(RunConfig& cfg) {
    apply_common(cfg);
    require_file(cfg.theta_g_path, "theta_g artifact");
    require_file(cfg.pca_path, "PCA model");
    if (cfg.count < 1) throw ValidationError("--count must be >= 1");
    ThetaS theta{EncoderParams{}, false};
    if (cfg.train.encoder_mode == EncoderMode::TRAINABLE) {
        require_file(cfg.theta_s_path, "theta_s artifact");
        theta = load_theta_s(cfg.theta_s_path);
    }
    require_out_dir(cfg);

    const ThetaG generator = load_theta_g(cfg.theta_g_path);
    const PcaModel pca = load_pca(cfg.pca_path);
    if (pca.k() != generator.n) {
        throw ValidationError("PCA model k does not match the generator register");
    }
    if (cfg.train.encoder_mode == EncoderMode::TRAINABLE &&
        static_cast<int>(theta.params.theta_s.size()) != generator.n) {
        throw ValidationError("theta_s artifact length does not match the generator register");
    }

    const StateVector generated =
        run_circuit(build_generator(generator.params, generator.n, generator.b));
    const auto images = sample_images(generated, theta.params, cfg.train.encoder_mode, pca,
                                      cfg.count, cfg.train.shots,
                                      Rng(cfg.train.seed).child(99).next_u64());

    const fs::path out(cfg.out_dir);
    const int side = image_side(pca);
    write_pgm_grid(images, side, 4, (out / "generated.pgm").string());
    if (cfg.png) write_png_grid(images, side, 4, (out / "generated.png").string());

    std::map<std::string, std::string> manifest;
    manifest["command"] = "generate";
    common_manifest_entries(cfg, manifest);
    manifest["count"] = std::to_string(cfg.count);
    manifest["theta_g"] = cfg.theta_g_path;
    manifest["pca"] = cfg.pca_path;
    manifest["output"] = "generated.pgm";
    write_manifest((out / "manifest.txt").string(), manifest);

    std::printf("generate: %d image(s) written to %s\n", cfg.count,
                (out / "generated.pgm").string().c_str());
    return 0;
}

int cmd_cost(const std::string& scheme_str, int n, int b, bool csv) {
    const Scheme scheme = parse_scheme(scheme_str);
    const CostReport r = hardware_cost(scheme, n, b);
    if (csv) {
        std::printf("%d,%d,%d,%d\n", r.qubits, r.one_qubit_gates, r.two_qubit_gates,
                    r.parameters);
    } else {
        std::printf("%-8s %7s %5s %5s %7s\n", "scheme", "qubits", "1qg", "2qg", "params");
        std::printf("%-8s %7d %5d %5d %7d\n", scheme_name(scheme), r.qubits, r.one_qubit_gates,
                    r.two_qubit_gates, r.parameters);
    }
    return 0;
}

int cmd_ablate(RunConfig& cfg) {
    apply_common(cfg);
    require_file(cfg.images_path, "image file");
    require_file(cfg.labels_path, "label file");
    if (cfg.classes.size() != 1) {
        throw ValidationError("ablate expects exactly one target class (--classes c)");
    }
    if (cfg.ansatz_list.size() < 2) {
        throw ValidationError("ablate needs at least 2 ansatz kinds (--ansatz-list a,b)");
    }
    if (cfg.seeds.size() < 3) throw ValidationError("ablate needs at least 3 seeds (--seeds)");
    std::vector<Ansatz> kinds;
    kinds.reserve(cfg.ansatz_list.size());
    for (const std::string& name : cfg.ansatz_list) kinds.push_back(parse_ansatz(name));
    require_out_dir(cfg);

    const std::vector<Sample> subset = load_class_subset(cfg);
    const Projected data = project_subset(cfg, subset);

    const auto rows = ablation_run(data.inputs, cfg.train, kinds, cfg.seeds);

    const fs::path out(cfg.out_dir);
    {
        std::ofstream report(out / "ablation.csv");
        report << "ansatz,mean_fidelity,stddev,1qg,2qg,params\n";
        for (const AblationRow& row : rows) {
            report << ansatz_name(row.ansatz) << "," << format_double(row.mean_fidelity) << ","
                   << format_double(row.stddev) << "," << row.one_qubit_gates << ","
                   << row.two_qubit_gates << "," << row.parameters << "\n";
        }
    }
    std::map<std::string, std::string> manifest;
    manifest["command"] = "ablate";
    common_manifest_entries(cfg, manifest);
    std::string seeds;
    for (std::uint64_t s : cfg.seeds) seeds += (seeds.empty() ? "" : ",") + std::to_string(s);
    manifest["seeds"] = seeds;
    manifest["report"] = "ablation.csv";
    write_manifest((out / "manifest.txt").string(), manifest);

    for (const AblationRow& row : rows) {
        std::printf("ablate: %-6s mean fidelity %.4f +- %.4f (1qg %d, 2qg %d, params %d)\n",
                    ansatz_name(row.ansatz), row.mean_fidelity, row.stddev, row.one_qubit_gates,
                    row.two_qubit_gates, row.parameters);
    }
    return 0;
}

int cmd_noise_sweep(RunConfig& cfg) {
    apply_common(cfg);
    require_file(cfg.images_path, "image file");
    require_file(cfg.labels_path, "label file");
    if (cfg.classes.size() != 1) {
        throw ValidationError("noise-sweep expects exactly one target class (--classes c)");
    }
    if (cfg.sizes.empty()) throw ValidationError("noise-sweep needs --sizes n1,n2,...");
    if (cfg.trajectories < 1) throw ValidationError("--trajectories must be >= 1");
    require_out_dir(cfg);

    const std::vector<Sample> subset = load_class_subset(cfg);
    const auto rows = noise_sweep(subset, cfg.sizes, cfg.train.noise, cfg.trajectories, cfg.train);

    const fs::path out(cfg.out_dir);
    {
        std::ofstream report(out / "noise_sweep.csv");
        report << "n,fidelity,stderr\n";
        for (const NoiseSweepRow& row : rows) {
            report << row.n << "," << format_double(row.mean_fidelity) << ","
                   << format_double(row.std_error) << "\n";
        }
    }
    std::map<std::string, std::string> manifest;
    manifest["command"] = "noise-sweep";
    common_manifest_entries(cfg, manifest);
    manifest["trajectories"] = std::to_string(cfg.trajectories);
    std::string sizes;
    for (int s : cfg.sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(s);
    manifest["sizes"] = sizes;
    manifest["report"] = "noise_sweep.csv";
    write_manifest((out / "manifest.txt").string(), manifest);

    for (const NoiseSweepRow& row : rows) {
        std::printf("noise-sweep: n=%d fidelity %.6g +- %.2g (noiseless %.6g)\n", row.n,
                    row.mean_fidelity, row.std_error, row.noiseless_fidelity);
    }
    return 0;
}

void add_model_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--seed", cfg.train.seed, "master random seed");
    cmd->add_option("--n", cfg.train.n, "input size / data qubits");
    cmd->add_option("--blocks", cfg.train.b, "generator VQC blocks");
    cmd->add_option("--ansatz", cfg.ansatz_name, "generator entangler: cnot|iswap|crx|crot|none");
    cmd->add_option("--encoder", cfg.encoder_name, "encoder mode: trainable|fixed");
    cmd->add_flag("--freeze-encoder,!--no-freeze-encoder", cfg.train.encoder_frozen,
                  "keep theta_s fixed during GAN training (default on)");
    cmd->add_option("--shots", cfg.train.shots, "finite-shot estimation (0 = exact)");
    cmd->add_option("--p-bit", cfg.train.noise.p_bit, "bit-flip probability per qubit per layer");
    cmd->add_option("--p-phase", cfg.train.noise.p_phase,
                    "phase-flip probability per qubit per layer");
    cmd->add_option("--trajectories", cfg.trajectories, "noise trajectories for evaluation");
    cmd->add_option("--lr", cfg.train.learning_rate, "ADAM learning rate");
    cmd->add_option("--batch", cfg.train.batch_size, "batch size");
    cmd->add_option("--epochs", cfg.train.epochs, "training epochs");
    cmd->add_option("--t-max", cfg.train.t_max, "cosine annealing T_max");
    cmd->add_option("--out", cfg.out_dir, "output directory");
}

void add_data_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--images", cfg.images_path, "IDX image file");
    cmd->add_option("--labels", cfg.labels_path, "IDX label file");
    cmd->add_option("--classes", cfg.classes, "class filter (comma-separated labels)")
        ->delimiter(',');
    cmd->add_option("--pca", cfg.pca_path, "serialized PCA model to reuse");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum GAN trainer on exact statevector simulation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file ([subcommand] sections, flags win)");

    // separate config instances so per-subcommand defaults cannot leak
    RunConfig pre_cfg;
    pre_cfg.train.learning_rate = 0.05;
    pre_cfg.train.epochs = 150;
    pre_cfg.train.t_max = 150;
    RunConfig train_cfg;
    RunConfig gen_cfg;
    RunConfig ablate_cfg;
    RunConfig sweep_cfg;
    bool cost_csv = false;
    std::string cost_scheme;
    int cost_n = 1;
    int cost_b = 1;

    CLI::App* pre = app.add_subcommand("pretrain", "separate class ensembles to fit theta_s");
    add_model_options(pre, pre_cfg);
    add_data_options(pre, pre_cfg);

    CLI::App* train = app.add_subcommand("train", "train the generator against encoded data");
    add_model_options(train, train_cfg);
    add_data_options(train, train_cfg);
    train->add_option("--theta-s", train_cfg.theta_s_path, "pretrained theta_s artifact");
    train->add_flag("--allow-unpretrained-encoder", train_cfg.train.allow_unpretrained_encoder,
                    "override the two-step ordering with the plain all-ones encoder");
    train->add_flag("--png", train_cfg.png, "also write PNG previews");
    train->add_option("--grid-shots", train_cfg.grid_shots,
                      "measurement shots per sampled preview image");

    CLI::App* gen = app.add_subcommand("generate", "decode images from a trained generator");
    add_model_options(gen, gen_cfg);
    gen->add_option("--theta-g", gen_cfg.theta_g_path, "trained theta_g artifact")->required();
    gen->add_option("--theta-s", gen_cfg.theta_s_path, "theta_s artifact (trainable encoder)");
    gen->add_option("--pca", gen_cfg.pca_path, "serialized PCA model")->required();
    gen->add_option("--count", gen_cfg.count, "number of images");
    gen->add_flag("--png", gen_cfg.png, "also write PNG previews");

    CLI::App* cost = app.add_subcommand("cost", "closed-form hardware cost of a GAN scheme");
    cost->add_option("scheme", cost_scheme, "qugan21|eqgan|iqgan")->required();
    cost->add_option("n", cost_n, "input size")->required();
    cost->add_option("b", cost_b, "VQC blocks")->required();
    cost->add_flag("--csv", cost_csv, "machine-readable output");

    CLI::App* ablate = app.add_subcommand("ablate", "compare generator ansatz kinds");
    add_model_options(ablate, ablate_cfg);
    add_data_options(ablate, ablate_cfg);
    ablate->add_option("--ansatz-list", ablate_cfg.ansatz_list, "ansatz kinds to compare")
        ->delimiter(',');
    ablate->add_option("--seeds", ablate_cfg.seeds, "seed list (>= 3)")->delimiter(',');

    CLI::App* sweep = app.add_subcommand("noise-sweep", "fidelity vs input size under noise");
    add_model_options(sweep, sweep_cfg);
    add_data_options(sweep, sweep_cfg);
    sweep->add_option("--sizes", sweep_cfg.sizes, "ascending input sizes")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (pre->parsed()) return cmd_pretrain(pre_cfg);
        if (train->parsed()) return cmd_train(train_cfg);
        if (gen->parsed()) return cmd_generate(gen_cfg);
        if (cost->parsed()) return cmd_cost(cost_scheme, cost_n, cost_b, cost_csv);
        if (ablate->parsed()) return cmd_ablate(ablate_cfg);
        if (sweep->parsed()) return cmd_noise_sweep(sweep_cfg);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 2;
}
