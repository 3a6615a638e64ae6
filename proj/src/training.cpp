#include "iqgan/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

namespace iqgan {

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) throw ValidationError("config: learning rate must be positive");
    if (batch_size < 1) throw ValidationError("config: batch size must be >= 1");
    if (epochs < 1) throw ValidationError("config: epochs must be >= 1");
    if (t_max < 1) throw ValidationError("config: t_max must be >= 1");
    if (n < 1 || b < 1) throw ValidationError("config: n and b must be >= 1");
    if (shots < 0) throw ValidationError("config: shots must be >= 0");
    if (init_scale < 0.0) throw ValidationError("config: init scale must be >= 0");
    noise.validate();
}

DensityMatrix build_ensemble(const std::vector<std::vector<double>>& class_inputs,
                             const EncoderParams& params) {
    if (class_inputs.empty()) throw ValidationError("build_ensemble: empty class");
    const int n = static_cast<int>(params.theta_s.size());
    if (n > 4) throw ValidationError("build_ensemble: density representation capped at 4 qubits");

    DensityMatrix d;
    d.num_qubits = n;
    const Eigen::Index dim = Eigen::Index{1} << n;
    d.rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& x : class_inputs) {
        const StateVector psi = run_circuit(build_encoder(x, params));
        Eigen::VectorXcd v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v(i) = psi.amplitudes[static_cast<std::size_t>(i)];
        d.rho += v * v.adjoint();
    }
    d.rho /= static_cast<double>(class_inputs.size());
    return d;
}

double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.num_qubits != sigma.num_qubits) {
        throw ValidationError("hs_distance: dimension mismatch");
    }
    return (rho.rho - sigma.rho).squaredNorm();
}

namespace {

using InputsByClass = std::map<int, std::vector<std::vector<double>>>;

double separation_objective(const InputsByClass& by_class, const EncoderParams& params) {
    std::vector<DensityMatrix> ensembles;
    ensembles.reserve(by_class.size());
    for (const auto& [label, inputs] : by_class) ensembles.push_back(build_ensemble(inputs, params));
    double total = 0.0;
    for (std::size_t i = 0; i < ensembles.size(); ++i) {
        for (std::size_t j = i + 1; j < ensembles.size(); ++j) {
            total += hs_distance(ensembles[i], ensembles[j]);
        }
    }
    return total;
}

double sample_stddev(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / (values.size() - 1));
}

} // namespace

PretrainResult pretrain_encoder(const std::vector<std::vector<double>>& inputs,
                                const std::vector<int>& labels, const EncoderParams& init,
                                const TrainConfig& config) {
    config.validate();
    if (inputs.size() != labels.size()) {
        throw ValidationError("pretrain_encoder: inputs/labels length mismatch");
    }
    if (inputs.empty()) throw ValidationError("pretrain_encoder: no samples");
    const int n = static_cast<int>(init.theta_s.size());
    if (n > 4) throw ValidationError("pretrain_encoder: density pretraining capped at 4 qubits");

    InputsByClass by_class;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (static_cast<int>(inputs[i].size()) != n) {
            throw ValidationError("pretrain_encoder: input dimension mismatch");
        }
        by_class[labels[i]].push_back(inputs[i]);
    }
    if (by_class.size() < 2) {
        throw ValidationError("pretrain_encoder: need at least 2 classes, got " +
                              std::to_string(by_class.size()));
    }
    bool all_identical = true;
    for (std::size_t i = 1; i < inputs.size() && all_identical; ++i) {
        all_identical = inputs[i] == inputs[0];
    }
    if (all_identical) {
        throw DataError("pretrain_encoder: degenerate dataset (all samples identical)");
    }

    constexpr double fd_step = 1e-4;
    EncoderParams params = init;
    EncoderParams best = init;
    AdamState adam(params.theta_s.size());

    PretrainResult result;
    double objective = separation_objective(by_class, params);
    double best_objective = objective;
    result.objective_trace.push_back(objective);

    for (int iter = 0; iter < config.epochs; ++iter) {
        std::vector<double> grad(params.theta_s.size());
        for (std::size_t k = 0; k < params.theta_s.size(); ++k) {
            EncoderParams plus = params;
            EncoderParams minus = params;
            plus.theta_s[k] += fd_step;
            minus.theta_s[k] -= fd_step;
            // ascent: negate the objective gradient for the minimizing ADAM step
            grad[k] = -(separation_objective(by_class, plus) -
                        separation_objective(by_class, minus)) /
                      (2.0 * fd_step);
        }
        adam_step(adam, params.theta_s, grad, config.learning_rate);
        objective = separation_objective(by_class, params);
        result.objective_trace.push_back(objective);
        if (objective > best_objective) {
            best_objective = objective;
            best = params;
        }
    }

    result.theta_s = best;
    return result;
}

TrainResult train_gan(const std::vector<std::vector<double>>& inputs,
                      const EncoderParams& theta_s, const TrainConfig& config) {
    config.validate();
    if (inputs.empty()) throw ValidationError("train_gan: empty dataset");
    for (const auto& x : inputs) {
        if (static_cast<int>(x.size()) != config.n) {
            throw ValidationError("train_gan: input dimension does not match n");
        }
    }
    if (config.encoder_mode == EncoderMode::TRAINABLE &&
        static_cast<int>(theta_s.theta_s.size()) != config.n) {
        throw ValidationError("train_gan: theta_s length does not match n");
    }
    if (config.encoder_mode == EncoderMode::TRAINABLE && !config.encoder_pretrained &&
        !config.allow_unpretrained_encoder) {
        throw ValidationError(
            "train_gan: trainable encoder without pretrained theta_s; run the pretrain step "
            "first or set allow_unpretrained_encoder");
    }
    if (config.epochs - 1 > config.t_max) {
        throw ValidationError("train_gan: epochs must not exceed t_max for the cosine schedule");
    }

    Rng init_rng(config.seed);
    GeneratorParams gen;
    gen.ansatz = config.ansatz;
    gen.theta_g.resize(generator_param_count(config.n, config.b, config.ansatz));
    for (double& t : gen.theta_g) t = init_rng.uniform(-config.init_scale, config.init_scale);

    EncoderParams enc = theta_s;
    Rng shuffle_rng = Rng(config.seed).child(1);
    Rng shot_rng = Rng(config.seed).child(2);

    AdamState gen_adam(gen.theta_g.size());
    AdamState enc_adam(enc.theta_s.size());

    const std::size_t num_batches = std::max<std::size_t>(1, inputs.size() / config.batch_size);
    const std::size_t batch_len = std::min<std::size_t>(config.batch_size, inputs.size());

    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), 0);

    const bool train_encoder =
        config.encoder_mode == EncoderMode::TRAINABLE && !config.encoder_frozen;

    TrainResult result;
    result.records.reserve(config.epochs);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const auto start = std::chrono::steady_clock::now();
        const double lr = cosine_anneal_lr(epoch, config.learning_rate, config.t_max);

        // Fisher-Yates with the deterministic stream
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[shuffle_rng.index(i)]);
        }

        double epoch_loss = 0.0;
        for (std::size_t batch = 0; batch < num_batches; ++batch) {
            LossContext ctx;
            ctx.n = config.n;
            ctx.b = config.b;
            ctx.encoder = enc;
            ctx.generator = gen;
            ctx.encoder_mode = config.encoder_mode;
            ctx.encoder_frozen = !train_encoder;
            ctx.shots = config.shots;
            ctx.seed = shot_rng.next_u64();
            ctx.batch.reserve(batch_len);
            for (std::size_t i = 0; i < batch_len; ++i) {
                ctx.batch.push_back(inputs[order[batch * batch_len + i]]);
            }

            epoch_loss += gan_loss(ctx);
            const std::vector<double> grad = param_shift_grad(ctx, GradTarget::GENERATOR);
            adam_step(gen_adam, gen.theta_g, grad, lr);
            if (train_encoder) {
                const std::vector<double> enc_grad = param_shift_grad(ctx, GradTarget::ENCODER);
                adam_step(enc_adam, enc.theta_s, enc_grad, lr);
            }
        }
        epoch_loss /= static_cast<double>(num_batches);

        const auto end = std::chrono::steady_clock::now();
        TrainRecord rec;
        rec.epoch = epoch;
        rec.loss = epoch_loss;
        rec.fidelity = 1.0 - epoch_loss;
        rec.lr = lr;
        rec.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
        result.records.push_back(rec);
    }

    // full-dataset evaluation at the trained parameters (exact)
    {
        LossContext ctx;
        ctx.n = config.n;
        ctx.b = config.b;
        ctx.encoder = enc;
        ctx.generator = gen;
        ctx.encoder_mode = config.encoder_mode;
        ctx.batch = inputs;
        result.final_fidelity = 1.0 - gan_loss(ctx);
    }

    result.theta_g = std::move(gen);
    result.theta_s = std::move(enc);
    return result;
}

std::vector<AblationRow> ablation_run(const std::vector<std::vector<double>>& inputs,
                                      const TrainConfig& config, std::span<const Ansatz> kinds,
                                      std::span<const std::uint64_t> seeds) {
    if (kinds.size() < 2) throw ValidationError("ablation_run: need at least 2 ansatz kinds");
    if (seeds.size() < 3) throw ValidationError("ablation_run: need at least 3 seeds");
    std::set<Ansatz> distinct(kinds.begin(), kinds.end());
    if (distinct.size() != kinds.size()) throw ValidationError("ablation_run: duplicate ansatz");

    std::vector<AblationRow> rows;
    rows.reserve(kinds.size());
    for (Ansatz ansatz : kinds) {
        std::vector<double> finals;
        finals.reserve(seeds.size());
        for (std::uint64_t seed : seeds) {
            TrainConfig run = config;
            run.ansatz = ansatz;
            run.seed = seed;
            // the driver supplies the plain all-ones encoder itself
            run.allow_unpretrained_encoder = true;
            const TrainResult result = train_gan(inputs, EncoderParams{std::vector<double>(
                                                              config.n, 1.0)},
                                                 run);
            finals.push_back(result.records.back().fidelity);
        }

        AblationRow row;
        row.ansatz = ansatz;
        row.mean_fidelity = std::accumulate(finals.begin(), finals.end(), 0.0) / finals.size();
        row.stddev = sample_stddev(finals);

        GeneratorParams probe;
        probe.ansatz = ansatz;
        probe.theta_g.assign(generator_param_count(config.n, config.b, ansatz), 0.0);
        const Circuit generator = build_generator(probe, config.n, config.b);
        const Circuit encoder = build_encoder(std::vector<double>(config.n, 0.0),
                                              EncoderParams{std::vector<double>(config.n, 1.0)});
        const Circuit full = assemble_gan_circuit(encoder, generator);
        row.one_qubit_gates = full.one_qubit_gate_count();
        row.two_qubit_gates = full.multi_qubit_gate_count();
        row.parameters = generator.trainable_param_count();
        rows.push_back(row);
    }
    return rows;
}

std::vector<NoiseSweepRow> noise_sweep(const std::vector<Sample>& samples,
                                       std::span<const int> sizes, const NoiseSpec& spec,
                                       int trajectories, const TrainConfig& config) {
    spec.validate();
    if (sizes.empty()) throw ValidationError("noise_sweep: no input sizes");
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) {
            throw ValidationError("noise_sweep: input sizes must be strictly ascending");
        }
    }
    if (trajectories < 100) throw ValidationError("noise_sweep: need at least 100 trajectories");

    std::vector<NoiseSweepRow> rows;
    rows.reserve(sizes.size());
    for (int n : sizes) {
        const PcaModel pca = fit_pca(samples, n);
        std::vector<std::vector<double>> inputs;
        inputs.reserve(samples.size());
        for (const Sample& s : samples) inputs.push_back(project(pca, s.pixels));

        TrainConfig run = config;
        run.n = n;
        run.allow_unpretrained_encoder = true;
        const EncoderParams theta_s{std::vector<double>(n, 1.0)};
        const TrainResult trained = train_gan(inputs, theta_s, run);

        const Circuit generator = build_generator(trained.theta_g, n, run.b);
        std::vector<StateVector> references;
        references.reserve(inputs.size());
        for (const auto& x : inputs) {
            references.push_back(
                run_circuit(build_encoder_for_mode(run.encoder_mode, x, trained.theta_s)));
        }

        const TrajectoryEstimate est = noisy_mean_fidelity(
            generator, references, spec, trajectories, Rng(run.seed).child(9000 + n).next_u64());

        NoiseSweepRow row;
        row.n = n;
        row.mean_fidelity = est.mean;
        row.std_error = est.std_error;
        row.noiseless_fidelity = trained.final_fidelity;
        rows.push_back(row);
    }
    return rows;
}

void write_metrics_csv(const std::vector<TrainRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot create metrics file: " + path);
    out << "epoch,loss,fidelity,lr,wall_ms\n";
    char buf[160];
    for (const TrainRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.3f\n", r.epoch, r.loss,
                      r.fidelity, r.lr, r.wall_ms);
        out << buf;
    }
    if (!out) throw DataError("failed writing metrics file: " + path);
}

} // namespace iqgan
