#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iqgan/autodiff.hpp"
#include "iqgan/noise.hpp"

namespace iqgan {

// Two-step training: encoder pretraining by class-ensemble separation, then
// ADAM descent on the fidelity loss with a cosine-annealed learning rate.
// Experiment drivers for the ansatz ablation and the input-size noise sweep.

struct TrainConfig {
    double learning_rate = 0.001;
    int batch_size = 32;
    int epochs = 30;
    int t_max = 30;
    std::uint64_t seed = 0;
    int n = 2;
    int b = 1;
    Ansatz ansatz = Ansatz::NO_ENTANGLER;
    EncoderMode encoder_mode = EncoderMode::TRAINABLE;
    bool encoder_frozen = true;
    bool encoder_pretrained = false;        // theta_s came out of pretrain_encoder
    bool allow_unpretrained_encoder = false; // explicit override of the two-step order
    int shots = 0;                           // 0 = exact expectation values
    NoiseSpec noise;                         // evaluation noise (training stays exact)
    double init_scale = 0.1;                 // uniform init range for theta_g

    void validate() const;
};

struct TrainRecord {
    int epoch = 0;
    double loss = 0.0;
    double fidelity = 0.0;
    double lr = 0.0;
    double wall_ms = 0.0;
};

// Uniform mixture of encoded pure states; density representation, so the
// register is capped at 4 qubits.
DensityMatrix build_ensemble(const std::vector<std::vector<double>>& class_inputs,
                             const EncoderParams& params);

// Tr[(rho - sigma)^2]; 0 iff equal, 2 for orthogonal pure states.
double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

struct PretrainResult {
    EncoderParams theta_s;
    std::vector<double> objective_trace; // entry 0 = initial objective
};

// ADAM ascent on the summed pairwise ensemble distances, gradients by central
// finite differences; returns the best parameters seen, so the final
// objective never drops below the initial one.
PretrainResult pretrain_encoder(const std::vector<std::vector<double>>& inputs,
                                const std::vector<int>& labels, const EncoderParams& init,
                                const TrainConfig& config);

struct TrainResult {
    GeneratorParams theta_g;
    EncoderParams theta_s; // updated only when the encoder is unfrozen
    std::vector<TrainRecord> records;
    double final_fidelity = 0.0; // full-dataset evaluation at the trained parameters
};

TrainResult train_gan(const std::vector<std::vector<double>>& inputs,
                      const EncoderParams& theta_s, const TrainConfig& config);

struct AblationRow {
    Ansatz ansatz;
    double mean_fidelity = 0.0;
    double stddev = 0.0;
    int one_qubit_gates = 0; // assembled circuit counts
    int two_qubit_gates = 0;
    int parameters = 0;
};

// Trains every ansatz under every seed on identical data.
std::vector<AblationRow> ablation_run(const std::vector<std::vector<double>>& inputs,
                                      const TrainConfig& config, std::span<const Ansatz> kinds,
                                      std::span<const std::uint64_t> seeds);

struct NoiseSweepRow {
    int n = 0;
    double mean_fidelity = 0.0;
    double std_error = 0.0;
    double noiseless_fidelity = 0.0; // exact evaluation of the same trained model
};

// For each input size: PCA to n features, train, then score the trained
// generator under trajectory noise against the exact encoded references.
std::vector<NoiseSweepRow> noise_sweep(const std::vector<Sample>& samples,
                                       std::span<const int> sizes, const NoiseSpec& spec,
                                       int trajectories, const TrainConfig& config);

// Metrics CSV: header epoch,loss,fidelity,lr,wall_ms.
void write_metrics_csv(const std::vector<TrainRecord>& records, const std::string& path);

} // namespace iqgan
