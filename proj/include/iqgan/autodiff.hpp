#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iqgan/circuits.hpp"

namespace iqgan {

// Fidelity loss and its exact gradients. Plain rotation angles use the
// two-term shift rule; controlled-rotation angles (CRX/CROT entanglers) need
// the four-term rule because their generators also have a zero eigenvalue.
// A central finite-difference evaluator serves as the test oracle.

struct LossContext {
    std::vector<std::vector<double>> batch; // inputs in [-1, 1]^n
    EncoderParams encoder;
    GeneratorParams generator;
    int n = 0;
    int b = 0;
    EncoderMode encoder_mode = EncoderMode::TRAINABLE;
    bool encoder_frozen = true;
    int shots = 0;        // 0 = exact expectation values
    std::uint64_t seed = 0; // shot-mode sampling seed

    void validate() const;
};

// Mean over the batch of 1 - fidelity(encoded input, generator output).
double gan_loss(const LossContext& ctx);

enum class GradTarget { GENERATOR, ENCODER };

// Exact gradient via parameter-shift evaluations. Encoder scales are shifted
// on the encoding angle and pulled back through d(arcsin(x*t))/dt; the chain
// factor is clamped at 1e6 (with a warning) near |x*t| = 1.
std::vector<double> param_shift_grad(const LossContext& ctx, GradTarget which);

// Central differences on the raw parameters; oracle only.
std::vector<double> finite_diff_grad(const LossContext& ctx, GradTarget which, double h = 1e-5);

struct AdamState {
    std::size_t step = 0;
    std::vector<double> m;
    std::vector<double> v;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    explicit AdamState(std::size_t num_params) : m(num_params, 0.0), v(num_params, 0.0) {}
};

// Standard bias-corrected update, in place.
void adam_step(AdamState& state, std::vector<double>& params, std::span<const double> grads,
               double lr);

// lr0 * (1 + cos(pi * epoch / t_max)) / 2, valid for epoch in [0, t_max].
double cosine_anneal_lr(int epoch, double lr0, int t_max);

} // namespace iqgan
