#include "iqgan/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace iqgan {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Encoding angles per sample, with the arcsin clamp already applied.
std::vector<double> encoding_angles(const LossContext& ctx, const std::vector<double>& x) {
    std::vector<double> angles(ctx.n);
    for (int i = 0; i < ctx.n; ++i) {
        if (ctx.encoder_mode == EncoderMode::FIXED) {
            angles[i] = std::numbers::pi * (x[i] + 1.0) / 2.0;
        } else {
            angles[i] = std::asin(std::clamp(x[i] * ctx.encoder.theta_s[i], -1.0, 1.0));
        }
    }
    return angles;
}

StateVector state_from_angles(std::span<const double> angles) {
    Circuit c(static_cast<int>(angles.size()));
    for (int i = 0; i < static_cast<int>(angles.size()); ++i) c.add(Gate::ry(i, angles[i]));
    return run_circuit(c);
}

// Fidelity between an encoded state and the generator output, either exact or
// estimated from ancilla statistics of the assembled swap-test run.
double pair_fidelity(const LossContext& ctx, const StateVector& encoded,
                     const StateVector& generated, const Circuit& generator_circuit,
                     std::span<const double> enc_angles, std::uint64_t sample_seed) {
    if (ctx.shots <= 0) return fidelity(encoded, generated);

    Circuit enc(ctx.n);
    for (int i = 0; i < ctx.n; ++i) enc.add(Gate::ry(i, enc_angles[i]));
    const Circuit full = assemble_gan_circuit(enc, generator_circuit);
    const StateVector state = run_circuit(full);
    const MeasurementCounts counts = sample_measurements(state, ctx.shots, sample_seed);
    int zeros = 0;
    for (const auto& [bits, count] : counts.counts) {
        if (bits[0] == '0') zeros += count;
    }
    const double p0 = static_cast<double>(zeros) / ctx.shots;
    return std::clamp(2.0 * p0 - 1.0, 0.0, 1.0);
}

struct LossEvaluator {
    const LossContext& ctx;
    Circuit generator_circuit;
    StateVector generated;
    std::vector<std::vector<double>> angles; // per sample
    std::vector<StateVector> encoded;        // per sample, exact

    explicit LossEvaluator(const LossContext& c)
        : ctx(c),
          generator_circuit(build_generator(c.generator, c.n, c.b)),
          generated(run_circuit(generator_circuit)) {
        angles.reserve(ctx.batch.size());
        encoded.reserve(ctx.batch.size());
        for (const auto& x : ctx.batch) {
            angles.push_back(encoding_angles(ctx, x));
            encoded.push_back(state_from_angles(angles.back()));
        }
    }

    // Mean loss with the generator rebuilt from the given parameters.
    double loss_for_generator(const std::vector<double>& theta_g) const {
        GeneratorParams p{theta_g, ctx.generator.ansatz};
        const Circuit circuit = build_generator(p, ctx.n, ctx.b);
        const StateVector state = run_circuit(circuit);
        double loss = 0.0;
        for (std::size_t s = 0; s < angles.size(); ++s) {
            loss += 1.0 - pair_fidelity(ctx, encoded[s], state, circuit, angles[s],
                                        Rng(ctx.seed).child(s).next_u64());
        }
        return loss / static_cast<double>(angles.size());
    }

    // Per-sample loss with one encoding angle shifted.
    double sample_loss_with_angle_shift(std::size_t sample, int qubit, double delta) const {
        std::vector<double> shifted = angles[sample];
        shifted[qubit] += delta;
        const StateVector enc = state_from_angles(shifted);
        return 1.0 - pair_fidelity(ctx, enc, generated, generator_circuit, shifted,
                                   Rng(ctx.seed).child(sample).next_u64());
    }

    double mean_loss() const {
        double loss = 0.0;
        for (std::size_t s = 0; s < angles.size(); ++s) {
            loss += 1.0 - pair_fidelity(ctx, encoded[s], generated, generator_circuit, angles[s],
                                        Rng(ctx.seed).child(s).next_u64());
        }
        return loss / static_cast<double>(angles.size());
    }
};

} // namespace

void LossContext::validate() const {
    if (batch.empty()) throw ValidationError("loss context: empty batch");
    if (n < 1 || b < 1) throw ValidationError("loss context: n and b must be >= 1");
    for (const auto& x : batch) {
        if (static_cast<int>(x.size()) != n) {
            throw ValidationError("loss context: batch entry dimension mismatch");
        }
    }
    if (encoder_mode == EncoderMode::TRAINABLE &&
        static_cast<int>(encoder.theta_s.size()) != n) {
        throw ValidationError("loss context: theta_s length must equal n");
    }
    const int expected = generator_param_count(n, b, generator.ansatz);
    if (static_cast<int>(generator.theta_g.size()) != expected) {
        throw ValidationError("loss context: theta_g length mismatch");
    }
}

double gan_loss(const LossContext& ctx) {
    ctx.validate();
    return LossEvaluator(ctx).mean_loss();
}

std::vector<double> param_shift_grad(const LossContext& ctx, GradTarget which) {
    ctx.validate();
    const LossEvaluator eval(ctx);

    if (which == GradTarget::GENERATOR) {
        const std::vector<bool> controlled =
            controlled_angle_mask(ctx.n, ctx.b, ctx.generator.ansatz);
        std::vector<double> grad(ctx.generator.theta_g.size(), 0.0);
        for (std::size_t k = 0; k < grad.size(); ++k) {
            auto shifted_loss = [&](double delta) {
                std::vector<double> theta = ctx.generator.theta_g;
                theta[k] += delta;
                return eval.loss_for_generator(theta);
            };
            if (!controlled[k]) {
                grad[k] = (shifted_loss(kHalfPi) - shifted_loss(-kHalfPi)) / 2.0;
            } else {
                // exact rule for generators with eigenvalues {0, +-1/2}
                constexpr double c1 = (std::numbers::sqrt2 + 1.0) / (4.0 * std::numbers::sqrt2);
                constexpr double c2 = (std::numbers::sqrt2 - 1.0) / (4.0 * std::numbers::sqrt2);
                grad[k] = c1 * (shifted_loss(kHalfPi) - shifted_loss(-kHalfPi)) -
                          c2 * (shifted_loss(3.0 * kHalfPi) - shifted_loss(-3.0 * kHalfPi));
            }
        }
        return grad;
    }

    if (ctx.encoder_mode == EncoderMode::FIXED) {
        throw ValidationError("param_shift_grad: fixed encoder has no trainable parameters");
    }
    std::vector<double> grad(ctx.encoder.theta_s.size(), 0.0);
    int clamped = 0;
    for (int i = 0; i < ctx.n; ++i) {
        double acc = 0.0;
        for (std::size_t s = 0; s < ctx.batch.size(); ++s) {
            const double product = ctx.batch[s][i] * ctx.encoder.theta_s[i];
            const double d_angle = (eval.sample_loss_with_angle_shift(s, i, kHalfPi) -
                                    eval.sample_loss_with_angle_shift(s, i, -kHalfPi)) /
                                   2.0;
            double chain;
            if (std::abs(product) >= 1.0 - 1e-9) {
                chain = (ctx.batch[s][i] >= 0 ? 1.0 : -1.0) * 1e6;
                ++clamped;
            } else {
                chain = ctx.batch[s][i] / std::sqrt(1.0 - product * product);
            }
            acc += d_angle * chain;
        }
        grad[i] = acc / static_cast<double>(ctx.batch.size());
    }
    if (clamped > 0) {
        warn("param_shift_grad: clamped " + std::to_string(clamped) +
             " singular encoder chain factor(s) at |x*theta_s| ~ 1");
    }
    return grad;
}

std::vector<double> finite_diff_grad(const LossContext& ctx, GradTarget which, double h) {
    ctx.validate();
    if (h <= 0) throw ValidationError("finite_diff_grad: h must be positive");

    auto loss_at = [&](LossContext c) { return gan_loss(c); };
    const std::size_t count = which == GradTarget::GENERATOR ? ctx.generator.theta_g.size()
                                                             : ctx.encoder.theta_s.size();
    if (which == GradTarget::ENCODER && ctx.encoder_mode == EncoderMode::FIXED) {
        throw ValidationError("finite_diff_grad: fixed encoder has no trainable parameters");
    }

    std::vector<double> grad(count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        LossContext plus = ctx;
        LossContext minus = ctx;
        if (which == GradTarget::GENERATOR) {
            plus.generator.theta_g[k] += h;
            minus.generator.theta_g[k] -= h;
        } else {
            plus.encoder.theta_s[k] += h;
            minus.encoder.theta_s[k] -= h;
        }
        grad[k] = (loss_at(plus) - loss_at(minus)) / (2.0 * h);
    }
    return grad;
}

void adam_step(AdamState& state, std::vector<double>& params, std::span<const double> grads,
               double lr) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw ValidationError("adam_step: parameter/gradient/state length mismatch");
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
}

double cosine_anneal_lr(int epoch, double lr0, int t_max) {
    if (t_max < 1) throw ValidationError("cosine_anneal_lr: t_max must be >= 1");
    if (epoch < 0 || epoch > t_max) {
        throw ValidationError("cosine_anneal_lr: epoch must lie in [0, t_max]");
    }
    return lr0 * (1.0 + std::cos(std::numbers::pi * epoch / t_max)) / 2.0;
}

} // namespace iqgan
