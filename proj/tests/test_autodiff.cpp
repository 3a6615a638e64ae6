#include <doctest.h>

#include <cmath>
#include <numbers>

#include "iqgan/autodiff.hpp"

using namespace iqgan;

namespace {

constexpr double pi = std::numbers::pi;

LossContext make_context(int n, int b, Ansatz ansatz) {
    LossContext ctx;
    ctx.n = n;
    ctx.b = b;
    ctx.generator.ansatz = ansatz;
    ctx.generator.theta_g.assign(generator_param_count(n, b, ansatz), 0.0);
    ctx.encoder.theta_s.assign(n, 1.0);
    return ctx;
}

LossContext random_context(Rng& rng, int n, int b, Ansatz ansatz) {
    LossContext ctx = make_context(n, b, ansatz);
    const int batch = 1 + static_cast<int>(rng.index(4));
    for (int s = 0; s < batch; ++s) {
        std::vector<double> x(n);
        for (double& v : x) v = rng.uniform(-0.9, 0.9);
        ctx.batch.push_back(std::move(x));
    }
    for (double& t : ctx.generator.theta_g) t = rng.uniform(-pi, pi);
    for (double& t : ctx.encoder.theta_s) t = rng.uniform(0.3, 1.0);
    return ctx;
}

// relative for large entries, absolute below 1
bool grads_close(std::span<const double> a, std::span<const double> b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tol * std::max({1.0, std::abs(a[i]), std::abs(b[i])})) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("gan_loss: zero when the generator reproduces every encoded state") {
    LossContext ctx = make_context(1, 1, Ansatz::NO_ENTANGLER);
    ctx.batch = {{0.5}};
    ctx.generator.theta_g = {std::asin(0.5), 0.0};
    CHECK(gan_loss(ctx) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gan_loss: one for an orthogonal pair") {
    LossContext ctx = make_context(1, 1, Ansatz::NO_ENTANGLER);
    ctx.batch = {{0.0}};
    ctx.generator.theta_g = {pi, 0.0}; // |1> vs encoded |0>
    CHECK(gan_loss(ctx) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gan_loss: loss is one minus fidelity") {
    LossContext ctx = make_context(1, 1, Ansatz::NO_ENTANGLER);
    ctx.batch = {{0.0}};
    // fidelity cos^2(theta/2) = 0.927 -> loss 0.073
    const double theta = 2.0 * std::acos(std::sqrt(0.927));
    ctx.generator.theta_g = {theta, 0.0};
    CHECK(gan_loss(ctx) == doctest::Approx(0.073).epsilon(1e-10));
}

TEST_CASE("gan_loss rejects an empty batch") {
    LossContext ctx = make_context(1, 1, Ansatz::NO_ENTANGLER);
    CHECK_THROWS_AS(gan_loss(ctx), ValidationError);
}

TEST_CASE("gan_loss stays within [0, 1] on random contexts") {
    Rng rng(51);
    const Ansatz kinds[] = {Ansatz::CNOT, Ansatz::ISWAP, Ansatz::CRX, Ansatz::CROT,
                            Ansatz::NO_ENTANGLER};
    for (int trial = 0; trial < 25; ++trial) {
        const LossContext ctx = random_context(rng, 1 + static_cast<int>(rng.index(3)),
                                               1 + static_cast<int>(rng.index(2)),
                                               kinds[rng.index(5)]);
        const double loss = gan_loss(ctx);
        CHECK(loss >= 0.0);
        CHECK(loss <= 1.0);
    }
}

TEST_CASE("gan_loss periodicity: 2pi on rotations, 4pi on controlled angles") {
    Rng rng(52);
    const Ansatz kinds[] = {Ansatz::NO_ENTANGLER, Ansatz::CNOT, Ansatz::ISWAP, Ansatz::CRX,
                            Ansatz::CROT};
    for (Ansatz ansatz : kinds) {
        const LossContext base = random_context(rng, 2, 2, ansatz);
        const double reference = gan_loss(base);
        const std::vector<bool> controlled = controlled_angle_mask(2, 2, ansatz);
        for (std::size_t k = 0; k < base.generator.theta_g.size(); ++k) {
            LossContext shifted = base;
            shifted.generator.theta_g[k] += controlled[k] ? 4.0 * pi : 2.0 * pi;
            CHECK(std::abs(gan_loss(shifted) - reference) < 1e-12);
        }
    }

    // a 2pi shift of a controlled angle flips a control-conditional sign and
    // is observable: this is why those angles get the 4pi treatment
    LossContext crx = make_context(2, 1, Ansatz::CRX);
    crx.batch = {{0.6, -0.5}};
    crx.generator.theta_g = {1.2, 0.4, -0.7, 0.9, 0.8};
    LossContext crx_shifted = crx;
    crx_shifted.generator.theta_g[4] += 2.0 * pi;
    CHECK(std::abs(gan_loss(crx) - gan_loss(crx_shifted)) > 1e-6);
}

TEST_CASE("param_shift_grad: analytic single-qubit landscape") {
    LossContext ctx = make_context(1, 1, Ansatz::NO_ENTANGLER);
    ctx.batch = {{0.0}}; // encoded |0>, loss = sin^2(theta/2)
    ctx.generator.theta_g = {pi / 2, 0.3};
    const std::vector<double> grad = param_shift_grad(ctx, GradTarget::GENERATOR);
    CHECK(grad[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(grad[1] == doctest::Approx(0.0).epsilon(1e-10));

    ctx.generator.theta_g = {0.0, 0.3};
    const std::vector<double> at_min = param_shift_grad(ctx, GradTarget::GENERATOR);
    CHECK(at_min[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("finite_diff_grad: flat coordinate and analytic stationary point") {
    LossContext ctx = make_context(1, 1, Ansatz::NO_ENTANGLER);
    ctx.batch = {{0.0}};
    ctx.generator.theta_g = {pi, 0.7};
    const std::vector<double> grad = finite_diff_grad(ctx, GradTarget::GENERATOR);
    // d/dtheta sin^2(theta/2) = sin(theta)/2 = 0 at theta = pi; RZ slot is flat
    CHECK(std::abs(grad[0]) < 1e-8);
    CHECK(std::abs(grad[1]) < 1e-10);
    CHECK_THROWS_AS(finite_diff_grad(ctx, GradTarget::GENERATOR, 0.0), ValidationError);
}

TEST_CASE("parameter-shift matches finite differences across all ansatz kinds") {
    Rng rng(53);
    const Ansatz kinds[] = {Ansatz::CNOT, Ansatz::ISWAP, Ansatz::CRX, Ansatz::CROT,
                            Ansatz::NO_ENTANGLER};
    for (int trial = 0; trial < 15; ++trial) {
        const LossContext ctx = random_context(rng, 1 + static_cast<int>(rng.index(3)),
                                               1 + static_cast<int>(rng.index(2)),
                                               kinds[trial % 5]);
        const std::vector<double> ps = param_shift_grad(ctx, GradTarget::GENERATOR);
        const std::vector<double> fd = finite_diff_grad(ctx, GradTarget::GENERATOR);
        CHECK(grads_close(ps, fd, 1e-5));
    }
}

TEST_CASE("encoder gradient: chain rule agrees with finite differences") {
    Rng rng(54);
    for (int trial = 0; trial < 8; ++trial) {
        LossContext ctx = random_context(rng, 2, 1, Ansatz::NO_ENTANGLER);
        ctx.encoder_frozen = false;
        const std::vector<double> ps = param_shift_grad(ctx, GradTarget::ENCODER);
        const std::vector<double> fd = finite_diff_grad(ctx, GradTarget::ENCODER);
        CHECK(grads_close(ps, fd, 1e-5));
    }
}

TEST_CASE("encoder gradient clamps and flags the arcsin singularity") {
    LossContext ctx = make_context(1, 1, Ansatz::NO_ENTANGLER);
    ctx.batch = {{1.0}};
    ctx.encoder.theta_s = {1.0}; // |x * theta_s| = 1 exactly
    ctx.generator.theta_g = {0.4, 0.1};
    int warnings = 0;
    set_warn_handler([&](const std::string&) { ++warnings; });
    const std::vector<double> grad = param_shift_grad(ctx, GradTarget::ENCODER);
    set_warn_handler({});
    CHECK(warnings == 1);
    CHECK(std::abs(grad[0]) <= 1e6);
}

TEST_CASE("param_shift_grad rejects the fixed encoder target") {
    LossContext ctx = make_context(1, 1, Ansatz::NO_ENTANGLER);
    ctx.batch = {{0.2}};
    ctx.encoder_mode = EncoderMode::FIXED;
    CHECK_THROWS_AS(param_shift_grad(ctx, GradTarget::ENCODER), ValidationError);
}

TEST_CASE("shot-mode loss estimates the exact loss") {
    LossContext ctx = make_context(2, 1, Ansatz::NO_ENTANGLER);
    ctx.batch = {{0.3, -0.4}};
    ctx.generator.theta_g = {0.2, 0.0, -0.1, 0.0};
    const double exact = gan_loss(ctx);
    ctx.shots = 4096;
    ctx.seed = 2024;
    const double estimated = gan_loss(ctx);
    CHECK(std::abs(estimated - exact) < 0.08);
}

TEST_CASE("adam_step: zero gradient leaves parameters unchanged") {
    AdamState state(2);
    std::vector<double> params{0.5, -0.25};
    const std::vector<double> zeros{0.0, 0.0};
    adam_step(state, params, zeros, 0.01);
    CHECK(params[0] == doctest::Approx(0.5));
    CHECK(params[1] == doctest::Approx(-0.25));
}

TEST_CASE("adam_step: first update magnitude is about the learning rate") {
    AdamState state(1);
    std::vector<double> params{0.0};
    const std::vector<double> grad{0.37};
    adam_step(state, params, grad, 0.01);
    // bias-corrected first step: lr * g / (|g| + eps)
    CHECK(std::abs(params[0] + 0.01) < 1e-6);
}

TEST_CASE("adam_step: constant gradient drives monotone motion") {
    AdamState state(1);
    std::vector<double> params{1.0};
    const std::vector<double> grad{0.8};
    double previous = params[0];
    for (int i = 0; i < 25; ++i) {
        adam_step(state, params, grad, 0.05);
        CHECK(params[0] < previous);
        previous = params[0];
    }
    std::vector<double> bad{1.0, 2.0};
    CHECK_THROWS_AS(adam_step(state, bad, grad, 0.05), ValidationError);
}

TEST_CASE("cosine_anneal_lr: endpoint and midpoint values") {
    CHECK(cosine_anneal_lr(0, 0.001, 30) == doctest::Approx(0.001));
    CHECK(cosine_anneal_lr(30, 0.001, 30) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(cosine_anneal_lr(15, 0.001, 30) == doctest::Approx(0.0005).epsilon(1e-12));
    CHECK_THROWS_AS(cosine_anneal_lr(0, 0.001, 0), ValidationError);
    CHECK_THROWS_AS(cosine_anneal_lr(31, 0.001, 30), ValidationError);
}

TEST_CASE("cosine_anneal_lr is non-increasing over the schedule") {
    double previous = cosine_anneal_lr(0, 0.003, 30);
    for (int epoch = 1; epoch <= 30; ++epoch) {
        const double lr = cosine_anneal_lr(epoch, 0.003, 30);
        CHECK(lr <= previous + 1e-18);
        previous = lr;
    }
}
