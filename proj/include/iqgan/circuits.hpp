#pragma once

#include <span>
#include <string>
#include <vector>

#include "iqgan/data.hpp"
#include "iqgan/qsim.hpp"

namespace iqgan {

// Builders for the three GAN stages: angle encoder (trainable or fixed),
// generator ansatz family, and the ancilla-plus-CSWAP fidelity test, plus the
// closed-form hardware cost model and the measurement->feature decode path.

struct EncoderParams {
    std::vector<double> theta_s; // one scale per input feature
};

enum class EncoderMode { TRAINABLE, FIXED };

enum class Ansatz { CNOT, ISWAP, CRX, CROT, NO_ENTANGLER };

const char* ansatz_name(Ansatz a);
Ansatz parse_ansatz(const std::string& name); // cnot/iswap/crx/crot/none

// Angles carried by one entangler of the ansatz (0 for the fixed kinds).
int entangler_param_count(Ansatz a);

// 2 rotations per qubit per block plus any entangler angles.
int generator_param_count(int n, int b, Ansatz a);

// Marks the theta_g entries that sit on controlled rotations. Those angles
// are 4pi-periodic (the control adds a conditional sign under a 2pi shift)
// and need the four-term gradient rule; plain rotations are 2pi-periodic in
// the loss and use the two-term rule.
std::vector<bool> controlled_angle_mask(int n, int b, Ansatz a);

struct GeneratorParams {
    std::vector<double> theta_g;
    Ansatz ansatz = Ansatz::NO_ENTANGLER;
};

// Qubit i carries RY(arcsin(clamp(x_i * theta_s_i, -1, 1))); clamps are
// reported through the warning hook. Slot i marks the angle fed by feature i.
Circuit build_encoder(std::span<const double> x, const EncoderParams& params);

// Non-learnable baseline: RY(pi * (x_i + 1) / 2), inputs mapped onto [0, pi].
Circuit build_fixed_encoder(std::span<const double> x);

Circuit build_encoder_for_mode(EncoderMode mode, std::span<const double> x,
                               const EncoderParams& params);

// Per block: RY then RZ on every qubit, then a nearest-neighbor entangler
// chain q_i -> q_{i+1} (absent for NO_ENTANGLER). Parameter layout is
// block-major: [RY_0, RZ_0, ..., RY_{n-1}, RZ_{n-1}, entangler angles...].
Circuit build_generator(const GeneratorParams& params, int n, int b);

// H(ancilla); CSWAP(ancilla, data_i, generated_i) for every pair; H(ancilla).
// Register layout: qubit 0 ancilla, 1..n data, n+1..2n generated.
Circuit build_swap_test(int n);

// Full 2n+1-qubit program: encoder on the data register, generator on the
// generated register, then the swap test.
Circuit assemble_gan_circuit(const Circuit& encoder, const Circuit& generator);

// Ancilla |0> probability of the assembled circuit; equals (1 + fidelity)/2.
double swap_test_p0(const Circuit& encoder, const Circuit& generator, int n);

enum class Scheme { QUGAN21, EQGAN, IQGAN };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

struct CostReport {
    Scheme scheme;
    int qubits = 0;
    int one_qubit_gates = 0;
    int two_qubit_gates = 0; // gates on more than one qubit
    int parameters = 0;
};

CostReport hardware_cost(Scheme scheme, int n, int b);

// Per qubit: p = |0> probability, alpha = 2*arccos(sqrt(p)),
// x_hat = sin(alpha)/theta_s clamped to [-1, 1]. Note the probability is even
// in the encoding angle, so the sign of x*theta_s is not recoverable;
// negative features decode to their magnitude.
std::vector<double> decode_generated_coords(const StateVector& generator_state,
                                            const EncoderParams& params);

// Same chain applied to externally estimated |0> probabilities (finite-shot
// measurement path).
std::vector<double> decode_coords_from_p0(std::span<const double> p0,
                                          const EncoderParams& params);

// Per-qubit |0> frequencies out of sampled bitstrings.
std::vector<double> measured_zero_probabilities(const StateVector& state, int shots,
                                                std::uint64_t seed);

// Decoded coordinates pushed through inverse PCA back to an image vector.
std::vector<double> decode_generated(const StateVector& generator_state,
                                     const EncoderParams& params, const PcaModel& pca);

// Inverse of the fixed-encoder map (alpha in [0, pi] is fully recoverable).
std::vector<double> decode_generated_fixed(const StateVector& generator_state,
                                           const PcaModel& pca);

} // namespace iqgan
