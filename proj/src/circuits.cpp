#include "iqgan/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace iqgan {

const char* ansatz_name(Ansatz a) {
    switch (a) {
        case Ansatz::CNOT: return "cnot";
        case Ansatz::ISWAP: return "iswap";
        case Ansatz::CRX: return "crx";
        case Ansatz::CROT: return "crot";
        case Ansatz::NO_ENTANGLER: return "none";
    }
    return "?";
}

Ansatz parse_ansatz(const std::string& name) {
    if (name == "cnot") return Ansatz::CNOT;
    if (name == "iswap") return Ansatz::ISWAP;
    if (name == "crx") return Ansatz::CRX;
    if (name == "crot") return Ansatz::CROT;
    if (name == "none") return Ansatz::NO_ENTANGLER;
    throw ValidationError("unknown ansatz '" + name + "' (expected cnot|iswap|crx|crot|none)");
}

int entangler_param_count(Ansatz a) {
    switch (a) {
        case Ansatz::CRX: return 1;
        case Ansatz::CROT: return 3;
        default: return 0;
    }
}

int generator_param_count(int n, int b, Ansatz a) {
    if (n < 1 || b < 1) throw ValidationError("generator needs n >= 1 and b >= 1");
    return b * (2 * n + (n - 1) * entangler_param_count(a));
}

std::vector<bool> controlled_angle_mask(int n, int b, Ansatz a) {
    std::vector<bool> mask(generator_param_count(n, b, a), false);
    const int per_entangler = entangler_param_count(a);
    if (per_entangler == 0) return mask;
    int idx = 0;
    for (int block = 0; block < b; ++block) {
        idx += 2 * n;
        for (int e = 0; e < (n - 1) * per_entangler; ++e) mask[idx++] = true;
    }
    return mask;
}

Circuit build_encoder(std::span<const double> x, const EncoderParams& params) {
    const int n = static_cast<int>(params.theta_s.size());
    if (static_cast<int>(x.size()) != n) {
        throw ValidationError("build_encoder: input length " + std::to_string(x.size()) +
                              " does not match theta_s length " + std::to_string(n));
    }
    Circuit circuit(n);
    int clamped = 0;
    for (int i = 0; i < n; ++i) {
        double product = x[i] * params.theta_s[i];
        if (product < -1.0 || product > 1.0) {
            product = std::clamp(product, -1.0, 1.0);
            ++clamped;
        }
        circuit.add(Gate::ry(i, std::asin(product), i));
    }
    if (clamped > 0) {
        warn("build_encoder: clamped " + std::to_string(clamped) +
             " feature product(s) to the arcsin domain [-1, 1]");
    }
    return circuit;
}

Circuit build_fixed_encoder(std::span<const double> x) {
    Circuit circuit(static_cast<int>(x.size()));
    for (int i = 0; i < static_cast<int>(x.size()); ++i) {
        circuit.add(Gate::ry(i, std::numbers::pi * (x[i] + 1.0) / 2.0));
    }
    return circuit;
}

Circuit build_encoder_for_mode(EncoderMode mode, std::span<const double> x,
                               const EncoderParams& params) {
    return mode == EncoderMode::FIXED ? build_fixed_encoder(x) : build_encoder(x, params);
}

Circuit build_generator(const GeneratorParams& params, int n, int b) {
    const int expected = generator_param_count(n, b, params.ansatz);
    if (static_cast<int>(params.theta_g.size()) != expected) {
        throw ValidationError("build_generator: expected " + std::to_string(expected) +
                              " parameters for n=" + std::to_string(n) + " b=" +
                              std::to_string(b) + " ansatz=" + ansatz_name(params.ansatz) +
                              ", got " + std::to_string(params.theta_g.size()));
    }
    Circuit circuit(n);
    int idx = 0;
    for (int block = 0; block < b; ++block) {
        for (int q = 0; q < n; ++q) {
            circuit.add(Gate::ry(q, params.theta_g[idx], idx));
            ++idx;
            circuit.add(Gate::rz(q, params.theta_g[idx], idx));
            ++idx;
        }
        for (int q = 0; q + 1 < n; ++q) {
            switch (params.ansatz) {
                case Ansatz::CNOT:
                    circuit.add(Gate::cnot(q, q + 1));
                    break;
                case Ansatz::ISWAP:
                    circuit.add(Gate::iswap(q, q + 1));
                    break;
                case Ansatz::CRX:
                    circuit.add(Gate::crx(q, q + 1, params.theta_g[idx], idx));
                    ++idx;
                    break;
                case Ansatz::CROT:
                    circuit.add(Gate::crot(q, q + 1, params.theta_g[idx], params.theta_g[idx + 1],
                                           params.theta_g[idx + 2], idx, idx + 1, idx + 2));
                    idx += 3;
                    break;
                case Ansatz::NO_ENTANGLER:
                    break;
            }
        }
    }
    return circuit;
}

Circuit build_swap_test(int n) {
    if (n < 1) throw ValidationError("build_swap_test: n must be >= 1");
    Circuit circuit(2 * n + 1);
    circuit.add(Gate::h(0));
    for (int i = 0; i < n; ++i) {
        circuit.add(Gate::cswap(0, 1 + i, 1 + n + i));
    }
    circuit.add(Gate::h(0));
    return circuit;
}

Circuit assemble_gan_circuit(const Circuit& encoder, const Circuit& generator) {
    if (encoder.num_qubits != generator.num_qubits) {
        throw ValidationError("assemble_gan_circuit: register size mismatch");
    }
    const int n = encoder.num_qubits;
    Circuit full(2 * n + 1);
    for (const Gate& g : encoder.shifted(1, 2 * n + 1).gates) full.gates.push_back(g);
    for (const Gate& g : generator.shifted(1 + n, 2 * n + 1).gates) full.gates.push_back(g);
    for (const Gate& g : build_swap_test(n).gates) full.gates.push_back(g);
    return full;
}

double swap_test_p0(const Circuit& encoder, const Circuit& generator, int n) {
    if (encoder.num_qubits != n || generator.num_qubits != n) {
        throw ValidationError("swap_test_p0: subcircuits must act on n qubits");
    }
    const StateVector state = run_circuit(assemble_gan_circuit(encoder, generator));
    return qubit_zero_probability(state, 0);
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::QUGAN21: return "qugan21";
        case Scheme::EQGAN: return "eqgan";
        case Scheme::IQGAN: return "iqgan";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "qugan21") return Scheme::QUGAN21;
    if (name == "eqgan") return Scheme::EQGAN;
    if (name == "iqgan") return Scheme::IQGAN;
    throw ValidationError("unknown scheme '" + name + "' (expected qugan21|eqgan|iqgan)");
}

CostReport hardware_cost(Scheme scheme, int n, int b) {
    if (n < 1 || b < 1) throw ValidationError("hardware_cost: n and b must be >= 1");
    CostReport r;
    r.scheme = scheme;
    r.qubits = 2 * n + 1;
    switch (scheme) {
        case Scheme::QUGAN21:
            r.one_qubit_gates = n * b + 1;
            r.two_qubit_gates = 4 * n * b;
            r.parameters = 5 * n * b;
            break;
        case Scheme::EQGAN:
            r.one_qubit_gates = 2 * n * b + n + 2;
            r.two_qubit_gates = (b + 1) * n;
            r.parameters = 2 * n * b;
            break;
        case Scheme::IQGAN:
            r.one_qubit_gates = 2 * n * b + n + 2;
            r.two_qubit_gates = n;
            r.parameters = 2 * n * b;
            break;
    }
    return r;
}

std::vector<double> decode_coords_from_p0(std::span<const double> p0,
                                          const EncoderParams& params) {
    if (p0.size() != params.theta_s.size()) {
        throw ValidationError("decode_generated: theta_s length does not match state qubits");
    }
    std::vector<double> coords(p0.size());
    for (std::size_t i = 0; i < p0.size(); ++i) {
        if (params.theta_s[i] == 0.0) {
            throw NumericError("decode_generated: theta_s[" + std::to_string(i) +
                               "] = 0 is not invertible");
        }
        const double p = std::clamp(p0[i], 0.0, 1.0);
        const double alpha = 2.0 * std::acos(std::sqrt(p));
        coords[i] = std::clamp(std::sin(alpha) / params.theta_s[i], -1.0, 1.0);
    }
    return coords;
}

std::vector<double> measured_zero_probabilities(const StateVector& state, int shots,
                                                std::uint64_t seed) {
    const MeasurementCounts counts = sample_measurements(state, shots, seed);
    std::vector<double> p0(state.num_qubits, 0.0);
    for (const auto& [bits, count] : counts.counts) {
        for (int q = 0; q < state.num_qubits; ++q) {
            if (bits[static_cast<std::size_t>(q)] == '0') p0[q] += count;
        }
    }
    for (double& p : p0) p /= shots;
    return p0;
}

std::vector<double> decode_generated_coords(const StateVector& generator_state,
                                            const EncoderParams& params) {
    std::vector<double> p0(generator_state.num_qubits);
    for (int i = 0; i < generator_state.num_qubits; ++i) {
        p0[i] = qubit_zero_probability(generator_state, i);
    }
    return decode_coords_from_p0(p0, params);
}

std::vector<double> decode_generated(const StateVector& generator_state,
                                     const EncoderParams& params, const PcaModel& pca) {
    return reconstruct(pca, decode_generated_coords(generator_state, params));
}

std::vector<double> decode_generated_fixed(const StateVector& generator_state,
                                           const PcaModel& pca) {
    const int n = generator_state.num_qubits;
    std::vector<double> coords(n);
    for (int i = 0; i < n; ++i) {
        const double p = std::clamp(qubit_zero_probability(generator_state, i), 0.0, 1.0);
        const double alpha = 2.0 * std::acos(std::sqrt(p));
        coords[i] = std::clamp(2.0 * alpha / std::numbers::pi - 1.0, -1.0, 1.0);
    }
    return reconstruct(pca, coords);
}

} // namespace iqgan
