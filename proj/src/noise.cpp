#include "iqgan/noise.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace iqgan {

void NoiseSpec::validate() const {
    if (p_bit < 0.0 || p_bit > 1.0 || p_phase < 0.0 || p_phase > 1.0) {
        throw ValidationError("noise probabilities must lie in [0, 1]");
    }
}

DensityMatrix DensityMatrix::zero_state(int n) {
    return from_pure(StateVector::zero_state(n));
}

DensityMatrix DensityMatrix::from_pure(const StateVector& state) {
    DensityMatrix d;
    d.num_qubits = state.num_qubits;
    const auto dim = static_cast<Eigen::Index>(state.dim());
    Eigen::VectorXcd psi(dim);
    for (Eigen::Index i = 0; i < dim; ++i) psi(i) = state.amplitudes[static_cast<std::size_t>(i)];
    d.rho = psi * psi.adjoint();
    return d;
}

std::vector<CircuitLayer> circuit_layers(const Circuit& circuit) {
    std::vector<CircuitLayer> layers;
    std::set<int> used;
    for (int gi = 0; gi < static_cast<int>(circuit.gates.size()); ++gi) {
        const Gate& g = circuit.gates[gi];
        const bool overlaps = std::any_of(g.targets.begin(), g.targets.end(),
                                          [&](int q) { return used.count(q) > 0; });
        if (layers.empty() || overlaps) {
            layers.push_back({});
            used.clear();
        }
        layers.back().gate_indices.push_back(gi);
        for (int q : g.targets) {
            used.insert(q);
            layers.back().qubits.push_back(q);
        }
    }
    for (CircuitLayer& layer : layers) {
        std::sort(layer.qubits.begin(), layer.qubits.end());
        layer.qubits.erase(std::unique(layer.qubits.begin(), layer.qubits.end()),
                           layer.qubits.end());
    }
    return layers;
}

namespace {

void apply_pauli_x(StateVector& state, int qubit) {
    const std::uint64_t mask = std::uint64_t{1} << (state.num_qubits - 1 - qubit);
    for (std::uint64_t i = 0; i < state.amplitudes.size(); ++i) {
        if (!(i & mask)) std::swap(state.amplitudes[i], state.amplitudes[i | mask]);
    }
}

void apply_pauli_z(StateVector& state, int qubit) {
    const std::uint64_t mask = std::uint64_t{1} << (state.num_qubits - 1 - qubit);
    for (std::uint64_t i = 0; i < state.amplitudes.size(); ++i) {
        if (i & mask) state.amplitudes[i] = -state.amplitudes[i];
    }
}

} // namespace

void apply_flip_trajectory(StateVector& state, const NoiseSpec& spec,
                           std::span<const int> qubits, Rng& rng) {
    spec.validate();
    for (int q : qubits) {
        if (q < 0 || q >= state.num_qubits) {
            throw ValidationError("apply_flip_trajectory: qubit out of range");
        }
        if (spec.p_bit > 0.0 && rng.bernoulli(spec.p_bit)) apply_pauli_x(state, q);
        if (spec.p_phase > 0.0 && rng.bernoulli(spec.p_phase)) apply_pauli_z(state, q);
    }
}

StateVector run_circuit_with_noise(const Circuit& circuit, const NoiseSpec& spec, Rng& rng) {
    spec.validate();
    StateVector state = StateVector::zero_state(circuit.num_qubits);
    for (const CircuitLayer& layer : circuit_layers(circuit)) {
        for (int gi : layer.gate_indices) apply_gate(state, circuit.gates[gi]);
        apply_flip_trajectory(state, spec, layer.qubits, rng);
    }
    return state;
}

TrajectoryEstimate noisy_fidelity(const Circuit& circuit, const StateVector& reference,
                                  const NoiseSpec& spec, int trajectories, std::uint64_t seed) {
    return noisy_mean_fidelity(circuit, std::span<const StateVector>(&reference, 1), spec,
                               trajectories, seed);
}

TrajectoryEstimate noisy_mean_fidelity(const Circuit& circuit,
                                       std::span<const StateVector> references,
                                       const NoiseSpec& spec, int trajectories,
                                       std::uint64_t seed) {
    spec.validate();
    if (trajectories < 1) throw ValidationError("noisy_fidelity: trajectories must be >= 1");
    if (references.empty()) throw ValidationError("noisy_fidelity: no reference states");
    for (const StateVector& ref : references) {
        if (ref.num_qubits != circuit.num_qubits) {
            throw ValidationError("noisy_fidelity: reference qubit count mismatch");
        }
    }

    const Rng master(seed);
    // Welford running moments; exact zero spread for identical trajectories.
    double mean = 0.0;
    double m2 = 0.0;
    for (int t = 0; t < trajectories; ++t) {
        Rng rng = master.child(static_cast<std::uint64_t>(t));
        const StateVector state = run_circuit_with_noise(circuit, spec, rng);
        double f = 0.0;
        for (const StateVector& ref : references) f += fidelity(state, ref);
        f /= static_cast<double>(references.size());
        const double delta = f - mean;
        mean += delta / (t + 1);
        m2 += delta * (f - mean);
    }

    TrajectoryEstimate est;
    est.trajectories = trajectories;
    est.mean = mean;
    if (trajectories > 1) {
        const double var = std::max(0.0, m2 / (trajectories - 1));
        est.std_error = std::sqrt(var / trajectories);
    }
    return est;
}

namespace {

// rho -> (1-p) rho + p P rho P with P a single-qubit Pauli acting on `qubit`.
void apply_flip_channel(DensityMatrix& d, int qubit, double p, bool phase) {
    if (p <= 0.0) return;
    const auto dim = d.rho.rows();
    const std::uint64_t mask = std::uint64_t{1} << (d.num_qubits - 1 - qubit);
    Eigen::MatrixXcd flipped(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            const auto ur = static_cast<std::uint64_t>(r);
            const auto uc = static_cast<std::uint64_t>(c);
            if (phase) {
                const int sign = ((ur & mask) != 0) != ((uc & mask) != 0) ? -1 : 1;
                flipped(r, c) = static_cast<double>(sign) * d.rho(r, c);
            } else {
                flipped(r, c) = d.rho(static_cast<Eigen::Index>(ur ^ mask),
                                      static_cast<Eigen::Index>(uc ^ mask));
            }
        }
    }
    d.rho = (1.0 - p) * d.rho + p * flipped;
}

Eigen::MatrixXcd embed_unitary(const Gate& gate, int num_qubits) {
    const Eigen::MatrixXcd u = gate_matrix(gate);
    const int k = static_cast<int>(gate.targets.size());
    const std::size_t span = std::size_t{1} << k;
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;

    std::vector<std::uint64_t> masks(k);
    std::uint64_t target_mask = 0;
    for (int j = 0; j < k; ++j) {
        masks[j] = std::uint64_t{1} << (num_qubits - 1 - gate.targets[j]);
        target_mask |= masks[j];
    }
    std::vector<std::uint64_t> bit(span, 0);
    for (std::size_t local = 0; local < span; ++local) {
        std::uint64_t addr = 0;
        for (int j = 0; j < k; ++j) {
            if ((local >> (k - 1 - j)) & 1) addr |= masks[j];
        }
        bit[local] = addr;
    }

    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::uint64_t base = 0; base < static_cast<std::uint64_t>(dim); ++base) {
        if (base & target_mask) continue;
        for (std::size_t r = 0; r < span; ++r) {
            for (std::size_t c = 0; c < span; ++c) {
                full(static_cast<Eigen::Index>(base | bit[r]),
                     static_cast<Eigen::Index>(base | bit[c])) = u(static_cast<Eigen::Index>(r),
                                                                   static_cast<Eigen::Index>(c));
            }
        }
    }
    return full;
}

} // namespace

DensityMatrix density_evolve(const Circuit& circuit, const NoiseSpec& spec) {
    spec.validate();
    if (circuit.num_qubits > 4) {
        throw ValidationError("density_evolve: restricted to at most 4 qubits");
    }
    DensityMatrix d = DensityMatrix::zero_state(circuit.num_qubits);
    for (const CircuitLayer& layer : circuit_layers(circuit)) {
        for (int gi : layer.gate_indices) {
            const Eigen::MatrixXcd u = embed_unitary(circuit.gates[gi], circuit.num_qubits);
            d.rho = u * d.rho * u.adjoint();
        }
        for (int q : layer.qubits) {
            apply_flip_channel(d, q, spec.p_bit, false);
            apply_flip_channel(d, q, spec.p_phase, true);
        }
    }
    return d;
}

double density_fidelity(const DensityMatrix& rho, const StateVector& reference) {
    if (rho.num_qubits != reference.num_qubits) {
        throw ValidationError("density_fidelity: qubit count mismatch");
    }
    const auto dim = static_cast<Eigen::Index>(reference.dim());
    Eigen::VectorXcd psi(dim);
    for (Eigen::Index i = 0; i < dim; ++i) psi(i) = reference.amplitudes[static_cast<std::size_t>(i)];
    return (psi.adjoint() * rho.rho * psi)(0, 0).real();
}

} // namespace iqgan
