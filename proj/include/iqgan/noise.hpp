#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "iqgan/qsim.hpp"

namespace iqgan {

// Bit-flip / phase-flip channels, inserted after every circuit layer on every
// qubit the layer touches. Full-size circuits use Monte Carlo trajectories;
// an exact density-matrix evolution serves as an oracle at <= 4 qubits.

struct NoiseSpec {
    double p_bit = 0.0;   // X applied with this probability
    double p_phase = 0.0; // Z applied with this probability

    bool any() const { return p_bit > 0.0 || p_phase > 0.0; }
    void validate() const;
};

struct DensityMatrix {
    int num_qubits = 0;
    Eigen::MatrixXcd rho;

    static DensityMatrix zero_state(int n);
    static DensityMatrix from_pure(const StateVector& state);

    double trace_real() const { return rho.trace().real(); }
};

// A layer is a maximal run of gates on pairwise-disjoint qubits, grouped in
// program order.
struct CircuitLayer {
    std::vector<int> gate_indices;
    std::vector<int> qubits; // touched by the layer, ascending
};

std::vector<CircuitLayer> circuit_layers(const Circuit& circuit);

// One trajectory step: independently applies X with p_bit and Z with p_phase
// to each listed qubit.
void apply_flip_trajectory(StateVector& state, const NoiseSpec& spec,
                           std::span<const int> qubits, Rng& rng);

// Runs the circuit with flip noise inserted after every layer.
StateVector run_circuit_with_noise(const Circuit& circuit, const NoiseSpec& spec, Rng& rng);

struct TrajectoryEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int trajectories = 0;
};

// Mean over trajectories of fidelity(noisy run, reference).
TrajectoryEstimate noisy_fidelity(const Circuit& circuit, const StateVector& reference,
                                  const NoiseSpec& spec, int trajectories, std::uint64_t seed);

// Same trajectories scored against several references at once; per trajectory
// the fidelities are averaged over the references first.
TrajectoryEstimate noisy_mean_fidelity(const Circuit& circuit,
                                       std::span<const StateVector> references,
                                       const NoiseSpec& spec, int trajectories,
                                       std::uint64_t seed);

// Exact mixed-state evolution through the same layered noise insertion;
// restricted to small registers (oracle for the trajectory estimator).
DensityMatrix density_evolve(const Circuit& circuit, const NoiseSpec& spec);

// <ref|rho|ref>
double density_fidelity(const DensityMatrix& rho, const StateVector& reference);

} // namespace iqgan
