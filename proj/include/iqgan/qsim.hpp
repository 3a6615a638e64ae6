#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "iqgan/common.hpp"

namespace iqgan {

// Exact dense statevector simulation of the gate set used by the GAN
// circuits. Convention: qubit 0 is the most significant bit of the basis
// index, so |q0 q1 ... q_{n-1}> has index q0*2^{n-1} + ... + q_{n-1}.
// Rotations follow R(theta) = exp(-i*theta*P/2).

enum class GateKind { H, RX, RY, RZ, CNOT, ISWAP, CRX, CROT, CSWAP };

const char* gate_name(GateKind kind);
int gate_arity(GateKind kind);
int gate_param_count(GateKind kind);

struct Gate {
    GateKind kind;
    std::vector<int> targets;     // control(s) first
    std::vector<double> params;   // rotation angles, radians
    std::vector<int> param_slots; // trainable-parameter index per angle, -1 = bound constant

    static Gate h(int q);
    static Gate rx(int q, double angle, int slot = -1);
    static Gate ry(int q, double angle, int slot = -1);
    static Gate rz(int q, double angle, int slot = -1);
    static Gate cnot(int control, int target);
    static Gate iswap(int a, int b);
    static Gate crx(int control, int target, double angle, int slot = -1);
    static Gate crot(int control, int target, double phi, double theta, double omega,
                     int slot_phi = -1, int slot_theta = -1, int slot_omega = -1);
    static Gate cswap(int control, int a, int b);
};

// Throws ValidationError on arity/param-count mismatch.
void validate_gate(const Gate& gate);

// Unitary matrix of a k-qubit gate (2^k x 2^k); the first listed target is the
// most significant bit of the local index.
Eigen::MatrixXcd gate_matrix(const Gate& gate);

struct Circuit {
    int num_qubits = 0;
    std::vector<Gate> gates;

    Circuit() = default;
    explicit Circuit(int n) : num_qubits(n) {}

    // Validates the gate and its target range before appending.
    Circuit& add(Gate gate);

    int one_qubit_gate_count() const;
    int multi_qubit_gate_count() const; // counted as two-qubit gates in cost reports
    int trainable_param_count() const;

    // Deterministic text listing, one gate per line:
    //   <name> <targets comma-separated> <angles comma-separated, 9 significant digits>
    std::string dump() const;

    // Same gates re-targeted to qubits [offset, offset + num_qubits) of a
    // wider register.
    Circuit shifted(int offset, int new_num_qubits) const;
};

struct StateVector {
    int num_qubits = 0;
    std::vector<cdouble> amplitudes;

    static StateVector zero_state(int n);
    static StateVector basis_state(int n, std::uint64_t index);

    double norm() const;
    std::size_t dim() const { return amplitudes.size(); }
};

// Applies the gate in place; norm is preserved to 1e-10.
void apply_gate(StateVector& state, const Gate& gate);

// Runs gates in program order from |0...0> or the given initial state.
StateVector run_circuit(const Circuit& circuit,
                        const std::optional<StateVector>& initial = std::nullopt);

// |<a|b>|^2; symmetric, 1 iff equal up to global phase.
double fidelity(const StateVector& a, const StateVector& b);

// Marginal probability of measuring |0> on one qubit.
double qubit_zero_probability(const StateVector& state, int qubit);

struct MeasurementCounts {
    int shots = 0;
    std::map<std::string, int> counts; // bitstring (qubit 0 first) -> occurrences
};

// Reproducible finite-shot sampling in the computational basis.
MeasurementCounts sample_measurements(const StateVector& state, int shots, std::uint64_t seed);

} // namespace iqgan
