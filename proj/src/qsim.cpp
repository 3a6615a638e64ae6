#include "iqgan/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

namespace iqgan {

namespace {

// The default sink prints each distinct message once; hot paths (per-sample
// clamps inside gradient sweeps) would otherwise flood stderr.
void default_warn(const std::string& msg) {
    static std::map<std::string, int> counts;
    const int seen = ++counts[msg];
    if (seen == 1) {
        std::fprintf(stderr, "[iqgan] warning: %s\n", msg.c_str());
    } else if (seen == 2) {
        std::fprintf(stderr, "[iqgan] warning: %s (suppressing further identical warnings)\n",
                     msg.c_str());
    }
}

WarnHandler& warn_handler_ref() {
    static WarnHandler handler = default_warn;
    return handler;
}

} // namespace

void set_warn_handler(WarnHandler handler) {
    warn_handler_ref() = handler ? std::move(handler) : WarnHandler(default_warn);
}

void warn(const std::string& message) {
    if (warn_handler_ref()) warn_handler_ref()(message);
}

const char* gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::CNOT: return "CNOT";
        case GateKind::ISWAP: return "ISWAP";
        case GateKind::CRX: return "CRX";
        case GateKind::CROT: return "CROT";
        case GateKind::CSWAP: return "CSWAP";
    }
    return "?";
}

int gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::H:
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ: return 1;
        case GateKind::CNOT:
        case GateKind::ISWAP:
        case GateKind::CRX:
        case GateKind::CROT: return 2;
        case GateKind::CSWAP: return 3;
    }
    return 0;
}

int gate_param_count(GateKind kind) {
    switch (kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::CRX: return 1;
        case GateKind::CROT: return 3;
        default: return 0;
    }
}

Gate Gate::h(int q) { return Gate{GateKind::H, {q}, {}, {}}; }
Gate Gate::rx(int q, double angle, int slot) { return Gate{GateKind::RX, {q}, {angle}, {slot}}; }
Gate Gate::ry(int q, double angle, int slot) { return Gate{GateKind::RY, {q}, {angle}, {slot}}; }
Gate Gate::rz(int q, double angle, int slot) { return Gate{GateKind::RZ, {q}, {angle}, {slot}}; }
Gate Gate::cnot(int control, int target) { return Gate{GateKind::CNOT, {control, target}, {}, {}}; }
Gate Gate::iswap(int a, int b) { return Gate{GateKind::ISWAP, {a, b}, {}, {}}; }
Gate Gate::crx(int control, int target, double angle, int slot) {
    return Gate{GateKind::CRX, {control, target}, {angle}, {slot}};
}
Gate Gate::crot(int control, int target, double phi, double theta, double omega,
                int slot_phi, int slot_theta, int slot_omega) {
    return Gate{GateKind::CROT, {control, target}, {phi, theta, omega}, {slot_phi, slot_theta, slot_omega}};
}
Gate Gate::cswap(int control, int a, int b) { return Gate{GateKind::CSWAP, {control, a, b}, {}, {}}; }

void validate_gate(const Gate& gate) {
    const int arity = gate_arity(gate.kind);
    if (static_cast<int>(gate.targets.size()) != arity) {
        throw ValidationError(std::string(gate_name(gate.kind)) + ": expected " +
                              std::to_string(arity) + " target(s), got " +
                              std::to_string(gate.targets.size()));
    }
    const int nparams = gate_param_count(gate.kind);
    if (static_cast<int>(gate.params.size()) != nparams) {
        throw ValidationError(std::string(gate_name(gate.kind)) + ": expected " +
                              std::to_string(nparams) + " angle(s), got " +
                              std::to_string(gate.params.size()));
    }
    if (!gate.param_slots.empty() && gate.param_slots.size() != gate.params.size()) {
        throw ValidationError(std::string(gate_name(gate.kind)) + ": slot/angle count mismatch");
    }
    for (std::size_t i = 0; i < gate.targets.size(); ++i) {
        for (std::size_t j = i + 1; j < gate.targets.size(); ++j) {
            if (gate.targets[i] == gate.targets[j]) {
                throw ValidationError(std::string(gate_name(gate.kind)) + ": duplicate target qubit " +
                                      std::to_string(gate.targets[i]));
            }
        }
    }
}

namespace {

Eigen::Matrix2cd rot_matrix(GateKind kind, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Eigen::Matrix2cd m;
    switch (kind) {
        case GateKind::RX:
            m << cdouble(c, 0), cdouble(0, -s), cdouble(0, -s), cdouble(c, 0);
            break;
        case GateKind::RY:
            m << cdouble(c, 0), cdouble(-s, 0), cdouble(s, 0), cdouble(c, 0);
            break;
        case GateKind::RZ:
            m << std::exp(cdouble(0, -theta / 2.0)), cdouble(0, 0), cdouble(0, 0),
                std::exp(cdouble(0, theta / 2.0));
            break;
        default:
            throw ValidationError("not a rotation gate");
    }
    return m;
}

// RZ(omega) * RY(theta) * RZ(phi), applied to the target when the control is |1>.
Eigen::Matrix2cd rot3_matrix(double phi, double theta, double omega) {
    return rot_matrix(GateKind::RZ, omega) * rot_matrix(GateKind::RY, theta) *
           rot_matrix(GateKind::RZ, phi);
}

Eigen::MatrixXcd controlled(const Eigen::Matrix2cd& u) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
    m.block<2, 2>(2, 2) = u;
    return m;
}

} // namespace

Eigen::MatrixXcd gate_matrix(const Gate& gate) {
    validate_gate(gate);
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    switch (gate.kind) {
        case GateKind::H: {
            Eigen::MatrixXcd m(2, 2);
            m << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
            return m;
        }
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
            return rot_matrix(gate.kind, gate.params[0]);
        case GateKind::CNOT: {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
            m(0, 0) = 1;
            m(1, 1) = 1;
            m(2, 3) = 1;
            m(3, 2) = 1;
            return m;
        }
        case GateKind::ISWAP: {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
            m(0, 0) = 1;
            m(1, 2) = cdouble(0, 1);
            m(2, 1) = cdouble(0, 1);
            m(3, 3) = 1;
            return m;
        }
        case GateKind::CRX:
            return controlled(rot_matrix(GateKind::RX, gate.params[0]));
        case GateKind::CROT:
            return controlled(rot3_matrix(gate.params[0], gate.params[1], gate.params[2]));
        case GateKind::CSWAP: {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(8, 8);
            // swap the two target qubits when the control bit (local MSB) is set
            m(5, 5) = 0;
            m(6, 6) = 0;
            m(5, 6) = 1;
            m(6, 5) = 1;
            return m;
        }
    }
    throw ValidationError("unknown gate kind");
}

Circuit& Circuit::add(Gate gate) {
    validate_gate(gate);
    for (int t : gate.targets) {
        if (t < 0 || t >= num_qubits) {
            throw ValidationError(std::string(gate_name(gate.kind)) + ": target qubit " +
                                  std::to_string(t) + " out of range for " +
                                  std::to_string(num_qubits) + " qubits");
        }
    }
    gates.push_back(std::move(gate));
    return *this;
}

int Circuit::one_qubit_gate_count() const {
    return static_cast<int>(std::count_if(gates.begin(), gates.end(),
                                          [](const Gate& g) { return g.targets.size() == 1; }));
}

int Circuit::multi_qubit_gate_count() const {
    return static_cast<int>(std::count_if(gates.begin(), gates.end(),
                                          [](const Gate& g) { return g.targets.size() > 1; }));
}

int Circuit::trainable_param_count() const {
    int count = 0;
    for (const Gate& g : gates)
        for (int slot : g.param_slots)
            if (slot >= 0) ++count;
    return count;
}

std::string Circuit::dump() const {
    std::string out;
    char buf[64];
    for (const Gate& g : gates) {
        out += gate_name(g.kind);
        out += ' ';
        for (std::size_t i = 0; i < g.targets.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(g.targets[i]);
        }
        for (std::size_t i = 0; i < g.params.size(); ++i) {
            out += i ? "," : " ";
            std::snprintf(buf, sizeof(buf), "%.9g", g.params[i]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

Circuit Circuit::shifted(int offset, int new_num_qubits) const {
    if (offset < 0 || offset + num_qubits > new_num_qubits) {
        throw ValidationError("shifted: register does not fit");
    }
    Circuit wide(new_num_qubits);
    for (Gate g : gates) {
        for (int& t : g.targets) t += offset;
        wide.add(std::move(g));
    }
    return wide;
}

StateVector StateVector::zero_state(int n) {
    return basis_state(n, 0);
}

StateVector StateVector::basis_state(int n, std::uint64_t index) {
    if (n < 1) throw ValidationError("state needs at least one qubit");
    StateVector s;
    s.num_qubits = n;
    s.amplitudes.assign(std::size_t{1} << n, cdouble(0, 0));
    if (index >= s.amplitudes.size()) throw ValidationError("basis index out of range");
    s.amplitudes[index] = cdouble(1, 0);
    return s;
}

double StateVector::norm() const {
    double sum = 0;
    for (const cdouble& a : amplitudes) sum += std::norm(a);
    return std::sqrt(sum);
}

void apply_gate(StateVector& state, const Gate& gate) {
    validate_gate(gate);
    const int n = state.num_qubits;
    for (int t : gate.targets) {
        if (t < 0 || t >= n) {
            throw ValidationError(std::string(gate_name(gate.kind)) + ": target qubit " +
                                  std::to_string(t) + " out of range");
        }
    }

    const Eigen::MatrixXcd u = gate_matrix(gate);
    const int k = static_cast<int>(gate.targets.size());
    const std::size_t span = std::size_t{1} << k;

    // Bit masks per target; targets[0] is the MSB of the local gate index.
    std::uint64_t target_mask = 0;
    std::vector<std::uint64_t> bit(span, 0);
    std::vector<std::uint64_t> masks(k);
    for (int j = 0; j < k; ++j) {
        masks[j] = std::uint64_t{1} << (n - 1 - gate.targets[j]);
        target_mask |= masks[j];
    }
    for (std::size_t local = 0; local < span; ++local) {
        std::uint64_t addr = 0;
        for (int j = 0; j < k; ++j) {
            if ((local >> (k - 1 - j)) & 1) addr |= masks[j];
        }
        bit[local] = addr;
    }

    std::vector<cdouble> scratch(span);
    const std::uint64_t dim = state.amplitudes.size();
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & target_mask) continue;
        for (std::size_t l = 0; l < span; ++l) scratch[l] = state.amplitudes[base | bit[l]];
        for (std::size_t r = 0; r < span; ++r) {
            cdouble acc(0, 0);
            for (std::size_t c = 0; c < span; ++c) acc += u(r, c) * scratch[c];
            state.amplitudes[base | bit[r]] = acc;
        }
    }
}

StateVector run_circuit(const Circuit& circuit, const std::optional<StateVector>& initial) {
    StateVector state = initial ? *initial : StateVector::zero_state(circuit.num_qubits);
    if (state.num_qubits != circuit.num_qubits) {
        throw ValidationError("run_circuit: circuit is on " + std::to_string(circuit.num_qubits) +
                              " qubits but initial state has " + std::to_string(state.num_qubits));
    }
    for (const Gate& g : circuit.gates) apply_gate(state, g);
    return state;
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.num_qubits != b.num_qubits) {
        throw ValidationError("fidelity: qubit count mismatch");
    }
    cdouble overlap(0, 0);
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
        overlap += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    return std::norm(overlap);
}

double qubit_zero_probability(const StateVector& state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits) {
        throw ValidationError("qubit_zero_probability: qubit out of range");
    }
    const std::uint64_t mask = std::uint64_t{1} << (state.num_qubits - 1 - qubit);
    double p = 0;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        if (!(i & mask)) p += std::norm(state.amplitudes[i]);
    }
    return p;
}

MeasurementCounts sample_measurements(const StateVector& state, int shots, std::uint64_t seed) {
    if (shots < 1) throw ValidationError("sample_measurements: shots must be >= 1");

    std::vector<double> cdf(state.amplitudes.size());
    double acc = 0;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        acc += std::norm(state.amplitudes[i]);
        cdf[i] = acc;
    }

    Rng rng(seed);
    MeasurementCounts result;
    result.shots = shots;
    for (int s = 0; s < shots; ++s) {
        const double r = rng.uniform() * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= cdf.size()) idx = cdf.size() - 1;
        std::string bits(state.num_qubits, '0');
        for (int q = 0; q < state.num_qubits; ++q) {
            if (idx & (std::uint64_t{1} << (state.num_qubits - 1 - q))) bits[q] = '1';
        }
        ++result.counts[bits];
    }
    return result;
}

} // namespace iqgan
