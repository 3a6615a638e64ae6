#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iqgan/noise.hpp"
#include "iqgan/synth.hpp"
#include "iqgan/training.hpp"

namespace py = pybind11;
using namespace iqgan;

PYBIND11_MODULE(_core, m) {
    m.doc() = "quantum GAN toolkit: statevector simulation, circuit builders, "
              "parameter-shift training";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_IOError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::enum_<Ansatz>(m, "Ansatz")
        .value("CNOT", Ansatz::CNOT)
        .value("ISWAP", Ansatz::ISWAP)
        .value("CRX", Ansatz::CRX)
        .value("CROT", Ansatz::CROT)
        .value("NO_ENTANGLER", Ansatz::NO_ENTANGLER);

    py::enum_<EncoderMode>(m, "EncoderMode")
        .value("TRAINABLE", EncoderMode::TRAINABLE)
        .value("FIXED", EncoderMode::FIXED);

    py::enum_<Scheme>(m, "Scheme")
        .value("QUGAN21", Scheme::QUGAN21)
        .value("EQGAN", Scheme::EQGAN)
        .value("IQGAN", Scheme::IQGAN);

    py::enum_<GradTarget>(m, "GradTarget")
        .value("GENERATOR", GradTarget::GENERATOR)
        .value("ENCODER", GradTarget::ENCODER);

    py::class_<StateVector>(m, "StateVector")
        .def_static("zero_state", &StateVector::zero_state, py::arg("num_qubits"))
        .def_static("basis_state", &StateVector::basis_state, py::arg("num_qubits"),
                    py::arg("index"))
        .def_readonly("num_qubits", &StateVector::num_qubits)
        .def_readonly("amplitudes", &StateVector::amplitudes)
        .def("norm", &StateVector::norm);

    py::class_<Circuit>(m, "Circuit")
        .def(py::init<int>(), py::arg("num_qubits"))
        .def_readonly("num_qubits", &Circuit::num_qubits)
        .def("h", [](Circuit& c, int q) -> Circuit& { return c.add(Gate::h(q)); },
             py::return_value_policy::reference_internal)
        .def("rx", [](Circuit& c, int q, double a) -> Circuit& { return c.add(Gate::rx(q, a)); },
             py::return_value_policy::reference_internal)
        .def("ry", [](Circuit& c, int q, double a) -> Circuit& { return c.add(Gate::ry(q, a)); },
             py::return_value_policy::reference_internal)
        .def("rz", [](Circuit& c, int q, double a) -> Circuit& { return c.add(Gate::rz(q, a)); },
             py::return_value_policy::reference_internal)
        .def("cnot",
             [](Circuit& c, int a, int b) -> Circuit& { return c.add(Gate::cnot(a, b)); },
             py::return_value_policy::reference_internal)
        .def("iswap",
             [](Circuit& c, int a, int b) -> Circuit& { return c.add(Gate::iswap(a, b)); },
             py::return_value_policy::reference_internal)
        .def("crx",
             [](Circuit& c, int a, int b, double t) -> Circuit& {
                 return c.add(Gate::crx(a, b, t));
             },
             py::return_value_policy::reference_internal)
        .def("crot",
             [](Circuit& c, int a, int b, double phi, double theta, double omega) -> Circuit& {
                 return c.add(Gate::crot(a, b, phi, theta, omega));
             },
             py::return_value_policy::reference_internal)
        .def("cswap",
             [](Circuit& c, int ctrl, int a, int b) -> Circuit& {
                 return c.add(Gate::cswap(ctrl, a, b));
             },
             py::return_value_policy::reference_internal)
        .def("one_qubit_gate_count", &Circuit::one_qubit_gate_count)
        .def("multi_qubit_gate_count", &Circuit::multi_qubit_gate_count)
        .def("trainable_param_count", &Circuit::trainable_param_count)
        .def("dump", &Circuit::dump);

    m.def("run_circuit",
          [](const Circuit& circuit, const std::optional<StateVector>& initial) {
              return run_circuit(circuit, initial);
          },
          py::arg("circuit"), py::arg("initial") = std::nullopt);
    m.def("fidelity", &fidelity, py::arg("a"), py::arg("b"));
    m.def("qubit_zero_probability", &qubit_zero_probability, py::arg("state"), py::arg("qubit"));
    m.def("sample_measurements",
          [](const StateVector& state, int shots, std::uint64_t seed) {
              return sample_measurements(state, shots, seed).counts;
          },
          py::arg("state"), py::arg("shots"), py::arg("seed"));

    py::class_<EncoderParams>(m, "EncoderParams")
        .def(py::init([](std::vector<double> theta_s) {
                 return EncoderParams{std::move(theta_s)};
             }),
             py::arg("theta_s"))
        .def_readwrite("theta_s", &EncoderParams::theta_s);

    py::class_<GeneratorParams>(m, "GeneratorParams")
        .def(py::init([](std::vector<double> theta_g, Ansatz ansatz) {
                 GeneratorParams p;
                 p.theta_g = std::move(theta_g);
                 p.ansatz = ansatz;
                 return p;
             }),
             py::arg("theta_g"), py::arg("ansatz") = Ansatz::NO_ENTANGLER)
        .def_readwrite("theta_g", &GeneratorParams::theta_g)
        .def_readwrite("ansatz", &GeneratorParams::ansatz);

    m.def("generator_param_count", &generator_param_count, py::arg("n"), py::arg("b"),
          py::arg("ansatz"));
    m.def("build_encoder",
          [](const std::vector<double>& x, const EncoderParams& p) {
              return build_encoder(x, p);
          },
          py::arg("x"), py::arg("params"));
    m.def("build_fixed_encoder",
          [](const std::vector<double>& x) { return build_fixed_encoder(x); }, py::arg("x"));
    m.def("build_generator", &build_generator, py::arg("params"), py::arg("n"), py::arg("b"));
    m.def("build_swap_test", &build_swap_test, py::arg("n"));
    m.def("assemble_gan_circuit", &assemble_gan_circuit, py::arg("encoder"),
          py::arg("generator"));
    m.def("swap_test_p0", &swap_test_p0, py::arg("encoder"), py::arg("generator"), py::arg("n"));

    py::class_<CostReport>(m, "CostReport")
        .def_readonly("qubits", &CostReport::qubits)
        .def_readonly("one_qubit_gates", &CostReport::one_qubit_gates)
        .def_readonly("two_qubit_gates", &CostReport::two_qubit_gates)
        .def_readonly("parameters", &CostReport::parameters)
        .def("__repr__", [](const CostReport& r) {
            return "CostReport(qubits=" + std::to_string(r.qubits) + ", one_qubit_gates=" +
                   std::to_string(r.one_qubit_gates) + ", two_qubit_gates=" +
                   std::to_string(r.two_qubit_gates) + ", parameters=" +
                   std::to_string(r.parameters) + ")";
        });
    m.def("hardware_cost",
          [](const std::string& scheme, int n, int b) {
              return hardware_cost(parse_scheme(scheme), n, b);
          },
          py::arg("scheme"), py::arg("n"), py::arg("b"));

    m.def("decode_generated",
          [](const StateVector& state, const EncoderParams& params, const PcaModel& pca) {
              return decode_generated(state, params, pca);
          },
          py::arg("generator_state"), py::arg("params"), py::arg("pca"));

    py::class_<LossContext>(m, "LossContext")
        .def(py::init<>())
        .def_readwrite("batch", &LossContext::batch)
        .def_readwrite("encoder", &LossContext::encoder)
        .def_readwrite("generator", &LossContext::generator)
        .def_readwrite("n", &LossContext::n)
        .def_readwrite("b", &LossContext::b)
        .def_readwrite("encoder_mode", &LossContext::encoder_mode)
        .def_readwrite("encoder_frozen", &LossContext::encoder_frozen)
        .def_readwrite("shots", &LossContext::shots)
        .def_readwrite("seed", &LossContext::seed);

    m.def("gan_loss", &gan_loss, py::arg("ctx"));
    m.def("param_shift_grad", &param_shift_grad, py::arg("ctx"), py::arg("which"));
    m.def("finite_diff_grad", &finite_diff_grad, py::arg("ctx"), py::arg("which"),
          py::arg("h") = 1e-5);

    py::class_<AdamState>(m, "AdamState")
        .def(py::init<std::size_t>(), py::arg("num_params"))
        .def_readonly("step", &AdamState::step);
    m.def("adam_step",
          [](AdamState& state, std::vector<double> params, const std::vector<double>& grads,
             double lr) {
              adam_step(state, params, grads, lr);
              return params;
          },
          py::arg("state"), py::arg("params"), py::arg("grads"), py::arg("lr"),
          "returns the updated parameter vector");
    m.def("cosine_anneal_lr", &cosine_anneal_lr, py::arg("epoch"), py::arg("lr0"),
          py::arg("t_max"));

    py::class_<Sample>(m, "Sample")
        .def(py::init([](std::vector<double> pixels, int label) {
                 return Sample{std::move(pixels), label};
             }),
             py::arg("pixels"), py::arg("label"))
        .def_readwrite("pixels", &Sample::pixels)
        .def_readwrite("label", &Sample::label);

    py::class_<PcaModel>(m, "PcaModel")
        .def_static("identity", &PcaModel::identity, py::arg("dim"))
        .def_readonly("mean", &PcaModel::mean)
        .def_readonly("components", &PcaModel::components)
        .def_readonly("scale", &PcaModel::scale)
        .def("k", &PcaModel::k)
        .def("input_dim", &PcaModel::input_dim);

    m.def("fit_pca", &fit_pca, py::arg("samples"), py::arg("k"));
    m.def("project",
          [](const PcaModel& model, const std::vector<double>& x) { return project(model, x); },
          py::arg("model"), py::arg("x"));
    m.def("reconstruct",
          [](const PcaModel& model, const std::vector<double>& v) {
              return reconstruct(model, v);
          },
          py::arg("model"), py::arg("v"));
    m.def("load_idx", &load_idx, py::arg("images_path"), py::arg("labels_path"));
    m.def("write_idx", &write_idx, py::arg("samples"), py::arg("images_path"),
          py::arg("labels_path"), py::arg("rows") = 28, py::arg("cols") = 28);
    m.def("make_synthetic_digits",
          [](int per_class, const std::vector<int>& classes, std::uint64_t seed) {
              return make_synthetic_digits(per_class, classes, seed);
          },
          py::arg("per_class"), py::arg("classes"), py::arg("seed"));
    m.def("save_pca", &save_pca, py::arg("model"), py::arg("path"));
    m.def("load_pca", &load_pca, py::arg("path"));

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def(py::init([](double p_bit, double p_phase) {
                 NoiseSpec s;
                 s.p_bit = p_bit;
                 s.p_phase = p_phase;
                 s.validate();
                 return s;
             }),
             py::arg("p_bit") = 0.0, py::arg("p_phase") = 0.0)
        .def_readwrite("p_bit", &NoiseSpec::p_bit)
        .def_readwrite("p_phase", &NoiseSpec::p_phase);

    py::class_<TrajectoryEstimate>(m, "TrajectoryEstimate")
        .def_readonly("mean", &TrajectoryEstimate::mean)
        .def_readonly("std_error", &TrajectoryEstimate::std_error)
        .def_readonly("trajectories", &TrajectoryEstimate::trajectories);

    m.def("noisy_fidelity", &noisy_fidelity, py::arg("circuit"), py::arg("reference"),
          py::arg("spec"), py::arg("trajectories"), py::arg("seed"));

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def_readonly("num_qubits", &DensityMatrix::num_qubits)
        .def_readonly("rho", &DensityMatrix::rho);
    m.def("density_evolve", &density_evolve, py::arg("circuit"), py::arg("spec"));
    m.def("density_fidelity", &density_fidelity, py::arg("rho"), py::arg("reference"));
    m.def("build_ensemble", &build_ensemble, py::arg("class_inputs"), py::arg("params"));
    m.def("hs_distance", &hs_distance, py::arg("rho"), py::arg("sigma"));

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("t_max", &TrainConfig::t_max)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("n", &TrainConfig::n)
        .def_readwrite("b", &TrainConfig::b)
        .def_readwrite("ansatz", &TrainConfig::ansatz)
        .def_readwrite("encoder_mode", &TrainConfig::encoder_mode)
        .def_readwrite("encoder_frozen", &TrainConfig::encoder_frozen)
        .def_readwrite("encoder_pretrained", &TrainConfig::encoder_pretrained)
        .def_readwrite("allow_unpretrained_encoder", &TrainConfig::allow_unpretrained_encoder)
        .def_readwrite("shots", &TrainConfig::shots)
        .def_readwrite("noise", &TrainConfig::noise)
        .def_readwrite("init_scale", &TrainConfig::init_scale);

    py::class_<TrainRecord>(m, "TrainRecord")
        .def_readonly("epoch", &TrainRecord::epoch)
        .def_readonly("loss", &TrainRecord::loss)
        .def_readonly("fidelity", &TrainRecord::fidelity)
        .def_readonly("lr", &TrainRecord::lr)
        .def_readonly("wall_ms", &TrainRecord::wall_ms);

    py::class_<PretrainResult>(m, "PretrainResult")
        .def_readonly("theta_s", &PretrainResult::theta_s)
        .def_readonly("objective_trace", &PretrainResult::objective_trace);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("theta_g", &TrainResult::theta_g)
        .def_readonly("theta_s", &TrainResult::theta_s)
        .def_readonly("records", &TrainResult::records)
        .def_readonly("final_fidelity", &TrainResult::final_fidelity);

    m.def("pretrain_encoder", &pretrain_encoder, py::arg("inputs"), py::arg("labels"),
          py::arg("init"), py::arg("config"));
    m.def("train_gan", &train_gan, py::arg("inputs"), py::arg("theta_s"), py::arg("config"));
}
