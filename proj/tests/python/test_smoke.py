"""Smoke tests for the python bindings: the core operations behave like the
C++ suite says they do."""

import math

import pytest

import iqgan


def test_bell_state_amplitudes():
    circuit = iqgan.Circuit(2)
    circuit.h(0).cnot(0, 1)
    state = iqgan.run_circuit(circuit)
    amps = state.amplitudes
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    assert abs(amps[0] - inv_sqrt2) < 1e-12
    assert abs(amps[3] - inv_sqrt2) < 1e-12
    assert abs(amps[1]) < 1e-15 and abs(amps[2]) < 1e-15
    assert abs(state.norm() - 1.0) < 1e-12


def test_swap_test_matches_direct_fidelity():
    theta_s = iqgan.EncoderParams([0.8, 0.6])
    encoder = iqgan.build_encoder([0.4, -0.7], theta_s)
    generator = iqgan.build_generator(
        iqgan.GeneratorParams([0.3, -0.2, 0.9, 0.1], iqgan.Ansatz.NO_ENTANGLER), 2, 1
    )
    f = iqgan.fidelity(iqgan.run_circuit(encoder), iqgan.run_circuit(generator))
    p0 = iqgan.swap_test_p0(encoder, generator, 2)
    assert abs(p0 - (1.0 + f) / 2.0) < 1e-10


def test_hardware_cost_table():
    r = iqgan.hardware_cost("iqgan", 2, 1)
    assert (r.qubits, r.one_qubit_gates, r.two_qubit_gates, r.parameters) == (5, 8, 2, 4)
    r = iqgan.hardware_cost("qugan21", 2, 1)
    assert (r.qubits, r.one_qubit_gates, r.two_qubit_gates, r.parameters) == (5, 3, 8, 10)
    with pytest.raises(ValueError):
        iqgan.hardware_cost("qugan18", 2, 1)


def test_gradients_match_finite_differences():
    ctx = iqgan.LossContext()
    ctx.n = 2
    ctx.b = 1
    ctx.batch = [[0.3, -0.5], [0.1, 0.4]]
    ctx.encoder = iqgan.EncoderParams([1.0, 0.7])
    ctx.generator = iqgan.GeneratorParams([0.4, -0.3, 0.2, 0.8, 0.5], iqgan.Ansatz.CRX)
    ps = iqgan.param_shift_grad(ctx, iqgan.GradTarget.GENERATOR)
    fd = iqgan.finite_diff_grad(ctx, iqgan.GradTarget.GENERATOR)
    assert len(ps) == len(fd) == 5
    for a, b in zip(ps, fd):
        assert abs(a - b) <= 1e-5 * max(1.0, abs(a), abs(b))


def test_cosine_schedule_endpoints():
    assert iqgan.cosine_anneal_lr(0, 0.001, 30) == pytest.approx(0.001)
    assert iqgan.cosine_anneal_lr(30, 0.001, 30) == pytest.approx(0.0, abs=1e-18)
    assert iqgan.cosine_anneal_lr(15, 0.001, 30) == pytest.approx(0.0005)


def test_pca_round_trip_and_idx(tmp_path):
    samples = iqgan.make_synthetic_digits(32, [4], 11)
    assert len(samples) == 32
    assert all(0.0 <= p <= 1.0 for p in samples[0].pixels)

    images = str(tmp_path / "img.idx")
    labels = str(tmp_path / "lab.idx")
    iqgan.write_idx(samples, images, labels)
    loaded = iqgan.load_idx(images, labels)
    assert len(loaded) == 32
    assert loaded[0].label == 4

    pca = iqgan.fit_pca(loaded, 2)
    coords = iqgan.project(pca, loaded[0].pixels)
    assert len(coords) == 2
    assert all(-1.0 <= c <= 1.0 for c in coords)
    back = iqgan.project(pca, iqgan.reconstruct(pca, coords))
    assert back == pytest.approx(coords, abs=1e-9)


def test_noisy_fidelity_zero_noise_is_exact():
    circuit = iqgan.Circuit(2)
    circuit.ry(0, 0.8).cnot(0, 1)
    reference = iqgan.run_circuit(circuit)
    est = iqgan.noisy_fidelity(circuit, reference, iqgan.NoiseSpec(0.0, 0.0), 64, 5)
    assert est.mean == pytest.approx(1.0, abs=1e-12)
    assert est.std_error == pytest.approx(0.0, abs=1e-15)


def test_small_training_run_converges():
    samples = iqgan.make_synthetic_digits(128, [7], 21)
    pca = iqgan.fit_pca(samples, 2)
    inputs = [iqgan.project(pca, s.pixels) for s in samples]

    config = iqgan.TrainConfig()
    config.seed = 1
    config.allow_unpretrained_encoder = True
    result = iqgan.train_gan(inputs, iqgan.EncoderParams([1.0, 1.0]), config)
    assert len(result.records) == 30
    assert result.records[-1].fidelity > 0.85
    assert result.records[-1].fidelity == pytest.approx(
        1.0 - result.records[-1].loss, abs=1e-12
    )

    # same seed, same record stream
    again = iqgan.train_gan(inputs, iqgan.EncoderParams([1.0, 1.0]), config)
    assert [r.loss for r in again.records] == [r.loss for r in result.records]


def test_two_step_guard_is_enforced():
    config = iqgan.TrainConfig()
    config.n = 1
    with pytest.raises(ValueError):
        iqgan.train_gan([[0.1]], iqgan.EncoderParams([1.0]), config)
