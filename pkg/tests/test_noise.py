import json
import math
from types import SimpleNamespace

import numpy as np
import pytest

from oracles import random_mixed, werner
from triality.bases import ALL_SETTINGS, BasisSetting
from triality.errors import InvalidNoiseModel, InvalidProbabilities
from triality.metrics import evaluate
from triality.noise import (
    CountsTable,
    NoiseModel,
    amplitude_damping_kraus,
    damp,
    depolarize,
    derive_seed,
    load_noise_model,
    outcome_probabilities,
    phase_damping_kraus,
    preset,
    run_noisy_prep,
    sample_counts,
)
from triality.states import BELL_PARAMS, DensityMatrix, PrepParams, density_from_pure, prepare_state, purity

ZZ = BasisSetting("Z", "Z")


def _bell():
    return density_from_pure(prepare_state(BELL_PARAMS))


def _basis_state(index):
    m = np.zeros((4, 4))
    m[index, index] = 1
    return DensityMatrix(m)


# -- noise model -------------------------------------------------------------

def test_noise_model_json_schema(tmp_path):
    data = {
        "depol_1q": 0.01,
        "depol_2q": 0.02,
        "amp_damping_gamma": 0.003,
        "phase_damping_gamma": 0.004,
        "readout_confusion": [[[0.9, 0.1], [0.2, 0.8]], [[1, 0], [0, 1]]],
    }
    path = tmp_path / "nm.json"
    path.write_text(json.dumps(data))
    nm = load_noise_model(path)
    assert nm.depol_2q == 0.02
    assert nm.readout_confusion[0][1][0] == 0.2
    assert json.loads(nm.to_json()) == {**data, "readout_confusion": [[[0.9, 0.1], [0.2, 0.8]], [[1.0, 0.0], [0.0, 1.0]]]}


def test_noise_model_missing_fields_default_to_ideal():
    nm = NoiseModel.from_json('{"depol_2q": 0.1}')
    assert nm.depol_1q == 0 and nm.amp_damping_gamma == 0
    np.testing.assert_array_equal(nm.readout_confusion, [np.eye(2), np.eye(2)])
    assert NoiseModel.from_json("{}").is_ideal


@pytest.mark.parametrize(
    "text",
    [
        '{"depol_1q": 1.5}',
        '{"depol_1q": "a"}',
        '{"readout_confusion": [[[0.9, 0.2], [0, 1]], [[1, 0], [0, 1]]]}',
        '{"readout_confusion": [[1, 0], [0, 1]]}',
        '{"bogus": 1}',
        "[1, 2]",
        "{not json",
    ],
)
def test_noise_model_rejects_malformed(text):
    with pytest.raises(InvalidNoiseModel):
        NoiseModel.from_json(text)


def test_preset_values():
    nm = preset()
    assert (nm.depol_1q, nm.depol_2q, nm.amp_damping_gamma, nm.phase_damping_gamma) == (0.002, 0.03, 0.002, 0.002)
    np.testing.assert_allclose(nm.readout_confusion, [[[0.97, 0.03], [0.03, 0.97]]] * 2)


def test_load_missing_file():
    with pytest.raises(InvalidNoiseModel):
        load_noise_model("/nonexistent/nm.json")


# -- channels ----------------------------------------------------------------

def test_depolarize_examples():
    bell = _bell()
    np.testing.assert_allclose(depolarize(bell, 0.0).matrix, bell.matrix)
    np.testing.assert_allclose(depolarize(bell, 1.0).matrix, np.eye(4) / 4, atol=1e-15)
    for p in (0.1, 0.4, 0.8):
        out = depolarize(bell, p, "both")
        np.testing.assert_allclose(out.matrix, werner(1 - p), atol=1e-15)
        assert purity(out) == pytest.approx((1 + 3 * (1 - p) ** 2) / 4, abs=1e-12)


def test_depolarize_single_qubit_target():
    rho = _basis_state(1)  # |01>
    p = 0.3
    out = depolarize(rho, p, "A")
    np.testing.assert_allclose(np.diag(out.matrix).real, [0, 1 - p / 2, 0, p / 2], atol=1e-15)
    out = depolarize(rho, p, "B")
    np.testing.assert_allclose(np.diag(out.matrix).real, [p / 2, 1 - p / 2, 0, 0], atol=1e-15)


def test_damp_full_relaxation():
    rng = np.random.default_rng(0)
    for _ in range(5):
        rho = DensityMatrix(random_mixed(rng))
        out = damp(damp(rho, 1.0, 0.0, "A"), 1.0, 0.0, "B")
        np.testing.assert_allclose(out.matrix, np.diag([1, 0, 0, 0]), atol=1e-14)


def test_damp_identity_and_phase_scaling():
    rng = np.random.default_rng(1)
    rho = DensityMatrix(random_mixed(rng))
    np.testing.assert_allclose(damp(rho, 0, 0, "A").matrix, rho.matrix)
    plus_zero = np.zeros((4, 4))
    plus_zero[np.ix_([0, 2], [0, 2])] = 0.5
    g = 0.36
    out = damp(DensityMatrix(plus_zero), 0.0, g, "A").matrix
    assert out[0, 2] == pytest.approx(0.5 * math.sqrt(1 - g))
    assert out[0, 0] == pytest.approx(0.5) and out[2, 2] == pytest.approx(0.5)


def test_kraus_sets_are_trace_preserving():
    for g in (0.0, 0.2, 1.0):
        for ops in (amplitude_damping_kraus(g), phase_damping_kraus(g)):
            np.testing.assert_allclose(sum(k.conj().T @ k for k in ops), np.eye(2), atol=1e-15)


def test_channels_preserve_validity_and_are_linear():
    rng = np.random.default_rng(2)
    for _ in range(30):
        r1, r2 = random_mixed(rng), random_mixed(rng)
        lam = rng.uniform()
        p, ga, gp = rng.uniform(size=3)
        target = rng.choice(["A", "B", "both"])
        qubit = rng.choice(["A", "B"])
        channels = [
            lambda r: depolarize(DensityMatrix(r), p, target).matrix,
            lambda r: damp(DensityMatrix(r), ga, gp, qubit).matrix,
        ]
        for ch in channels:
            out = ch(r1)
            assert abs(np.trace(out) - 1) < 1e-10
            assert np.linalg.eigvalsh(out).min() > -1e-10
            mixed = ch(lam * r1 + (1 - lam) * r2)
            assert np.max(np.abs(mixed - (lam * ch(r1) + (1 - lam) * ch(r2)))) < 1e-12


def test_run_noisy_prep_noiseless_matches_pure():
    for a, t in [(0, 0), (0.4, 2.2), (math.pi / 2, math.pi), (3.0, 1.0)]:
        p = PrepParams(a, t)
        out = run_noisy_prep(p, NoiseModel())
        assert np.max(np.abs(out.matrix - density_from_pure(prepare_state(p)).matrix)) < 1e-12


def test_run_noisy_prep_bell_depolarized():
    rec = evaluate(run_noisy_prep(BELL_PARAMS, NoiseModel(depol_2q=0.1)))
    # Werner state with weight 0.9: C = (3*0.9 - 1)/2, purity = (1 + 3*0.81)/4
    assert rec.c == pytest.approx(0.85, abs=1e-10)
    assert rec.purity == pytest.approx(0.8575, abs=1e-12)
    assert rec.c < 1 and rec.purity < 1


def test_run_noisy_prep_fully_depolarized():
    out = run_noisy_prep(PrepParams(1.0, 2.0), NoiseModel(depol_1q=1.0, depol_2q=1.0))
    assert purity(out) == pytest.approx(0.25, abs=1e-12)


# -- sampling ----------------------------------------------------------------

def test_sample_counts_ground_state():
    t = sample_counts(_basis_state(0), ZZ, 1000, NoiseModel(), seed=1)
    assert t.counts == {"00": 1000, "01": 0, "10": 0, "11": 0}


def test_sample_counts_bell_frequencies():
    shots = 10**6
    t = sample_counts(_bell(), ZZ, shots, NoiseModel(), seed=2)
    f = t.frequencies()
    assert f[1] == 0 and f[2] == 0
    assert abs(f[0] - 0.5) < 5 * math.sqrt(0.25 / shots)


def test_readout_flip_five_percent():
    nm = NoiseModel.from_readout_flip(0.05, 0.0)
    probs = outcome_probabilities(_basis_state(0), ZZ, nm)
    np.testing.assert_allclose(probs, [0.95, 0, 0.05, 0], atol=1e-15)
    shots = 10**5
    t = sample_counts(_basis_state(0), ZZ, shots, nm, seed=3)
    assert abs(t.counts["10"] / shots - 0.05) < 5 * math.sqrt(0.05 * 0.95 / shots)


def test_sample_counts_reproducible_and_seed_sensitive():
    rho = DensityMatrix(werner(0.3))
    s = BasisSetting("X", "Y")
    a = sample_counts(rho, s, 500, preset(), seed=9)
    b = sample_counts(rho, s, 500, preset(), seed=9)
    c = sample_counts(rho, s, 500, preset(), seed=10)
    assert a == b
    assert a != c


def test_frequency_convergence_million_shots():
    rng = np.random.default_rng(4)
    rho = DensityMatrix(random_mixed(rng))
    shots = 10**6
    for k, setting in enumerate(ALL_SETTINGS):
        probs = outcome_probabilities(rho, setting, preset())
        f = sample_counts(rho, setting, shots, preset(), seed=100 + k).frequencies()
        bound = 5 * np.sqrt(probs * (1 - probs) / shots)
        assert np.all(np.abs(f - probs) <= bound + 1e-15)


def test_invalid_probabilities():
    bad = SimpleNamespace(matrix=np.diag([1.5, -0.5, 0, 0]).astype(complex))
    with pytest.raises(InvalidProbabilities):
        outcome_probabilities(bad, ZZ)


def test_counts_table_validation():
    with pytest.raises(ValueError):
        CountsTable(ZZ, {"00": 5}, 6)
    with pytest.raises(ValueError):
        CountsTable(ZZ, {"00": 5, "22": 1}, 6)
    t = CountsTable(ZZ, {"00": 5, "11": 1}, 6)
    assert t.counts["01"] == 0


def test_derive_seed():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    seeds = {derive_seed(0, s, i, r) for s in range(2) for i in range(13) for r in range(10)}
    assert len(seeds) == 260
    assert all(0 <= x < 2**63 for x in seeds)
