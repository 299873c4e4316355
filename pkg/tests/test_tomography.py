import math

import numpy as np
import pytest

from oracles import nearest_density_matrix, random_mixed, random_pure
from triality.bases import ALL_SETTINGS, OUTCOMES, BasisSetting
from triality.errors import MissingSetting, NotHermitian
from triality.metrics import evaluate, fidelity_with_pure
from triality.noise import CountsTable, NoiseModel, outcome_probabilities, preset, run_noisy_prep
from triality.states import (
    BELL_PARAMS,
    DensityMatrix,
    PrepParams,
    PureTwoQubitState,
    density_from_pure,
    prepare_state,
)
from triality.tomography import (
    PAULI_PAIRS,
    ExpectationSet,
    estimate_expectations,
    linear_inversion,
    measure_all_settings,
    project_eigenvalues,
    project_to_physical,
    read_counts_csv,
    reconstruct,
    tomography_pipeline,
    write_counts_csv,
)


def _exact_tables(rho, shots=4):
    """Tables whose frequencies equal the Born probabilities (needs probabilities in 1/shots units)."""
    tables = []
    for s in ALL_SETTINGS:
        probs = outcome_probabilities(rho, s) * shots
        counts = np.rint(probs).astype(int)
        assert np.allclose(probs, counts, atol=1e-9)
        tables.append(CountsTable(s, dict(zip(OUTCOMES, counts.tolist())), shots))
    return tables


def _bell():
    return density_from_pure(prepare_state(BELL_PARAMS))


def test_expectations_ground_state():
    rho = DensityMatrix(np.diag([1.0, 0, 0, 0]))
    e = estimate_expectations(_exact_tables(rho))
    assert e["ZI"] == e["IZ"] == e["ZZ"] == 1.0
    for key in PAULI_PAIRS:
        if "X" in key or "Y" in key:
            assert e[key] == 0.0


def test_expectations_bell():
    e = estimate_expectations(_exact_tables(_bell()))
    assert (e["XX"], e["YY"], e["ZZ"]) == (1.0, -1.0, 1.0)
    for axis in "XYZ":
        assert e[axis + "I"] == 0.0 and e["I" + axis] == 0.0


def test_expectations_uniform_counts():
    tables = [CountsTable(s, {o: 25 for o in OUTCOMES}, 100) for s in ALL_SETTINGS]
    e = estimate_expectations(tables)
    assert all(v == 0.0 for v in e.values.values())


def test_missing_setting():
    tables = _exact_tables(_bell())[:-1]
    with pytest.raises(MissingSetting):
        estimate_expectations(tables)


def test_y_sign_convention():
    # (|0> + i|1>)/sqrt(2) on A, |0> on B: <YI> = +1
    amps = np.array([1, 0, 1j, 0]) / math.sqrt(2)
    rho = DensityMatrix(np.outer(amps, amps.conj()))
    e = estimate_expectations(_exact_tables(rho))
    assert e["YI"] == 1.0 and e["YZ"] == 1.0


def test_linear_inversion_examples():
    zero = ExpectationSet({k: 0.0 for k in PAULI_PAIRS})
    np.testing.assert_allclose(linear_inversion(zero), np.eye(4) / 4)
    bell = _bell()
    assert np.max(np.abs(linear_inversion(ExpectationSet.from_density(bell)) - bell.matrix)) < 1e-12


def test_linear_inversion_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(50):
        rho = DensityMatrix(random_mixed(rng))
        assert np.max(np.abs(linear_inversion(ExpectationSet.from_density(rho)) - rho.matrix)) < 1e-12


def test_projection_hand_example():
    out = project_to_physical(np.diag([1.1, 0.2, -0.2, -0.1]))
    np.testing.assert_allclose(out.matrix, np.diag([0.95, 0.05, 0, 0]), atol=1e-12)
    np.testing.assert_allclose(nearest_density_matrix(np.diag([1.1, 0.2, -0.2, -0.1])), out.matrix, atol=1e-12)


def test_project_eigenvalues():
    np.testing.assert_allclose(project_eigenvalues([1.1, 0.2, -0.1, -0.2]), [0.95, 0.05, 0, 0])
    np.testing.assert_allclose(project_eigenvalues([0.4, 0.3, 0.2, 0.1]), [0.4, 0.3, 0.2, 0.1])


def test_projection_fixed_point_and_idempotent():
    rng = np.random.default_rng(1)
    for _ in range(20):
        rho = random_mixed(rng)
        assert np.max(np.abs(project_to_physical(rho).matrix - rho)) < 1e-10
        raw = _noisy_hermitian(rng)
        once = project_to_physical(raw)
        twice = project_to_physical(once.matrix)
        assert np.max(np.abs(once.matrix - twice.matrix)) < 1e-10


def _noisy_hermitian(rng):
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = random_mixed(rng) + 0.3 * (g + g.conj().T)
    return h + (1 - np.trace(h).real) * np.eye(4) / 4


def test_projection_optimality():
    rng = np.random.default_rng(2)
    for _ in range(100):
        raw = _noisy_hermitian(rng)
        out = project_to_physical(raw).matrix
        best = nearest_density_matrix(raw)
        assert abs(np.linalg.norm(out - raw) - np.linalg.norm(best - raw)) < 1e-6
        assert np.linalg.eigvalsh(out).min() > -1e-12


def test_projection_rejects_non_hermitian():
    m = np.eye(4, dtype=complex) / 4
    m[0, 1] = 0.1
    with pytest.raises(NotHermitian):
        project_to_physical(m)


def test_bell_fidelity_million_shots():
    rho = reconstruct(measure_all_settings(_bell(), 10**6, seed=5))
    assert fidelity_with_pure(rho, prepare_state(BELL_PARAMS)) > 0.999


def test_pipeline_examples():
    bell = evaluate(tomography_pipeline(BELL_PARAMS, NoiseModel(), 10**6, 0))
    assert bell.c >= 0.99
    ground = evaluate(tomography_pipeline(PrepParams(0.0, 1.0), NoiseModel(), 10**6, 0))
    assert ground.p_a >= 0.99 and ground.c <= 0.01


def test_pipeline_noisy_bell_matches_channel():
    nm = preset()
    exact = evaluate(run_noisy_prep(BELL_PARAMS, nm)).c
    clean = evaluate(tomography_pipeline(BELL_PARAMS, NoiseModel(), 1000, 0)).c
    cs = np.array([evaluate(tomography_pipeline(BELL_PARAMS, nm, 1000, s)).c for s in range(10)])
    assert cs.mean() < clean
    # readout error in the pipeline is not part of the preparation channel
    exact_with_readout = _readout_limited_c(nm)
    assert abs(cs.mean() - exact_with_readout) <= 4 * cs.std(ddof=1)
    assert exact_with_readout < exact


def _readout_limited_c(nm):
    rho = run_noisy_prep(BELL_PARAMS, nm)
    tables = []
    shots = 10**12
    for s in ALL_SETTINGS:
        probs = outcome_probabilities(rho, s, nm)
        counts = np.floor(probs * shots).astype(int)
        counts[0] += shots - counts.sum()
        tables.append(CountsTable(s, dict(zip(OUTCOMES, counts.tolist())), shots))
    return evaluate(reconstruct(tables)).c


def test_pipeline_converges_to_channel():
    nm = NoiseModel(depol_1q=0.02, depol_2q=0.05, amp_damping_gamma=0.01, phase_damping_gamma=0.01)
    p = PrepParams(1.1, 2.3)
    exact = evaluate(run_noisy_prep(p, nm))
    gaps = []
    for shots in (10**3, 10**4, 10**6):
        rec = evaluate(tomography_pipeline(p, nm, shots, 11))
        gaps.append(max(abs(getattr(rec, a) - getattr(exact, a)) for a in ("v_a", "p_a", "c", "v_b", "p_b")))
    assert gaps[-1] < 0.01
    assert gaps[-1] < gaps[0]


def test_pipeline_deterministic():
    a = tomography_pipeline(PrepParams(0.7, 1.9), preset(), 500, 3)
    b = tomography_pipeline(PrepParams(0.7, 1.9), preset(), 500, 3)
    assert np.array_equal(a.matrix, b.matrix)


def test_counts_csv_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    rho = density_from_pure(PureTwoQubitState(random_pure(rng)))
    tables = measure_all_settings(rho, 200, preset(), seed=42)
    path = tmp_path / "counts.csv"
    write_counts_csv(path, tables, 42)
    back, seed = read_counts_csv(path)
    assert seed == 42
    assert sorted(back, key=lambda t: t.setting) == sorted(tables, key=lambda t: t.setting)
    assert path.read_text().splitlines()[0] == "setting,outcome,count,shots,seed"


def test_basis_setting_parse():
    assert BasisSetting.parse("XY") == BasisSetting("X", "Y")
    assert [str(s) for s in ALL_SETTINGS][:3] == ["XX", "XY", "XZ"]
