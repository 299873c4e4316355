"""Experiment harness: the 13-state sweep, 4-sigma ellipsoids, noise normalization,
the V_A = 0 slice, the purity study and the random-angle scan.

All randomness is derived from ``(master_seed, stream, state, repetition,
setting)`` so results never depend on execution order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import InsufficientData
from .metrics import CSV_FIELDS, TrialityRecord, evaluate, evaluate_pure
from .noise import NoiseModel, derive_seed, run_noisy_prep
from .states import BELL_PARAMS, PrepParams, prepare_state
from .tomography import tomography_pipeline

AXES = ("v_a", "p_a", "c")
MODES = ("analytic", "channel", "sampled")
SIGMA_WIDTH = 4.0
NORMALIZE_EPS = 1e-3
RATIO_MIN_IDEAL = 0.05
DEGENERATE_IDEAL = 1e-12

MEASURED_STREAM = 0
NOISE_SIM_STREAM = 1


def _canonical_mode(mode: str) -> str:
    if mode == "sampled-tomography":
        return "sampled"
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return mode


def thirteen_states() -> list[PrepParams]:
    """Fixed 13-point grid: the theta = pi arc, the alpha = pi/2 arc and four interior points."""
    pi = math.pi
    arc_theta_pi = [PrepParams(a, pi) for a in (0.0, pi / 4, pi / 2, 3 * pi / 4, pi)]
    arc_alpha_half = [PrepParams(pi / 2, t) for t in (0.0, pi / 4, pi / 2, 3 * pi / 4)]
    interior = [
        PrepParams(pi / 4, pi / 2),
        PrepParams(3 * pi / 4, pi / 2),
        PrepParams(pi / 3, pi / 3),
        PrepParams(2 * pi / 3, 2 * pi / 3),
    ]
    return arc_theta_pi + arc_alpha_half + interior


def ideal_record(p: PrepParams) -> TrialityRecord:
    return evaluate_pure(prepare_state(p), p)


@dataclass
class SweepConfig:
    states: list = field(default_factory=thirteen_states)
    repetitions: int = 10
    shots: int = 1000
    noise: NoiseModel = field(default_factory=NoiseModel)
    master_seed: int = 0
    mode: str = "sampled"
    stream: int = MEASURED_STREAM

    def __post_init__(self):
        self.mode = _canonical_mode(self.mode)
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if not self.states:
            raise ValueError("states must be non-empty")
        if self.master_seed < 0 or self.stream < 0:
            raise ValueError("seeds must be non-negative")


def record_seed(cfg: SweepConfig, state_index: int, repetition: int) -> int:
    return derive_seed(cfg.master_seed, cfg.stream, state_index, repetition)


def run_sweep(cfg: SweepConfig) -> list[tuple[PrepParams, list[TrialityRecord]]]:
    """``cfg.repetitions`` records per state in the configured mode."""
    out = []
    for i, p in enumerate(cfg.states):
        if cfg.mode == "analytic":
            records = [ideal_record(p)] * cfg.repetitions
        elif cfg.mode == "channel":
            records = [evaluate(run_noisy_prep(p, cfg.noise), p)] * cfg.repetitions
        else:
            records = [
                evaluate(tomography_pipeline(p, cfg.noise, cfg.shots, record_seed(cfg, i, r)), p)
                for r in range(cfg.repetitions)
            ]
        out.append((p, records))
    return out


@dataclass(frozen=True)
class EllipsoidStats:
    """Per-axis sample mean, standard deviation and 4-sigma half-width."""

    mean: dict
    std: dict
    half_width: dict
    n: int

    def contains(self, point: dict, tol: float = 1e-12) -> bool:
        """True if ``point`` lies inside the axis-aligned ellipsoid.

        Axes with zero width only admit points within ``tol`` of the mean.
        """
        total = 0.0
        for axis in AXES:
            d = abs(point[axis] - self.mean[axis])
            h = self.half_width[axis]
            if h <= 0.0:
                if d > tol:
                    return False
                continue
            total += (d / h) ** 2
        return total <= 1.0


def ellipsoid_stats(records: Sequence[TrialityRecord]) -> EllipsoidStats:
    if len(records) < 2:
        raise InsufficientData(f"need at least 2 records, got {len(records)}")
    mean, std, half = {}, {}, {}
    for axis in AXES:
        values = np.array([getattr(r, axis) for r in records], dtype=float)
        if np.all(values == values[0]):
            # exact zero width for constant data
            mean[axis], std[axis] = float(values[0]), 0.0
        else:
            mean[axis] = float(values.mean())
            std[axis] = float(values.std(ddof=1))
        half[axis] = SIGMA_WIDTH * std[axis]
    return EllipsoidStats(mean, std, half, len(records))


@dataclass(frozen=True)
class NormalizedPoint:
    raw_mean: dict
    noise_sim_mean: dict
    ideal: dict
    normalized: dict
    half_width: dict
    flags: dict  # axis -> None, "degenerate" (ideal 0) or "unnormalizable"

    @property
    def sum_a(self) -> float:
        return sum(self.normalized[a] ** 2 for a in AXES)

    def sum_bounds(self) -> tuple[float, float]:
        """Range of ``V_A^2 + P_A^2 + C^2`` over the scaled 4-sigma box."""
        lo = hi = 0.0
        for a in AXES:
            x, h = abs(self.normalized[a]), self.half_width[a]
            lo += max(x - h, 0.0) ** 2
            hi += (x + h) ** 2
        return lo, hi

    def on_unit_sphere(self) -> bool:
        lo, hi = self.sum_bounds()
        return lo <= 1.0 <= hi


def normalize_against_noise_sim(
    measured: EllipsoidStats, noise_sim: EllipsoidStats, ideal: TrialityRecord
) -> NormalizedPoint:
    """Rescale measured means by ``ideal / noise_sim_mean`` axis by axis.

    Axes whose noise-simulation mean is below 1e-3 are left unscaled and
    flagged ``"unnormalizable"``; axes with ideal value 0 collapse to 0 and are
    flagged ``"degenerate"``.
    """
    ideal_vals = {a: float(getattr(ideal, a)) for a in AXES}
    norm, half, flags = {}, {}, {}
    for a in AXES:
        raw = measured.mean[a]
        sim = noise_sim.mean[a]
        if sim >= NORMALIZE_EPS:
            factor = ideal_vals[a] / sim
            norm[a] = raw * factor
            half[a] = measured.half_width[a] * factor
            flags[a] = "degenerate" if abs(ideal_vals[a]) < DEGENERATE_IDEAL else None
        else:
            norm[a] = raw
            half[a] = measured.half_width[a]
            flags[a] = "unnormalizable"
    return NormalizedPoint(
        raw_mean=dict(measured.mean),
        noise_sim_mean=dict(noise_sim.mean),
        ideal=ideal_vals,
        normalized=norm,
        half_width=half,
        flags=flags,
    )


def relative_drops(ideal: TrialityRecord, noisy: TrialityRecord, min_ideal: float = RATIO_MIN_IDEAL) -> dict:
    """``(ideal - noisy) / ideal`` per axis, for axes whose ideal value exceeds ``min_ideal``."""
    out = {}
    for a in AXES:
        x = getattr(ideal, a)
        if x > min_ideal:
            out[a] = (x - getattr(noisy, a)) / x
    return out


# -- studies -----------------------------------------------------------------

@dataclass(frozen=True)
class SliceRow:
    alpha: float
    p_a: float
    c_ideal: float
    c_channel: float
    c_sampled_mean: Optional[float]
    c_max: float
    ratio: Optional[float]


def slice_study(nm: NoiseModel, n_alpha: int = 21, shots: int = 1000, reps: int = 0, seed: int = 0) -> list[SliceRow]:
    """Concurrence along theta = pi (where V_A = 0) as alpha sweeps [0, pi].

    ``ratio`` is channel concurrence over ideal concurrence, reported where the
    ideal value exceeds 0.05. With ``reps > 0`` the sampled-tomography mean
    concurrence is added for comparison.
    """
    if n_alpha < 3:
        raise ValueError("n_alpha must be >= 3")
    rows = []
    for i, alpha in enumerate(np.linspace(0.0, math.pi, n_alpha)):
        p = PrepParams(float(alpha), math.pi)
        ideal = ideal_record(p)
        noisy = evaluate(run_noisy_prep(p, nm), p)
        sampled = None
        if reps > 0:
            cs = [
                evaluate(tomography_pipeline(p, nm, shots, derive_seed(seed, i, r))).c
                for r in range(reps)
            ]
            sampled = float(np.mean(cs))
        ratio = noisy.c / ideal.c if ideal.c > RATIO_MIN_IDEAL else None
        rows.append(SliceRow(p.alpha, noisy.p_a, ideal.c, noisy.c, sampled, noisy.c_max, ratio))
    return rows


def ratio_relative_std(rows: Sequence[SliceRow]) -> float:
    ratios = np.array([r.ratio for r in rows if r.ratio is not None])
    return float(ratios.std(ddof=1) / ratios.mean())


@dataclass(frozen=True)
class PurityRow:
    level: float
    purity: float
    c: float
    c_max: float


def purity_study(noise_grid: Sequence[float], state: PrepParams = BELL_PARAMS) -> list[PurityRow]:
    """Channel-exact concurrence and C_max as two-qubit depolarization grows.

    Rows are sorted by purity, highest first. A fully depolarized point is
    appended if the grid never drives the purity below 1/3.
    """
    if len(noise_grid) == 0:
        raise ValueError("noise grid must be non-empty")
    levels = [float(x) for x in noise_grid]
    rows = []
    for level in levels:
        rec = evaluate(run_noisy_prep(state, NoiseModel(depol_2q=level)))
        rows.append(PurityRow(level, rec.purity, rec.c, rec.c_max))
    if not any(r.purity < 1 / 3 for r in rows):
        rec = evaluate(run_noisy_prep(state, NoiseModel(depol_2q=1.0)))
        rows.append(PurityRow(1.0, rec.purity, rec.c, rec.c_max))
    rows.sort(key=lambda r: (-r.purity, r.level))
    return rows


def closed_form_metrics(alpha: float, theta: float) -> tuple[float, float, float]:
    """``(V_A, P_A, C)`` of the prepared pure state in closed form."""
    return (
        math.sin(alpha) * abs(math.cos(theta / 2)),
        abs(math.cos(alpha)),
        math.sin(alpha) * math.sin(theta / 2),
    )


@dataclass(frozen=True)
class ScanRow:
    alpha: float
    theta: float
    v_a: float
    p_a: float
    c: float
    v_a_closed: float
    p_a_closed: float
    c_closed: float

    @property
    def discrepancy(self) -> float:
        return max(
            abs(self.v_a - self.v_a_closed),
            abs(self.p_a - self.p_a_closed),
            abs(self.c - self.c_closed),
        )


def random_scan(n: int, seed: int = 0) -> tuple[list[ScanRow], float]:
    """Uniform random angles in [0, pi]^2; returns rows and the max closed-form discrepancy."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, math.pi, size=(n, 2))
    rows = []
    for alpha, theta in angles:
        p = PrepParams(float(alpha), float(theta))
        rec = ideal_record(p)
        rows.append(ScanRow(p.alpha, p.theta, rec.v_a, rec.p_a, rec.c, *closed_form_metrics(p.alpha, p.theta)))
    return rows, max(r.discrepancy for r in rows)


# -- CSV output ----------------------------------------------------------------

def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_records_csv(path, runs, cfg: SweepConfig) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["state_index", "repetition", "mode", "seed", *CSV_FIELDS])
        for i, (_, records) in enumerate(runs):
            for r, rec in enumerate(records):
                seed = record_seed(cfg, i, r) if cfg.mode == "sampled" else ""
                w.writerow([i, r, cfg.mode, seed, *rec.csv_row()])


def write_ellipsoids_csv(path, stats: Sequence[tuple[str, int, PrepParams, EllipsoidStats]]) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = _writer(fh)
        head = ["source", "state_index", "alpha", "theta", "n"]
        for a in AXES:
            head += [f"{a}_mean", f"{a}_std", f"{a}_half_width"]
        w.writerow(head)
        for source, i, p, st in stats:
            row = [source, i, _fmt(p.alpha), _fmt(p.theta), st.n]
            for a in AXES:
                row += [_fmt(st.mean[a]), _fmt(st.std[a]), _fmt(st.half_width[a])]
            w.writerow(row)


def write_normalized_csv(path, points: Sequence[tuple[int, PrepParams, NormalizedPoint]]) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = _writer(fh)
        head = ["state_index", "alpha", "theta"]
        for a in AXES:
            head += [f"{a}_raw", f"{a}_noise_sim", f"{a}_ideal", f"{a}_normalized", f"{a}_half_width", f"{a}_flag"]
        head += ["sum_a", "sum_a_low", "sum_a_high"]
        w.writerow(head)
        for i, p, pt in points:
            row = [i, _fmt(p.alpha), _fmt(p.theta)]
            for a in AXES:
                row += [
                    _fmt(pt.raw_mean[a]),
                    _fmt(pt.noise_sim_mean[a]),
                    _fmt(pt.ideal[a]),
                    _fmt(pt.normalized[a]),
                    _fmt(pt.half_width[a]),
                    pt.flags[a] or "",
                ]
            lo, hi = pt.sum_bounds()
            row += [_fmt(pt.sum_a), _fmt(lo), _fmt(hi)]
            w.writerow(row)


@dataclass
class SweepResult:
    raw: list
    noise_sim: list
    raw_stats: list
    noise_sim_stats: list
    normalized: list


def _stream_configs(cfg: SweepConfig) -> tuple[SweepConfig, SweepConfig]:
    return (
        replace(cfg, mode="sampled", stream=MEASURED_STREAM),
        replace(cfg, mode="sampled", stream=NOISE_SIM_STREAM),
    )


def measured_and_noise_sim(cfg: SweepConfig) -> SweepResult:
    """Two sampled sweeps on disjoint seed streams, their ellipsoids and the normalized points."""
    raw_cfg, sim_cfg = _stream_configs(cfg)
    raw = run_sweep(raw_cfg)
    sim = run_sweep(sim_cfg)
    raw_stats = [ellipsoid_stats(recs) for _, recs in raw] if cfg.repetitions >= 2 else []
    sim_stats = [ellipsoid_stats(recs) for _, recs in sim] if cfg.repetitions >= 2 else []
    normalized = [
        normalize_against_noise_sim(rs, ss, ideal_record(p))
        for p, rs, ss in zip(cfg.states, raw_stats, sim_stats)
    ]
    return SweepResult(raw, sim, raw_stats, sim_stats, normalized)


def write_sweep(cfg: SweepConfig, out_dir) -> SweepResult:
    """Run both sweeps and write ``raw.csv``, ``noise_sim.csv``, ``ellipsoids.csv``, ``normalized.csv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    res = measured_and_noise_sim(cfg)
    raw_cfg, sim_cfg = _stream_configs(cfg)
    write_records_csv(out / "raw.csv", res.raw, raw_cfg)
    write_records_csv(out / "noise_sim.csv", res.noise_sim, sim_cfg)
    stats = [("raw", i, p, st) for i, (p, st) in enumerate(zip(cfg.states, res.raw_stats))]
    stats += [("noise_sim", i, p, st) for i, (p, st) in enumerate(zip(cfg.states, res.noise_sim_stats))]
    write_ellipsoids_csv(out / "ellipsoids.csv", stats)
    write_normalized_csv(out / "normalized.csv", [(i, p, pt) for i, (p, pt) in enumerate(zip(cfg.states, res.normalized))])
    return res


def write_slice_csv(path, rows: Sequence[SliceRow]) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["alpha", "p_a", "c_ideal", "c_channel", "c_sampled_mean", "c_max", "ratio"])
        for r in rows:
            w.writerow([_fmt(r.alpha), _fmt(r.p_a), _fmt(r.c_ideal), _fmt(r.c_channel),
                        _fmt(r.c_sampled_mean), _fmt(r.c_max), _fmt(r.ratio)])


def write_purity_csv(path, rows: Sequence[PurityRow]) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["level", "purity", "c", "c_max"])
        for r in rows:
            w.writerow([_fmt(r.level), _fmt(r.purity), _fmt(r.c), _fmt(r.c_max)])


def write_scan_csv(path, rows: Sequence[ScanRow]) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["alpha", "theta", "v_a", "p_a", "c", "v_a_closed", "p_a_closed", "c_closed"])
        for r in rows:
            w.writerow([_fmt(x) for x in (r.alpha, r.theta, r.v_a, r.p_a, r.c, r.v_a_closed, r.p_a_closed, r.c_closed)])
