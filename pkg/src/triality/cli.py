"""Command-line entry point: ``triality-sim <subcommand> ...``.

Angles are given in units of pi (``--alpha 0.5`` means pi/2).
Exit codes: 0 success, 2 invalid arguments, 3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import experiments as ex
from .errors import TrialityError
from .metrics import evaluate
from .noise import NoiseModel, load_noise_model, run_noisy_prep
from .states import PrepParams, density_from_pure, prepare_state
from .tomography import tomography_pipeline

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3


def _levels(text: str) -> list[float]:
    """``start:stop:step`` (inclusive stop) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            n = int(round((stop - start) / step)) + 1
            values = [min(start + k * step, stop) for k in range(n)]
        else:
            values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid level grid {text!r}") from None
    if not values or any(not 0.0 <= v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError("levels must be non-empty and within [0, 1]")
    return [round(v, 12) for v in values]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return value


def _noise(path) -> NoiseModel:
    return NoiseModel() if path is None else load_noise_model(path)


def read_states_file(path) -> list[PrepParams]:
    """CSV with header ``alpha,theta``, angles in units of pi."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        states = [PrepParams.from_pi_units(float(r["alpha"]), float(r["theta"])) for r in rows]
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise TrialityError(f"cannot read states file {path!r}: {exc}") from None
    if not states:
        raise TrialityError(f"states file {path!r} is empty")
    return states


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="triality-sim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("triality", help="metrics of one prepared state as JSON")
    p.add_argument("--alpha", type=float, required=True, help="alpha in units of pi")
    p.add_argument("--theta", type=float, required=True, help="theta in units of pi")
    p.add_argument("--noise", help="noise-model JSON file or preset name")
    p.add_argument("--mode", choices=ex.MODES, default="analytic")
    p.add_argument("--shots", type=_positive_int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--dump-rho", action="store_true", help="include the density matrix")

    p = sub.add_parser("sweep", help="measured and noise-simulation sweeps with normalization")
    p.add_argument("--states", default="default13", help="'default13' or a CSV of alpha,theta (units of pi)")
    p.add_argument("--reps", type=_positive_int, default=10)
    p.add_argument("--shots", type=_positive_int, default=1000)
    p.add_argument("--noise")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("slice", help="concurrence versus C_max along V_A = 0")
    p.add_argument("--n-alpha", type=_positive_int, default=21)
    p.add_argument("--noise")
    p.add_argument("--shots", type=_positive_int, default=1000)
    p.add_argument("--reps", type=int, default=0, help="sampled repetitions per point (0 = channel only)")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("purity-study", help="Bell-state concurrence and C_max versus purity")
    p.add_argument("--levels", type=_levels, default=_levels("0:1:0.05"))
    p.add_argument("--out", required=True)

    p = sub.add_parser("scan", help="random (alpha, theta) scan against closed forms")
    p.add_argument("--n", type=_positive_int, default=200)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)
    return parser


def _cmd_triality(args) -> int:
    params = PrepParams.from_pi_units(args.alpha, args.theta)
    nm = _noise(args.noise)
    if args.mode == "analytic":
        rho = density_from_pure(prepare_state(params))
        rec = ex.ideal_record(params)
    elif args.mode == "channel":
        rho = run_noisy_prep(params, nm)
        rec = evaluate(rho, params)
    else:
        rho = tomography_pipeline(params, nm, args.shots, args.seed)
        rec = evaluate(rho, params)
    out = {"mode": args.mode, **rec.to_dict()}
    if args.mode == "sampled":
        out.update(shots=args.shots, seed=args.seed)
    if args.dump_rho:
        out["rho"] = rho.to_dict()
    print(json.dumps(out))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    states = ex.thirteen_states() if args.states == "default13" else read_states_file(args.states)
    cfg = ex.SweepConfig(states, args.reps, args.shots, _noise(args.noise), args.seed)
    if args.reps < 2:
        raise TrialityError("sweep needs --reps >= 2 to form ellipsoids")
    ex.write_sweep(cfg, args.out)
    return EXIT_OK


def _cmd_slice(args) -> int:
    if args.n_alpha < 3:
        raise TrialityError("--n-alpha must be >= 3")
    if args.reps < 0:
        raise TrialityError("--reps must be >= 0")
    rows = ex.slice_study(_noise(args.noise), args.n_alpha, args.shots, args.reps, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ex.write_slice_csv(out / "slice.csv", rows)
    return EXIT_OK


def _cmd_purity(args) -> int:
    rows = ex.purity_study(args.levels)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ex.write_purity_csv(out / "purity.csv", rows)
    return EXIT_OK


def _cmd_scan(args) -> int:
    rows, worst = ex.random_scan(args.n, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ex.write_scan_csv(out / "scan.csv", rows)
    print(json.dumps({"n": args.n, "seed": args.seed, "max_discrepancy": worst}))
    return EXIT_OK


COMMANDS = {
    "triality": _cmd_triality,
    "sweep": _cmd_sweep,
    "slice": _cmd_slice,
    "purity-study": _cmd_purity,
    "scan": _cmd_scan,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except TrialityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
