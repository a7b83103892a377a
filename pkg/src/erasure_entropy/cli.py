"""Batch command-line front end with structured, machine-readable output.

Records are emitted as JSON (default) or flat CSV; numbers survive a
round-trip because JSON uses shortest-repr floats and CSV prints 17
significant digits.  A fixed seed yields byte-identical output files; wall
time is only included when requested, so that the default output is
reproducible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import __version__
from .entropy import Unit
from .errors import (
    BudgetError,
    ConvergenceError,
    InconsistentInputError,
    MixingFailureError,
    NearCriticalError,
    ValidationError,
)
from .hexagonal import DerivativeConfig, QuadratureConfig, hex_pipeline
from .lattice import (
    LatticeSpec,
    enumerate_torus,
    lts_check,
    torus_erasure_entropy,
    torus_gibbs_erasure,
    volume_normalized_erasure,
)
from .markov import (
    DmeSpec,
    MarkovSpec,
    block_given_past_entropy,
    dme_bound_report,
    entropy_rate,
    erasure_rate,
    interval_erasure_rate,
    markov_identity_residual,
)
from .montecarlo import (
    McConfig,
    estimate_class_frequencies,
    estimate_correlations,
    estimate_erasure_entropy,
)
from .square import (
    CorrelationTriple,
    class_probs_from_correlations,
    correlations_from_mc,
    correlations_from_strip,
    correlations_from_torus,
    erasure_entropy_square,
)

SCHEMA_VERSION = 1

EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_BUDGET = 4
EXIT_NEAR_CRITICAL = 5
EXIT_INCONSISTENT = 6
EXIT_MIXING = 7


class ChainFileError(Exception):
    pass


def read_chain_file(path: str) -> MarkovSpec:
    """Plain-text chain: first line `m k`, then m^k rows of m probabilities."""
    try:
        with open(path) as f:
            tokens = f.read().split()
    except OSError as exc:
        raise ChainFileError(f"cannot read chain file {path}: {exc}") from exc
    try:
        m, k = int(tokens[0]), int(tokens[1])
        need = 2 + (m ** k) * m
        if len(tokens) != need:
            raise ChainFileError(
                f"chain file {path}: expected {need} tokens for m={m}, k={k}, found {len(tokens)}"
            )
        rows = np.array([float(t) for t in tokens[2:]]).reshape(m ** k, m)
    except ChainFileError:
        raise
    except (ValueError, IndexError) as exc:
        raise ChainFileError(f"chain file {path} is malformed: {exc}") from exc
    return MarkovSpec(m, k, rows)


def _unit(args) -> Unit:
    return Unit.NATS if args.nats else Unit.BITS


def _flatten(prefix: str, obj, rows):
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten(f"{prefix}.{key}" if prefix else str(key), obj[key], rows)
    elif isinstance(obj, (list, tuple)):
        for i, item in enumerate(obj):
            _flatten(f"{prefix}[{i}]", item, rows)
    else:
        rows.append((prefix, obj))


def write_record(record: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(record, indent=2, sort_keys=True) + "\n"
    else:
        rows = []
        _flatten("", record, rows)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["field", "value"])
        for key, val in rows:
            if isinstance(val, float):
                writer.writerow([key, format(val, ".17g")])
            else:
                writer.writerow([key, val])
        text = buf.getvalue()
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _record(command: str, inputs: dict, outputs: dict, provenance: str, started: float, args) -> dict:
    rec = {
        "schema_version": SCHEMA_VERSION,
        "library_version": __version__,
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "provenance": provenance,
    }
    if args.timing:
        rec["wall_time_s"] = time.monotonic() - started
    return rec


def cmd_markov(args) -> dict:
    started = time.monotonic()
    chain = read_chain_file(args.chain)
    unit = _unit(args)
    outputs = {
        "entropy_rate": entropy_rate(chain, unit).value,
        "erasure_rate": erasure_rate(chain, unit).value,
        "block_given_past_entropy": block_given_past_entropy(chain, unit).value,
        "identity_residual_nats": markov_identity_residual(chain),
        "unit": unit.value,
    }
    if chain.k == 1 and args.interval_max > 0:
        outputs["interval_series"] = [
            {"L": L, "value": interval_erasure_rate(chain, L, unit).value}
            for L in range(1, args.interval_max + 1)
        ]
    inputs = {"chain_file": args.chain, "m": chain.m, "k": chain.k}
    return _record("markov", inputs, outputs, "exact", started, args)


def cmd_dme(args) -> dict:
    started = time.monotonic()
    chain = read_chain_file(args.chain)
    unit = _unit(args)
    p_grid = [float(p) for p in args.p_grid.split(",") if p]
    for p in p_grid:
        DmeSpec(p, args.n)  # validates the range before any heavy work
    rows = dme_bound_report(chain, p_grid, args.n, unit)
    table = []
    for p, hn, phm, ratio in rows:
        entry = {
            "p": p,
            "conditional_entropy": hn,
            "p_times_erasure_rate": phm,
            "ratio": ratio,
            "finite_n_below_bound": bool(hn < phm - 1e-12),  # informational only
        }
        table.append(entry)
    outputs = {"n": args.n, "unit": unit.value, "rows": table}
    inputs = {"chain_file": args.chain, "m": chain.m, "k": chain.k, "p_grid": p_grid, "n": args.n}
    return _record("dme", inputs, outputs, "exact", started, args)


def _mc_config(args, lattice: LatticeSpec) -> McConfig:
    return McConfig(
        lattice=lattice,
        J=args.j,
        sweeps=args.sweeps,
        burn_in=args.burn_in,
        batches=args.batches,
        seed=args.seed,
        chains=args.chains,
    )


def cmd_square(args) -> dict:
    started = time.monotonic()
    unit = _unit(args)
    provenance = {"torus": "exact", "strip": "transfer-matrix", "mc": "monte-carlo", "user": "user"}[
        args.provider
    ]
    if args.provider == "torus":
        triple = correlations_from_torus(args.size, args.j)
    elif args.provider == "strip":
        triple = correlations_from_strip(args.strip_width, args.j)
    elif args.provider == "mc":
        lat = LatticeSpec("square", args.width, args.height)
        triple = correlations_from_mc(_mc_config(args, lat))
    else:
        if args.g4 is None or args.gew is None or args.gen is None:
            raise ChainFileError("user provider needs --g4, --gew, and --gen")
        triple = CorrelationTriple(args.g4, args.gew, args.gen)
    probs = class_probs_from_correlations(triple)
    ent = erasure_entropy_square(args.j, probs, unit)
    correlations = {"g4": triple.g4, "gEW": triple.gEW, "gEN": triple.gEN}
    if triple.se_g4 is not None:
        correlations.update({"se_g4": triple.se_g4, "se_gEW": triple.se_gEW, "se_gEN": triple.se_gEN})
    outputs = {
        "correlations": correlations,
        "class_probs": {"P1": probs.P1, "P2": probs.P2, "P3": probs.P3, "P4": probs.P4},
        "erasure_entropy": ent.value,
        "unit": unit.value,
    }
    inputs = {"J": args.j, "provider": args.provider}
    return _record("square", inputs, outputs, provenance, started, args)


def cmd_hex(args) -> dict:
    started = time.monotonic()
    unit = _unit(args)
    qcfg = QuadratureConfig(n=args.quad_n, tol=args.quad_tol)
    dcfg = DerivativeConfig(step=args.step)
    res = hex_pipeline(args.j, qcfg, dcfg, unit)
    outputs = {
        "pressure_at_one": res.pressure_at_one,
        "pressure_samples": [{"beta": b, "pressure": p} for b, p in res.pressure_samples],
        "pressure_derivative": res.pressure_derivative,
        "nn_correlation": res.nn_correlation,
        "class_probs": {"P1": res.class_probs.P1, "P2": res.class_probs.P2},
        "erasure_entropy": res.entropy.value,
        "quadrature_error": res.quadrature_error,
        "derivative_error": res.derivative_error,
        "unit": unit.value,
    }
    inputs = {"J": args.j, "quad_n": args.quad_n, "quad_tol": args.quad_tol, "step": args.step}
    return _record("hex", inputs, outputs, "quadrature", started, args)


def _parse_regions(text: str):
    regions = []
    for part in text.split(";"):
        part = part.strip()
        if part:
            regions.append([int(s) for s in part.split(",")])
    if not regions:
        raise ChainFileError("no regions given")
    return regions


def cmd_torus(args) -> dict:
    started = time.monotonic()
    unit = _unit(args)
    lat = LatticeSpec(args.kind, args.width, args.height)
    measure = enumerate_torus(lat, args.j)
    regions = _parse_regions(args.regions)
    direct = torus_erasure_entropy(measure, regions[0], unit).value
    gibbs = torus_gibbs_erasure(measure, regions[0], unit).value
    outputs = {
        "erasure_direct": direct,
        "erasure_gibbs": gibbs,
        "equality_residual": direct - gibbs,
        "normalized_series": volume_normalized_erasure(measure, regions, unit),
        "unit": unit.value,
    }
    if args.trials > 0:
        outputs["lts_min_gap_nats"] = lts_check(
            lat, args.j, regions[0][0], args.tilt, args.trials, args.seed
        )
    inputs = {
        "kind": args.kind,
        "width": args.width,
        "height": args.height,
        "J": args.j,
        "regions": regions,
    }
    return _record("torus", inputs, outputs, "exact", started, args)


def cmd_mc(args) -> dict:
    started = time.monotonic()
    unit = _unit(args)
    lat = LatticeSpec(args.kind, args.width, args.height)
    cfg = _mc_config(args, lat)
    ent = estimate_erasure_entropy(cfg, unit)
    classes = estimate_class_frequencies(cfg)
    outputs = {
        "erasure_entropy": {"mean": ent.mean, "se": ent.se, "batches": ent.batches},
        "class_frequencies": [
            {"class": i + 1, "mean": c.mean, "se": c.se} for i, c in enumerate(classes)
        ],
        "unit": unit.value,
    }
    inputs = {
        "kind": args.kind,
        "width": args.width,
        "height": args.height,
        "J": args.j,
        "sweeps": args.sweeps,
        "burn_in": args.burn_in,
        "batches": args.batches,
        "chains": args.chains,
        "seed": args.seed,
    }
    return _record("mc", inputs, outputs, "monte-carlo", started, args)


def _add_common(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--bits", action="store_true", help="report in bits (default)")
    group.add_argument("--nats", action="store_true", help="report in nats")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None, help="output file (default stdout)")
    p.add_argument("--timing", action="store_true", help="include wall time in the record")


def _add_mc_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sweeps", type=int, default=4000)
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--batches", type=int, default=16)
    p.add_argument("--chains", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="erasure",
        description="Erasure entropies of Markov chains and 2-D Ising models",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("markov", help="rates and the k-step identity for a chain file")
    p.add_argument("--chain", required=True)
    p.add_argument("--interval-max", type=int, default=10)
    _add_common(p)
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("dme", help="erasure-channel conditional entropy over a p grid")
    p.add_argument("--chain", required=True)
    p.add_argument("--p-grid", required=True, help="comma-separated erasure probabilities")
    p.add_argument("--n", type=int, default=10)
    _add_common(p)
    p.set_defaults(func=cmd_dme)

    p = sub.add_parser("square", help="square-lattice boundary classes and erasure entropy")
    p.add_argument("--j", type=float, required=True)
    p.add_argument("--provider", choices=["torus", "strip", "mc", "user"], default="torus")
    p.add_argument("--size", type=int, default=4, help="torus provider: N x N extent")
    p.add_argument("--strip-width", type=int, default=8)
    p.add_argument("--width", type=int, default=32, help="mc provider lattice width")
    p.add_argument("--height", type=int, default=32, help="mc provider lattice height")
    p.add_argument("--g4", type=float, default=None)
    p.add_argument("--gew", type=float, default=None)
    p.add_argument("--gen", type=float, default=None)
    _add_mc_opts(p)
    _add_common(p)
    p.set_defaults(func=cmd_square)

    p = sub.add_parser("hex", help="analytic honeycomb pipeline")
    p.add_argument("--j", type=float, required=True)
    p.add_argument("--quad-n", type=int, default=32)
    p.add_argument("--quad-tol", type=float, default=1e-13)
    p.add_argument("--step", type=float, default=1e-3)
    _add_common(p)
    p.set_defaults(func=cmd_hex)

    p = sub.add_parser("torus", help="exact enumeration diagnostics on a small torus")
    p.add_argument("--kind", choices=["square", "honeycomb"], default="square")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--j", type=float, required=True)
    p.add_argument("--regions", default="0", help="semicolon-separated site lists, e.g. '0;0,1'")
    p.add_argument("--tilt", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=0, help="LTS trials (0 disables the check)")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_torus)

    p = sub.add_parser("mc", help="heat-bath estimates with batch-means errors")
    p.add_argument("--kind", choices=["square", "honeycomb"], default="square")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--j", type=float, required=True)
    _add_mc_opts(p)
    _add_common(p)
    p.set_defaults(func=cmd_mc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        record = args.func(args)
    except ChainFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NearCriticalError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEAR_CRITICAL
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InconsistentInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except MixingFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MIXING
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    write_record(record, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
