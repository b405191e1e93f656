"""Command-line front end: configuration parsing, CSV/JSON emission, reproducibility metadata."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy

from . import __version__
from .edge import edge_residuals, solve_edge
from .errors import InvalidArgumentError, InvalidConfigError, SpectralEdgeError
from .flow import flow_derivative_check, flow_state
from .identities import identity_residuals
from .locallaw import locallaw_deviation, DEVIATION_CLASSES
from .montecarlo import NOISE_DISTS, run_ensemble, sample_matrix
from .spectrum import check_assumption3, load_spectrum, with_size
from .stieltjes import solve_stieltjes
from .tracywidom import tw_table

log = logging.getLogger("spectraledge")

COMMANDS = ("edge", "density", "simulate", "twtable", "locallaw", "flow-check", "identity-check")


def _format_number(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "NaN"
        if math.isinf(value):
            return "Infinity" if value > 0 else "-Infinity"
        return format(value, ".17g")
    raise TypeError(f"not a number: {value!r}")


def _json_body(obj, indent=0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float)):
        return _format_number(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{json.dumps(str(k))}: {_json_body(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{_json_body(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_json(obj, path=None) -> str:
    """Serialize with stable key order and 17-significant-digit floats."""
    body = _json_body(obj) + "\n"
    if path is None or path == "-":
        sys.stdout.write(body)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(body)
    return body


def emit_csv(rows, header, path=None) -> str:
    """Header-first CSV with 17-significant-digit numeric fields."""
    lines = [",".join(header)]
    for row in rows:
        fields = []
        for cell in row:
            if isinstance(cell, str):
                fields.append(cell)
            else:
                fields.append(_format_number(cell if not isinstance(cell, (np.floating, np.integer)) else cell.item()))
        lines.append(",".join(fields))
    body = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(body)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(body)
    return body


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility metadata emitted alongside every output file."""

    command: str
    config_hash: str
    seed: int | None
    versions: dict
    wall_time_s: float

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "versions": dict(self.versions),
            "wall_time_s": self.wall_time_s,
        }


def _versions() -> dict:
    return {
        "spectraledge": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": ".".join(map(str, sys.version_info[:3])),
    }


def _config_hash(args) -> str:
    spectrum_path = getattr(args, "spectrum", None)
    if spectrum_path:
        with open(spectrum_path, "rb") as fh:
            return hashlib.sha256(fh.read()).hexdigest()
    canon = json.dumps(vars(args), sort_keys=True, default=str).encode()
    return hashlib.sha256(canon).hexdigest()


def _write_manifest(args, started: float, out_path: str) -> None:
    manifest = RunManifest(
        command=args.command,
        config_hash=_config_hash(args),
        seed=getattr(args, "seed", None),
        versions=_versions(),
        wall_time_s=time.time() - started,
    )
    emit_json(manifest.to_dict(), out_path + ".manifest.json")


def _load_model(args):
    try:
        with open(args.spectrum, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise InvalidConfigError(f"cannot read spectrum file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidConfigError(f"spectrum file is not valid JSON: {exc}") from exc
    return load_spectrum(config)


def _pmap(fn, items, threads):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _cmd_edge(args) -> list[str]:
    model = _load_model(args)
    sol = solve_edge(model)
    residuals = edge_residuals(model, sol)
    payload = {
        "xi_r": sol.xi_r,
        "lambda_r": sol.lambda_r,
        "b": sol.b,
        "tb": sol.tb,
        "h": sol.h,
        "gamma0": sol.gamma0,
        "E_plus": sol.E_plus,
        "xi": sol.xi,
        "assumption3_margin": check_assumption3(model, sol),
        "residuals": {
            "R1": residuals["R1"],
            "R2": residuals["R2"],
            "first_order": residuals["first_order"],
        },
    }
    emit_json(payload, args.out)
    return [args.out] if args.out else []


def _cmd_density(args) -> list[str]:
    model = _load_model(args)
    start, stop, step = args.start, args.stop, args.step
    if stop is None or step is None:
        lam = solve_edge(model).lambda_r
        stop = stop if stop is not None else lam + 1.0
        step = step if step is not None else (stop - start) / 400.0
    if step <= 0 or stop < start:
        raise InvalidArgumentError("density grid requires step > 0 and to >= from")
    rows = []
    E = start
    while E <= stop + 1e-12:
        sv = solve_stieltjes(model, E)
        rows.append((E, max(0.0, sv.s.imag / math.pi), sv.s.imag, sv.s.real))
        E += step
    emit_csv(rows, ("E", "rho0", "Im_s", "Re_s"), args.out)
    return [args.out] if args.out else []


def _cmd_simulate(args) -> list[str]:
    if args.trials < 1:
        raise InvalidConfigError("simulate requires at least one trial")
    model = _load_model(args)
    result = run_ensemble(
        model, args.trials, dist=args.dist, seed=args.seed,
        rescale=args.rescale, threads=args.threads,
    )
    rows = [(k, result.mu1s[k], result.thetas[k]) for k in range(result.n_trials)]
    emit_csv(rows, ("trial", "mu1", "theta"), args.out)
    summary = {
        "mean": result.mean,
        "var": result.variance,
        "ks": result.ks_distance,
        "lambda_r": result.lambda_r,
        "gamma0": result.gamma0,
    }
    summary_path = args.out + ".summary.json" if args.out else None
    emit_json(summary, summary_path)
    written = [p for p in (args.out, summary_path) if p]
    return written


def _cmd_twtable(args) -> list[str]:
    rows = tw_table(args.start, args.stop, args.step)
    emit_csv(rows, ("s", "F1", "f1"), args.out)
    return [args.out] if args.out else []


def _cmd_locallaw(args) -> list[str]:
    model = _load_model(args)
    if args.N is not None:
        model = with_size(model, args.N)
    sol = solve_edge(model)
    z = complex(sol.lambda_r + args.E_offset, args.eta)

    def one_seed(seed):
        Y = sample_matrix(model, args.dist, seed, 0)
        return seed, locallaw_deviation(model, Y, z)

    reports = _pmap(one_seed, range(args.seed, args.seed + args.seeds), args.threads)
    rows = []
    for seed, report in reports:
        devs = report.deviations()
        for cls in DEVIATION_CLASSES:
            rows.append((seed, cls, devs[cls], report.psi, report.ratios[cls]))
    emit_csv(rows, ("seed", "class", "deviation", "psi", "ratio"), args.out)
    return [args.out] if args.out else []


def _cmd_flow_check(args) -> list[str]:
    model = _load_model(args)
    times = np.arange(0.0, args.t_max + 1e-12, args.t_step)
    rows = []
    for t in times:
        res = flow_derivative_check(model, float(t), step=args.step)
        rows.append((float(t), res["b"], res["gamma"], res["E_plus"], res["xi"], res["h"]))
    emit_csv(rows, ("t", "res_b", "res_gamma", "res_E_plus", "res_xi", "res_h"), args.out)
    return [args.out] if args.out else []


def _cmd_identity_check(args) -> list[str]:
    model = _load_model(args)
    state = flow_state(model, args.t)
    residuals = identity_residuals(state)
    emit_json(residuals, args.out)
    return [args.out] if args.out else []


_HANDLERS = {
    "edge": _cmd_edge,
    "density": _cmd_density,
    "simulate": _cmd_simulate,
    "twtable": _cmd_twtable,
    "locallaw": _cmd_locallaw,
    "flow-check": _cmd_flow_check,
    "identity-check": _cmd_identity_check,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectraledge",
        description="Deterministic spectral-edge data and Tracy-Widom verification "
                    "for signal-plus-noise matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spectrum(p):
        p.add_argument("--spectrum", required=True, help="spectrum spec JSON file")

    def add_out(p, required=False):
        p.add_argument("--out", required=required, default=None, help="output file path")

    p = sub.add_parser("edge", help="deterministic edge data as JSON")
    add_spectrum(p)
    add_out(p)

    p = sub.add_parser("density", help="limiting spectral density as CSV")
    add_spectrum(p)
    p.add_argument("--from", dest="start", type=float, default=0.01)
    p.add_argument("--to", dest="stop", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    add_out(p)

    p = sub.add_parser("simulate", help="sample the ensemble and emit rescaled statistics")
    add_spectrum(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--dist", choices=NOISE_DISTS, default="gaussian")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--rescale", action="store_true",
                   help="scale the matrix by sqrt(gamma0) and center at E_plus instead")
    add_out(p, required=True)

    p = sub.add_parser("twtable", help="table of the type-1 Tracy-Widom law")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    add_out(p)

    p = sub.add_parser("locallaw", help="resolvent deviations from the deterministic profiles")
    add_spectrum(p)
    p.add_argument("--N", type=int, default=None, help="resize the model to this noise dimension")
    p.add_argument("--eta", type=float, default=None, help="imaginary part (default N^{-1/2})")
    p.add_argument("--E-offset", dest="E_offset", type=float, default=0.0)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--dist", choices=NOISE_DISTS, default="gaussian")
    p.add_argument("--threads", type=int, default=1)
    add_out(p)

    p = sub.add_parser("flow-check", help="finite-difference vs analytic flow derivatives")
    add_spectrum(p)
    p.add_argument("--t-max", dest="t_max", type=float, default=3.0)
    p.add_argument("--t-step", dest="t_step", type=float, default=0.25)
    p.add_argument("--step", type=float, default=1e-4, help="finite-difference step")
    add_out(p)

    p = sub.add_parser("identity-check", help="residuals of the exact edge-functional identities")
    add_spectrum(p)
    p.add_argument("--t", type=float, default=0.0)
    add_out(p)

    return parser


def run_command(argv) -> int:
    """Execute one subcommand; exit codes: 0 ok, 2 invalid config/usage, 1 numeric failure."""
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("SPECTRALEDGE_LOG", "error").lower(), logging.ERROR
    )
    logging.basicConfig(level=level)
    log.setLevel(level)

    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2

    if getattr(args, "eta", "absent") is None and args.command == "locallaw":
        pass  # resolved below once the model size is known

    started = time.time()
    try:
        if args.command == "locallaw" and args.eta is None:
            # default spectral resolution N^{-1/2} needs the final size
            model = _load_model(args)
            size = args.N if args.N is not None else model.N
            args.eta = size ** -0.5
        written = _HANDLERS[args.command](args)
        for path in written:
            _write_manifest(args, started, path)
    except (InvalidConfigError, InvalidArgumentError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpectralEdgeError as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
