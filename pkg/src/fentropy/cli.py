"""Command-line front end.

Usage::

    fentropy bound --f shannon --d 2 --eps 0.5
    fentropy extremal --d 3 --eps 0.6 --format json | fentropy distance
    fentropy verify --f tsallis --alpha 2 --d 4 --n 10000 --seed 42
    fentropy oracle --f shannon --d 3 --eps 0.3
    fentropy sweep --f shannon --d 2 --grid 101 --n 200 --with-oracle

Exit status is 0 on success, 1 when a verification run records a violation
and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .bounds import extremal_pair, f_bound_trace_t, modulus_of_continuity
from .entropy import builtin, f_entropy, load_table, renyi
from .errors import FEntropyError, ValidationError
from .states import matrix_from_json, matrix_to_json, optimal_projector, trace_distance, validate_density
from .verify import VIOLATION_TOL, oracle_max_Df, sample_check, sweep

COMMANDS = ("bound", "distance", "entropy", "extremal", "verify", "oracle", "sweep")
DEFAULTS = {
    "f": "shannon",
    "t": 1.0,
    "n": 10000,
    "seed": 0,
    "workers": 1,
}


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file with flag values (flags win)")
    common.add_argument("--f", choices=["shannon", "tsallis", "gini_simpson", "natural_xlogx"])
    common.add_argument("--alpha", type=float)
    common.add_argument("--f-table", dest="f_table", type=Path, help="CSV with header x,fx")
    common.add_argument("--d", type=int)
    common.add_argument("--eps", type=float)
    common.add_argument("--t", type=float)
    common.add_argument("--n", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--grid", type=int)
    common.add_argument("--out", type=Path)
    common.add_argument("--format", choices=["json", "csv"])

    parser = argparse.ArgumentParser(prog="fentropy", description="f-entropy continuity bounds")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bound", parents=[common], help="evaluate the continuity bound")
    p = sub.add_parser("distance", parents=[common], help="trace distance of two matrices")
    p.add_argument("--rho", type=Path)
    p.add_argument("--sigma", type=Path)
    p = sub.add_parser("entropy", parents=[common], help="f-entropy of a density matrix")
    p.add_argument("--rho", type=Path)
    sub.add_parser("extremal", parents=[common], help="emit the pair attaining the bound")
    p = sub.add_parser("verify", parents=[common], help="sampled check of the bound")
    p.add_argument("--workers", type=int)
    sub.add_parser("oracle", parents=[common], help="classical brute-force maximization (d = 2, 3)")
    p = sub.add_parser("sweep", parents=[common], help="tabulate the bound over an eps grid")
    p.add_argument("--with-oracle", dest="with_oracle", action="store_true", default=None)
    return parser


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    if args.config is not None:
        try:
            cfg = json.loads(args.config.read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"--config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError(f"--config {args.config}: expected a JSON object")
        for key, value in cfg.items():
            key = key.replace("-", "_")
            if key in ("command", "config") or not hasattr(args, key):
                raise UsageError(f"--config {args.config}: unknown key {key!r}")
            if getattr(args, key) is None:
                setattr(args, key, Path(value) if key in ("f_table", "out", "rho", "sigma") else value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, value)
    return args


def _function(args, t_max: float = 1.0):
    if args.f_table is not None:
        try:
            return load_table(args.f_table)
        except OSError as exc:
            raise UsageError(f"--f-table {args.f_table}: {exc}") from exc
        except ValidationError as exc:
            raise UsageError(f"--f-table {args.f_table}: {exc}") from exc
    return builtin(args.f, alpha=args.alpha, t_max=t_max)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"{args.command} requires --{name.replace('_', '-')}")


def _read_json(path: Path | None, flag: str):
    try:
        text = sys.stdin.read() if path is None else path.read_text()
        return json.loads(text)
    except OSError as exc:
        raise UsageError(f"{flag} {path}: {exc}") from exc
    except ValueError as exc:
        raise UsageError(f"{flag} {path or '<stdin>'}: malformed JSON ({exc})") from exc


def _density(obj, flag):
    try:
        return validate_density(matrix_from_json(obj))
    except FEntropyError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _cmd_bound(args):
    _require(args, "d", "eps")
    t = args.t
    f = _function(args, t_max=max(1.0, t))
    res = f_bound_trace_t(f, args.d, t, args.eps)
    print(f"{f.label} d={args.d} t={t:g} eps={args.eps:g}: bound {serialize.fmt(res.value)} ({res.regime})",
          file=sys.stderr)
    if args.format is None:
        return serialize.fmt(res.value) + "\n", 0
    out = res.to_dict()
    if t == 1.0:
        out["modulus_of_continuity"] = modulus_of_continuity(f, args.d, args.eps)
    if args.format == "csv":
        return serialize.csv_table(list(out), [list(out.values())]), 0
    return serialize.dumps(out), 0


def _pair_from_args(args):
    if args.rho is not None or args.sigma is not None:
        _require(args, "rho", "sigma")
        return (_density(_read_json(args.rho, "--rho"), "--rho"),
                _density(_read_json(args.sigma, "--sigma"), "--sigma"))
    obj = _read_json(None, "stdin")
    if not isinstance(obj, dict) or "rho" not in obj or "sigma" not in obj:
        raise UsageError("stdin: expected a JSON object with 'rho' and 'sigma'")
    return _density(obj["rho"], "stdin rho"), _density(obj["sigma"], "stdin sigma")


def _cmd_distance(args):
    rho, sigma = _pair_from_args(args)
    T = trace_distance(rho, sigma)
    _, value = optimal_projector(rho, sigma)
    print(f"trace distance {serialize.fmt(T)}", file=sys.stderr)
    if args.format is None:
        return serialize.fmt(T) + "\n", 0
    out = {"d": rho.dim, "trace_distance": T, "projector_value": value}
    if args.format == "csv":
        return serialize.csv_table(list(out), [list(out.values())]), 0
    return serialize.dumps(out), 0


def _cmd_entropy(args):
    obj = _read_json(args.rho, "--rho")
    if isinstance(obj, dict) and "rho" in obj:
        obj = obj["rho"]
    rho = _density(obj, "--rho")
    f = _function(args)
    S = f_entropy(rho, f)
    print(f"S_{f.label} = {serialize.fmt(S)}", file=sys.stderr)
    if args.format is None:
        return serialize.fmt(S) + "\n", 0
    out = {"f": f.label, "d": rho.dim, "entropy": S}
    if args.alpha is not None and args.alpha > 1:
        out["renyi"] = renyi(rho, args.alpha)
    if args.format == "csv":
        return serialize.csv_table(list(out), [list(out.values())]), 0
    return serialize.dumps(out), 0


def _cmd_extremal(args):
    _require(args, "d", "eps")
    rho, sigma = extremal_pair(args.d, args.eps)
    p = np.real(np.diag(rho.matrix))
    q = np.real(np.diag(sigma.matrix))
    if args.format == "csv":
        return serialize.csv_table(["index", "p", "q"], [[i, float(a), float(b)] for i, (a, b) in enumerate(zip(p, q))]), 0
    out = {
        "d": args.d,
        "eps": args.eps,
        "p": p.tolist(),
        "q": q.tolist(),
        "rho": matrix_to_json(rho),
        "sigma": matrix_to_json(sigma),
    }
    return serialize.dumps(out), 0


def _cmd_verify(args):
    _require(args, "d")
    f = _function(args)
    report = sample_check(f, args.d, args.n, args.seed, workers=args.workers)
    status = "ok" if report.ok else f"{len(report.violations)} VIOLATIONS"
    print(
        f"verify {report.f_name} d={report.d} samples={report.samples} seed={report.seed}: "
        f"min slack {serialize.fmt(report.min_slack)}, {status} ({report.elapsed:.2f}s)",
        file=sys.stderr,
    )
    out = report.to_dict()
    if args.format == "csv":
        out["violations"] = len(report.violations)
        text = serialize.csv_table(list(out), [list(out.values())])
    else:
        text = serialize.dumps(out)
    return text, 0 if report.ok else 1


def _cmd_oracle(args):
    _require(args, "d", "eps")
    if args.d not in (2, 3):
        raise UsageError("oracle supports d in {2,3}")
    f = _function(args)
    res = oracle_max_Df(f, args.d, args.eps, grid=args.grid or 400)
    bad = res.gap < -VIOLATION_TOL
    print(
        f"oracle {res.f_name} d={res.d} eps={res.eps:g}: max D_f {serialize.fmt(res.max_Df)}, "
        f"bound {serialize.fmt(res.bound)}, gap {serialize.fmt(res.gap)}" + (" VIOLATION" if bad else ""),
        file=sys.stderr,
    )
    out = res.to_dict()
    if args.format == "csv":
        out.pop("argmax")
        return serialize.csv_table(list(out), [list(out.values())]), 1 if bad else 0
    return serialize.dumps(out), 1 if bad else 0


def _cmd_sweep(args):
    _require(args, "d")
    t = args.t
    f = _function(args, t_max=max(1.0, t))
    points = args.grid or 11
    if points < 1:
        raise UsageError("--grid must be >= 1")
    eps_grid = np.linspace(0.0, t, points) if points > 1 else np.array([0.0])
    with_slack = "n" in args._explicit
    rows = sweep(f, args.d, eps_grid, t=t, n=args.n if with_slack else 0, seed=args.seed,
                 oracle=bool(args.with_oracle))
    header = ["eps", "delta", "regime"]
    if with_slack:
        header.append("min_slack")
    if args.with_oracle:
        header.append("oracle_gap")
    table = []
    bad = False
    for r in rows:
        line = [r.eps, r.delta, r.regime]
        if with_slack:
            line.append(r.min_slack)
            bad |= r.min_slack < -VIOLATION_TOL
        if args.with_oracle:
            line.append(r.oracle_gap)
            bad |= r.oracle_gap < -VIOLATION_TOL
        table.append(line)
    print(f"sweep {f.label} d={args.d} t={t:g}: {len(rows)} rows" + (" VIOLATION" if bad else ""),
          file=sys.stderr)
    if args.format == "json":
        return serialize.dumps([dict(zip(header, line)) for line in table]), 1 if bad else 0
    return serialize.csv_table(header, table), 1 if bad else 0


HANDLERS = {
    "bound": _cmd_bound,
    "distance": _cmd_distance,
    "entropy": _cmd_entropy,
    "extremal": _cmd_extremal,
    "verify": _cmd_verify,
    "oracle": _cmd_oracle,
    "sweep": _cmd_sweep,
}


def run(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._explicit = {k for k, v in vars(args).items() if v is not None}
    try:
        args = _merge_config(args)
        if args.config is not None:
            args._explicit |= {k for k in json.loads(args.config.read_text())}
        text, code = HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"fentropy {args.command}: {exc}", file=sys.stderr)
        return 2
    except FEntropyError as exc:
        print(f"fentropy {args.command}: {exc}", file=sys.stderr)
        return 2
    if args.out is not None:
        try:
            args.out.write_text(text)
        except OSError as exc:
            print(f"fentropy {args.command}: --out {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
