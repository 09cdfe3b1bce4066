"""Command-line front end.

Subcommands ``xi``, ``zeros``, ``check``, ``heat`` and ``weil``.  Settings
come from a flat ``key = value`` file (``--config``) overridden by flags.
Exit codes: 0 success, 1 computational failure or failed checks, 2 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields

from . import operators
from .funcspace import battery
from .operators import parse_sexpr
from .verify import SuiteConfig, check_adjoint, reports_to_json, run_all
from .zeta_xi import ZeroList, equisym_roots, find_critical_zeros, weil_sum, xi_direct, xi_ibp, xi_integral

USAGE, FAILURE = 2, 1


@dataclass(frozen=True)
class CliConfig:
    grid_L: float = 12.0
    grid_n: int = 4096
    quad_eps: float = 1e-14
    check_tol: float = 1e-8
    zero_tol: float = 1e-12
    direct_cap: int = 10**6
    format: str = "csv"
    seed: int = 20240611
    workers: int = 1

    def __post_init__(self):
        if self.grid_n < 2 or self.grid_n & (self.grid_n - 1):
            raise ValueError("grid_n must be a power of two")
        for name in ("grid_L", "quad_eps", "check_tol", "zero_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.direct_cap < 1 or self.workers < 1:
            raise ValueError("direct_cap and workers must be at least 1")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")


class UsageError(Exception):
    pass


def read_config(path: str) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    types = {f.name: f.type for f in fields(CliConfig)}
    conv = {"float": float, "int": int, "str": str}
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (p.strip() for p in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in types:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = conv[types[key]](value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return out


def fmt(x: float) -> str:
    """15 significant digits, locale independent, no negative zero."""
    x = float(x)
    return "0" if x == 0 else f"{x:.15g}"


def _complex_arg(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}") from None
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")
    return complex(parts[0], parts[1])


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xiops", description="Xi engines, zero lists and identity checks.")
    p.add_argument("--config", help="flat key = value settings file")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--seed", type=int)
    p.add_argument("--grid-L", dest="grid_L", type=_positive)
    p.add_argument("--grid-n", dest="grid_n", type=int)
    p.add_argument("--quad-eps", dest="quad_eps", type=_positive)
    p.add_argument("--check-tol", dest="check_tol", type=_positive)
    p.add_argument("--zero-tol", dest="zero_tol", type=_positive)
    p.add_argument("--direct-cap", dest="direct_cap", type=int)
    p.add_argument("--workers", type=int)
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("xi", help="evaluate Xi at one point")
    q.add_argument("--s", type=_complex_arg, required=True, help="argument as re,im")
    q.add_argument("--engine", choices=("direct", "integral", "ibp"), default="direct")
    q.add_argument("--n", type=_nonneg_int, default=0, help="Delta power for the ibp engine")

    q = sub.add_parser("zeros", help="zeros of Xi on the critical line")
    q.add_argument("--t-max", dest="t_max", type=float, required=True)
    q.add_argument("--tol", type=_positive)
    q.add_argument("--out", help="output file (default stdout)")

    q = sub.add_parser("check", help="run the identity checks")
    q.add_argument("--filter", default=None, help="glob on check names")
    q.add_argument("--op", default=None, help="S-expression; checks its structural adjoint instead")
    q.add_argument("--hbar", type=float, action="append", help="weights for --op (repeatable)")
    q.add_argument("--tau-shift", dest="tau_shift", type=float, default=0.0, help=argparse.SUPPRESS)
    q.add_argument("--timings", action="store_true", help="include wall-clock seconds in params")
    q.add_argument("--out", help="output file (default stdout)")

    q = sub.add_parser("heat", help="heat-flow roots against the lattice prediction")
    q.add_argument("--m", type=int, default=1)
    q.add_argument("--rho", type=_positive, required=True)
    q.add_argument("--k-max", dest="k_max", type=_nonneg_int, default=3)
    q.add_argument("--variant", choices=("plain", "tilde"), default="plain")
    q.add_argument("--out")

    q = sub.add_parser("weil", help="truncated Weil sum for a battery function")
    q.add_argument("--function", required=True)
    q.add_argument("--zeros", dest="zeros_path", help="zero list CSV (default: first 50 computed zeros)")
    q.add_argument("--n-zeros", dest="n_zeros", type=_nonneg_int, default=50)
    return p


def resolve_config(args) -> CliConfig:
    values = read_config(args.config) if args.config else {}
    for f in fields(CliConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    try:
        return CliConfig(**values)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(header: list[str], rows: list[list], cfg: CliConfig) -> str:
    if cfg.format == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def cmd_xi(args, cfg: CliConfig) -> int:
    z = args.s
    if args.engine == "direct":
        v = complex(xi_direct(z))
    elif args.engine == "integral":
        v = complex(xi_integral(2 * z - 1, eps=cfg.quad_eps))
    else:
        v = complex(xi_ibp(2 * z - 1, args.n, eps=cfg.quad_eps))
    print(f"{fmt(v.real)} {fmt(v.imag)}")
    return 0


def cmd_zeros(args, cfg: CliConfig) -> int:
    zl = find_critical_zeros(args.t_max, tol=args.tol or cfg.zero_tol)
    rows = [[i, float(t), float(r)] for i, (t, r) in enumerate(zip(zl.ordinates, zl.residuals), 1)]
    _emit(_table(["index", "ordinate", "residual"], rows, cfg), args.out)
    return 0


def cmd_check(args, cfg: CliConfig) -> int:
    if args.op is not None:
        try:
            op = parse_sexpr(args.op)
        except ValueError as exc:
            raise UsageError(f"bad --op expression: {exc}") from None
        funcs = battery()
        names = list(funcs)
        reports = []
        for hbar in args.hbar or [0.0]:
            for a, b in zip(names, names[1:] + names[:1]):
                r = check_adjoint(op, hbar, funcs[a], funcs[b], cfg.check_tol,
                                  name=f"op_adjoint_h{hbar:g}_{a}_{b}")
                reports.append(r)
    else:
        suite = SuiteConfig(seed=cfg.seed, tau_shift=args.tau_shift, grid_L=cfg.grid_L,
                            grid_n=cfg.grid_n, workers=cfg.workers)
        reports = run_all(suite, args.filter)
        if not reports:
            print(f"warning: no check matches {args.filter!r}", file=sys.stderr)
    _emit(reports_to_json(reports, timings=args.timings) + "\n", args.out)
    failed = [r.name for r in reports if not r.passed]
    if failed:
        print(f"{len(failed)} of {len(reports)} checks failed: {', '.join(failed)}", file=sys.stderr)
        return FAILURE
    return 0


def cmd_heat(args, cfg: CliConfig) -> int:
    roots = equisym_roots(args.m, args.rho, args.k_max, args.variant)
    rows = [[r["k"], float(r["predicted"]), float(r["located"]), float(abs(r["located"] - r["predicted"])),
             float(r["residual"])] for r in roots]
    _emit(_table(["k", "predicted", "located", "deviation", "residual"], rows, cfg), args.out)
    return 0


def cmd_weil(args, cfg: CliConfig) -> int:
    funcs = battery()
    if args.function not in funcs:
        raise UsageError(f"unknown function {args.function!r}; battery: {', '.join(funcs)}")
    if args.zeros_path:
        try:
            zl = ZeroList.from_csv(args.zeros_path)
        except (OSError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot read zero list: {exc}") from None
    else:
        zl = find_critical_zeros(150.0, tol=cfg.zero_tol).head(args.n_zeros)
    print(fmt(weil_sum(funcs[args.function], zl)))
    return 0


COMMANDS = {"xi": cmd_xi, "zeros": cmd_zeros, "check": cmd_check, "heat": cmd_heat, "weil": cmd_weil}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        operators.DIRECT_CAP = cfg.direct_cap
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"xiops: error: {exc}", file=sys.stderr)
        return USAGE
    except Exception as exc:
        print(f"xiops: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILURE


if __name__ == "__main__":
    sys.exit(main())
