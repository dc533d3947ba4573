"""Command-line driver: ``verify``, ``eval`` and ``sweep``.

Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import itertools
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import bounds
from .archimedean import gamma_ratio_A, gamma_ratio_G
from .characters import gauss_sum_modulus_squared, shell_psi_exact
from .errors import LocalFactorsError
from .gamma import gamma
from .local_identities import (CONTINUOUS_VARIANTS, CUSPIDAL_VARIANTS, c_prime_constant, continuous_closed,
                               cuspidal_closed, k_v1_closed, k_v1_series, m1_term, m2_bracket,
                               unipotent_closed)
from .padic import is_prime
from .perron import perron_error_bound, perron_indicator, window_count_bound, window_set_count
from .records import ParamPoint
from .suite import REGISTRY, SuiteConfig, build_report, run_suite
from .whittaker import SatakeParams, local_L, mellin_whittaker

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# value parsing and formatting
# ---------------------------------------------------------------------------

def parse_real(text: str) -> float | Fraction:
    text = text.strip()
    if "/" in text:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"cannot parse rational {text!r}") from exc
    try:
        return float(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``a+bi``, ``bi``, ``i``, ``-i`` (``j`` accepted for ``i``)."""
    t = text.strip().replace(" ", "").replace("j", "i")
    if not t:
        raise UsageError("empty complex number")
    if t.endswith("i"):
        body = t[:-1]
        # split at the last sign that is not part of an exponent
        cut = max((k for k, ch in enumerate(body) if ch in "+-" and k > 0 and body[k - 1] not in "eE"),
                  default=0)
        real_txt, imag_txt = body[:cut], body[cut:]
        if imag_txt in ("", "+", "-"):
            imag_txt += "1"
        try:
            return complex(float(parse_real(real_txt)) if real_txt else 0.0, float(parse_real(imag_txt)))
        except UsageError as exc:
            raise UsageError(f"cannot parse complex {text!r}") from exc
    return complex(float(parse_real(t)), 0.0)


def parse_satake(text: str) -> SatakeParams:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError("--satake expects two comma-separated complex numbers")
    a, b = (parse_complex(x) for x in parts)
    return SatakeParams(a, b, tempered=abs(abs(a) - 1) < 1e-12 and abs(abs(b) - 1) < 1e-12)


def format_value(v: Any) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, int):
        return str(v)
    z = complex(v)
    return f"{z.real:.16g},{z.imag:.16g}"


# ---------------------------------------------------------------------------
# operations available to ``eval`` and ``sweep``
# ---------------------------------------------------------------------------

def _sp(a) -> SatakeParams:
    if a.satake is None:
        raise UsageError("this operation needs --satake")
    return a.satake


def _point(a) -> ParamPoint:
    return ParamPoint(a.s, a.sprime, a.wprime)


def _need(a, *names):
    missing = [n for n in names if getattr(a, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _k_v1_series(a):
    return k_v1_series(_sp(a), a.prime, a.N, a.wprime, a.truncation)[0]


OPS: dict[str, tuple[Callable[[argparse.Namespace], Any], tuple[str, ...]]] = {
    "theta": (lambda a: bounds.theta(a.delta0), ("delta0",)),
    "convexity-exponent": (lambda a: bounds.convexity_exponent(a.d), ()),
    "subconvex-exponent": (lambda a: bounds.subconvex_exponent(a.d, a.delta0), ("delta0",)),
    "savings": (lambda a: bounds.savings(a.d, a.delta0), ("delta0",)),
    "beta-prime": (lambda a: bounds.beta_prime_choice(a.d, a.eps), ("eps",)),
    "chain-exponent": (lambda a: bounds.chain_exponent(a.d, a.delta0, a.eps), ("delta0", "eps")),
    "optimal-h": (lambda a: bounds.optimal_H(a.x, a.delta0), ("x", "delta0")),
    "shell-psi": (lambda a: shell_psi_exact(a.prime, a.ell), ("ell",)),
    "gauss-modulus-squared": (lambda a: gauss_sum_modulus_squared(a.prime, a.N), ()),
    "local-l": (lambda a: local_L(_sp(a), a.prime, a.s), ()),
    "mellin-whittaker": (lambda a: mellin_whittaker(_sp(a), a.prime, a.s, a.truncation)[0], ()),
    "k-v1-closed": (lambda a: k_v1_closed(_sp(a), a.prime, a.N, a.wprime), ()),
    "k-v1-series": (_k_v1_series, ()),
    "c-prime": (lambda a: c_prime_constant(_sp(a), a.prime, a.wprime), ()),
    "unipotent-closed": (lambda a: unipotent_closed(a.prime, a.wprime), ()),
    "cuspidal-closed": (lambda a: cuspidal_closed(_sp(a), a.prime, a.sprime, a.wprime,
                                                  a.variant or "three_term"), ()),
    "continuous-closed": (lambda a: continuous_closed(a.prime, a.z, _point(a), a.variant or "s_plus"), ()),
    "m1": (lambda a: m1_term(_sp(a), a.prime, a.wprime), ()),
    "m2": (lambda a: m2_bracket(a.prime, a.s, a.wprime), ()),
    "gamma": (lambda a: gamma(a.s), ()),
    "gamma-ratio-a": (lambda a: gamma_ratio_A(a.sprime, a.wprime, a.mu1, a.mu2), ()),
    "gamma-ratio-g": (lambda a: gamma_ratio_G(a.kind, a.s, a.sprime, a.wprime), ()),
    "perron-indicator": (lambda a: perron_indicator(a.x, a.beta_prime, a.S), ("x", "beta_prime")),
    "perron-error-bound": (lambda a: perron_error_bound(a.x, a.beta_prime, a.S), ("x", "beta_prime")),
    "window-count": (lambda a: window_set_count(a.x, a.S, a.prime), ("x",)),
    "window-count-bound": (lambda a: window_count_bound(a.S, a.prime), ()),
}


def normalize_op(name: str) -> str:
    op = name.strip().lower().replace("_", "-")
    if op not in OPS:
        raise UsageError(f"unknown operation {name!r}; choose from {', '.join(sorted(OPS))}")
    return op


def evaluate(op: str, args: argparse.Namespace) -> Any:
    fn, required = OPS[op]
    _need(args, *required)
    if not is_prime(args.prime):
        raise UsageError(f"--prime {args.prime} is not prime")
    return fn(args)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _positive_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _typed(fn):
    def wrapper(text):
        try:
            return fn(text)
        except UsageError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    wrapper.__name__ = fn.__name__
    return wrapper


def _rational(text: str) -> Fraction:
    return bounds.as_fraction(parse_real(text))


# flags shared by every subcommand: (flags, kwargs, default)
_PARAM_FLAGS: list[tuple[tuple[str, ...], dict, Any]] = [
    (("--prime",), {"type": int}, 2),
    (("--depth-N", "--N"), {"dest": "N", "type": _positive_int}, 1),
    (("--wprime",), {"type": _typed(parse_complex)}, 2 + 0j),
    (("--sprime",), {"type": _typed(parse_complex)}, 0j),
    (("--s",), {"type": _typed(parse_complex)}, 0.5 + 0j),
    (("--satake",), {"type": _typed(parse_satake)}, None),
    (("--z",), {"type": _typed(parse_complex)}, 1 + 0j),
    (("--ell",), {"type": int}, None),
    (("--delta0",), {"type": _typed(_rational)}, None),
    (("--eps",), {"type": _typed(_rational)}, None),
    (("--d",), {"type": int}, 2),
    (("--x",), {"type": float}, None),
    (("--S",), {"type": float}, 100.0),
    (("--beta-prime",), {"dest": "beta_prime", "type": float}, None),
    (("--mu1",), {"type": _typed(parse_complex)}, 0j),
    (("--mu2",), {"type": _typed(parse_complex)}, 0j),
    (("--kind",), {"choices": ["real", "complex"]}, "complex"),
    (("--variant",), {"choices": sorted(set(CUSPIDAL_VARIANTS) | set(CONTINUOUS_VARIANTS))}, None),
    (("--truncation",), {"type": _positive_int}, None),
]

_SUITE_FLAGS: list[tuple[tuple[str, ...], dict, Any]] = [
    (("--tol",), {"type": float}, None),
    (("--samples",), {"type": _positive_int}, 20),
    (("--seed",), {"type": int}, 0),
    (("--identities",), {}, None),
    (("--workers",), {"type": int}, 1),
]


def _add_flags(parser, table):
    for flags, kwargs, _default in table:
        kw = dict(kwargs)
        kw["default"] = argparse.SUPPRESS
        parser.add_argument(*flags, **kw)


def _dest(flags, kwargs) -> str:
    return kwargs.get("dest") or flags[0].lstrip("-").replace("-", "_")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="localfactors", description="Local factor identities and bound bookkeeping.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="run the identity suite")
    evalp = sub.add_parser("eval", help="evaluate one operation")
    evalp.add_argument("op")
    sweep = sub.add_parser("sweep", help="evaluate an operation over a parameter grid")
    sweep.add_argument("op")
    sweep.add_argument("--grid", action="append", default=[],
                       help="NAME=v1,v2,... or NAME=a:b (inclusive integer range); repeat for a product")
    for p in (verify, evalp, sweep):
        _add_flags(p, _PARAM_FLAGS)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.add_argument("--output", default=argparse.SUPPRESS, metavar="PATH")
        p.add_argument("--config", default=None, metavar="PATH",
                       help="key = value file mirroring the flags; flags take precedence")
    _add_flags(verify, _SUITE_FLAGS)
    return parser


def _all_flag_specs():
    return _PARAM_FLAGS + _SUITE_FLAGS + [(("--json",), {}, False), (("--output",), {}, None)]


def _load_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string("[localfactors]\n" + text)
    except configparser.Error as exc:
        raise UsageError(f"malformed config {path}: {exc}") from exc
    return {k.strip().lstrip("-").replace("-", "_"): v.strip() for k, v in cp["localfactors"].items()}


def resolve_args(ns: argparse.Namespace) -> argparse.Namespace:
    """Fill every flag from (in order of precedence) the command line, the config file, the default."""
    config = _load_config(getattr(ns, "config", None))
    aliases = {"depth_N": "N"}
    config = {aliases.get(k, k): v for k, v in config.items()}
    known = set()
    for flags, kwargs, default in _all_flag_specs():
        dest = _dest(flags, kwargs)
        known.add(dest)
        if hasattr(ns, dest):
            continue
        if dest in config:
            raw = config[dest]
            if dest == "json":
                value = raw.lower() in ("1", "true", "yes", "on")
            else:
                conv = kwargs.get("type", str)
                try:
                    value = conv(raw)
                except (ValueError, argparse.ArgumentTypeError) as exc:
                    raise UsageError(f"config value {dest} = {raw!r}: {exc}") from exc
                if "choices" in kwargs and value not in kwargs["choices"]:
                    raise UsageError(f"config value {dest} = {raw!r} not in {kwargs['choices']}")
            setattr(ns, dest, value)
        else:
            setattr(ns, dest, default)
    unknown = set(config) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return ns


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def suite_config(args: argparse.Namespace) -> SuiteConfig:
    ids = None
    if args.identities:
        ids = tuple(x.strip() for x in args.identities.split(",") if x.strip())
        unknown = [i for i in ids if i not in REGISTRY]
        if unknown:
            raise UsageError(f"unknown identity id(s): {', '.join(unknown)}; known: {', '.join(sorted(REGISTRY))}")
    if args.tol is not None and args.tol < 0:
        raise UsageError("--tol must be nonnegative")
    return SuiteConfig(samples=args.samples, seed=args.seed, truncation=args.truncation, tol=args.tol,
                       identities=ids, workers=max(1, args.workers))


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = suite_config(args)
    records = run_suite(cfg)
    report = build_report(cfg, records)
    if args.json:
        _emit(json.dumps(report, indent=2, sort_keys=False, allow_nan=False) + "\n", args.output)
    else:
        lines = []
        by_id: dict[str, list] = {}
        for r in records:
            by_id.setdefault(r.identity, []).append(r)
        for ident in sorted(by_id):
            recs = by_id[ident]
            bad = [r for r in recs if not r.passed]
            status = "PASS" if not bad else ("WARN" if recs[0].severity == "warning" else "FAIL")
            worst = max((r.rel_err for r in recs if r.rel_err == r.rel_err), default=0.0)
            lines.append(f"{status} {ident}: {len(recs) - len(bad)}/{len(recs)} passed, max rel err {worst:.3g}")
        lines.append(f"passed {report['passed']}, failed {report['failed']}, warnings {report['warnings']}")
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if report["failed"] == 0 else EXIT_FAIL


def cmd_eval(args: argparse.Namespace) -> int:
    op = normalize_op(args.op)
    value = evaluate(op, args)
    if args.json:
        _emit(json.dumps({"op": op, "value": format_value(value)}) + "\n", args.output)
    else:
        _emit(format_value(value) + "\n", args.output)
    return EXIT_OK


def parse_grid(specs: Sequence[str]) -> list[tuple[str, list[str]]]:
    axes = []
    for item in specs:
        if "=" not in item:
            raise UsageError(f"malformed grid {item!r}; expected NAME=values")
        name, values = item.split("=", 1)
        name = name.strip().lstrip("-").replace("-", "_")
        name = {"depth_N": "N"}.get(name, name)
        values = values.strip()
        if not name:
            raise UsageError(f"malformed grid {item!r}")
        if not values:
            items: list[str] = []
        elif re.fullmatch(r"-?\d+:-?\d+", values):
            lo, hi = (int(v) for v in values.split(":"))
            items = [str(v) for v in range(lo, hi + 1)]
        else:
            items = [v.strip() for v in values.split(";" if ";" in values else ",")]
            if any(not v for v in items):
                raise UsageError(f"malformed grid {item!r}")
        axes.append((name, items))
    return axes


def _convert(name: str, raw: str):
    for flags, kwargs, _default in _PARAM_FLAGS:
        if _dest(flags, kwargs) == name:
            conv = kwargs.get("type", str)
            try:
                return conv(raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"grid value {name}={raw!r}: {exc}") from exc
    raise UsageError(f"unknown grid parameter {name!r}")


def cmd_sweep(args: argparse.Namespace) -> int:
    op = normalize_op(args.op)
    axes = parse_grid(args.grid)
    names = [n for n, _ in axes]
    rows = []
    for combo in itertools.product(*(vals for _, vals in axes)) if axes else []:
        ns = argparse.Namespace(**vars(args))
        for name, raw in zip(names, combo):
            setattr(ns, name, _convert(name, raw))
        value = evaluate(op, ns)
        rows.append(dict(zip(names, combo)) | {"value": format_value(value)})
    if args.json:
        _emit(json.dumps({"op": op, "columns": names + ["value"], "rows": rows}, indent=2) + "\n", args.output)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(names + ["value"])
        for row in rows:
            writer.writerow([row[n] for n in names] + [row["value"]])
        _emit(buf.getvalue(), args.output)
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "eval": cmd_eval, "sweep": cmd_sweep}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = resolve_args(build_parser().parse_args(argv))
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LocalFactorsError, ValueError, KeyError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
