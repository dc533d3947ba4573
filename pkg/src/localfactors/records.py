"""Verification records and parameter points."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable


@dataclass(frozen=True)
class ParamPoint:
    """A sample ``(s, s', w')`` together with the predicates each oracle checks."""

    s: complex = 0.5 + 0j
    s_prime: complex = 0j
    w_prime: complex = 2 + 0j

    def __post_init__(self):
        for name in ("s", "s_prime", "w_prime"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def tags(self) -> dict[str, bool]:
        return {
            "re_w_gt_1": self.w_prime.real > 1,
            "re_sp_gt_1": self.s_prime.real > 1,
            "re_w_gt_re_sp_plus_1": self.w_prime.real > self.s_prime.real + 1,
        }


def as_pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _jsonable(v):
    if isinstance(v, complex):
        return as_pair(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if hasattr(v, "numerator") and hasattr(v, "denominator") and not isinstance(v, (int, bool)):
        return str(v)
    if hasattr(v, "item"):  # numpy scalar
        return v.item()
    return v


@dataclass
class VerificationRecord:
    identity: str
    params: dict[str, Any]
    closed: complex
    oracle: complex
    abs_err: float
    rel_err: float
    tail_bound: float
    convention: str
    ratio: complex
    passed: bool
    severity: str = field(default="error", compare=False)

    def to_json(self) -> dict[str, Any]:
        return {
            "identity": self.identity,
            "params": _jsonable(self.params),
            "closed": as_pair(self.closed),
            "oracle": as_pair(self.oracle),
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "tail_bound": self.tail_bound,
            "convention": self.convention,
            "ratio": as_pair(self.ratio),
            "pass": self.passed,
        }


def make_record(identity: str, params: dict[str, Any], closed, oracle, *, tail_bound: float = 0.0,
                rel_tol: float = 0.0, abs_tol: float = 0.0, convention: str = "none",
                severity: str = "error") -> VerificationRecord:
    """Build a record; it passes when ``|oracle - closed| <= abs_tol + rel_tol |closed| + tail``."""
    closed, oracle = complex(closed), complex(oracle)
    abs_err = abs(oracle - closed)
    scale = abs(closed)
    rel_err = abs_err / scale if scale > 0 else (0.0 if abs_err == 0 else math.inf)
    ratio = oracle / closed if closed != 0 else complex(math.nan, math.nan)
    passed = bool(abs_err <= abs_tol + rel_tol * scale + tail_bound)
    return VerificationRecord(identity, dict(params), closed, oracle, float(abs_err), float(rel_err),
                              float(tail_bound), str(convention), ratio, passed, severity)


def ratio_spread(records: Iterable[VerificationRecord]) -> tuple[complex, float]:
    """Reference ratio (first record) and the largest relative deviation from it."""
    recs = list(records)
    if not recs:
        raise ValueError("no records")
    ref = recs[0].ratio
    spread = max(abs(r.ratio - ref) / abs(ref) for r in recs)
    return ref, float(spread)
