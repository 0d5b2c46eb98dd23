"""Residual reports shared by the hyper, gfunction and identities modules."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from .scalar import is_exact


def _pair(x) -> list:
    z = complex(x)
    return [z.real, z.imag]


@dataclass
class IdentityReport:
    """LHS, RHS and residuals of one identity evaluation.

    ``rel_residual`` is |LHS - RHS| / max(1, scale), where ``scale`` is the
    largest magnitude among the terms that make up either side.  The verdict
    compares ``rel_residual`` with ``tolerance``.
    """

    identity_id: str
    params: dict
    lhs: Any = 0
    rhs: Any = 0
    tolerance: float = 1e-9
    scale: float = 1.0
    skipped_reason: Optional[str] = None
    seed: Optional[int] = None
    trial: Optional[int] = None
    abs_residual: float = field(init=False, default=0.0)
    rel_residual: float = field(init=False, default=0.0)
    exact_zero: bool = field(init=False, default=False)

    def __post_init__(self):
        if self.skipped_reason is not None:
            self.abs_residual = 0.0
            self.rel_residual = 0.0
            return
        if is_exact(self.lhs) and is_exact(self.rhs):
            diff = self.lhs - self.rhs
            self.exact_zero = diff == 0
            self.abs_residual = abs(float(diff)) if not self.exact_zero else 0.0
        else:
            self.abs_residual = abs(complex(self.lhs) - complex(self.rhs))
        self.rel_residual = self.abs_residual / max(1.0, self.scale)

    @property
    def verdict(self) -> str:
        if self.skipped_reason is not None:
            return "skipped"
        if math.isnan(self.rel_residual):
            return "fail"
        return "pass" if self.rel_residual <= self.tolerance else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        out = {
            "identity_id": self.identity_id,
            "seed": self.seed,
            "trial": self.trial,
            "params": self.params,
            "lhs": _pair(self.lhs),
            "rhs": _pair(self.rhs),
            "abs_residual": self.abs_residual,
            "rel_residual": self.rel_residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        }
        if self.skipped_reason is not None:
            out["skipped_reason"] = self.skipped_reason
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def skipped(identity_id: str, params: dict, reason: str, tolerance: float) -> IdentityReport:
    return IdentityReport(identity_id, params, tolerance=tolerance, skipped_reason=reason)


def term_scale(terms: Iterable) -> float:
    """Largest magnitude among the summands."""
    return max((abs(complex(t)) for t in terms), default=0.0)
