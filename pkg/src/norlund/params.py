"""Parameter vectors and serializable result containers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from .scalar import is_exact, scalar_from_json, scalar_to_json, to_complex


def _norm(x):
    if isinstance(x, bool):
        raise TypeError("bool is not a parameter")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return complex(x)
    return x


@dataclass(frozen=True)
class ParamSet:
    """Vectors a, b of common length p.  ``psi[m]`` = sum_{i<=m} (b_i - a_i)."""

    a: tuple
    b: tuple
    psi: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a = tuple(_norm(x) for x in self.a)
        b = tuple(_norm(x) for x in self.b)
        if len(a) != len(b):
            raise ValueError(f"len(a)={len(a)} differs from len(b)={len(b)}")
        if not a:
            raise ValueError("need p >= 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        ps = [Fraction(0)]
        for ai, bi in zip(a, b):
            ps.append(ps[-1] + bi - ai)
        object.__setattr__(self, "psi", tuple(ps))

    @classmethod
    def of(cls, a: Sequence, b: Sequence) -> "ParamSet":
        return cls(tuple(a), tuple(b))

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def psi_p(self):
        return self.psi[-1]

    @property
    def exact(self) -> bool:
        return all(is_exact(x) for x in self.a + self.b)

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "float"

    def to_float(self) -> "ParamSet":
        """One-way promotion to complex floats."""
        return ParamSet(tuple(to_complex(x) for x in self.a),
                        tuple(to_complex(x) for x in self.b))

    def swap(self, k: int) -> "ParamSet":
        """Exchange a_k and a_p (1-based k)."""
        self._check_index(k)
        a = list(self.a)
        a[k - 1], a[-1] = a[-1], a[k - 1]
        return ParamSet(tuple(a), self.b)

    def a_without(self, *idx: int) -> tuple:
        drop = {i - 1 for i in idx}
        return tuple(x for i, x in enumerate(self.a) if i not in drop)

    def b_without(self, *idx: int) -> tuple:
        drop = {i - 1 for i in idx}
        return tuple(x for i, x in enumerate(self.b) if i not in drop)

    def head(self, m: int) -> "ParamSet":
        return ParamSet(self.a[:m], self.b[:m])

    def shifted(self, alpha) -> "ParamSet":
        return ParamSet(tuple(x + alpha for x in self.a), tuple(x + alpha for x in self.b))

    def permuted(self, perm_a: Optional[Sequence[int]] = None,
                 perm_b: Optional[Sequence[int]] = None) -> "ParamSet":
        a = self.a if perm_a is None else tuple(self.a[i] for i in perm_a)
        b = self.b if perm_b is None else tuple(self.b[i] for i in perm_b)
        return ParamSet(a, b)

    def _check_index(self, k: int):
        if not 1 <= k <= self.p:
            raise IndexError(f"index {k} outside 1..{self.p}")

    def to_json(self) -> dict:
        return {"a": [scalar_to_json(x) for x in self.a],
                "b": [scalar_to_json(x) for x in self.b]}

    @classmethod
    def from_json(cls, obj: dict) -> "ParamSet":
        return cls(tuple(scalar_from_json(x) for x in obj["a"]),
                   tuple(scalar_from_json(x) for x in obj["b"]))


@dataclass(frozen=True)
class CoeffTable:
    """Coefficients for n = 0..N of one of the sequences g, f, h, D."""

    kind: str
    p: int
    index: tuple
    values: tuple
    method: str
    mode: str
    truncation: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("g", "f", "h", "D"):
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "index", tuple(self.index))
        if self.truncation is not None:
            object.__setattr__(self, "truncation", tuple(self.truncation))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "kind": self.kind,
            "p": self.p,
            "index": list(self.index),
            "method": self.method,
            "mode": self.mode,
            "values": [scalar_to_json(v) for v in self.values],
        }
        if self.truncation is not None:
            out["truncation"] = list(self.truncation)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> "CoeffTable":
        trunc = obj.get("truncation")
        return cls(kind=obj["kind"], p=int(obj["p"]), index=tuple(obj["index"]),
                   values=tuple(scalar_from_json(v) for v in obj["values"]),
                   method=obj["method"], mode=obj["mode"],
                   truncation=None if trunc is None else tuple(trunc))


@dataclass(frozen=True)
class SeriesExpansion:
    """z^zpow (1-z)^wpow * sum_n c_n (1-z)^n  (center one) or sum_n c_n z^n (center zero)."""

    center: str
    zpow: Any
    wpow: Any
    coefficients: tuple
    validity: str
    anchor_index: Optional[int] = None
    truncation: Optional[dict] = None

    def evaluate(self, z) -> complex:
        zc = complex(z)
        w = 1 - zc if self.center == "one" else zc
        acc = 0j
        for c in reversed(self.coefficients):
            acc = acc * w + complex(c)
        pre = 1 + 0j
        if complex(self.zpow) != 0:
            pre *= zc ** complex(self.zpow)
        if complex(self.wpow) != 0:
            pre *= (1 - zc) ** complex(self.wpow)
        return pre * acc

    def to_json(self) -> dict:
        return {
            "center": self.center,
            "prefactor": {"z_power": scalar_to_json(self.zpow),
                          "one_minus_z_power": scalar_to_json(self.wpow)},
            "validity": self.validity,
            "anchor_index": self.anchor_index,
            "coefficients": [scalar_to_json(c) for c in self.coefficients],
        }
