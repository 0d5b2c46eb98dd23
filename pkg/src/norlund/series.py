"""Adaptive summation of infinite series: stagnation stop and power-law extrapolation."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

import gmpy2

from .errors import NoConvergence

DEFAULT_MAX_TERMS = 10000
STAGNATION_RUN = 3


def max_terms_default() -> int:
    env = os.environ.get("NORLUND_MAX_TERMS")
    if env:
        try:
            v = int(env)
            if v > 0:
                return v
        except ValueError:
            pass
    return DEFAULT_MAX_TERMS


@dataclass
class SumResult:
    value: object
    terms: int
    last_term: float

    def meta(self) -> dict:
        return {"terms": self.terms, "last_term": self.last_term}


def sum_series(terms: Iterator, tol: float, max_terms: Optional[int] = None,
               min_terms: int = 0, what: str = "series", weight: float = 1.0) -> SumResult:
    """Sum until STAGNATION_RUN consecutive terms are below tol*max(1,|S|).

    Terms may be exact; the partial sum keeps their type so that exact
    terms are accumulated without rounding.  ``weight`` is a constant factor
    (e.g. a gamma prefactor) applied to terms and sum for the stopping test
    only.  A finite iterator ends the sum.
    """
    cap = max_terms_default() if max_terms is None else max_terms
    total = 0
    run = 0
    last = 0.0
    n = 0
    for t in terms:
        total = total + t
        n += 1
        last = abs(complex(t)) * weight
        scale = max(1.0, abs(complex(total)) * weight)
        if last < tol * scale:
            run += 1
            if run >= STAGNATION_RUN and n >= min_terms:
                return SumResult(total, n, last)
        else:
            run = 0
        if n >= cap:
            raise NoConvergence(f"{what}: no stagnation after {cap} terms",
                                terms=n, last_term=last)
    return SumResult(total, n, last)


def term_stream(first, ratio: Callable[[int], object]) -> Iterator:
    """Terms t_0 = first, t_{j+1} = t_j * ratio(j)."""
    t = first
    j = 0
    while True:
        yield t
        t = t * ratio(j)
        j += 1


def transient_skip(*params) -> int:
    """Start index past the transient where some factor (x + j) is still small."""
    m = max((abs(complex(x).real) for x in params), default=0.0)
    return 8 + int(math.ceil(m))


def _to_mp(x):
    """Exact scalar (int, Fraction, mpq, GaussRational) or float in the current gmpy2 precision."""
    if hasattr(x, "re") and hasattr(x, "im"):
        return gmpy2.mpc(_to_mp(x.re), _to_mp(x.im))
    if isinstance(x, complex):
        return gmpy2.mpc(x)
    if isinstance(x, float):
        return gmpy2.mpfr(x)
    return gmpy2.mpfr(gmpy2.mpq(int(x.numerator), int(x.denominator)))


def _solve_first(rows: list, rhs: list):
    """First unknown of a dense square system, by elimination with partial pivoting."""
    n = len(rows)
    A = [list(r) + [v] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(A[r][col]))
        if A[piv][col] == 0:
            raise ZeroDivisionError("singular extrapolation system")
        A[col], A[piv] = A[piv], A[col]
        pr = A[col]
        for r in range(col + 1, n):
            f = A[r][col] / pr[col]
            if f != 0:
                row = A[r]
                for c in range(col, n + 1):
                    row[c] -= f * pr[c]
    x = [0] * n
    for r in range(n - 1, -1, -1):
        acc = A[r][n]
        for c in range(r + 1, n):
            acc -= A[r][c] * x[c]
        x[r] = acc / A[r][r]
    return x[0]


def _distinct_mod_integers(exponents: Sequence) -> list:
    """Drop exponents that differ from a kept one by an integer (keep the slowest)."""
    kept: list = []
    for e in sorted(exponents, key=lambda e: complex(e).real):
        ec = complex(e)
        if not any(abs((ec - complex(k)).imag) < 1e-12
                   and abs((ec - complex(k)).real - round((ec - complex(k)).real)) < 1e-12
                   for k in kept):
            kept.append(e)
    return kept


# (offset of the first fitted index past ``skip``, corrections per exponent)
EXTRAPOLATION_SCHEDULE = ((8, 3), (16, 4), (32, 6), (64, 8), (128, 10), (256, 12), (512, 14))


def _fit_limit(partial: list, j0: int, exps: list, M: int):
    """Limit S of the model S_J = S + sum_i sum_{m<M} c_im J^(1-e_i-m), fitted at J = j0.."""
    rows = []
    rhs = []
    one = gmpy2.mpfr(1)
    for J in range(j0, j0 + 1 + len(exps) * M):
        # powers of J/j0 keep the columns of comparable size
        lj = gmpy2.log(gmpy2.mpfr(J) / j0)
        rows.append([one] + [gmpy2.exp((1 - e - m) * lj) for e in exps for m in range(M)])
        rhs.append(partial[J])
    return _solve_first(rows, rhs)


def extrapolated_sum(terms: Iterator, exponents: Sequence, tol: float,
                     max_terms: Optional[int] = None, what: str = "series",
                     weight: float = 1.0, skip: int = 8) -> SumResult:
    """Sum a series whose terms decay like sum_i c_i j^(-e_i) (1 + O(1/j)).

    The exponents e_i must be known.  Exact partial sums are fitted by a
    generalized Richardson model with M correction powers per exponent at
    consecutive indices from j0 on; j0 and M grow along EXTRAPOLATION_SCHEDULE.
    The limit is accepted once two consecutive stages agree, and a fit started
    a few indices later agrees too, each to tol*max(1,|S|) after scaling by
    ``weight``.  A series whose terms vanish identically from some index is
    summed directly.
    """
    cap = max_terms_default() if max_terms is None else max_terms
    exps = _distinct_mod_integers(exponents)
    if any(complex(e).real <= 1 for e in exps):
        raise NoConvergence(f"{what}: term decay exponent {min(complex(e).real for e in exps)} <= 1",
                            exponents=[str(e) for e in exps])
    it = iter(terms)
    ts: list = []
    partial: list = []
    total = 0
    prev = None
    for offset, M in EXTRAPOLATION_SCHEDULE:
        U = 1 + len(exps) * M
        j0 = skip + offset
        late = j0 + max(4, offset // 4)
        need = late + U
        if need > cap:
            break
        exhausted = False
        while len(ts) < need:
            try:
                t = next(it)
            except StopIteration:
                exhausted = True
                break
            total = total + t
            ts.append(t)
            partial.append(total)
        if exhausted:
            return SumResult(total, len(ts), 0.0)
        if all(t == 0 for t in ts[j0:need]):
            return SumResult(total, len(ts), 0.0)
        # consecutive-index power bases lose about U*log10(j0/U) digits
        dps = 40 + int(1.5 * U * math.log10(2 + j0 / U))
        with gmpy2.context(gmpy2.get_context(), precision=int(3.33 * dps)):
            mp_partial = {J: _to_mp(partial[J]) for J in range(j0, need)}
            mp_exps = [_to_mp(e) for e in exps]
            try:
                est = complex(_fit_limit(mp_partial, j0, mp_exps, M))
                alt = complex(_fit_limit(mp_partial, late, mp_exps, M))
            except ZeroDivisionError:
                prev = None
                continue
        if prev is not None:
            diff = max(abs(est - prev), abs(est - alt)) * weight
            if diff < tol * max(1.0, abs(est) * weight):
                return SumResult(est, len(ts), diff)
        prev = est
    raise NoConvergence(f"{what}: extrapolation did not settle within {len(ts)} terms",
                        terms=len(ts))
