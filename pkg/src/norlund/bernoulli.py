"""Classical and generalized Bernoulli polynomials and the l_r, q_m sequences."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Optional

from .params import ParamSet


@lru_cache(maxsize=None)
def _bernoulli_numbers(n: int) -> tuple:
    """B_0..B_n with B_1 = -1/2."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, k) * B[k] for k in range(m)) / Fraction(m + 1))
    return tuple(B)


def bernoulli_number(n: int) -> Fraction:
    return _bernoulli_numbers(n)[n]


def bernoulli_poly(n: int, x):
    """Classical B_n(x) = sum_k C(n,k) B_k x^(n-k), by Horner in x."""
    B = _bernoulli_numbers(n)
    acc = Fraction(0) if not isinstance(x, complex) else 0j
    for k in range(n + 1):
        acc = acc * x + comb(n, k) * B[k]
    return acc


@lru_cache(maxsize=None)
def _base_powers(K: int) -> tuple:
    """Coefficient rows of u^m for u = t/(e^t-1) - 1, m = 0..K, orders 0..K."""
    B = _bernoulli_numbers(K)
    u = [Fraction(0)] + [B[n] / factorial(n) for n in range(1, K + 1)]
    rows = [tuple([Fraction(1)] + [Fraction(0)] * K)]
    for m in range(1, K + 1):
        prev = rows[-1]
        cur = [Fraction(0)] * (K + 1)
        # u has no constant term, so u^m starts at order m
        for i in range(m - 1, K + 1):
            if prev[i] == 0:
                continue
            for j in range(1, K + 1 - i):
                cur[i + j] += prev[i] * u[j]
        rows.append(tuple(cur))
    return tuple(rows)


def _binom_general(sigma, m: int):
    r = Fraction(1) if not isinstance(sigma, complex) else 1 + 0j
    for i in range(m):
        r = r * (sigma - i) / (i + 1)
    return r


def gen_bernoulli_series(sigma, x, K: int) -> list:
    """[B^(sigma)_k(x) for k in 0..K].

    (t/(e^t-1))^sigma is expanded as the binomial series sum_m C(sigma,m) u^m
    with u the base series minus one, then multiplied by e^{xt}.
    """
    rows = _base_powers(K)
    h = [0] * (K + 1)
    for m in range(K + 1):
        c = _binom_general(sigma, m)
        row = rows[m]
        for k in range(m, K + 1):
            h[k] = h[k] + c * row[k]
    # e^{xt} coefficients x^n/n!
    e = [Fraction(1)]
    for n in range(1, K + 1):
        e.append(e[-1] * x / n)
    out = []
    for k in range(K + 1):
        s = 0
        for i in range(k + 1):
            s = s + h[i] * e[k - i]
        out.append(s * factorial(k))
    return out


def gen_bernoulli(sigma, k: int, x):
    """Generalized Bernoulli polynomial B^(sigma)_k(x)."""
    return gen_bernoulli_series(sigma, x, k)[k]


def power_series_miller(sigma, K: int) -> list:
    """(t/(e^t-1))^sigma by the J.C.P. Miller power recurrence; used as a cross-check."""
    B = _bernoulli_numbers(K)
    f = [B[n] / factorial(n) for n in range(K + 1)]
    h = [Fraction(1)]
    for n in range(1, K + 1):
        h.append(sum(((sigma + 1) * k - n) * f[k] * h[n - k] for k in range(1, n + 1)) / n)
    return h


def q_m(params: ParamSet, m: int, tilde: Optional[int] = None):
    """q_m, or the tilde variant anchored at index ``tilde`` (1-based)."""
    s = 0
    for aj, bj in zip(params.a, params.b):
        s = s + bernoulli_poly(m + 1, aj) - bernoulli_poly(m + 1, bj)
    if tilde is not None:
        ak = params.a[tilde - 1]
        s = s + bernoulli_poly(m + 1, ak + params.psi_p - 1) - bernoulli_poly(m + 1, ak)
    return Fraction((-1) ** (m + 1), m + 1) * s


def q_sequence(params: ParamSet, R: int, tilde: Optional[int] = None) -> list:
    """[None, q_1, ..., q_R] (index 0 unused)."""
    return [None] + [q_m(params, m, tilde) for m in range(1, R + 1)]


def l_from_q(q: list, R: int) -> list:
    l = [Fraction(1)]
    for r in range(1, R + 1):
        s = 0
        for m in range(1, r + 1):
            s = s + q[m] * l[r - m]
        l.append(s / r)
    return l


def l_sequence(params: ParamSet, R: int, tilde: Optional[int] = None) -> list:
    """l_0..l_R from l_r = (1/r) sum_{m=1}^r q_m l_{r-m}, l_0 = 1."""
    return l_from_q(q_sequence(params, R, tilde), R)


def _partitions(r: int, largest: int):
    """Multiplicity vectors {part: count} of partitions of r."""
    if r == 0:
        yield {}
        return
    for part in range(min(r, largest), 0, -1):
        for rest in _partitions(r - part, part):
            d = dict(rest)
            d[part] = d.get(part, 0) + 1
            yield d


def l_explicit(params: ParamSet, r: int, tilde: Optional[int] = None):
    """Partition-sum form: sum over k_1+2k_2+...=r of prod (q_i/i)^{k_i}/k_i!."""
    if r > 20:
        raise ValueError("partition enumeration limited to r <= 20")
    q = q_sequence(params, r, tilde)
    total = Fraction(0)
    for mult in _partitions(r, r):
        t = Fraction(1)
        for i, ki in mult.items():
            t = t * (q[i] / i) ** ki / factorial(ki)
        total = total + t
    return total


def l_determinant(params: ParamSet, r: int, tilde: Optional[int] = None):
    """det(Omega_r)/r! via the lower-Hessenberg leading-minor recurrence."""
    if r > 30:
        raise ValueError("determinant form limited to r <= 30")
    q = q_sequence(params, r, tilde)
    # superdiagonal entries are -1, which makes every sign in the expansion +1
    D = [Fraction(1)]
    for i in range(1, r + 1):
        s = 0
        for j in range(1, i + 1):
            w = q[i - j + 1] * Fraction(factorial(i - 1), factorial(j - 1))
            s = s + w * D[j - 1]
        D.append(s)
    return D[r] / factorial(r)
