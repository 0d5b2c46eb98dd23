"""Identity verification harness: residuals of the coefficient and function identities."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Optional, Sequence

from .buhring import D_coeffs, D_variant_for, h_closed, h_from_D, h_multisum, sine_weight
from .coeffs import g_young
from .errors import NorlundError, PoleError
from .gfunction import (g2ppp_eval, gp0pp_eval, gp0pp_near0, gp0pp_near1_value, mellin_check)
from .hyper import (buhring_expansion_eval, buhring_lhs, buhring_p4_residual,
                    gauss_connection_residual, multiseries_transform_residual, pfq,
                    sheppard_residual_p3)
from .params import ParamSet
from .report import IdentityReport, skipped, term_scale
from .scalar import (INT_TOL, falling_factorial, gamma_ratio, gamma_ratio_product, is_integer_like,
                     nearest_integer, rising_factorial, sin_pi)

FINITE, SINGLE, MULTI = "finite", "single", "multi"
DEFAULT_PROFILE = {FINITE: 1e-9, SINGLE: 1e-8, MULTI: 1e-7}


def _sines_ok(params: ParamSet) -> Optional[str]:
    p = params.p
    for i in range(p):
        for j in range(i + 1, p):
            if abs(sin_pi(params.a[i] - params.a[j])) < INT_TOL:
                return f"a_{i + 1}-a_{j + 1} is an integer"
    return None


def _reorder_b(params: ParamSet, descending: bool) -> ParamSet:
    """b sorted by real part; every quantity checked here is symmetric in b."""
    order = sorted(range(params.p), key=lambda i: (complex(params.b[i]).real, i), reverse=descending)
    return params.permuted(perm_b=order)


def _info(params: ParamSet, **extra) -> dict:
    return {"p": params.p, **params.to_json(), **extra}


def _guard(identity_id: str, info: dict, tol: float, fn: Callable[[], IdentityReport]) -> IdentityReport:
    """Run ``fn``; a violated precondition turns into a skipped report."""
    try:
        return fn()
    except NorlundError as e:
        return skipped(identity_id, info, f"{type(e).__name__}: {e}", tol)


# ------------------------------------------------------------------- sine identities

def verify_ptolemy(params: ParamSet, tol: float = 1e-10) -> IdentityReport:
    """sum_k sin(pi(b-a_k))/sin(pi(a_[k]-a_k)) = sin(pi psi_p)."""
    info = _info(params)
    why = _sines_ok(params)
    if why is not None:
        return skipped("ptolemy", info, f"degenerate: {why}; the right side is the continuous extension", tol)
    terms = [sine_weight(params, k, (k,)) for k in range(1, params.p + 1)]
    lhs = 0j
    for t in terms:
        lhs += t
    rhs = sin_pi(params.psi_p)
    return IdentityReport("ptolemy", info, lhs, rhs, tol, scale=term_scale(terms + [rhs]))


# ------------------------------------------------------------------- identity with h coefficients

@lru_cache(maxsize=128)
def _h_table(params: ParamSet, k: int, N: int, method: str) -> tuple:
    if method == "multisum":
        return h_multisum(_reorder_b(params, False), k, N).values
    if method == "closed":
        return h_closed(_reorder_b(params, False), k, N).values
    if method == "from_D":
        return h_from_D(_reorder_b(params, True), k, N).values
    raise ValueError(f"unknown h method {method!r}")


def verify_identity1(params: ParamSet, m: int, tol: float = 1e-8,
                     method: str = "multisum") -> IdentityReport:
    """sum_j (-1)^j/j! sum_k [a_k]_j h^k(m-j) sin(pi(b-a_k))/sin(pi(a_[k]-a_k)) = 0."""
    info = _info(params, m=m, h_method=method)
    why = _sines_ok(params)
    if why is not None:
        return skipped("identity1", info, f"degenerate: {why}", tol)

    def run():
        terms = []
        for k in range(1, params.p + 1):
            h = _h_table(params, k, m, method)
            w = sine_weight(params, k, (k,))
            for j in range(m + 1):
                terms.append((-1) ** j / factorial(j) * complex(falling_factorial(params.a[k - 1], j))
                             * h[m - j] * w)
        lhs = 0j
        for t in terms:
            lhs += t
        return IdentityReport("identity1", info, lhs, 0j, tol, scale=term_scale(terms))
    return _guard("identity1", info, tol, run)


def verify_identity2(params: ParamSet, m: int, s: int, tol: float = 1e-8) -> IdentityReport:
    """The g-coefficient sine identity; at m = 0 it is the Ptolemy identity."""
    info = _info(params) if m == 0 else _info(params, m=m, s=s)
    why = _sines_ok(params)
    if why is not None:
        reason = f"degenerate: {why}"
        if m == 0:
            reason += "; the right side is the continuous extension"
        return skipped("ptolemy" if m == 0 else "identity2", info, reason, tol)
    psi = params.psi_p
    if any(rising_factorial(psi, r) == 0 or abs(complex(rising_factorial(psi, r))) < INT_TOL
           for r in range(m + 1)):
        return skipped("identity2", info, "(psi_p)_{m-j} vanishes", tol)
    g = {k: g_young(params, k, m).values for k in range(1, params.p + 1)}
    weights = [sine_weight(params, k, (k,)) for k in range(1, params.p + 1)]
    sp = sin_pi(psi)
    lhs_terms, rhs_terms = [], []
    for j in range(m + 1):
        c = (-1) ** j / (complex(rising_factorial(psi, m - j)) * factorial(j))
        inner = 0j
        for k in range(1, params.p + 1):
            t = complex(falling_factorial(params.a[k - 1], j)) * complex(g[k][m - j]) * weights[k - 1]
            lhs_terms.append(c * t)
            inner += t
        lhs_terms.append(None)
        rhs_terms.append(c * complex(falling_factorial(params.a[s - 1], j)) * complex(g[s][m - j]) * sp)
    lhs = 0j
    rhs = 0j
    # sum per j so that m = 0 reproduces the Ptolemy sums operation for operation
    acc = 0j
    for t in lhs_terms:
        if t is None:
            lhs += acc
            acc = 0j
        else:
            acc += t
    for t in rhs_terms:
        rhs += t
    scale = term_scale([t for t in lhs_terms if t is not None] + rhs_terms)
    return IdentityReport("ptolemy" if m == 0 else "identity2", info, lhs, rhs, tol, scale=scale)


def _circ_parts(params: ParamSet, i: int, k: int):
    a, b = params.a, params.b
    psi = params.psi_p
    ak = a[k - 1]
    bi = b[i - 1]
    b_rest = params.b_without(i)
    a_rest = params.a_without(k)
    w = sine_weight(params, k, (k,))
    g = gamma_ratio([1 - x + ak for x in b_rest], [psi - x + ak for x in b_rest])
    lower = [psi - x + ak for x in b_rest]
    upper = [bi - x for x in a_rest]
    return w * g, upper, lower, b_rest


def verify_3f2_circular(params3: ParamSet, i: int, which: str = "first",
                        tol: float = 1e-8) -> IdentityReport:
    """Cyclic three-term 3F2(1) sums equivalent to the h identity at m = 0 (first) and m = 1 (second)."""
    params = params3
    if params.p != 3:
        raise ValueError("needs p = 3")
    info = _info(params, i=i, which=which)
    bi = complex(params.b[i - 1]).real
    if not all(bi < complex(ak).real + 1 for ak in params.a):
        return skipped("3f2_circular", info, "Re(b_i) < Re(a_k)+1 fails", tol)
    why = _sines_ok(params)
    if why is not None:
        return skipped("3f2_circular", info, f"degenerate: {why}", tol)
    psi = params.psi_p

    def run():
        terms = []
        for k in (1, 2, 3):
            c, upper, lower, b_rest = _circ_parts(params, i, k)
            f1 = pfq([psi - 1] + upper, lower, 1)
            if which == "first":
                terms.append(c * f1)
            elif which == "second":
                ak = params.a[k - 1]
                f2 = pfq([psi - 2] + upper, lower, 1)
                lead = complex((1 - b_rest[0] + ak) * (1 - b_rest[1] + ak))
                terms.append(c * (lead * f2 - complex(ak * (2 - psi)) * f1))
            else:
                raise ValueError(f"unknown form {which!r}")
        lhs = sum(terms, 0j)
        return IdentityReport("3f2_circular", info, lhs, 0j, tol, scale=term_scale(terms))
    return _guard("3f2_circular", info, tol, run)


# ------------------------------------------------------------------- three-term relations

def verify_three_term_G(params: ParamSet, s: int, i: int, k: int, z, tol: float = 1e-8) -> IdentityReport:
    """sin(pi(a_s-a_i)) G[s,i] + sin(pi(a_i-a_k)) G[i,k] + sin(pi(a_k-a_s)) G[k,s] = 0."""
    zc = complex(z)
    info = _info(params, s=s, i=i, k=k, z=[zc.real, zc.imag])
    if len({s, i, k}) != 3:
        raise ValueError("s, i, k must be distinct")
    P = _reorder_b(params, True)
    a = params.a

    def run():
        terms = []
        for x, y in ((s, i), (i, k), (k, s)):
            c = sin_pi(a[x - 1] - a[y - 1])
            if c == 0:
                continue
            terms.append(c * g2ppp_eval(P, x, y, zc))
        return IdentityReport("three_term_G", info, sum(terms, 0j), 0j, tol, scale=term_scale(terms))
    return _guard("three_term_G", info, tol, run)


def verify_three_term_D(params: ParamSet, s: int, i: int, k: int, n: int,
                        tol: float = 1e-8) -> IdentityReport:
    """Falling-factorial weighted three-term relation among D_{n-j}^[s,i], D^[i,k], D^[k,s]."""
    info = _info(params, s=s, i=i, k=k, n=n)
    if len({s, i, k}) != 3:
        raise ValueError("s, i, k must be distinct")
    P = _reorder_b(params, True)
    a = params.a

    def run():
        terms = []
        for x, y in ((s, i), (i, k), (k, s)):
            c = sin_pi(a[x - 1] - a[y - 1])
            if c == 0:
                continue
            D = D_coeffs(P, x, y, n, D_variant_for(P, y)).values
            for j in range(n + 1):
                terms.append((-1) ** j / factorial(j) * complex(falling_factorial(a[y - 1], j))
                             * c * D[n - j])
        return IdentityReport("three_term_D", info, sum(terms, 0j), 0j, tol, scale=term_scale(terms))
    return _guard("three_term_D", info, tol, run)


# ------------------------------------------------------------------- connection formula

def verify_connection_540(params: ParamSet, s: int, z, tol: float = 1e-7) -> IdentityReport:
    """sin(pi psi) z^{a_s} (Gamma-weighted pF(p-1) at z) = pi G^{p,0} - (1/pi) sum_k w_k G[k,s]."""
    zc = complex(z)
    info = _info(params, s=s, z=[zc.real, zc.imag])
    why = _sines_ok(params)
    if why is not None:
        return skipped("connection_540", info, f"degenerate: {why}", tol)
    P = _reorder_b(params, True)

    def run():
        lhs = sin_pi(params.psi_p) * zc ** complex(params.a[s - 1]) * buhring_lhs(params, s, zc)
        g0 = math.pi * gp0pp_eval(params, zc)
        terms = [g0]
        for k in range(1, params.p + 1):
            if k == s:
                continue
            terms.append(-sine_weight(params, k, (k, s)) * g2ppp_eval(P, k, s, zc) / math.pi)
        return IdentityReport("connection_540", info, lhs, sum(terms, 0j), tol,
                              scale=term_scale(terms + [lhs]))
    return _guard("connection_540", info, tol, run)


def gauss_route_540(params: ParamSet, s: int, z, tol: float = 1e-10) -> IdentityReport:
    """The p = 2 connection formula as a Gauss two-term connection at 1 - z."""
    if params.p != 2:
        raise ValueError("needs p = 2")
    a_s = params.a[s - 1]
    other = params.a[2 - s]
    b1, b2 = params.b
    return gauss_connection_residual(1 - b1 + a_s, 1 - b2 + a_s, 1 - other + a_s, 1 - complex(z), tol)


# ------------------------------------------------------------------- three-term 3F2 identity

def verify_corollary_37(params3: ParamSet, n: int, tol: float = 1e-8) -> IdentityReport:
    """Three Gamma-weighted 3F2(1) series tied to h_3^2(n) through the D coefficients."""
    P = params3
    if P.p != 3:
        raise ValueError("needs p = 3")
    info = _info(P, n=n)
    (a1, a2, a3), (b1, b2, b3) = P.a, P.b
    psi = P.psi_p
    if complex(1 + a2 - b3 + n).real <= 0:
        return skipped("corollary_37", info, "Re(1+a_2-b_3+n) <= 0: 3F2(1) diverges", tol)

    def run():
        e1 = 2 + a1 + a2 - b1 - b2 + n
        e3 = 2 + a2 + a3 - b1 - b2 + n
        t1 = gamma_ratio([a3 - a1], [b1 - a1, b2 - a1, b3 - a1, e1]) * pfq(
            [1 + a1 - b1, 1 + a1 - b2, b3 - a3], [1 + a1 - a3, e1], 1)
        t2 = gamma_ratio([a1 - a3], [b1 - a3, b2 - a3, b3 - a3, e3]) * pfq(
            [1 + a3 - b1, 1 + a3 - b2, b3 - a1], [1 + a3 - a1, e3], 1)
        t3 = gamma_ratio([], [2 - psi + n, psi + a2 - b1, psi + a2 - b2]) * pfq(
            [b3 - a1, b3 - a3, psi - 1 - n], [psi + a2 - b1, psi + a2 - b2], 1)
        return IdentityReport("corollary_37", info, t1 + t2, t3, tol, scale=term_scale([t1, t2, t3]))
    return _guard("corollary_37", info, tol, run)


# ------------------------------------------------------------------- coefficient cross checks

def _rel_report(identity_id: str, info: dict, xs: Sequence, ys: Sequence, tol: float) -> IdentityReport:
    """Worst entry of two tables, relative to the entry size."""
    worst, pair = -1.0, (0j, 0j)
    for x, y in zip(xs, ys):
        r = abs(complex(x) - complex(y)) / max(abs(complex(x)), 1e-300)
        if r > worst:
            worst, pair = r, (complex(x), complex(y))
    return IdentityReport(identity_id, info, pair[0], pair[1], tol, scale=abs(pair[0]))


def verify_h_methods(params: ParamSet, s: int, N: int, tol: float = 1e-8) -> list:
    """h_multisum against h_closed (p = 3, 4) and against h_from_D."""
    info = _info(params, s=s, N=N)
    out = []
    try:
        ms = _h_table(params, s, N, "multisum")
    except NorlundError as e:
        return [skipped("h_multisum_vs_closed", info, f"{type(e).__name__}: {e}", tol),
                skipped("h_multisum_vs_from_D", info, f"{type(e).__name__}: {e}", tol)]
    for ident, method in (("h_multisum_vs_closed", "closed"), ("h_multisum_vs_from_D", "from_D")):
        if method == "closed" and params.p not in (3, 4):
            out.append(skipped(ident, info, "closed forms exist for p in {3, 4}", tol))
            continue
        out.append(_guard(ident, info, tol, lambda m=method, i=ident: _rel_report(
            i, info, ms, _h_table(params, s, N, m), tol)))
    return out


def verify_D_variants(params: ParamSet, k: int, s: int, N: int, tol: float = 1e-10) -> IdentityReport:
    info = _info(params, k=k, s=s, N=N)
    P = _reorder_b(params, True)
    return _guard("D_variants", info, tol, lambda: _rel_report(
        "D_variants", info, D_coeffs(P, k, s, N, "v535").values, D_coeffs(P, k, s, N, "v536").values, tol))


def verify_gp0pp_overlap(params: ParamSet, z, tol: float = 1e-9) -> IdentityReport:
    zc = complex(z)
    info = _info(params, z=[zc.real, zc.imag])

    def run():
        x = gp0pp_near0(params, zc)
        y = gp0pp_near1_value(params, zc)
        return IdentityReport("gp0pp_overlap", info, x, y, tol, scale=max(abs(x), abs(y)))
    return _guard("gp0pp_overlap", info, tol, run)


def verify_buhring_expansion(params: ParamSet, s: int, z, tol: float = 1e-8) -> IdentityReport:
    zc = complex(z)
    info = _info(params, s=s, z=[zc.real, zc.imag])

    def run():
        lhs = buhring_lhs(params, s, zc)
        rhs = buhring_expansion_eval(_reorder_b(params, False), s, zc)
        return IdentityReport("buhring_expansion", info, lhs, rhs, tol, scale=max(abs(lhs), abs(rhs)))
    return _guard("buhring_expansion", info, tol, run)


# ------------------------------------------------------------------- sampling

def _q(rng: random.Random, lo: float, hi: float, den: int = 100) -> Fraction:
    return Fraction(rng.randint(math.ceil(lo * den), math.floor(hi * den)), den)


def _far_from_int(x, eps: float = 1e-3) -> bool:
    n, d = nearest_integer(x)
    return d >= eps


def _nondegenerate(P: ParamSet, eps: float = 1e-3) -> bool:
    a = P.a
    if not all(_far_from_int(a[i] - a[j], eps) for i in range(P.p) for j in range(i + 1, P.p)):
        return False
    if not all(_far_from_int(bj - ak, eps) for bj in P.b for ak in a):
        return False
    b = P.b
    if not all(_far_from_int(b[i] - b[j], eps) for i in range(P.p) for j in range(i + 1, P.p)):
        return False
    return _far_from_int(P.psi_p, eps)


def _margin_ok(P: ParamSet, ss: Iterable[int], free: int, margin: float) -> bool:
    """Re(1-b+a_s) >= margin for all but the ``free`` largest b, for every s in ss."""
    bs = sorted(complex(x).real for x in P.b)
    kept = bs[:len(bs) - free] if free else bs
    return all(1 - bb + complex(P.a[s - 1]).real >= margin for s in ss for bb in kept)


def _D_ok(P: ParamSet, k: int, s: int, margin: float) -> bool:
    """Margin version of the D-series convergence conditions, b taken in descending order."""
    Q = _reorder_b(P, True)
    a_s = complex(Q.a[s - 1]).real
    tail = [1 - complex(bi).real + a_s for bi in Q.b]
    if all(t >= margin for t in tail[1:]):
        return True
    if Q.p == 2:
        return a_s - complex(Q.a[k - 1]).real >= margin
    return all(t >= margin for t in tail[2:])


def _h_ok(P: ParamSet, ks: Iterable[int], N: int, methods: Sequence[str]) -> bool:
    """Every requested h route is free of poles; tables stay cached for the check itself."""
    try:
        for k in ks:
            for m in methods:
                _h_table(P, k, N, m)
    except PoleError:
        return False
    except NorlundError:
        return True
    return True


def _draw(rng: random.Random, p: int, accept: Callable[[ParamSet], bool], lo=-2.0, hi=2.0,
          tries: int = 100000) -> ParamSet:
    for _ in range(tries):
        P = ParamSet(tuple(_q(rng, lo, hi) for _ in range(p)), tuple(_q(rng, lo, hi) for _ in range(p)))
        if accept(P):
            return P
    raise RuntimeError("sampler exhausted its budget")


def _complex_draw(rng: random.Random, p: int) -> ParamSet:
    while True:
        a = tuple(complex(rng.uniform(-2, 2), rng.uniform(-1, 1)) for _ in range(p))
        b = tuple(complex(rng.uniform(-2, 2), rng.uniform(-1, 1)) for _ in range(p))
        P = ParamSet(a, b)
        if _nondegenerate(P):
            return P


MARGIN = 0.1
Z_POINTS = (0.6, 0.75, 0.9)
OVERLAP_Z = (0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


def _case_ptolemy(rng, p, trial, tols):
    if trial % 10 == 0:
        P = _draw(rng, p, _nondegenerate)
        b = list(P.b)
        b[-1] += Fraction(1, 2) - P.psi_p
        P = ParamSet(P.a, tuple(b))
    else:
        P = _complex_draw(rng, p)
    return [verify_ptolemy(P, tols["ptolemy"])]


def _case_identity1(rng, p, trial, tols):
    m = rng.randint(0, 3)
    P = _draw(rng, p, lambda P: _nondegenerate(P) and _margin_ok(P, range(1, p + 1), 2, MARGIN)
              and _h_ok(P, range(1, p + 1), m, ("multisum",)))
    return [verify_identity1(P, m, tols["identity1"])]


def _case_identity2(rng, p, trial, tols):
    P = _draw(rng, p, _nondegenerate)
    m = rng.randint(0, 4)
    s = rng.randint(1, p)
    return [verify_identity2(P, m, s, tols["identity2"])]


def _case_3f2(rng, p, trial, tols):
    i = rng.randint(1, 3)

    def ok(P):
        # 3F2 lower parameters psi - b_j + a_k must stay off the poles
        lower = [P.psi_p - bj + ak for ak in P.a for j, bj in enumerate(P.b, 1) if j != i]
        return _nondegenerate(P) and all(_far_from_int(x) for x in lower) and all(
            complex(P.b[i - 1]).real <= complex(ak).real + 1 - MARGIN for ak in P.a)
    P = _draw(rng, 3, ok)
    which = "first" if trial % 2 == 0 else "second"
    return [verify_3f2_circular(P, i, which, tols["3f2_circular"])]


def _three_indices(rng, p):
    s, i, k = rng.sample(range(1, p + 1), 3)
    return s, i, k


def _case_three_term_G(rng, p, trial, tols):
    s, i, k = _three_indices(rng, p)
    P = _draw(rng, p, lambda P: _nondegenerate(P) and _margin_ok(P, (s, i, k), 2, MARGIN))
    z = (0.8, 0.9, 0.75)[trial % 3]
    return [verify_three_term_G(P, s, i, k, z, tols["three_term_G"])]


def _case_three_term_D(rng, p, trial, tols):
    s, i, k = _three_indices(rng, p)
    P = _draw(rng, p, lambda P: _nondegenerate(P) and _margin_ok(P, (s, i, k), 2, MARGIN))
    n = rng.randint(0, 3)
    return [verify_three_term_D(P, s, i, k, n, tols["three_term_D"])]


def _case_connection(rng, p, trial, tols):
    s = rng.randint(1, p)
    P = _draw(rng, p, lambda P: _nondegenerate(P) and _margin_ok(P, (s,), 2, MARGIN)
              and all(_D_ok(P, k, s, MARGIN) for k in range(1, p + 1) if k != s))
    z = Z_POINTS[trial % 3]
    out = [verify_connection_540(P, s, z, tols["connection_540"])]
    if p == 2:
        out.append(_guard("gauss_connection", _info(P, s=s), tols["gauss_connection"],
                          lambda: gauss_route_540(P, s, z, tols["gauss_connection"])))
    return out


def _case_cor37(rng, p, trial, tols):
    n = rng.randint(0, 3)

    def lower(P):
        (a1, a2, a3), (b1, b2, _) = P.a, P.b
        return (2 + a1 + a2 - b1 - b2 + n, 2 + a2 + a3 - b1 - b2 + n,
                P.psi_p + a2 - b1, P.psi_p + a2 - b2)
    P = _draw(rng, 3, lambda P: _nondegenerate(P) and all(_far_from_int(x) for x in lower(P))
              and complex(1 + P.a[1] - P.b[2] + n).real >= MARGIN + 0.4)
    return [verify_corollary_37(P, n, tols["corollary_37"])]


def _case_h(rng, p, trial, tols):
    s = rng.randint(1, p)
    P = _draw(rng, p, lambda P: _nondegenerate(P) and _margin_ok(P, (s,), 2, MARGIN)
              and _h_ok(P, (s,), 5, ("multisum", "closed", "from_D")))
    return verify_h_methods(P, s, 5, tols["h_methods"])


def _case_D(rng, p, trial, tols):
    k, s = rng.sample(range(1, p + 1), 2)
    P = _draw(rng, p, lambda P: _nondegenerate(P) and _margin_ok(P, (s,), 1, MARGIN))
    return [verify_D_variants(P, k, s, 5, tols["D_variants"])]


def _terminating_case(rng, identity_id: str, count: int, fn, tol: float, tries: int = 200):
    """Redraw exact arguments until the finite sums avoid every pole."""
    for _ in range(tries):
        n = rng.randint(0, 6)
        xs = [_q(rng, -3, 3, rng.randint(1, 30)) for _ in range(count)]
        try:
            return fn(n, *xs, tol=tol)
        except PoleError:
            continue
    return skipped(identity_id, {"n": n, "values": [str(x) for x in xs]}, "no pole-free draw", tol)


def _case_sheppard(rng, p, trial, tols):
    return [_terminating_case(rng, "sheppard_p3", 4, sheppard_residual_p3, tols["sheppard_p3"])]


def _case_p4(rng, p, trial, tols):
    return [_terminating_case(rng, "buhring_p4", 6, buhring_p4_residual, tols["buhring_p4"])]


def _case_multiseries(rng, p, trial, tols):
    n = rng.randint(0, 6)
    P = _draw(rng, p, lambda P: True)
    return [_guard("multiseries", _info(P, n=n), tols["multiseries"],
                   lambda: multiseries_transform_residual(P, n, tols["multiseries"]))]


def _case_gauss(rng, p, trial, tols):
    def draw():
        while True:
            x = [_q(rng, -2, 2) for _ in range(3)]
            if _far_from_int(x[2] - x[0] - x[1]) and all(_far_from_int(v) for v in x):
                return x
    a1, a2, b = draw()
    z = (0.3, 0.5, 0.7)[trial % 3]
    info = {"alpha": [str(a1), str(a2)], "beta": str(b), "z": [z, 0.0]}
    return [_guard("gauss_connection", info, tols["gauss_connection"],
                   lambda: gauss_connection_residual(a1, a2, b, z, tols["gauss_connection"]))]


def _case_buhring_expansion(rng, p, trial, tols):
    s = rng.randint(1, p)
    P = _draw(rng, p, lambda P: _nondegenerate(P) and _margin_ok(P, (s,), 2, MARGIN))
    return [verify_buhring_expansion(P, s, 0.9, tols["buhring_expansion"])]


def _case_overlap(rng, p, trial, tols):
    P = _draw(rng, p, _nondegenerate)
    z = OVERLAP_Z[trial % len(OVERLAP_Z)]
    return [verify_gp0pp_overlap(P, z, tols["gp0pp_overlap"])]


def _case_mellin(rng, p, trial, tols):
    if trial % 4 == 3:
        m = rng.randint(0, 2)

        def fix(P):
            b = list(P.b)
            b[-1] -= P.psi_p + m
            return ParamSet(P.a, tuple(b))
        P = fix(_draw(rng, p, lambda P: True))
    else:
        P = _draw(rng, p, lambda P: complex(P.psi_p).real > 0.3)
    s = -min(complex(x).real for x in P.a) + float(_q(rng, 0.3, 2))
    info = _info(P, s=[s, 0.0])
    return [_guard("mellin", info, tols["mellin"], lambda: mellin_check(P, s, tol=tols["mellin"]))]


# identity id -> (sampler, allowed p values, tolerance class)
SUITES = {
    "ptolemy": (_case_ptolemy, range(1, 9), FINITE),
    "identity1": (_case_identity1, (3, 4), SINGLE),
    "identity2": (_case_identity2, (2, 3, 4), SINGLE),
    "3f2_circular": (_case_3f2, (3,), SINGLE),
    "three_term_G": (_case_three_term_G, (3, 4), SINGLE),
    "three_term_D": (_case_three_term_D, (3, 4), SINGLE),
    "connection_540": (_case_connection, (2, 3), MULTI),
    "corollary_37": (_case_cor37, (3,), SINGLE),
    "h_methods": (_case_h, (3, 4), SINGLE),
    "D_variants": (_case_D, (3, 4), SINGLE),
    "sheppard_p3": (_case_sheppard, (3,), FINITE),
    "buhring_p4": (_case_p4, (4,), FINITE),
    "multiseries": (_case_multiseries, (3, 4, 5), FINITE),
    "gauss_connection": (_case_gauss, (2,), SINGLE),
    "buhring_expansion": (_case_buhring_expansion, (2, 3), MULTI),
    "gp0pp_overlap": (_case_overlap, (1, 2, 3, 4), SINGLE),
    "mellin": (_case_mellin, (1, 2, 3), MULTI),
}

# identities whose own tolerance is tighter than their class default
TIGHT = {"ptolemy": 1e-10, "D_variants": 1e-10, "gauss_connection": 1e-10, "gp0pp_overlap": 1e-9}


def resolve_tolerances(profile: Optional[dict] = None) -> dict:
    """Per-identity tolerances from class defaults, tight overrides and a user profile."""
    profile = dict(profile or {})
    classes = {c: float(profile.get(c, DEFAULT_PROFILE[c])) for c in DEFAULT_PROFILE}
    out = {}
    for ident, (_, _, cls) in SUITES.items():
        t = classes[cls]
        if ident in TIGHT and cls not in profile:
            t = min(t, TIGHT[ident])
        out[ident] = float(profile.get(ident, t))
    return out


def run_suite(seed: int, trials: int, tol_profile: Optional[dict] = None,
              suites: Optional[Sequence[str]] = None, p_values: Optional[Sequence[int]] = None,
              on_report: Optional[Callable[[IdentityReport], None]] = None) -> list:
    """Seeded trials of every requested identity, in a fixed order.

    Each (identity, trial) pair draws from its own generator seeded by
    "seed:identity:trial", so results do not depend on which suites run.
    A summary dict per identity is appended after the reports.
    """
    tols = resolve_tolerances(tol_profile)
    names = list(SUITES) if suites is None else list(suites)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown identity ids: {unknown}")
    reports: list = []
    summary = []
    for name in names:
        sampler, allowed, _ = SUITES[name]
        ps = [p for p in allowed if p_values is None or p in p_values]
        counts = {"pass": 0, "fail": 0, "skipped": 0}
        if ps:
            for trial in range(trials):
                rng = random.Random(f"{seed}:{name}:{trial}")
                p = ps[rng.randrange(len(ps))]
                for rep in sampler(rng, p, trial, tols):
                    rep.seed, rep.trial = seed, trial
                    counts[rep.verdict] += 1
                    reports.append(rep)
                    if on_report is not None:
                        on_report(rep)
        summary.append({"identity_id": name, "summary": True, **counts})
    return reports + summary
