"""Numeric tower: exact rationals and complex doubles.

A scalar is either exact (``int`` / ``fractions.Fraction``, real only) or a
Python ``complex``.  Mixing the two promotes to ``complex`` through the normal
numeric tower, so exact inputs stay exact exactly as long as no float enters.
``GaussRational`` is an internal exact complex type used to sum long
alternating series whose float evaluation would cancel catastrophically.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from numbers import Number, Rational
from typing import Iterable, Sequence, Union

from .errors import PoleError

try:  # C-backed rationals for long exact sums; Fraction otherwise
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

Scalar = Union[int, Fraction, complex]

# parameter differences closer than this to an integer count as integers
INT_TOL = 1e-9

_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _frac(x) -> Fraction:
    """Any Rational (int, Fraction, mpq) as a plain Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(int(x.numerator), int(x.denominator))


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussRational)) and not isinstance(x, bool)


def to_complex(x) -> complex:
    return complex(x)


def to_exact(x):
    """Exact image of ``x``: floats convert without rounding (binary value)."""
    if isinstance(x, (Fraction, GaussRational)):
        return x
    if isinstance(x, Rational):
        return _frac(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, complex):
        if x.imag == 0.0:
            return Fraction(x.real)
        return GaussRational(Fraction(x.real), Fraction(x.imag))
    raise TypeError(f"cannot make {type(x).__name__} exact")


def to_exact_fast(x):
    """Like ``to_exact`` but in the fastest available rational type."""
    e = to_exact(x)
    if isinstance(e, GaussRational):
        return e
    return _Q(e.numerator, e.denominator)


def nearest_integer(x) -> tuple[int, float]:
    """Nearest integer to ``x`` and the distance to it (0 for exact hits)."""
    if isinstance(x, Rational):
        q = _frac(x)
        n = round(q)
        return int(n), float(abs(q - n))
    z = complex(x)
    n = round(z.real)
    return int(n), abs(complex(z.real - n, z.imag))


def is_integer_like(x, tol: float = INT_TOL) -> bool:
    n, d = nearest_integer(x)
    if isinstance(x, Rational):
        return d == 0
    return d <= tol * max(1.0, abs(n))


def is_nonpositive_integer(x, tol: float = INT_TOL) -> bool:
    n, _ = nearest_integer(x)
    return n <= 0 and is_integer_like(x, tol)


def rising_factorial(a, n: int):
    """(a)_n = a(a+1)...(a+n-1)."""
    r = 1 if not isinstance(a, Fraction) else Fraction(1)
    for i in range(n):
        r = r * (a + i)
    return r


def falling_factorial(a, j: int):
    """[a]_j = a(a-1)...(a-j+1)."""
    r = 1 if not isinstance(a, Fraction) else Fraction(1)
    for i in range(j):
        r = r * (a - i)
    return r


def _lanczos_log_gamma(z: complex) -> complex:
    # valid for Re z >= 0.5
    z = z - 1
    x = _LANCZOS_COEF[0]
    for i in range(1, _LANCZOS_G + 2):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def log_gamma(z) -> complex:
    """Principal branch of log Gamma(z)."""
    zc = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"log_gamma pole at {z}", at=str(z))
    if zc.real >= 0.5:
        return _lanczos_log_gamma(zc)
    # shift up; the sum of principal logs continues the principal branch
    m = math.ceil(0.5 - zc.real)
    acc = 0j
    for i in range(m):
        acc += cmath.log(zc + i)
    return _lanczos_log_gamma(zc + m) - acc


def gamma(z) -> complex:
    zc = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"gamma pole at {z}", at=str(z))
    if zc.imag == 0.0:
        x = zc.real
        if x >= 0.5:
            return complex(math.exp(_lanczos_log_gamma(zc).real))
        # reflection keeps the sign right for negative reals
        return complex(math.pi / (_sin_pi_real(x) * gamma(1 - x).real))
    if zc.real >= 0.5:
        return cmath.exp(_lanczos_log_gamma(zc))
    return math.pi / (sin_pi(zc) * gamma(1 - zc))


def rgamma(z) -> complex:
    """1/Gamma(z), zero at the poles."""
    if is_nonpositive_integer(z):
        return 0j
    return 1 / gamma(z)


def _sin_pi_real(x) -> float:
    # reduce to [-1/2, 1/2] so that integers map to exact zeros
    if isinstance(x, Rational):
        r = _frac(x) % 2
        if r > 1:
            r -= 2
        if r > Fraction(1, 2):
            r = 1 - r
        elif r < Fraction(-1, 2):
            r = -1 - r
        r = float(r)
    else:
        r = math.fmod(float(x), 2.0)
        if r > 1.0:
            r -= 2.0
        elif r < -1.0:
            r += 2.0
        if r > 0.5:
            r = 1.0 - r
        elif r < -0.5:
            r = -1.0 - r
    if r == 0.0:
        return 0.0
    if abs(r) == 0.5:
        return math.copysign(1.0, r)
    if abs(r) > 0.25:
        return math.copysign(math.cos(math.pi * (0.5 - abs(r))), r)
    return math.sin(math.pi * r)


def _cos_pi_real(x) -> float:
    if isinstance(x, Rational):
        return _sin_pi_real(Fraction(1, 2) - _frac(x))
    return _sin_pi_real(0.5 - float(x))


def sin_pi(x) -> complex:
    """sin(pi x) with exact zeros at integers."""
    if isinstance(x, Rational):
        return complex(_sin_pi_real(x))
    z = complex(x)
    if z.imag == 0.0:
        return complex(_sin_pi_real(z.real))
    re, im = z.real, z.imag
    return complex(_sin_pi_real(re) * math.cosh(math.pi * im),
                   _cos_pi_real(re) * math.sinh(math.pi * im))


def gamma_ratio_product(num: Sequence, den: Sequence) -> complex:
    """prod Gamma(num) / prod Gamma(den), accumulated in the log domain."""
    acc = 0j
    for i, x in enumerate(num):
        if is_nonpositive_integer(x):
            raise PoleError(f"numerator pole at index {i}", side="num", index=i)
        acc += log_gamma(x)
    for i, x in enumerate(den):
        if is_nonpositive_integer(x):
            raise PoleError(f"denominator pole at index {i}", side="den", index=i)
        acc -= log_gamma(x)
    val = cmath.exp(acc)
    if all(complex(x).imag == 0.0 for x in list(num) + list(den)):
        return complex(val.real)
    return val


def gamma_ratio(num: Sequence, den: Sequence) -> complex:
    """Like ``gamma_ratio_product`` but denominator poles give zero."""
    if any(is_nonpositive_integer(x) for x in den):
        for i, x in enumerate(num):
            if is_nonpositive_integer(x):
                raise PoleError(f"numerator pole at index {i}", side="num", index=i)
        return 0j
    return gamma_ratio_product(num, den)


def prod(xs: Iterable, start=1):
    r = start
    for x in xs:
        r = r * x
    return r


class GaussRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re if type(re) is _Q else _Q(re)
        self.im = im if type(im) is _Q else _Q(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussRational):
            return other
        if isinstance(other, (int, Fraction, _Q)) and not isinstance(other, complex):
            return GaussRational(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return complex(self) + other
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return complex(self) - other
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return other - complex(self)
        return GaussRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return complex(self) * other
        return GaussRational(self.re * o.re - self.im * o.im,
                             self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return complex(self) / other
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("GaussRational division by zero")
        return GaussRational((self.re * o.re + self.im * o.im) / d,
                             (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return other / complex(self)
        return o / self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return complex(self) == other
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"


Number.register(GaussRational)

def parse_scalar(token: str):
    """Parse ``"p/q"`` (exact), decimals (float), or ``"re+imi"`` (complex)."""
    s = token.strip()
    if not s:
        raise ValueError("empty scalar token")
    if s.endswith(("i", "j")):
        body = s[:-1].replace("i", "j")
        try:
            return complex(body + "j") if body not in ("", "+", "-") else complex(body + "1j")
        except ValueError:
            raise ValueError(f"bad complex token {token!r}") from None
    if "/" in s or re.fullmatch(r"[+-]?\d+", s):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad rational token {token!r}") from None
    try:
        return complex(float(s))
    except ValueError:
        raise ValueError(f"bad scalar token {token!r}") from None


def scalar_to_json(x):
    """Rationals as ``"num/den"`` strings, floats as ``[re, im]``."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    z = complex(x)
    return [z.real, z.imag]


def scalar_from_json(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise ValueError(f"cannot decode scalar {v!r}")
