"""Exact integer polynomials and midpoint-radius balls.

Balls are Arb balls from python-flint (``arb`` for reals, ``acb`` for complex
values); every operation on them is outward rounded, so the exact value of any
expression always lies inside the computed ball.  Polynomials are dense
coefficient tuples over the integers, lowest degree first.
"""
from __future__ import annotations

import contextlib
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence, TypeVar

from flint import acb, arb, ctx, fmpz_poly

RealBall = arb
ComplexBall = acb

DEFAULT_PRECISION = 256
DEFAULT_CEILING = 16384
CEILING_ENV = "RECUR_COMMON_PRECISION_CEILING"

T = TypeVar("T")


class PrecisionExceeded(ArithmeticError):
    """A refinement loop hit the precision ceiling without deciding."""


def precision_ceiling() -> int:
    value = os.environ.get(CEILING_ENV)
    return int(value) if value else DEFAULT_CEILING


@contextlib.contextmanager
def working_precision(bits: int) -> Iterator[None]:
    with ctx.workprec(int(bits)):
        yield


def precisions(start: int = DEFAULT_PRECISION, ceiling: int | None = None) -> Iterator[int]:
    """Doubling precision schedule from ``start`` up to the ceiling (inclusive)."""
    ceiling = precision_ceiling() if ceiling is None else ceiling
    bits = max(int(start), 16)
    while bits <= ceiling:
        yield bits
        bits *= 2


def refine(attempt: Callable[[int], T | None], start: int = DEFAULT_PRECISION,
           ceiling: int | None = None, what: str = "refinement") -> T:
    """Run ``attempt(bits)`` at doubling precision until it returns non-None."""
    for bits in precisions(start, ceiling):
        with working_precision(bits):
            result = attempt(bits)
        if result is not None:
            return result
    raise PrecisionExceeded(f"{what}: undecided at precision ceiling")


# -- balls ------------------------------------------------------------------

def upper(x: arb) -> arb:
    """Exact upper endpoint of a real ball."""
    return x.upper()


def lower(x: arb) -> arb:
    return x.lower()


def ceil_int(x: arb) -> int:
    """Smallest integer >= every point of the ball."""
    return int(x.upper().ceil().unique_fmpz())


def floor_int(x: arb) -> int:
    return int(x.lower().floor().unique_fmpz())


def exact_fraction(x: arb) -> Fraction:
    """The (dyadic) midpoint of a ball as an exact fraction."""
    man, exp = x.mid().man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** -exp)


def _round_up_sci(value: Fraction, digits: int = 6) -> str:
    """Decimal string >= value (value >= 0) with a few significant digits."""
    if value == 0:
        return "0"
    exponent = len(str(value.numerator)) - len(str(value.denominator))
    while Fraction(10) ** exponent > value:
        exponent -= 1
    while Fraction(10) ** (exponent + 1) <= value:
        exponent += 1
    scale = Fraction(10) ** (exponent - digits + 1)
    mant = -((-value / scale).__floor__())
    return f"{mant}e{exponent - digits + 1}"


def ball_to_json(x: arb, bits: int) -> dict:
    """Serialize a real ball as decimal strings; the decimal ball encloses ``x``."""
    digits = max(int(bits * 0.30103) + 3, 20)
    mid_exact = exact_fraction(x)
    mid_str = x.mid().str(digits, radius=False, more=True)
    if "e" in mid_str:
        m, e = mid_str.split("e")
        mid_dec = Fraction(m) * Fraction(10) ** int(e)
    else:
        mid_dec = Fraction(mid_str)
    rad_exact = exact_fraction(x.rad()) if x.rad() != 0 else Fraction(0)
    total = rad_exact + abs(mid_exact - mid_dec)
    # the rad of an arb is itself stored as an upper bound, exact_fraction is exact
    return {"mid": mid_str, "rad": _round_up_sci(total), "bits": int(bits)}


def ball_from_json(data: dict) -> arb:
    with working_precision(int(data.get("bits", DEFAULT_PRECISION)) + 64):
        return arb(data["mid"], data["rad"])


# -- polynomials ------------------------------------------------------------

@dataclass(frozen=True, init=False)
class IntPoly:
    """Dense integer polynomial, coefficients in ascending degree order.

    >>> IntPoly([-1, -1, -1, 1])
    IntPoly('X^3 - X^2 - X - 1')
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def x(cls) -> "IntPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, value: int) -> "IntPoly":
        return cls([value])

    @classmethod
    def from_flint(cls, f: fmpz_poly) -> "IntPoly":
        return cls(int(c) for c in f.coeffs())

    def to_flint(self) -> fmpz_poly:
        return fmpz_poly(list(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly('{self}')"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mon = "X" if i == 1 else f"X^{i}"
                body = mon if a == 1 else f"{a}*{mon}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __add__(self, other: "IntPoly | int") -> "IntPoly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __sub__(self, other: "IntPoly | int") -> "IntPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other: int) -> "IntPoly":
        return _as_poly(other) - self

    def __mul__(self, other: "IntPoly | int") -> "IntPoly":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPoly":
        result, base = IntPoly([1]), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, int) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def compose(self, g: "IntPoly") -> "IntPoly":
        """self(g(X))."""
        acc = IntPoly()
        for c in reversed(self.coeffs):
            acc = acc * g + c
        return acc

    def scale_var(self, s: int) -> "IntPoly":
        """self(s*X)."""
        return IntPoly(c * s ** i for i, c in enumerate(self.coeffs))

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = _gcd(g, c)
        return g

    def primitive(self) -> "IntPoly":
        """Content removed, leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPoly(c // g for c in self.coeffs)

    def is_monic(self) -> bool:
        return self.leading == 1

    def l2_norm_sq(self) -> int:
        return sum(c * c for c in self.coeffs)


def _gcd(a: int, b: int) -> int:
    import math
    return math.gcd(a, b)


def _as_poly(p: "IntPoly | int") -> IntPoly:
    return p if isinstance(p, IntPoly) else IntPoly([p])


def _require_nonzero(*polys: IntPoly) -> None:
    for p in polys:
        if p.is_zero():
            raise ValueError("zero polynomial not allowed here")


# -- division and gcd over Q -----------------------------------------------

def divmod_q(f: Sequence, g: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    """Polynomial division over Q on coefficient lists (ascending)."""
    r = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    while g and g[-1] == 0:
        g.pop()
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    dg = len(g) - 1
    q = [Fraction(0)] * max(len(r) - dg, 1)
    while len(r) - 1 >= dg and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dg:
            break
        shift = len(r) - 1 - dg
        factor = r[-1] / g[-1]
        q[shift] = factor
        for i, c in enumerate(g):
            r[i + shift] -= factor * c
        r.pop()
    while r and r[-1] == 0:
        r.pop()
    return q, r


def _clear_to_primitive(coeffs: Sequence[Fraction]) -> IntPoly:
    import math
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return IntPoly(int(c * den) for c in coeffs).primitive()


def exact_quotient(f: IntPoly, g: IntPoly) -> IntPoly:
    """f / g when g divides f over Z; raises ValueError otherwise."""
    q, r = divmod_q(f.coeffs, g.coeffs)
    if r or any(c.denominator != 1 for c in q):
        raise ValueError(f"{g} does not divide {f} over Z")
    return IntPoly(int(c) for c in q)


def divides(g: IntPoly, f: IntPoly) -> bool:
    _, r = divmod_q(f.coeffs, g.coeffs)
    return not r


def poly_gcd(f: IntPoly, g: IntPoly) -> IntPoly:
    """Primitive gcd with positive leading coefficient."""
    a = [Fraction(c) for c in f.coeffs]
    b = [Fraction(c) for c in g.coeffs]
    while b:
        _, r = divmod_q(a, b)
        a, b = b, r
    if not a:
        return IntPoly()
    return _clear_to_primitive(a)


def squarefree_part(f: IntPoly) -> IntPoly:
    """Product of the distinct irreducible factors of f, primitive, sign of lc(f)."""
    _require_nonzero(f)
    if f.degree == 0:
        return IntPoly([1 if f.leading > 0 else -1])
    g = poly_gcd(f, f.derivative())
    q, _ = divmod_q(f.coeffs, g.coeffs)
    out = _clear_to_primitive(q)
    return out if f.leading > 0 else -out


def _q_monic_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while b:
        _, r = divmod_q(a, b)
        a, b = b, r
    return [c / a[-1] for c in a]


def _q_derivative(a: list[Fraction]) -> list[Fraction]:
    return [i * c for i, c in enumerate(a)][1:]


def _q_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def squarefree_decomposition(f: IntPoly) -> list[tuple[IntPoly, int]]:
    """Yun's algorithm: [(s_i, i)] with f ~ prod s_i^i, each s_i squarefree and primitive."""
    _require_nonzero(f)
    a = [Fraction(c) for c in f.coeffs]
    b = _q_derivative(a)
    if not b:
        return []
    c = _q_monic_gcd(a, b)
    w = divmod_q(a, c)[0]
    y = divmod_q(b, c)[0]
    out, i = [], 1
    while len(w) > 1:
        z = _q_sub(y, _q_derivative(w))
        if not z:
            out.append((_clear_to_primitive(w), i))
            break
        g = _q_monic_gcd(w, z)
        if len(g) > 1:
            out.append((_clear_to_primitive(g), i))
        w = divmod_q(w, g)[0]
        y = divmod_q(z, g)[0]
        i += 1
    return out


def reverse(f: IntPoly) -> IntPoly:
    """X^deg f * f(1/X); roots are the reciprocals of the roots of f."""
    _require_nonzero(f)
    if f[0] == 0:
        raise ValueError("reverse needs a nonzero constant term")
    return IntPoly(reversed(f.coeffs))


# -- resultants ---------------------------------------------------------------

def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    m = [list(map(int, row)) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def sylvester_matrix(f: Sequence[int], g: Sequence[int]) -> list[list[int]]:
    """Sylvester matrix for formal degrees len(f)-1 and len(g)-1."""
    n, m = len(f) - 1, len(g) - 1
    size = n + m
    rows = []
    fd = list(reversed(list(f)))
    gd = list(reversed(list(g)))
    for i in range(m):
        rows.append([0] * i + fd + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + gd + [0] * (size - m - 1 - i))
    return rows


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Res(f, g) = lc(f)^deg g * prod_{f(r)=0} g(r)."""
    _require_nonzero(f, g)
    if f.degree == 0:
        return f.leading ** g.degree
    if g.degree == 0:
        return g.leading ** f.degree
    return bareiss_det(sylvester_matrix(f.coeffs, g.coeffs))


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> IntPoly:
    """Newton interpolation over Q; the interpolant must have integer coefficients."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)]
    for i in range(n - 1, -1, -1):
        # poly = poly * (X - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly
        for k in range(len(poly)):
            shifted[k] -= xs[i] * poly[k]
        shifted[0] += coef[i]
        poly = shifted
    if any(c.denominator != 1 for c in poly):
        raise ArithmeticError("interpolated resultant is not integral")
    return IntPoly(int(c) for c in poly)


def bivariate_resultant(f: Sequence[IntPoly], g: Sequence[IntPoly]) -> IntPoly:
    """Res_Y of two polynomials in Y whose coefficients are polynomials in X.

    ``f[i]`` is the coefficient of Y^i.  Formal Y-degrees are len(f)-1 and
    len(g)-1 (the leading coefficients must be nonzero polynomials).  Computed
    by evaluation at integer points and exact interpolation.
    """
    n, m = len(f) - 1, len(g) - 1
    degx_f = max(p.degree for p in f if p)
    degx_g = max(p.degree for p in g if p)
    bound = m * max(degx_f, 0) + n * max(degx_g, 0)
    xs = list(range(1, bound + 2))
    ys = []
    for x in xs:
        fv = [p(x) if p else 0 for p in f]
        gv = [p(x) if p else 0 for p in g]
        ys.append(bareiss_det(sylvester_matrix(fv, gv)))
    return _interpolate(xs, ys)
