"""Algebraic numbers as (minimal polynomial, isolating ball) pairs.

Provides the Weil height, a Lemma-style height calculus, exact minimal
polynomials of ratios, products and powers (via resultants), root-of-unity
decisions and a bounded search for multiplicative dependence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from flint import acb, arb

from .numerics import (
    DEFAULT_PRECISION,
    IntPoly,
    PrecisionExceeded,
    bivariate_resultant,
    divmod_q,
    exact_fraction,
    precisions,
    reverse,
    working_precision,
)
from .roots import _flint_roots


def _irreducible_factors(f: IntPoly) -> list[IntPoly]:
    _, factors = f.to_flint().factor()
    return [IntPoly.from_flint(g).primitive() for g, _ in factors if g.degree() > 0]


@dataclass(frozen=True)
class AlgebraicNumber:
    """A root of an irreducible primitive integer polynomial, selected by a ball."""

    minpoly: IntPoly
    ball: acb = field(compare=False)
    precision: int = field(default=DEFAULT_PRECISION, compare=False)

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def conjugates(self, bits: int | None = None) -> list[acb]:
        return list(_flint_roots(self.minpoly.coeffs, bits or self.precision))

    def at(self, bits: int) -> acb:
        """Isolating ball of this root at ``bits`` of precision."""
        if bits <= self.precision:
            return self.ball
        match = [r for r in self.conjugates(bits) if r.overlaps(self.ball)]
        if len(match) != 1:
            raise PrecisionExceeded("lost track of an algebraic root")
        return match[0]

    def conjugate(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self.minpoly, self.ball.conjugate(), self.precision)

    def __str__(self) -> str:
        return f"root of {self.minpoly} near {self.ball.str(12, radius=False)}"

    @classmethod
    def rational(cls, value: Fraction | int) -> "AlgebraicNumber":
        value = Fraction(value)
        poly = IntPoly([-value.numerator, value.denominator])
        return cls(poly, acb(arb(value.numerator) / value.denominator), DEFAULT_PRECISION)


def select_root(poly: IntPoly, target, precision: int = DEFAULT_PRECISION) -> AlgebraicNumber:
    """The unique root of ``poly`` equal to the value enclosed by ``target(bits)``.

    ``target`` is a ball or a callable bits -> ball.  The exact value must be a
    root of ``poly``; the factor is chosen once exactly one root of one
    irreducible factor overlaps the target ball.
    """
    factors = _irreducible_factors(poly)
    for bits in precisions(precision):
        with working_precision(bits):
            t = target(bits) if callable(target) else target
            hits = []
            all_roots = []
            for g in factors:
                for r in _flint_roots(g.coeffs, bits):
                    all_roots.append(r)
                    if r.overlaps(t):
                        hits.append((g, r))
            disjoint = all(not all_roots[i].overlaps(all_roots[j])
                           for i in range(len(all_roots)) for j in range(i + 1, len(all_roots)))
            if len(hits) == 1 and disjoint:
                g, r = hits[0]
                return AlgebraicNumber(g, r, bits)
            if not hits and not callable(target):
                raise ValueError("target ball does not meet any root")
    raise PrecisionExceeded("factor selection ambiguous at precision ceiling")


def root_of(poly: IntPoly, guess, precision: int = DEFAULT_PRECISION) -> AlgebraicNumber:
    """The root of ``poly`` nearest to an approximate ``guess``."""
    guess = acb(guess)
    best = None
    for g in _irreducible_factors(poly):
        for r in _flint_roots(g.coeffs, precision):
            dist = float(abs(r - guess).mid())
            if best is None or dist < best[0]:
                best = (dist, g, r)
    if best is None:
        raise ValueError("polynomial has no roots")
    _, g, r = best
    return select_root(g, r, precision)


# -- heights -------------------------------------------------------------------

def weil_height(eta: AlgebraicNumber, tolerance: float = 1e-30,
                precision: int = DEFAULT_PRECISION) -> arb:
    """Absolute logarithmic height (log a_0 + sum max(0, log|conj|)) / N."""
    a0 = abs(eta.minpoly.leading)
    for bits in precisions(precision):
        with working_precision(bits):
            total = arb(a0).log()
            for r in eta.conjugates(bits):
                total += abs(r).log().max(arb(0))
            h = total / eta.degree
            if h.rad() <= tolerance:
                return h
    raise PrecisionExceeded("Weil height")


@dataclass(frozen=True)
class Leaf:
    height: arb | float


@dataclass(frozen=True)
class Add:
    left: "HeightExpr"
    right: "HeightExpr"


@dataclass(frozen=True)
class Mul:
    left: "HeightExpr"
    right: "HeightExpr"


@dataclass(frozen=True)
class Div:
    left: "HeightExpr"
    right: "HeightExpr"


@dataclass(frozen=True)
class Pow:
    base: "HeightExpr"
    exponent: Fraction


HeightExpr = Union[Leaf, Add, Mul, Div, Pow]


def height_calculus_bound(expr: HeightExpr) -> arb:
    """Upper bound on the height of an expression built from leaves of known height.

    h(x +- y) <= h(x) + h(y) + log 2,  h(x y^(+-1)) <= h(x) + h(y),  h(x^u) = |u| h(x).
    """
    if isinstance(expr, Leaf):
        return arb(expr.height).upper() if not isinstance(expr.height, arb) else expr.height.upper()
    if isinstance(expr, Add):
        return (height_calculus_bound(expr.left) + height_calculus_bound(expr.right)
                + arb(2).log()).upper()
    if isinstance(expr, (Mul, Div)):
        return (height_calculus_bound(expr.left) + height_calculus_bound(expr.right)).upper()
    if isinstance(expr, Pow):
        u = Fraction(expr.exponent)
        return (height_calculus_bound(expr.base) * abs(u.numerator) / u.denominator).upper()
    raise TypeError(f"not a height expression: {expr!r}")


# -- arithmetic through resultants ------------------------------------------------

def _ratio_poly(eta: IntPoly, theta: IntPoly) -> IntPoly:
    # Res_Y(theta(Y), eta(X*Y)) has the roots eta_i / theta_j
    f = [IntPoly([c]) for c in theta.coeffs]
    g = [IntPoly([0] * i + [c]) for i, c in enumerate(eta.coeffs)]
    return bivariate_resultant(f, g)


def _product_poly(eta: IntPoly, theta: IntPoly) -> IntPoly:
    # Res_Y(theta(Y), Y^d eta(X/Y)) has the roots eta_i * theta_j
    d = eta.degree
    f = [IntPoly([c]) for c in theta.coeffs]
    g = [IntPoly([0] * (d - j) + [eta[d - j]]) for j in range(d + 1)]
    return bivariate_resultant(f, g)


def _power_poly(eta: IntPoly, e: int) -> IntPoly:
    # Res_Y(eta(Y), X - Y^e) has the roots eta_i^e
    f = [IntPoly([c]) for c in eta.coeffs]
    g = [IntPoly([0, 1])] + [IntPoly()] * (e - 1) + [IntPoly([-1])]
    return bivariate_resultant(f, g)


def ratio_min_poly(eta: AlgebraicNumber, theta: AlgebraicNumber) -> AlgebraicNumber:
    """eta / theta as an exact algebraic number."""
    if theta.minpoly.degree == 1 and theta.minpoly[0] == 0:
        raise ZeroDivisionError("division by the algebraic number 0")
    if eta.minpoly.degree == 1 and theta.minpoly.degree == 1:
        value = Fraction(-eta.minpoly[0], eta.minpoly[1]) / Fraction(-theta.minpoly[0], theta.minpoly[1])
        return AlgebraicNumber.rational(value)
    cand = _ratio_poly(eta.minpoly, theta.minpoly)
    return select_root(cand, lambda bits: eta.at(bits) / theta.at(bits),
                       max(eta.precision, theta.precision))


def product(eta: AlgebraicNumber, theta: AlgebraicNumber) -> AlgebraicNumber:
    cand = _product_poly(eta.minpoly, theta.minpoly)
    return select_root(cand, lambda bits: eta.at(bits) * theta.at(bits),
                       max(eta.precision, theta.precision))


def power(eta: AlgebraicNumber, e: int) -> AlgebraicNumber:
    if e < 0:
        return power(inverse(eta), -e)
    if e == 0:
        return AlgebraicNumber.rational(1)
    if e == 1:
        return eta
    cand = _power_poly(eta.minpoly, e)
    return select_root(cand, lambda bits: eta.at(bits) ** e, eta.precision)


def inverse(eta: AlgebraicNumber) -> AlgebraicNumber:
    rev = reverse(eta.minpoly).primitive()
    return AlgebraicNumber(rev, 1 / eta.ball, eta.precision) if rev.degree == 1 else \
        select_root(rev, lambda bits: 1 / eta.at(bits), eta.precision)


def negate(eta: AlgebraicNumber) -> AlgebraicNumber:
    poly = eta.minpoly.scale_var(-1).primitive()
    return AlgebraicNumber(poly, -eta.ball, eta.precision)


def is_one(eta: AlgebraicNumber) -> bool:
    return eta.minpoly == IntPoly([-1, 1])


# -- roots of unity -------------------------------------------------------------

def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def is_root_of_unity(eta: AlgebraicNumber) -> tuple[bool, int | None]:
    """Exact test: returns (True, least order) or (False, None).

    A root of unity has a monic, self-reciprocal (up to sign) minimal
    polynomial dividing X^n - 1 for some n with phi(n) = degree; phi(n) >= sqrt(n/2)
    bounds the candidates.
    """
    f = eta.minpoly
    if not f.is_monic() or abs(f[0]) != 1:
        return False, None
    rev = reverse(f)
    if rev != f and rev != -f:
        return False, None
    d = f.degree
    for n in range(1, 2 * d * d + 3):
        if euler_phi(n) != d:
            continue
        _, r = divmod_q([-1] + [0] * (n - 1) + [1], f.coeffs)
        if not r:
            return True, n
    return False, None


# -- multiplicative dependence ----------------------------------------------------

@dataclass(frozen=True)
class DependenceWitness:
    """alpha^(2p) = gamma^q exactly; delta = q / p."""

    p: int
    q: int
    delta: Fraction
    transcript: tuple[str, ...]


@dataclass(frozen=True)
class DependenceSearch:
    witness: DependenceWitness | None
    transcript: tuple[str, ...]
    max_denominator: int


def convergents(x: Fraction, limit: int) -> list[Fraction]:
    """Continued-fraction convergents of x with denominator <= limit."""
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    num, den = x.numerator, x.denominator
    while den:
        a, rem = divmod(num, den)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > limit:
            break
        out.append(Fraction(h1, k1))
        num, den = den, rem
    return out


def multiplicative_dependence(alpha: AlgebraicNumber, gamma: AlgebraicNumber,
                              max_denominator: int = 64,
                              precision: int = DEFAULT_PRECISION) -> DependenceSearch:
    """Search coprime p, q > 0 with alpha^(2p) = gamma^q, alpha and gamma real > 1.

    Candidates are the continued-fraction convergents of log(gamma)/(2 log(alpha))
    and of its inverse; every candidate is first tested numerically and, when the
    ball cannot exclude equality, verified exactly through ratio_min_poly.
    """
    with working_precision(precision):
        for x in (alpha, gamma):
            b = x.at(precision)
            if not (b.imag == 0 or abs(b.imag) < 1e-30) or not b.real > 1:
                raise ValueError("multiplicative_dependence needs real numbers > 1")
    transcript: list[str] = []
    for bits in precisions(precision):
        with working_precision(bits):
            la = alpha.at(bits).real.log()
            lg = gamma.at(bits).real.log()
            r = lg / (2 * la)
            if r.rad() > arb(2) ** (-(bits // 2)):
                continue
            mid = exact_fraction(r)
            cands: list[tuple[int, int]] = []
            for c in convergents(mid, max_denominator):
                if c > 0:
                    cands.append((c.numerator, c.denominator))
            for c in convergents(1 / mid, max_denominator):
                if c > 0:
                    cands.append((c.denominator, c.numerator))
            seen: set[tuple[int, int]] = set()
            undecided = False
            transcript = []
            for p, q in cands:
                if (p, q) in seen or math.gcd(p, q) != 1:
                    continue
                seen.add((p, q))
                gap = 2 * p * la - q * lg
                if gap > 0 or gap < 0:
                    transcript.append(f"p={p} q={q}: |2p log(alpha) - q log(gamma)| > 0 certified")
                    continue
                lhs = power(alpha, 2 * p)
                rhs = power(gamma, q)
                if is_one(ratio_min_poly(lhs, rhs)):
                    transcript.append(f"p={p} q={q}: alpha^{2 * p} = gamma^{q} verified exactly "
                                      f"(minimal polynomial of the ratio is X - 1)")
                    w = DependenceWitness(p, q, Fraction(q, p), tuple(transcript))
                    return DependenceSearch(w, tuple(transcript), max_denominator)
                undecided = True
                break
            if undecided:
                continue
            transcript.append(f"no dependence with denominator <= {max_denominator}")
            return DependenceSearch(None, tuple(transcript), max_denominator)
    raise PrecisionExceeded("dependence search")
