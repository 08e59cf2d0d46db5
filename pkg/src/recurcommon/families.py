"""Constructors for recurrence pairs that satisfy the main theorem's hypotheses.

Case I:  A = (X -+ b^(q/2)) P_1,  B = (X^2 + aX + b^p) P_2.
Case II: A = Q_2 P_1,  B = X^3 Q_2(1/X) P_2  with Q_2 = X^3 + aX^2 + bX + 1.
Bravo:   the forward and backward branches of f_{n+3} = a f_{n+2} + b f_{n+1} + f_n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from flint import arb

from .numerics import DEFAULT_PRECISION, IntPoly, precisions, reverse, working_precision
from .recurrence import RecurrenceSpec, terms
from .roots import is_certified_real, isolate_roots

CASES = ("CaseI", "CaseII", "Bravo")


class ConditionFailed(ValueError):
    """A builder precondition failed; ``clause`` names it."""

    def __init__(self, clause: str, detail: str = ""):
        super().__init__(f"{clause}" + (f": {detail}" if detail else ""))
        self.clause = clause
        self.detail = detail


def max_root_size(P: IntPoly, precision: int = DEFAULT_PRECISION) -> arb:
    """Largest modulus of a root of P; 0 for constants."""
    if P.is_zero():
        raise ValueError("zero polynomial")
    if P.degree < 1:
        return arb(0)
    rs = isolate_roots(P, precision)
    with working_precision(rs.precision):
        best = arb(0)
        for r in rs.balls:
            best = best.max(abs(r))
        return best


def _strictly_less(small: IntPoly, big, clause: str, max_bits: int = 2048) -> None:
    """Certify max_root_size(small) < big, where ``big`` is bits -> ball; ties are rejected."""
    for bits in precisions(DEFAULT_PRECISION, max_bits):
        lhs = max_root_size(small, bits)
        with working_precision(bits):
            rhs = big(bits)
            if lhs < rhs:
                return
            if lhs > rhs:
                raise ConditionFailed(clause, f"{lhs.str(8)} >= {rhs.str(8)}")
    raise ConditionFailed(clause, "tie (or not separable at 2048 bits)")


def _impulse(k: int) -> tuple[int, ...]:
    return (0,) * (k - 1) + (1,)


def spec_from_poly(f: IntPoly, initial: Sequence[int] | None, name: str) -> RecurrenceSpec:
    """Recurrence with characteristic polynomial f (monic, f(0) != 0)."""
    k = f.degree
    coeffs = tuple(-f[i] for i in range(k))
    init = tuple(initial) if initial is not None else _impulse(k)
    return RecurrenceSpec(coeffs, init, name)


def _padding(P: IntPoly, label: str) -> None:
    if P.is_zero() or P.leading != 1 or P[0] == 0:
        raise ConditionFailed(f"{label} monic with nonzero constant term", str(P))


@dataclass(frozen=True)
class FamilyParams:
    case: str
    a: int
    b: int
    p: int = 1
    q: int = 1
    P1: IntPoly = field(default_factory=lambda: IntPoly([1]))
    P2: IntPoly = field(default_factory=lambda: IntPoly([1]))
    initial_a: tuple[int, ...] | None = None
    initial_b: tuple[int, ...] | None = None
    sign: int = 1  # Case I: A has the root sign * b^(q/2)

    def __post_init__(self):
        if self.case not in CASES:
            raise ValueError(f"case must be one of {CASES}")

    def to_dict(self) -> dict:
        return {
            "case": self.case, "a": str(self.a), "b": str(self.b), "p": self.p, "q": self.q,
            "P1": [str(c) for c in self.P1.coeffs], "P2": [str(c) for c in self.P2.coeffs],
            "initial_a": None if self.initial_a is None else [str(c) for c in self.initial_a],
            "initial_b": None if self.initial_b is None else [str(c) for c in self.initial_b],
            "sign": self.sign,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FamilyParams":
        def ints(v):
            return None if v is None else tuple(int(c) for c in v)
        return cls(d["case"], int(d["a"]), int(d["b"]), int(d.get("p", 1)), int(d.get("q", 1)),
                   IntPoly(ints(d.get("P1", ["1"]))), IntPoly(ints(d.get("P2", ["1"]))),
                   ints(d.get("initial_a")), ints(d.get("initial_b")), int(d.get("sign", 1)))


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def build_case_i(params: FamilyParams) -> tuple[RecurrenceSpec, RecurrenceSpec]:
    a, b, p, q = params.a, params.b, params.p, params.q
    if p < 1 or q < 1 or math.gcd(p, q) != 1:
        raise ConditionFailed("gcd(p, q) = 1 with p, q > 0", f"p={p}, q={q}")
    if not _is_square(b) and q % 2:
        raise ConditionFailed("q even when b is not a square", f"b={b}, q={q}")
    bp = b ** p
    if a * a - 4 * bp >= 0:
        raise ConditionFailed("a^2 - 4 b^p < 0", f"a^2 - 4b^p = {a * a - 4 * bp}")
    # beta / conj(beta) = exp(2i phi) with cos^2 phi = a^2 / (4 b^p); rational cos(2 phi)
    # gives a root of unity exactly for these values
    if a * a in (0, bp, 2 * bp, 3 * bp):
        raise ConditionFailed("beta_1 / beta_2 not a root of unity",
                              f"a^2 = {a * a} is in {{0, b^p, 2b^p, 3b^p}}")
    root = math.isqrt(b) ** q if q % 2 else b ** (q // 2)
    root *= 1 if params.sign >= 0 else -1
    if abs(root) <= 1:
        raise ConditionFailed("|b^(q/2)| > 1", f"b^(q/2) = {root}")
    _padding(params.P1, "P_1")
    _padding(params.P2, "P_2")
    _strictly_less(params.P1, lambda bits: arb(abs(root)), "max root size of P_1 < |b^(q/2)|")
    _strictly_less(params.P2, lambda bits: arb(bp).sqrt(), "max root size of P_2 < max root size of Q_1")
    A = IntPoly([-root, 1]) * params.P1
    B = IntPoly([bp, a, 1]) * params.P2
    return (spec_from_poly(A, params.initial_a, f"case-i A a={a} b={b} p={p} q={q}"),
            spec_from_poly(B, params.initial_b, f"case-i B a={a} b={b} p={p} q={q}"))


def case_ii_expression(a: int, b: int) -> int:
    return -27 + 18 * a * b + a * a * b * b - 4 * a ** 3 - 4 * b ** 3


def bravo_expression(a: int, b: int) -> int:
    return -27 - 18 * a * b + a * a * b * b - 4 * a ** 3 + 4 * b ** 3


def _real_root(f: IntPoly, bits: int):
    rs = isolate_roots(f, bits)
    reals = [r for r in rs.balls if is_certified_real(r)]
    if len(reals) != 1:
        raise ConditionFailed("exactly one real root", str(f))
    return reals[0].real


def build_case_ii(params: FamilyParams) -> tuple[RecurrenceSpec, RecurrenceSpec]:
    a, b = params.a, params.b
    disc = case_ii_expression(a, b)
    if disc >= 0:
        raise ConditionFailed("-27 + 18ab + a^2 b^2 - 4a^3 - 4b^3 < 0", f"value {disc}")
    Q2 = IntPoly([1, b, a, 1])
    with working_precision(DEFAULT_PRECISION):
        rho = abs(_real_root(Q2, DEFAULT_PRECISION))
        if not rho > 1:
            raise ConditionFailed("real root of Q_2 outside the unit circle", f"|root| = {rho.str(8)}")
    _padding(params.P1, "P_1")
    _padding(params.P2, "P_2")
    _strictly_less(params.P1, lambda bits: abs(_real_root(Q2, bits)),
                   "max root size of P_1 < max root size of Q_2")
    _strictly_less(params.P2, lambda bits: abs(_real_root(Q2, bits)).sqrt(),
                   "max root size of P_2 < max root size of X^3 Q_2(1/X)")
    A = Q2 * params.P1
    B = reverse(Q2) * params.P2
    return (spec_from_poly(A, params.initial_a, f"case-ii A a={a} b={b}"),
            spec_from_poly(B, params.initial_b, f"case-ii B a={a} b={b}"))


def build_bravo_pair(a: int, b: int, f0: int = 0, f1: int = 1, f2: int = 1
                     ) -> tuple[RecurrenceSpec, RecurrenceSpec]:
    """Forward spec (f_n) and backward spec (f_{-n}) of one sequence.

    The backward spec has characteristic polynomial X^3 + bX^2 + aX - 1 and
    initial terms f_0, f_{-1}, f_{-2}.
    """
    value = bravo_expression(a, b)
    if value >= 0:
        raise ConditionFailed("-27 - 18ab + a^2 b^2 - 4a^3 + 4b^3 < 0", f"value {value}")
    if a + b == 0 or b - a == 2:
        raise ConditionFailed("real root of X^3 - aX^2 - bX - 1 is not +-1",
                              "root 1" if a + b == 0 else "root -1")
    if not (f0 or f1 or f2):
        raise ConditionFailed("initial terms not all zero")
    forward = RecurrenceSpec((1, b, a), (f0, f1, f2), f"bravo a={a} b={b} forward")
    back = terms(forward, -2, 1)  # f_{-2}, f_{-1}, f_0
    backward = RecurrenceSpec((1, -a, -b), (back[2], back[1], back[0]), f"bravo a={a} b={b} backward")
    return forward, backward


def build(params: FamilyParams) -> tuple[RecurrenceSpec, RecurrenceSpec]:
    if params.case == "CaseI":
        return build_case_i(params)
    if params.case == "CaseII":
        return build_case_ii(params)
    init = params.initial_a or (0, 1, 1)
    return build_bravo_pair(params.a, params.b, *init)
