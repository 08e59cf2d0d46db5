"""Certified complex root isolation and dominant-root classification."""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field

from flint import acb, arb

from .numerics import (
    DEFAULT_PRECISION,
    IntPoly,
    PrecisionExceeded,
    bivariate_resultant,
    exact_fraction,
    precisions,
    squarefree_decomposition,
    working_precision,
)


@dataclass(frozen=True)
class RootSet:
    """Isolating disks of the distinct roots of a polynomial, with multiplicities."""

    poly: IntPoly
    roots: tuple[tuple[acb, int], ...]
    precision: int

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def balls(self) -> list[acb]:
        return [r for r, _ in self.roots]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.roots]


@functools.lru_cache(maxsize=4096)
def _flint_roots(coeffs: tuple[int, ...], bits: int) -> tuple[acb, ...]:
    with working_precision(bits):
        return tuple(r for r, _ in IntPoly(coeffs).to_flint().complex_roots())


def _disjoint(balls: list[acb]) -> bool:
    return all(not balls[i].overlaps(balls[j])
               for i in range(len(balls)) for j in range(i + 1, len(balls)))


def isolate_roots(f: IntPoly, precision: int = DEFAULT_PRECISION,
                  max_radius: float | None = None) -> RootSet:
    """All distinct complex roots of ``f`` in pairwise disjoint balls.

    Multiplicities come from the squarefree decomposition of ``f``.  With
    ``max_radius`` the precision is raised until every ball is that tight.
    """
    if f.is_zero() or f.degree < 1:
        raise ValueError("root isolation needs a polynomial of degree >= 1")
    parts = squarefree_decomposition(f)
    for bits in precisions(precision):
        roots: list[tuple[acb, int]] = []
        for s, mult in parts:
            roots.extend((r, mult) for r in _flint_roots(s.coeffs, bits))
        balls = [r for r, _ in roots]
        if not _disjoint(balls):
            continue
        if max_radius is not None and any(r.rad() > max_radius for r in balls):
            continue
        return RootSet(f, tuple(roots), bits)
    raise PrecisionExceeded(f"root isolation of {f}")


def is_certified_real(z: acb) -> bool:
    # flint returns real roots of integer polynomials with an exactly zero imaginary part
    return z.imag.is_exact() and z.imag == 0


class Dominance(str, enum.Enum):
    REAL = "RealDominant"
    COMPLEX_PAIR = "ComplexPairDominant"
    OTHER = "Other"


@dataclass(frozen=True)
class DominanceReport:
    poly: IntPoly
    rootset: RootSet
    tag: Dominance
    dominant: tuple[int, ...]
    magnitude_classes: tuple[tuple[int, ...], ...]
    magnitudes: tuple[arb, ...]
    dominant_multiplicity: int
    second_magnitude: arb | None
    reason: str = ""
    decay: arb | None = field(default=None, compare=False)

    @property
    def dominant_root(self) -> acb:
        return self.rootset.roots[self.dominant[0]][0]

    @property
    def dominant_modulus(self) -> arb:
        return self.magnitudes[self.dominant[0]]

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def distinct_count(self) -> int:
        return len(self.rootset)


def _magnitude_square_poly(f: IntPoly) -> IntPoly:
    """Polynomial whose roots are all products r_a * r_b of roots of f."""
    d = f.degree
    y_coeffs = [IntPoly([0] * (d - j) + [f[d - j]]) for j in range(d + 1)]
    return bivariate_resultant([IntPoly([c]) for c in f.coeffs], y_coeffs)


def magnitude_classes(f: IntPoly, precision: int = DEFAULT_PRECISION):
    """Group the distinct roots of ``f`` by exactly equal modulus.

    Moduli that overlap numerically are compared exactly: |r|^2 = r * conj(r)
    is a root of the pairwise-product polynomial S, so two squared moduli are
    equal iff they fall in the same isolating disk of S.
    Returns (rootset, classes sorted by decreasing modulus, moduli balls).
    """
    s_poly = None
    for bits in precisions(precision):
        rs = isolate_roots(f, bits)
        with working_precision(bits):
            mods = [abs(r) for r in rs.balls]
            sq = [r * r.conjugate() for r in rs.balls]
            n = len(mods)
            pending = [(i, j) for i in range(n) for j in range(i + 1, n) if mods[i].overlaps(mods[j])]
            equal: set[tuple[int, int]] = set()
            undecided = False
            if pending:
                if s_poly is None:
                    s_poly = _magnitude_square_poly(f)
                s_roots = [r for part, _ in squarefree_decomposition(s_poly)
                           for r in _flint_roots(part.coeffs, bits)]
                if not _disjoint(s_roots):
                    continue
                labels = []
                for z in sq:
                    hits = [k for k, w in enumerate(s_roots) if w.overlaps(z)]
                    labels.append(hits[0] if len(hits) == 1 else None)
                for i, j in pending:
                    if labels[i] is None or labels[j] is None or labels[i] != labels[j]:
                        undecided = True
                        break
                    equal.add((i, j))
            if undecided:
                continue
            parent = list(range(n))

            def find(a: int) -> int:
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for i, j in equal:
                parent[find(i)] = find(j)
            groups: dict[int, list[int]] = {}
            for i in range(n):
                groups.setdefault(find(i), []).append(i)
            classes = sorted(groups.values(), key=lambda g: -exact_fraction(mods[g[0]]))
            # classes are now separated: verify the strict ordering is certified
            ok = all(mods[classes[c][0]] > mods[classes[c + 1][0]] for c in range(len(classes) - 1))
            if not ok:
                continue
            return rs, [tuple(g) for g in classes], mods
    raise PrecisionExceeded(f"magnitude classification of {f}")


def dominance_profile(f: IntPoly, precision: int = DEFAULT_PRECISION) -> DominanceReport:
    """Classify ``f`` as real-dominant, complex-pair-dominant or other."""
    rs, classes, mods = magnitude_classes(f, precision)
    top = classes[0]
    mults = rs.multiplicities
    second = mods[classes[1][0]] if len(classes) > 1 else None
    tag, reason = Dominance.OTHER, ""
    with working_precision(rs.precision):
        if len(top) == 1:
            i = top[0]
            if not is_certified_real(rs.balls[i]):
                reason = "single top root is not real"
            elif mults[i] != 1:
                tag, reason = Dominance.REAL, "dominant root is not simple"
            else:
                tag = Dominance.REAL
        elif len(top) == 2:
            i, j = sorted(top, key=lambda t: -exact_fraction(rs.balls[t].imag))
            if is_certified_real(rs.balls[i]) or not rs.balls[j].overlaps(rs.balls[i].conjugate()):
                reason = "top modulus shared by two roots that are not a conjugate pair"
            else:
                tag = Dominance.COMPLEX_PAIR
                if mults[i] != 1:
                    reason = "dominant pair is not simple"
                top = (i, j)
        else:
            reason = f"{len(top)} roots share the top modulus"
        if tag is not Dominance.OTHER and not mods[top[0]] > 1:
            tag, reason = Dominance.OTHER, "dominant modulus does not exceed 1"
    report = DominanceReport(
        poly=f, rootset=rs, tag=tag, dominant=tuple(top) if tag is not Dominance.OTHER else (),
        magnitude_classes=tuple(classes), magnitudes=tuple(mods),
        dominant_multiplicity=mults[top[0]], second_magnitude=second, reason=reason,
    )
    if tag is not Dominance.OTHER:
        object.__setattr__(report, "decay", decay_exponent(report))
    return report


def decay_exponent(report: DominanceReport) -> arb:
    """Midpoint decay exponent (1 + log|second| / log|dominant|) / 2, clamped to [0, 1).

    With this choice |dominant|^(delta*n) = (|dominant| |second|)^(n/2), which
    sits strictly between the tail growth and the dominant growth.
    """
    if report.tag is Dominance.OTHER:
        raise ValueError("decay exponent needs a dominant root")
    with working_precision(report.rootset.precision):
        if report.second_magnitude is None:
            return arb(0)
        ratio = report.second_magnitude.log() / report.dominant_modulus.log()
        delta = (1 + ratio) / 2
        if delta < 0:
            return arb(0)
        if not delta > 0:
            # straddles zero: keep the ball but clip its lower part
            return delta.max(arb(0))
        return delta


def refine_rootset(rs: RootSet, bits: int) -> RootSet:
    """Same roots, same order, isolated at (at least) ``bits`` of precision."""
    if bits <= rs.precision:
        return rs
    fresh = isolate_roots(rs.poly, bits)
    ordered = []
    for ball, mult in rs.roots:
        match = [(r, m) for r, m in fresh.roots if r.overlaps(ball)]
        if len(match) != 1:
            raise PrecisionExceeded("root refinement lost track of a root")
        ordered.append(match[0])
    return RootSet(rs.poly, tuple(ordered), fresh.precision)
