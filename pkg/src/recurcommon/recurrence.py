"""Integer linear recurrences: exact terms in both directions and Binet data."""
from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from flint import acb, acb_mat, arb

from .numerics import (
    DEFAULT_PRECISION,
    IntPoly,
    PrecisionExceeded,
    precisions,
    working_precision,
)
from .roots import Dominance, DominanceReport, dominance_profile, refine_rootset


class NotBackwardExtendable(ValueError):
    """Negative indices requested but |p_0| != 1, so terms would not be integers."""


@dataclass(frozen=True)
class RecurrenceSpec:
    """g_{n+k} = p_{k-1} g_{n+k-1} + ... + p_0 g_n, with g_0..g_{k-1} given.

    ``coeffs`` is stored p_0 first.  ``index_offset`` only relabels terms for
    display and fixtures: the label of g_j is j + index_offset.
    """

    coeffs: tuple[int, ...]
    initial: tuple[int, ...]
    name: str = ""
    index_offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        object.__setattr__(self, "initial", tuple(int(c) for c in self.initial))
        if not self.coeffs:
            raise ValueError("order must be positive")
        if len(self.initial) != len(self.coeffs):
            raise ValueError("need exactly k initial terms")
        if self.coeffs[0] == 0:
            raise ValueError("p_0 must be nonzero")
        if not any(self.initial):
            raise ValueError("at least one initial term must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def backward_extendable(self) -> bool:
        return abs(self.coeffs[0]) == 1

    def to_dict(self) -> dict:
        data = {
            "order": self.order,
            "coeffs_p0_first": [str(c) for c in self.coeffs],
            "initial_terms": [str(c) for c in self.initial],
            "name": self.name,
        }
        if self.index_offset:
            data["index_offset"] = self.index_offset
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "RecurrenceSpec":
        coeffs = [int(c) for c in data["coeffs_p0_first"]]
        initial = [int(c) for c in data["initial_terms"]]
        if "order" in data and int(data["order"]) != len(coeffs):
            raise ValueError("order does not match the number of coefficients")
        return cls(tuple(coeffs), tuple(initial), data.get("name", ""),
                   int(data.get("index_offset", 0)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def digest(self) -> str:
        canonical = json.dumps({"c": list(self.coeffs), "g": list(self.initial)}, sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()

    def term(self, label: int) -> int:
        """Term by its display label (label = storage index + index_offset)."""
        return eval_term(self, label - self.index_offset)


def char_poly(spec: RecurrenceSpec) -> IntPoly:
    return IntPoly([-c for c in spec.coeffs] + [1])


def _step_back(spec: RecurrenceSpec, window: Sequence[int]) -> int:
    # window = (g_{n+1}, ..., g_{n+k}); returns g_n
    k = spec.order
    acc = window[k - 1] - sum(spec.coeffs[i] * window[i - 1] for i in range(1, k))
    return acc * spec.coeffs[0]  # p_0 = +-1, so dividing equals multiplying


def terms(spec: RecurrenceSpec, start: int, stop: int) -> list[int]:
    """Exact terms g_start, ..., g_{stop-1}."""
    if start >= stop:
        return []
    k = spec.order
    out: dict[int, int] = {}
    if stop > 0:
        window = list(spec.initial)
        for i in range(min(k, stop)):
            if i >= start:
                out[i] = window[i]
        n = k
        while n < stop:
            nxt = sum(c * w for c, w in zip(spec.coeffs, window))
            window = window[1:] + [nxt]
            if n >= start:
                out[n] = nxt
            n += 1
    if start < 0:
        if not spec.backward_extendable:
            raise NotBackwardExtendable(f"|p_0| = {abs(spec.coeffs[0])} != 1")
        window = list(spec.initial)  # g_0..g_{k-1}
        n = -1
        while n >= start:
            prev = _step_back(spec, window)
            window = [prev] + window[:-1]
            if n < stop:
                out[n] = prev
            n -= 1
    return [out[i] for i in range(start, stop)]


def eval_term(spec: RecurrenceSpec, n: int) -> int:
    return terms(spec, n, n + 1)[0]


# -- Binet decomposition ------------------------------------------------------

@dataclass(frozen=True)
class BinetDecomposition:
    """g_n = sum_j sum_s c[j][s] n^s gamma_j^n in certified balls.

    ``n`` is the display label (storage index + index_offset), so for the
    tribonacci fixture stored from T_{-1} the coefficients are those of T_n.
    """

    spec: RecurrenceSpec
    profile: DominanceReport
    coefficients: tuple[tuple[acb, ...], ...]
    precision: int
    dominant_abs: tuple[arb, ...]
    heights: dict = field(compare=False)
    tail_degree: int
    tail_sum: arb

    @property
    def roots(self) -> list[acb]:
        return self.profile.rootset.balls

    def dominant_coefficient(self, which: int = 0) -> acb:
        return self.coefficients[self.profile.dominant[which]][0]

    def evaluate(self, n: int) -> acb:
        with working_precision(self.precision):
            total = acb(0)
            for r, cs in zip(self.roots, self.coefficients):
                power = r ** n
                for s, c in enumerate(cs):
                    total += c * (n ** s if s else 1) * power
            return total


def _columns(profile: DominanceReport) -> list[tuple[int, int]]:
    return [(j, s) for j, m in enumerate(profile.rootset.multiplicities) for s in range(m)]


def _solve(spec: RecurrenceSpec, profile: DominanceReport, bits: int):
    cols = _columns(profile)
    roots = refine_rootset(profile.rootset, bits).balls
    k = spec.order
    labels = [i + spec.index_offset for i in range(k)]
    matrix = [[acb(e ** s if (e or not s) else 0) * roots[j] ** e for (j, s) in cols] for e in labels]
    rhs = acb_mat([[g] for g in spec.initial])
    sol = acb_mat(matrix).solve(rhs)
    coeffs: list[list[acb]] = [[acb(0)] * m for m in profile.rootset.multiplicities]
    for idx, (j, s) in enumerate(cols):
        coeffs[j][s] = sol[idx, 0]
    return coeffs


def cramer_height_bounds(spec: RecurrenceSpec, profile: DominanceReport) -> dict[int, arb]:
    """Upper bounds for the heights of the simple-root coefficients.

    Cramer's rule writes each coefficient as det(V_j)/det(V); the permutation
    expansion of both determinants is bounded with h(x + y) <= h(x) + h(y) + log 2,
    h(xy) <= h(x) + h(y) and h(x^u) = |u| h(x).  Root heights are bounded by
    log ||G||_2 (Landau: h(root) <= log M(G) <= log ||G||_2).
    """
    g = char_poly(spec)
    root_h = arb(g.l2_norm_sq()).log() / 2
    cols = _columns(profile)
    k = spec.order
    log2 = arb(2).log()

    def entry_h(i: int, col) -> arb | None:
        if col == "g":
            return None if spec.initial[i] == 0 else arb(abs(spec.initial[i])).log()
        j, s = col
        e = i + spec.index_offset
        if s and e == 0:
            return None
        h = root_h * abs(e)
        if s:
            h += s * arb(abs(e)).log()
        return h

    def det_bound(columns) -> arb:
        heights = [[entry_h(i, c) for c in columns] for i in range(k)]
        if k <= 7:
            count, best = 0, arb(0)
            for perm in itertools.permutations(range(k)):
                parts = [heights[i][perm[i]] for i in range(k)]
                if any(p is None for p in parts):
                    continue
                total = sum(parts, arb(0))
                best = best.max(total)
                count += 1
            return best + max(count - 1, 0) * log2
        row_max = arb(0)
        for row in heights:
            row_max += max((h for h in row if h is not None), key=lambda b: b.upper(), default=arb(0))
        return row_max + (math.factorial(k) - 1) * log2

    den = det_bound(cols)
    out = {}
    for j, m in enumerate(profile.rootset.multiplicities):
        if m != 1:
            continue
        replaced = ["g" if c == (j, 0) else c for c in cols]
        out[j] = (det_bound(replaced) + den).upper()
    return out


def binet_data(spec: RecurrenceSpec, profile: DominanceReport | None = None,
               precision: int = DEFAULT_PRECISION) -> BinetDecomposition:
    """Certified Binet coefficients plus symbolic height bounds for the dominant ones."""
    profile = profile or dominance_profile(char_poly(spec), precision)
    for bits in precisions(max(precision, profile.rootset.precision)):
        with working_precision(bits):
            try:
                coeffs = _solve(spec, profile, bits)
            except ZeroDivisionError:
                continue
            heights = cramer_height_bounds(spec, profile)
            dom_abs = tuple(abs(coeffs[j][0]) for j in profile.dominant)
            dom_set = set(profile.dominant)
            tail = arb(0)
            tail_deg = 0
            for j, cs in enumerate(coeffs):
                if j in dom_set:
                    continue
                tail_deg = max(tail_deg, len(cs) - 1)
                for c in cs:
                    tail += abs(c)
            hb = {}
            if profile.dominant and profile.dominant_multiplicity == 1:
                d0 = profile.dominant[0]
                hb["A1"] = heights[d0]
                if profile.tag is Dominance.COMPLEX_PAIR:
                    d1 = profile.dominant[1]
                    hb["B1"] = heights[d0]
                    hb["B2"] = heights[d1]
                    hb["B2/B1"] = (heights[d0] + heights[d1]).upper()
            return BinetDecomposition(spec, profile, tuple(tuple(c) for c in coeffs), bits,
                                      dom_abs, hb, tail_deg, tail)
    raise PrecisionExceeded("Binet system not certifiably nonsingular")


def dominant_coefficient_nonzero(spec: RecurrenceSpec, binet: BinetDecomposition) -> bool:
    """Exact decision whether the dominant Binet coefficient vanishes.

    The coefficient lies in the splitting field of the characteristic
    polynomial (degree <= k!), so if nonzero its modulus is at least
    exp(-k! * h) by the Liouville inequality; a ball below that is exactly 0.
    """
    profile = binet.profile
    if not profile.dominant:
        raise ValueError("no dominant root")
    j = profile.dominant[0]
    h = binet.heights.get("A1")
    if h is None:
        h = cramer_height_bounds(spec, profile)[j]
    degree = math.factorial(profile.distinct_count)
    for bits in precisions(binet.precision):
        with working_precision(bits):
            coeffs = _solve(spec, profile, bits) if bits > binet.precision else \
                [list(c) for c in binet.coefficients]
            value = abs(coeffs[j][0])
            if value > 0:
                return True
            separation = (-(degree * h)).exp()
            if value.upper() < separation:
                return False
    raise PrecisionExceeded("dominant coefficient undecided")
