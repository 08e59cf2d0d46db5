"""Exact desk-scale search for common values and checks of the main inequality.

All indices are display labels (storage index + index_offset).
"""
from __future__ import annotations

import hashlib
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from flint import arb

from .baker import BoundCertificate
from .numerics import DEFAULT_PRECISION, precisions, working_precision
from .recurrence import NotBackwardExtendable, RecurrenceSpec, binet_data, terms
from .roots import dominance_profile
from .recurrence import char_poly

DEFAULT_MAX_TERMS = 20_000_000
BANNER = ("desk-scale evidence only: the theorem speaks about max(n, m) > c_1, "
          "and exhaustive search up to c_1 is infeasible")


class SearchLimitExceeded(MemoryError):
    pass


@dataclass(frozen=True, order=True)
class CommonValueHit:
    n: int
    m: int
    value: int
    pair_id: str = field(default="", compare=False)

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "value": str(self.value)}


def pair_id(spec_a: RecurrenceSpec, spec_b: RecurrenceSpec) -> str:
    return hashlib.sha256((spec_a.digest() + spec_b.digest()).encode()).hexdigest()[:16]


def label_terms(spec: RecurrenceSpec, start: int, stop: int) -> list[int]:
    """Terms with labels start, ..., stop - 1."""
    return terms(spec, start - spec.index_offset, stop - spec.index_offset)


def _index_range(spec: RecurrenceSpec, bound: int, include_negative: bool) -> tuple[int, int]:
    if include_negative:
        if not spec.backward_extendable:
            raise NotBackwardExtendable(f"{spec.name or 'spec'}: |p_0| != 1")
        return -bound, bound + 1
    return 0, bound + 1


def _blocks(spec: RecurrenceSpec, lo: int, hi: int, threads: int) -> list[int]:
    if threads <= 1 or hi - lo < 2048:
        return label_terms(spec, lo, hi)
    # blocks are independent: each restarts from the initial window
    step = -(-(hi - lo) // threads)
    cuts = [(s, min(s + step, hi)) for s in range(lo, hi, step)]
    with ThreadPoolExecutor(threads) as ex:
        parts = list(ex.map(lambda c: label_terms(spec, *c), cuts))
    return [v for part in parts for v in part]


def enumerate_common_values(spec_a: RecurrenceSpec, spec_b: RecurrenceSpec, N: int, M: int,
                            include_negative: bool = False,
                            max_terms: int = DEFAULT_MAX_TERMS,
                            threads: int = 1) -> list[CommonValueHit]:
    """All (n, m) with a_n = b_m, n in [0, N] and m in [0, M] (or [-N, N], [-M, M])."""
    lo_a, hi_a = _index_range(spec_a, N, include_negative)
    lo_b, hi_b = _index_range(spec_b, M, include_negative)
    if (hi_a - lo_a) + (hi_b - lo_b) > max_terms:
        raise SearchLimitExceeded(f"more than {max_terms} terms requested")
    a_vals = _blocks(spec_a, lo_a, hi_a, threads)
    b_vals = _blocks(spec_b, lo_b, hi_b, threads)
    index: dict[int, list[int]] = defaultdict(list)
    for n, v in zip(range(lo_a, hi_a), a_vals):
        index[v].append(n)
    pid = pair_id(spec_a, spec_b)
    hits = [CommonValueHit(n, m, v, pid)
            for m, v in zip(range(lo_b, hi_b), b_vals) for n in index.get(v, ())]
    return sorted(hits)


def value_groups(spec: RecurrenceSpec, N: int) -> dict[int, list[int]]:
    """Values taken at least twice on [-N, N], with their sorted indices."""
    if N <= 0:
        return {}
    lo, hi = _index_range(spec, N, True)
    groups: dict[int, list[int]] = defaultdict(list)
    for n, v in zip(range(lo, hi), label_terms(spec, lo, hi)):
        groups[v].append(n)
    return {v: idx for v, idx in sorted(groups.items()) if len(idx) > 1}


def self_intersections(spec: RecurrenceSpec, N: int) -> list[tuple[int, int, int]]:
    """All (n, m, f_n) with n < m in [-N, N] and f_n = f_m."""
    out = []
    for v, idx in value_groups(spec, N).items():
        out.extend((n, m, v) for i, n in enumerate(idx) for m in idx[i + 1:])
    return sorted(out)


# -- the main inequality --------------------------------------------------------

HOLDS, FAILS, UNDECIDED = "holds", "fails", "undecided"


def _rhs(c0: int, n: int, abs_an: int, bits: int) -> arb:
    with working_precision(bits):
        ln = arb(n).log()
        return ((1 - c0 * ln * ln / n) * arb(abs_an).log()).exp()


def compare_inequality(lhs: int, abs_an: int, n: int, c0: int,
                       precision: int = DEFAULT_PRECISION) -> str:
    """Decide |a_n - b_m| > |a_n|^(1 - c_0 log^2 n / n) given lhs = |a_n - b_m|."""
    if n < 2 or abs_an == 0:
        return HOLDS  # vacuous: log^2 n = 0, or 0 to a power
    if lhs == 0:
        return FAILS
    if c0 == 0 or abs_an == 1:
        # the right side is exactly |a_n|, or exactly 1
        return HOLDS if lhs > (abs_an if c0 == 0 else 1) else FAILS
    for bits in precisions(precision):
        rhs = _rhs(c0, n, abs_an, bits)
        with working_precision(bits):
            if rhs < lhs:
                return HOLDS
            if rhs >= lhs:
                return FAILS
    return UNDECIDED


def check_inequality(pair: tuple[RecurrenceSpec, RecurrenceSpec] | None,
                     certificate: BoundCertificate, n: int, m: int) -> str:
    """Ternary check of the main inequality at (n, m) with the certificate's c_0."""
    spec_a, spec_b = pair or (certificate.spec_a, certificate.spec_b)
    a_n = label_terms(spec_a, n, n + 1)[0]
    b_m = label_terms(spec_b, m, m + 1)[0]
    return compare_inequality(abs(a_n - b_m), abs(a_n), n, certificate.c0, certificate.precision)


@dataclass
class InequalityReport:
    N: int
    M: int
    failures: list[tuple[int, int]]
    counts: dict[str, int]
    precision: int
    c0: int
    c1: int
    undecided: list[tuple[int, int]] = field(default_factory=list)
    vacuous: int = 0
    banner: str = BANNER

    @property
    def failures_explained(self) -> bool:
        return all(max(n, m) <= self.c1 for n, m in self.failures)

    def to_dict(self) -> dict:
        return {"range": {"N": self.N, "M": self.M}, "failures": [list(f) for f in self.failures],
                "undecided": [list(u) for u in self.undecided], "counts": self.counts,
                "vacuous": self.vacuous, "precision_bits": self.precision,
                "c0": str(self.c0), "c1": str(self.c1),
                "failures_explained": self.failures_explained, "banner": self.banner}


def verify_no_violation(pair, certificate: BoundCertificate, N: int, M: int) -> InequalityReport:
    """Sweep n in [0, N], m in [0, M] and record where the inequality fails."""
    spec_a, spec_b = pair or (certificate.spec_a, certificate.spec_b)
    a_vals = label_terms(spec_a, 0, N + 1)
    b_vals = label_terms(spec_b, 0, M + 1)
    c0, bits = certificate.c0, certificate.precision
    counts = {HOLDS: 0, FAILS: 0, UNDECIDED: 0}
    failures, undecided, vacuous = [], [], 0
    for n, a in enumerate(a_vals):
        if n < 2 or a == 0:
            vacuous += len(b_vals)
            counts[HOLDS] += len(b_vals)
            continue
        rhs = _rhs(c0, n, abs(a), bits)
        for m, b in enumerate(b_vals):
            lhs = abs(a - b)
            with working_precision(bits):
                if lhs and rhs < lhs:
                    verdict = HOLDS
                else:
                    verdict = compare_inequality(lhs, abs(a), n, c0, bits)
            counts[verdict] += 1
            if verdict == FAILS:
                failures.append((n, m))
            elif verdict == UNDECIDED:
                undecided.append((n, m))
    return InequalityReport(N, M, failures, counts, bits, c0, certificate.c1, undecided, vacuous)


# -- ledger audit against exact terms ----------------------------------------------

def _ensure_binets(cert: BoundCertificate):
    if cert.binets is not None:
        return cert.binets
    out = []
    for spec in (cert.spec_a, cert.spec_b):
        prof = dominance_profile(char_poly(spec), cert.precision)
        out.append(binet_data(spec, prof, cert.precision))
    return tuple(out)


def _verdict(ok, bad) -> str:
    return HOLDS if ok else (FAILS if bad else UNDECIDED)


def audit_ledger(cert: BoundCertificate, upto: int = 200) -> dict:
    """Check the growth and gap inequalities with the emitted constants on exact terms.

    Each entry reports the first index checked (the ledger threshold), how
    many indices were checked and which ones failed or stayed undecided.
    """
    ba, bb = _ensure_binets(cert)
    L = cert.ledger
    th = L.thresholds
    a_vals = label_terms(cert.spec_a, 0, upto + 1)
    b_vals = label_terms(cert.spec_b, 0, upto + 1)
    results: dict[str, dict] = {}

    def record(name: str, start: int, check) -> None:
        bad, und, count = [], [], 0
        for i in range(start, upto + 1):
            v = check(i)
            count += 1
            if v == FAILS:
                bad.append(i)
            elif v == UNDECIDED:
                und.append(i)
        results[name] = {"from": start, "checked": count, "violations": bad, "undecided": und}

    with working_precision(max(cert.precision, ba.precision, bb.precision)):
        pa, pb = ba.profile, bb.profile
        A1 = ba.coefficients[pa.dominant[0]][0]
        alpha = ba.roots[pa.dominant[0]]
        abs_alpha = pa.dominant_modulus
        r = pb.dominant_modulus
        i, j = pb.dominant
        c2, c3, c4, c5 = L["c2"], L["c3"], L["c4"], L["c5"]
        c6, c7 = L["c6"], L["c7"]
        da, db = L["delta_a"], L["delta_b"]

        def main_b(m):
            return bb.coefficients[i][0] * bb.roots[i] ** m + bb.coefficients[j][0] * bb.roots[j] ** m

        def tail_a(n):
            lhs = abs(a_vals[n] - A1 * alpha ** n)
            rhs = c2 * (da * n * abs_alpha.log()).exp()
            return _verdict(bool(lhs < rhs), bool(lhs >= rhs))

        def growth_a(n):
            mid = arb(abs(a_vals[n]))
            lo, hi = c3 * abs_alpha ** n, c4 * abs_alpha ** n
            return _verdict(bool(lo < mid) and bool(mid < hi), bool(lo >= mid) or bool(mid >= hi))

        def tail_b(m):
            lhs = abs(b_vals[m] - main_b(m))
            rhs = c5 * (db * m * r.log()).exp()
            return _verdict(bool(lhs < rhs), bool(lhs >= rhs))

        def gap(m, factor, upper_factor, lhs_val):
            lo = (r.log() * (m - factor * c6 * arb(m).log())).exp()
            hi = upper_factor * c7 * r ** m
            return _verdict(bool(lo < lhs_val) and bool(lhs_val < hi),
                            bool(lo >= lhs_val) or bool(lhs_val >= hi))

        if c2 > 0:
            record("tail_A", th["n2"], tail_a)
        else:
            results["tail_A"] = {"from": 0, "checked": 0, "violations": [], "undecided": [],
                                 "note": "no subdominant root: a_n = A_1 alpha^n exactly"}
        record("growth_A", th["n3"], growth_a)
        if c5 > 0:
            record("tail_B", th["m2"], tail_b)
        else:
            results["tail_B"] = {"from": 0, "checked": 0, "violations": [], "undecided": [],
                                 "note": "no subdominant root on the B side"}
        record("gap_main_B", max(th["m0"], 2), lambda m: gap(m, 1, 1, abs(main_b(m))))
        start = max(th["m1"], th["m_upper"], 2)
        record("gap_B", start, lambda m: gap(m, 2, 2, arb(abs(b_vals[m]))))
        if start > upto:
            # outside the ledger's claim: informative only (b_m = 0 fails trivially)
            record("gap_B_evidence", 3, lambda m: gap(m, 2, 2, arb(abs(b_vals[m]))))
            results["gap_B_evidence"]["note"] = "below the ledger threshold; evidence only"
    return results


def hit_law(cert: BoundCertificate, hits: list[CommonValueHit]) -> dict:
    """Exponent-gap laws on exact hits.

    ``above_threshold`` lists violations of theta m/2 < n < 2 theta m and
    -c_10 log m < n - theta m < c_8 among hits with m past the ledger threshold
    (the only ones the argument covers); ``evidence`` records the strong law on
    every hit with m >= 2.
    """
    th = cert.theta
    threshold = max(cert.ledger.thresholds["m_star"], 2)
    c8, c10 = cert.ledger["c8"], cert.ledger["c10"]
    above, evidence = [], []
    with working_precision(cert.precision):
        for h in hits:
            if h.m < 2 or h.n < 0 or h.m < 0:
                continue
            gap = arb(h.n) - arb(th.numerator) * h.m / th.denominator
            strong = bool(-c10 * arb(h.m).log() < gap) and bool(gap < c8)
            weak = th * h.m / 2 < h.n < 2 * th * h.m
            evidence.append({"n": h.n, "m": h.m, "strong": strong, "weak": weak})
            if h.m > threshold and not (strong and weak):
                above.append((h.n, h.m))
    return {"threshold": threshold, "above_threshold": above, "evidence": evidence}
