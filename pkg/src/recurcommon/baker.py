"""Matveev's lower bound and the effective constants ledger for a pair of recurrences.

The A side has a simple real dominant root alpha, the B side a simple
conjugate dominant pair beta_1, beta_2 = conj(beta_1) with r = |beta_1|.
Throughout, ``theta`` = log r / log|alpha| = p/q is the exponent ratio that
appears in n - theta*m; ``delta`` = q/p = log|alpha| / log r is the dependence
exponent of the hypothesis.  Every "n large enough" step is materialised as a
named threshold.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from flint import arb

from . import __version__
from .algebraic import (
    AlgebraicNumber,
    Div,
    Leaf,
    height_calculus_bound,
    is_root_of_unity,
    multiplicative_dependence,
    negate,
    product,
    ratio_min_poly,
    select_root,
    weil_height,
)
from .numerics import (
    DEFAULT_PRECISION,
    IntPoly,
    PrecisionExceeded,
    ball_from_json,
    ball_to_json,
    ceil_int,
    exact_fraction,
    resultant,
    reverse,
    working_precision,
)
from .recurrence import (
    BinetDecomposition,
    RecurrenceSpec,
    binet_data,
    char_poly,
    dominant_coefficient_nonzero,
)
from .roots import Dominance, DominanceReport, dominance_profile

SCHEMA_VERSION = "1"
MODES = ("tightened", "paper_faithful")
SLACK = arb(2) ** -40
PI = arb.pi()


class HypothesisFailed(ValueError):
    """A hypothesis of the main theorem is violated; ``which`` names it."""

    def __init__(self, which: str, detail: str, checklist: dict | None = None):
        super().__init__(f"{which}: {detail}")
        self.which = which
        self.detail = detail
        self.checklist = checklist or {}


class DependenceUnknown(RuntimeError):
    """No multiplicative dependence found up to the denominator bound (not a refutation)."""

    def __init__(self, transcript: tuple[str, ...], max_denominator: int):
        super().__init__(f"dependence not found up to denominator {max_denominator}")
        self.transcript = transcript
        self.max_denominator = max_denominator


class ModeRefused(ValueError):
    """The printed (paper_faithful) c_15 is not valid for this pair."""


# -- Matveev --------------------------------------------------------------------

def matveev_constant(t: int) -> arb:
    """3 * 30^(t+4) * (t+1)^5.5."""
    return 3 * arb(30) ** (t + 4) * arb(t + 1) ** arb(5.5)


@dataclass(frozen=True)
class MatveevInput:
    """Parameters of the lower bound for |eta_1^b_1 ... eta_t^b_t - 1|.

    ``weights`` are the A_j; ``provenance`` says which of d*h, |log eta| or
    the 0.16 floor attained the maximum.
    """

    t: int
    d: int
    B: int
    weights: tuple[arb, ...]
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be >= 1")
        if self.d < 1:
            raise ValueError("field degree must be >= 1")
        if self.B < 3:
            raise ValueError("B must be >= 3")
        if len(self.weights) != self.t:
            raise ValueError("need one weight per number")
        for w in self.weights:
            if not arb(w) >= arb(0.16) - arb(2) ** -60:
                raise ValueError("weights must be >= 0.16")

    @classmethod
    def from_data(cls, d: int, B: int, heights, log_bounds) -> "MatveevInput":
        """A_j = max(d*h_j, |log eta_j|, 0.16) from height and log upper bounds."""
        weights, prov = [], []
        for h, lg in zip(heights, log_bounds):
            cands = [("d*h", (d * arb(h)).upper()), ("|log|", arb(lg).upper()), ("floor", arb(0.16))]
            name, value = max(cands, key=lambda c: exact_fraction(c[1]))
            w = cands[0][1].max(cands[1][1]).max(cands[2][1])
            weights.append(w)
            prov.append(name)
        return cls(len(weights), d, B, tuple(weights), tuple(prov))


def matveev_log_lower_bound(inp: MatveevInput) -> arb:
    """-3 * 30^(t+4) (t+1)^5.5 d^2 (1 + log d)(1 + log tB) A_1 ... A_t."""
    d = arb(inp.d)
    value = matveev_constant(inp.t) * d * d * (1 + d.log()) * (1 + arb(inp.t * inp.B).log())
    for w in inp.weights:
        value *= w
    return -value


# -- threshold solving ----------------------------------------------------------

_SEARCH_LIMIT = 10 ** 400


def first_true(pred: Callable[[int], bool], lo: int) -> int:
    """Least n >= lo with pred(n) for a predicate monotone (False...True) on [lo, oo)."""
    if pred(lo):
        return lo
    hi = max(lo + 1, 2 * lo)
    while not pred(hi):
        lo = hi
        hi *= 2
        if hi > _SEARCH_LIMIT:
            raise PrecisionExceeded("threshold search diverged")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def eventually(pred, slope, lo: int) -> int:
    """A point after which ``pred`` holds for good.

    ``slope`` marks where the underlying function starts increasing; it must
    itself be monotone.  The returned value can exceed the true minimum.
    """
    return first_true(pred, first_true(slope, lo))


def _log(n: int) -> arb:
    return arb(n).log()


def _nonneg(x: arb) -> bool:
    return bool(x >= 0)


# -- ledger -----------------------------------------------------------------------

@dataclass
class Ledger:
    constants: dict[str, arb] = field(default_factory=dict)
    kinds: dict[str, str] = field(default_factory=dict)
    thresholds: dict[str, int] = field(default_factory=dict)
    notes: dict[str, str] = field(default_factory=dict)

    def put(self, name: str, value: arb, kind: str = "upper", note: str = "") -> arb:
        self.constants[name] = value
        self.kinds[name] = kind
        if note:
            self.notes[name] = note
        return value

    def threshold(self, name: str, value: int, note: str = "") -> int:
        self.thresholds[name] = int(value)
        if note:
            self.notes[name] = note
        return int(value)

    def __getitem__(self, name: str) -> arb:
        return self.constants[name]

    def conservative(self, name: str) -> arb:
        x = self.constants[name]
        return x.lower() if self.kinds[name] == "lower" else x.upper()


# -- growth constants --------------------------------------------------------------

def tail_bound(binet: BinetDecomposition) -> tuple[arb, arb, str]:
    """c with |g_n - dominant part| < c * |dominant|^(delta n) for all n >= 0.

    Returns (c, rho, note) where rho = |second| / |dominant|^delta < 1.  With
    D the tail degree, c = C_tail * sup_n max(1, n)^D rho^n, where C_tail is the
    sum of the moduli of all non-dominant coefficients.
    """
    profile = binet.profile
    if profile.second_magnitude is None:
        return arb(0), arb(0), "no subdominant root"
    delta = profile.decay
    dom = profile.dominant_modulus
    rho = (profile.second_magnitude / (delta * dom.log()).exp()).upper()
    if not rho < 1:
        raise PrecisionExceeded("tail ratio not certified below 1")
    D = binet.tail_degree
    if D == 0:
        sup = arb(1)
        note = "tail degree 0"
    else:
        lam = -rho.log()
        peak = D / lam
        if peak < 4096:
            sup = arb(1)
            for n in range(1, ceil_int(peak) + 2):
                sup = sup.max((arb(n) ** D * rho ** n).upper())
            note = f"sup by enumeration up to n = {ceil_int(peak) + 1}"
        else:
            sup = arb(1).max(((D / (lam * arb(1).exp())) ** D).upper())
            note = "sup by the analytic bound (D / (e log(1/rho)))^D"
    c = (binet.tail_sum.upper() * sup * (1 + SLACK)).upper()
    return c, rho, note


def growth_constants(binet_a: BinetDecomposition, binet_b: BinetDecomposition,
                     ledger: Ledger | None = None) -> Ledger:
    """c_2, c_3, c_4 (A side), c_5 (B side) and the threshold n_3."""
    ledger = ledger or Ledger()
    pa = binet_a.profile
    A1 = binet_a.dominant_abs[0]
    c2, rho_a, note_a = tail_bound(binet_a)
    c5, rho_b, note_b = tail_bound(binet_b)
    ledger.put("delta_a", pa.decay, "value", "midpoint convention")
    ledger.put("delta_b", binet_b.profile.decay, "value", "midpoint convention")
    ledger.put("c2", c2, "upper", note_a)
    ledger.put("c4", (A1.upper() + c2).upper(), "upper")
    ledger.put("c3", A1.lower() / 2, "lower")
    ledger.put("c5", c5, "upper", note_b)
    ledger.threshold("n2", 0, "tail bound holds for all n >= 0")
    ledger.threshold("m2", 0, "tail bound holds for all m >= 0")
    log_a = pa.dominant_modulus.log()
    gap = (1 - pa.decay) * log_a
    if c2 == 0:
        n3 = 0
    else:
        target = (A1.lower() / 2).log()

        def ok(n: int) -> bool:
            return _nonneg(target - c2.log() + gap * n)

        n3 = first_true(ok, 0)
    ledger.threshold("n3", n3, "c_2 |alpha|^((delta_a - 1) n) <= |A_1| / 2")
    return ledger


# -- lower gap constants ------------------------------------------------------------

def _log_abs_bound(z) -> arb:
    """Upper bound for |log z| (principal branch): sqrt(log^2|z| + pi^2)."""
    la = abs(z).log()
    return (la * la + PI * PI).sqrt().upper()


def _positive_height(eta: AlgebraicNumber, precision: int) -> arb:
    tol = 1e-20
    for _ in range(8):
        h = weil_height(eta, tol, precision)
        if h > 0:
            return h
        tol /= 1e10
    raise PrecisionExceeded("height not certified positive")


def _main_part(binet: BinetDecomposition, m: int):
    i, j = binet.profile.dominant
    roots = binet.roots
    return (binet.coefficients[i][0] * roots[i] ** m + binet.coefficients[j][0] * roots[j] ** m)


def lower_gap_constants(binet_b: BinetDecomposition, eta1: AlgebraicNumber,
                        ledger: Ledger, scan_cap: int = 20000) -> Ledger:
    """c_6, c_7 and m_0 for r^(m - c_6 log m) < |B_1 beta_1^m + B_2 beta_2^m| < c_7 r^m.

    With eta_1 = beta_2/beta_1 and eta_2 = -B_2/B_1 the main part equals
    B_1 beta_1^m (1 - eta_2 eta_1^m), and Matveev (t = 2, b = (m, 1), B = m,
    d <= 2 l!) bounds the last factor below by exp(-K (1 + log 2m)).  For
    m >= 3, 1 + log 2m <= (1 + (1 + log 2)/log 3) log m, which gives c_6.
    """
    pb = binet_b.profile
    i, j = pb.dominant
    B1 = binet_b.coefficients[i][0]
    B2 = binet_b.coefficients[j][0]
    absB1 = abs(B1)
    c7 = ((absB1.upper() + abs(B2).upper()) * (1 + SLACK)).upper()
    ledger.put("c7", c7, "upper")
    if abs(B2) == 0:
        ledger.put("c6", arb(0), "upper", "B_2 = 0: the main part is exactly B_1 beta_1^m")
        ledger.threshold("m0", 1)
        return ledger
    l = pb.degree
    d = 2 * math.factorial(l)
    h_eta1 = _positive_height(eta1, binet_b.precision)
    h_ratio = binet_b.heights["B2/B1"]
    inp = MatveevInput.from_data(
        d, 3,
        heights=(h_eta1.upper(), h_ratio),
        log_bounds=(_log_abs_bound(eta1.ball), _log_abs_bound(-B2 / B1)),
    )
    K = -matveev_log_lower_bound(inp) / (1 + arb(2 * 3).log())
    log_r = pb.dominant_modulus.log()
    log3 = arb(3).log()
    neg_log_b1 = (-absB1.lower().log()).max(arb(0))
    c6 = ((K * (1 + (1 + arb(2).log()) / log3) + neg_log_b1 / log3) / log_r.lower()).upper()
    ledger.put("matveev_K_c6", K.upper(), "upper",
               f"d = 2 * {l}! = {d}; weights from {', '.join(inp.provenance)}")
    ledger.put("h_beta2_over_beta1", h_eta1, "value")
    ledger.put("c6", c6, "upper", "derived in-house from Matveev with t = 2")
    m0_height = max(3, int((h_ratio / h_eta1.lower()).upper().floor().unique_fmpz()) + 1)
    ledger.threshold("m0_height", m0_height,
                     "eta_1^m = 1/eta_2 forces m h(eta_1) = h(B_2/B_1)")
    exceptions = []
    if m0_height <= scan_cap:
        with working_precision(binet_b.precision):
            for m in range(3, m0_height):
                if not abs(_main_part(binet_b, m)) > 0:
                    exceptions.append(m)
        m0 = max(exceptions) + 1 if exceptions else 3
        ledger.notes["m0"] = (f"scanned 3 <= m < {m0_height}; "
                              f"main part undecided at {exceptions}" if exceptions
                              else f"scanned 3 <= m < {m0_height}; main part nonzero throughout")
    else:
        m0 = m0_height
        ledger.notes["m0"] = "scan skipped (m0_height above the scan cap)"
    ledger.threshold("m0", m0)
    ledger.notes["m0_exceptions"] = json.dumps(exceptions)
    return ledger


def complex_side_thresholds(binet_b: BinetDecomposition, ledger: Ledger) -> Ledger:
    """m_1 (lower bound with 2 c_6) and m_upper (|b_m| < 2 c_7 r^m)."""
    pb = binet_b.profile
    L = pb.dominant_modulus.log()
    c5, c6, c7 = ledger["c5"], ledger["c6"], ledger["c7"]
    one_minus = 1 - ledger["delta_b"]
    m0 = ledger.thresholds["m0"]
    if c5 == 0:
        m1 = max(m0, 2)
    else:
        if c6 * L * arb(3).log() < arb(2).log():
            raise PrecisionExceeded("c_6 too small for the halving step")
        rhs = (2 * c5).log()

        def ok(m: int) -> bool:
            return _nonneg(one_minus * m * L - c6 * L * _log(m) - rhs)

        def slope(m: int) -> bool:
            return _nonneg(one_minus * m - c6)

        m1 = eventually(ok, slope, max(m0, 3))
    ledger.threshold("m1", m1, "r^(m - c_6 log m) / 2 >= c_5 r^(delta_b m)")
    if c5 == 0:
        mu = 0
    else:
        rhs = (c5 / c7).log()
        mu = first_true(lambda m: _nonneg(one_minus * m * L - rhs), 0)
    ledger.threshold("m_upper", mu, "c_5 r^(delta_b m) <= c_7 r^m")
    return ledger


# -- exponent gap constants -----------------------------------------------------------

def exponent_gap_constants(binet_a: BinetDecomposition, binet_b: BinetDecomposition,
                           theta: Fraction, ledger: Ledger) -> Ledger:
    A1 = binet_a.dominant_abs[0]
    pb = binet_b.profile
    absB1 = abs(binet_b.coefficients[pb.dominant[0]][0])
    log_a = binet_a.profile.dominant_modulus.log()
    th = arb(theta.numerator) / theta.denominator
    c8 = ((ledger["c7"].log() - (A1.lower() / 2).log()) / log_a).upper().max(arb(0))
    c9 = ((3 * A1.upper() / 2).log() / log_a).upper()
    c6 = ledger["c6"]
    c10 = (c6 * th + c9.max(arb(0))).upper()
    ledger.put("c8", c8, "upper")
    ledger.put("c9", c9, "upper", "may be negative; only max(c_9, 0) enters c_10")
    ledger.put("c10", c10, "upper", "c_6 theta + max(c_9, 0)")
    ledger.put("c10_c4_variant", (ledger["c4"] * th + c9).upper(), "upper",
               "printed form c_4 delta + c_9, recorded only")
    c11 = ((1 - ledger["delta_b"].upper()) / (4 * th)).lower()
    ledger.put("c11", c11, "lower", "(1 - delta_b) / (4 theta), exponent in base r")
    c_rem = arb(1).max(ledger["c4"]).upper()
    ledger.put("c_rem", c_rem, "upper", "|a_n|^(1 - eps) <= max(1, c_4) |alpha|^(n - c_0 log^2 n)")
    alpha_c8 = (c8 * log_a).exp()
    ledger.put("c12", (2 * alpha_c8 * c_rem / absB1.lower()).upper(), "upper",
               "uses max(1, c_4) where the printed form has c_3^(1/2)")
    ledger.put("c12_printed", (2 * alpha_c8 * ledger["c3"].sqrt() / absB1).upper(), "upper",
               "printed 2 |alpha|^c_8 c_3^(1/2) / |B_1|, recorded only")
    m_d1 = max(c8 / th, (2 * c10 / th) ** 2)
    ledger.threshold("m_delta1", int(m_d1.upper().floor().unique_fmpz()) + 1,
                     "m > max(c_8 / theta, (2 c_10 / theta)^2)")
    printed = max(c8 / (2 * th), (2 * c10 / th) ** 2)
    ledger.threshold("m_delta1_printed", int(printed.upper().floor().unique_fmpz()) + 1,
                     "printed max(c_8 / (2 theta), (2 c_10 / theta)^2), recorded only")
    return ledger


# -- final constants ---------------------------------------------------------------------

def _cubic_discriminant_is_square(g: IntPoly) -> bool:
    n = g.degree
    disc = resultant(g, g.derivative()) * (-1) ** (n * (n - 1) // 2)
    lc = g.leading
    if disc % lc:
        return False
    disc //= lc
    return disc > 0 and math.isqrt(disc) ** 2 == disc


def splitting_degree_bound(polys: list[IntPoly]) -> tuple[int, list[str]]:
    """Upper bound for the degree of the compositum of the splitting fields."""
    seen: list[IntPoly] = []
    total, notes = 1, []
    for f in polys:
        _, factors = f.to_flint().factor()
        for fac, _ in factors:
            g = IntPoly.from_flint(fac).primitive()
            if g.degree < 1:
                continue
            rg = reverse(g).primitive() if g[0] else g
            if g in seen or rg in seen:
                notes.append(f"{g}: splitting field already counted")
                continue
            seen.append(g)
            if g.degree == 3 and _cubic_discriminant_is_square(g):
                bound = 3
            else:
                bound = math.factorial(g.degree)
            notes.append(f"{g}: {bound}")
            total *= bound
    return total, notes


def final_constants(spec_a: RecurrenceSpec, spec_b: RecurrenceSpec,
                    binet_a: BinetDecomposition, binet_b: BinetDecomposition,
                    alpha: AlgebraicNumber, beta1: AlgebraicNumber,
                    mode: str, ledger: Ledger) -> Ledger:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    precision = binet_a.precision
    log2 = arb(2).log()
    log_a = binet_a.profile.dominant_modulus.log()
    h_alpha = weil_height(alpha, 1e-30, precision).upper()
    h_beta = weil_height(beta1, 1e-30, precision).upper()
    ledger.put("h_alpha1", h_alpha, "upper")
    ledger.put("h_beta1", h_beta, "upper")
    h_ab = height_calculus_bound(Div(Leaf(binet_a.heights["A1"]), Leaf(binet_b.heights["B1"])))
    ledger.put("h_A1_over_B1", h_ab, "upper", "Cramer determinant bounds, quotient rule")
    h_w = binet_b.heights["B2/B1"]
    c13 = (2 * h_ab + (2 * log2 + h_w) / 2 + 5 * log2 / 2 + 2 * h_alpha * ledger["c8"]).upper()
    ledger.put("c13", c13, "upper",
               "lambda_1 = (x + sqrt(x^2 - 4w)) / 2: 2h(x) + h(4w)/2 + (5/2) log 2")
    c14 = (2 * h_alpha * ledger["c10"]).upper()
    ledger.put("c14", c14, "upper")
    K2 = matveev_constant(2)
    lam_log = (log2 * log2 + PI * PI).sqrt().upper()  # 1/2 <= |lambda_1| <= 3/2

    split, split_notes = splitting_degree_bound([char_poly(spec_a), char_poly(spec_b)])
    d_t = 4 * split
    A1w_t = (2 * d_t * h_beta).max(PI).max(arb(0.16)).upper()
    if not d_t * c13 >= lam_log:
        raise PrecisionExceeded("Matveev weight floor for lambda_1 not met")
    dt = arb(d_t)
    c15_t = (2 * K2 * dt * dt * (1 + dt.log()) * A1w_t * dt * c14).upper()
    ledger.put("c15_tightened", c15_t, "upper",
               f"d = 4 * {split} from splitting fields ({'; '.join(split_notes)})")
    kl = math.factorial(spec_a.order) * math.factorial(spec_b.order)
    d_f = 4 * kl
    pf_reasons = []
    if 1 + math.log(d_f) > 2 * math.log(kl):
        pf_reasons.append(f"1 + log(4 k! l!) > 2 log(k! l!) for k! l! = {kl}")
    if not 2 * d_f * h_beta >= PI:
        pf_reasons.append("8 k! l! h(beta_1) below the |log z| weight")
    if not d_f * c13 >= lam_log:
        pf_reasons.append("4 k! l! c_13 below the |log lambda_1| weight")
    if not pf_reasons:
        c15_pf = (arb(3) ** arb(6.5) * 2 ** 11 * arb(30) ** 6 * arb(kl) ** 4 * arb(kl).log()
                  * h_beta * c14).upper()
        ledger.put("c15_paper_faithful", c15_pf, "upper")
    else:
        ledger.notes["c15_paper_faithful"] = "undefined: " + "; ".join(pf_reasons)
    if mode == "paper_faithful":
        if pf_reasons:
            raise ModeRefused("; ".join(pf_reasons))
        c15 = ledger["c15_paper_faithful"]
    else:
        c15 = c15_t
    ledger.put("c15", c15, "upper", f"mode {mode}")
    ledger.put("c16", c15 * c13 / c14, "upper", "c_15 c_13 / c_14, coefficient of log m")
    c0 = ceil_int(9 * c15 / log_a.lower())
    ledger.put("c0", arb(c0), "upper", "ceil(9 c_15 / log|alpha_1|)")
    return ledger


# -- thresholds -----------------------------------------------------------------------------

def main_thresholds(binet_a: BinetDecomposition, binet_b: BinetDecomposition,
                    theta: Fraction, ledger: Ledger) -> Ledger:
    """Every remaining "n large enough" step of the argument, and c_1."""
    log_a = binet_a.profile.dominant_modulus.log().lower()
    L = binet_b.profile.dominant_modulus.log().lower()
    th = arb(theta.numerator) / theta.denominator
    A1 = binet_a.dominant_abs[0]
    c0 = ledger["c0"]
    c2, c3, c4, c5 = ledger["c2"], ledger["c3"], ledger["c4"], ledger["c5"]
    c6, c7, c11, c12 = ledger["c6"], ledger["c7"], ledger["c11"], ledger["c12"]
    c15, c16, c_rem = ledger["c15"], ledger["c16"], ledger["c_rem"]
    delta_a = ledger["delta_a"].upper()
    n3 = ledger.thresholds["n3"]

    def sq_log(n):
        x = _log(n)
        return x * x

    def c0_slope(a: arb):
        # a n - c0 log^2 n increases once a >= 2 c0 log n / n
        return lambda n: n >= 3 and _nonneg(a * n - 2 * c0 * _log(n))

    ledger.threshold("n_eps", eventually(lambda n: _nonneg(n - c0 * sq_log(n)), c0_slope(arb(1)), 3),
                     "c_0 log^2 n <= n, so the exponent 1 - c_0 log^2 n / n is >= 0")
    lc3 = c3.log().min(arb(0))
    ledger.threshold("n_half", first_true(
        lambda n: n >= max(n3, 3) and _nonneg(c0 * sq_log(n) * (log_a + lc3 / n) - arb(2).log()),
        max(n3, 3)), "|a_n|^(-eps) <= 1/2, so |b_m| >= |a_n| / 2 on solutions")
    tails = c2 + c5
    if tails > 0:
        rhs1 = (tails / c_rem).log()
        n_c1 = eventually(lambda n: _nonneg(((1 - delta_a) * n - c0 * sq_log(n)) * log_a - rhs1),
                          c0_slope(1 - delta_a), 3)
    else:
        n_c1 = 3
    rhs2 = (4 * c_rem / A1.lower()).log()
    n_c2 = first_true(lambda n: n >= 2 and bool(c0 * sq_log(n) * log_a > rhs2), 2)
    ledger.threshold("n_caseI", max(n_c1, n_c2),
                     "(c_2 + c_5)|alpha|^((delta_a - 1) n) <= c_rem |alpha|^(-c_0 log^2 n) "
                     "and 2 c_rem |alpha|^(-c_0 log^2 n) < |A_1| / 2")
    ledger.threshold("n_c11", eventually(
        lambda n: _nonneg(c11 * n - 2 * c6 * (2 * n / th).log()),
        lambda n: _nonneg(c11 * n - 2 * c6), 1), "2 c_6 log(2n / theta) <= c_11 n")
    if tails > 0:
        rhs3 = (4 * tails * A1.upper() / c_rem).log()
        n_c2b = eventually(lambda n: _nonneg((th * c11 * n - c0 * sq_log(n)) * log_a - rhs3),
                           c0_slope(th * c11), 3)
    else:
        n_c2b = 3
    ledger.threshold("n_caseII", n_c2b,
                     "4 (c_2 + c_5)|A_1| r^(-c_11 n) <= c_rem |alpha|^(-c_0 log^2 n)")
    rhs4 = (2 * c12.sqrt()).log()
    ledger.threshold("n_lambda", first_true(
        lambda n: n >= 2 and _nonneg(c0 * log_a * sq_log(n) / 2 - rhs4), 2),
        "c_12^(1/2) |alpha|^(-c_0 log^2 n / 2) <= 1/2, so |lambda_1| >= 1/2")
    ledger.threshold("n_ratio", int(max(2 / th, th / 2).upper().floor().unique_fmpz()) + 1,
                     "n > max(2/theta, theta/2) so (log n + |log(2/theta)|)^2 <= 4 log^2 n")
    L12 = rhs4.max(arb(0))
    x0 = (2 * c16 + (4 * c16 * c16 + 2 * c15 * L12).sqrt()) / c15
    ledger.threshold("n_final", ceil_int(x0.exp()) + 1,
                     "c_15 log^2 n / 2 > 2 c_16 log n + log(2 sqrt c_12)")
    printed = ((c16 + (2 * c12.sqrt()).log()) / c15).sqrt().exp()
    ledger.threshold("n_final_printed", ceil_int(printed) + 1,
                     "printed exp sqrt((c_16 + log(2 sqrt c_12)) / c_15), recorded only")
    ledger.threshold("m_matveev", 6, "1 + log 2m <= 2 log m")
    m_half = eventually(lambda m: _nonneg(m - 4 * c6 * _log(m)),
                        lambda m: _nonneg(m - 4 * c6), 3) if c6 > 0 else 3
    ledger.threshold("m_half", m_half, "m - 2 c_6 log m >= m / 2")
    M = max(ledger.thresholds[k] for k in ("m0", "m1", "m_upper", "m_delta1", "m_matveev"))
    ledger.threshold("m_star", M, "largest m-side threshold")
    c_nm = ((2 * (c5 + c7) / c3).log().max(arb(0)) / L).upper()
    ledger.put("c_nm", c_nm, "upper", "m >= n / theta - c_nm on solutions with n >= n_3")
    n_from_m = ceil_int(th * (M + c_nm)) + 1
    ledger.threshold("n_from_m", n_from_m, "n large enough that m exceeds m_star")
    n_keys = ("n3", "n_eps", "n_half", "n_caseI", "n_c11", "n_caseII", "n_lambda",
              "n_ratio", "n_final", "n_from_m")
    n_star = max(ledger.thresholds[k] for k in n_keys)
    ledger.threshold("n_star", n_star, "largest n-side threshold")
    c_x = ((2 * c4).log().max(arb(0)) / log_a).upper()
    m_b = ceil_int(2 * (n_star + c_x) / th) + 1
    ledger.threshold("m_from_n", m_b, "m large enough that n exceeds n_star")
    ledger.threshold("c1", max(n_star, m_b, m_half, M), "max{n, m} > c_1 covers every step")
    return ledger


# -- certificate -----------------------------------------------------------------------------

@dataclass(frozen=True)
class CertifyConfig:
    precision: int = DEFAULT_PRECISION
    max_denominator: int = 64
    mode: str = "tightened"
    auto_orient: bool = True
    scan_cap: int = 20000

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.precision < 64 or self.max_denominator < 1:
            raise ValueError("precision >= 64 and max_denominator >= 1 required")


ANNOTATIONS = {
    "delta_convention": "midpoint",
    "exponent_ratio": "theta = log|beta_1| / log|alpha_1| = p/q enters n - theta m; delta = q/p",
    "gamma_nonzero": "Gamma != 0 for large n rests on prime-divisor growth of B_1 beta_1^m + "
                     "B_2 beta_2^m; not checked at runtime",
    "c6_source": "Matveev with t = 2 applied to 1 - eta_2 eta_1^m",
    "c16_form": "log|Gamma| > -c_15 log^2 m - c_16 log m",
}


@dataclass
class BoundCertificate:
    spec_a: RecurrenceSpec
    spec_b: RecurrenceSpec
    swapped: bool
    checklist: dict
    witness: dict
    summaries: dict
    ledger: Ledger
    mode: str
    precision: int
    config: dict
    annotations: dict = field(default_factory=lambda: dict(ANNOTATIONS))
    profiles: tuple | None = field(default=None, compare=False, repr=False)
    binets: tuple | None = field(default=None, compare=False, repr=False)
    # decimal forms read from JSON, re-emitted verbatim so loading is lossless
    serialized: dict | None = field(default=None, compare=False, repr=False)

    @property
    def c0(self) -> int:
        return int(self.ledger["c0"].mid().unique_fmpz())

    @property
    def c1(self) -> int:
        return self.ledger.thresholds["c1"]

    @property
    def delta(self) -> Fraction:
        return Fraction(self.witness["delta"])

    @property
    def theta(self) -> Fraction:
        return 1 / self.delta

    def constant(self, name: str) -> arb:
        return self.ledger[name]

    def to_dict(self) -> dict:
        bits = self.precision
        return {
            "schema_version": SCHEMA_VERSION,
            "generator": f"recurcommon {__version__}",
            "pair": {
                "A": {"spec": self.spec_a.to_dict(), "sha256": self.spec_a.digest()},
                "B": {"spec": self.spec_b.to_dict(), "sha256": self.spec_b.digest()},
                "swapped": self.swapped,
            },
            "hypotheses": self.checklist,
            "dependence_witness": self.witness,
            "summaries": self.summaries,
            "constants": {k: (self.serialized or {}).get(k)
                          or {**ball_to_json(v, bits), "kind": self.ledger.kinds[k]}
                          for k, v in self.ledger.constants.items()},
            "thresholds": {k: str(v) for k, v in self.ledger.thresholds.items()},
            "notes": dict(self.ledger.notes),
            "c0": str(self.c0),
            "c1": str(self.c1),
            "mode": self.mode,
            "precision_bits": bits,
            "config": self.config,
            "annotations": self.annotations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "BoundCertificate":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError("unsupported certificate schema version")
        ledger = Ledger()
        for k, v in data["constants"].items():
            ledger.put(k, ball_from_json(v), v["kind"])
        ledger.thresholds = {k: int(v) for k, v in data["thresholds"].items()}
        ledger.notes = dict(data["notes"])
        pair = data["pair"]
        return cls(
            spec_a=RecurrenceSpec.from_dict(pair["A"]["spec"]),
            spec_b=RecurrenceSpec.from_dict(pair["B"]["spec"]),
            swapped=pair["swapped"],
            checklist=data["hypotheses"],
            witness=data["dependence_witness"],
            summaries=data["summaries"],
            ledger=ledger,
            mode=data["mode"],
            precision=int(data["precision_bits"]),
            config=data["config"],
            annotations=data["annotations"],
            serialized={k: dict(v) for k, v in data["constants"].items()},
        )

    @classmethod
    def from_json(cls, text: str) -> "BoundCertificate":
        return cls.from_dict(json.loads(text))


def _profile_summary(p: DominanceReport, bits: int) -> dict:
    return {
        "char_poly": str(p.poly),
        "classification": p.tag.value,
        "dominant_indices": list(p.dominant),
        "dominant_multiplicity": p.dominant_multiplicity,
        "roots": [{"re": ball_to_json(r.real, bits), "im": ball_to_json(r.imag, bits),
                   "multiplicity": m} for r, m in p.rootset.roots],
        "decay": ball_to_json(p.decay, bits) if p.decay is not None else None,
        "reason": p.reason,
    }


def _check(checklist: dict, name: str, ok: bool, detail: str) -> None:
    checklist[name] = {"verdict": "pass" if ok else "fail", "detail": detail}
    if not ok:
        raise HypothesisFailed(name, detail, checklist)


def certify(spec_a: RecurrenceSpec, spec_b: RecurrenceSpec,
            config: CertifyConfig | None = None) -> BoundCertificate:
    """Check every hypothesis of the main theorem and assemble the constants ledger."""
    cfg = config or CertifyConfig()
    bits = cfg.precision
    pa = dominance_profile(char_poly(spec_a), bits)
    pb = dominance_profile(char_poly(spec_b), bits)
    swapped = False
    if cfg.auto_orient and pa.tag is Dominance.COMPLEX_PAIR and pb.tag is Dominance.REAL:
        spec_a, spec_b, pa, pb = spec_b, spec_a, pb, pa
        swapped = True
    checklist: dict = {}
    _check(checklist, "type_A_real_dominant", pa.tag is Dominance.REAL,
           f"A side is {pa.tag.value}" + (f" ({pa.reason})" if pa.reason else ""))
    _check(checklist, "type_B_complex_pair_dominant", pb.tag is Dominance.COMPLEX_PAIR,
           f"B side is {pb.tag.value}" + (f" ({pb.reason})" if pb.reason else ""))
    _check(checklist, "m1_simple", pa.dominant_multiplicity == 1,
           f"alpha_1 has multiplicity {pa.dominant_multiplicity}")
    _check(checklist, "n1_simple", pb.dominant_multiplicity == 1,
           f"beta_1 has multiplicity {pb.dominant_multiplicity}")

    with working_precision(bits):
        alpha = select_root(char_poly(spec_a), pa.dominant_root, bits)
        beta1 = select_root(char_poly(spec_b), pb.rootset.balls[pb.dominant[0]], bits)
        beta2 = beta1.conjugate()
        eta1 = ratio_min_poly(beta2, beta1)
        rou, order = is_root_of_unity(eta1)
        _check(checklist, "beta2_over_beta1_not_root_of_unity", not rou,
               f"minimal polynomial {eta1.minpoly}" + (f", root of unity of order {order}" if rou else ""))
        ratio_mod = abs(alpha.ball) / abs(beta1.ball)
        if ratio_mod > 1 or ratio_mod < 1:
            _check(checklist, "alpha1_over_beta1_not_root_of_unity", True,
                   "|alpha_1| != |beta_1| certified")
        else:
            ab = ratio_min_poly(alpha, beta1)
            rou, order = is_root_of_unity(ab)
            _check(checklist, "alpha1_over_beta1_not_root_of_unity", not rou,
                   f"minimal polynomial {ab.minpoly}" + (f", order {order}" if rou else ""))

    ba = binet_data(spec_a, pa, bits)
    bb = binet_data(spec_b, pb, bits)
    _check(checklist, "A1_nonzero", dominant_coefficient_nonzero(spec_a, ba),
           f"|A_1| in {ba.dominant_abs[0].str(10)}")
    _check(checklist, "B1_nonzero", dominant_coefficient_nonzero(spec_b, bb),
           f"|B_1| in {bb.dominant_abs[0].str(10)}")

    with working_precision(bits):
        alpha_abs = negate(alpha) if alpha.ball.real < 0 else alpha
        gamma = product(beta1, beta2)
        search = multiplicative_dependence(alpha_abs, gamma, cfg.max_denominator, bits)
    if search.witness is None:
        checklist["multiplicative_dependence"] = {
            "verdict": "undecided", "detail": search.transcript[-1]}
        raise DependenceUnknown(search.transcript, cfg.max_denominator)
    w = search.witness
    checklist["multiplicative_dependence"] = {
        "verdict": "pass", "detail": w.transcript[-1]}
    witness = {"p": w.p, "q": w.q, "delta": str(w.delta), "theta": str(1 / w.delta),
               "identity": f"|alpha_1|^{2 * w.p} = (beta_1 beta_2)^{w.q}",
               "transcript": list(search.transcript)}
    theta = Fraction(w.p, w.q)

    with working_precision(bits):
        ledger = growth_constants(ba, bb)
        lower_gap_constants(bb, eta1, ledger, cfg.scan_cap)
        complex_side_thresholds(bb, ledger)
        exponent_gap_constants(ba, bb, theta, ledger)
        final_constants(spec_a, spec_b, ba, bb, alpha, beta1, cfg.mode, ledger)
        main_thresholds(ba, bb, theta, ledger)

    summaries = {
        "A": _profile_summary(pa, bits),
        "B": _profile_summary(pb, bits),
        "A1_abs": ball_to_json(ba.dominant_abs[0], bits),
        "B1_abs": ball_to_json(bb.dominant_abs[0], bits),
        "heights": {"A1": ball_to_json(ba.heights["A1"], bits),
                    "B1": ball_to_json(bb.heights["B1"], bits),
                    "B2/B1": ball_to_json(bb.heights["B2/B1"], bits)},
        "alpha1_minpoly": str(alpha.minpoly),
        "beta1_minpoly": str(beta1.minpoly),
        "beta2_over_beta1_minpoly": str(eta1.minpoly),
    }
    config = {"precision_bits": bits, "max_denominator": cfg.max_denominator,
              "mode": cfg.mode, "auto_orient": cfg.auto_orient, "scan_cap": cfg.scan_cap}
    return BoundCertificate(spec_a, spec_b, swapped, checklist, witness, summaries, ledger,
                            cfg.mode, bits, config, profiles=(pa, pb), binets=(ba, bb))
