import json
import math
from fractions import Fraction

import pytest
from flint import arb
from hypothesis import given
from hypothesis import strategies as st

from recurcommon.baker import (
    BoundCertificate,
    CertifyConfig,
    DependenceUnknown,
    HypothesisFailed,
    MatveevInput,
    ModeRefused,
    certify,
    eventually,
    first_true,
    growth_constants,
    matveev_log_lower_bound,
    splitting_degree_bound,
)
from recurcommon.numerics import IntPoly, working_precision
from recurcommon.recurrence import RecurrenceSpec, binet_data

from conftest import pow2, trib_backward, trib_forward, x2p4


def matveev_oracle(t, d, B, weights):
    return -(3 * 30 ** (t + 4) * (t + 1) ** 5.5 * d * d * (1 + math.log(d))
             * (1 + math.log(t * B)) * math.prod(weights))


@pytest.mark.parametrize("t,d,B,expect", [(1, 1, 3, -6.92e9), (2, 2, 10, -2.49e13)])
def test_matveev_examples(t, d, B, expect):
    v = float(matveev_log_lower_bound(MatveevInput(t, d, B, (arb(1),) * t)).mid())
    assert abs(v / expect - 1) < 1e-2
    assert abs(v / matveev_oracle(t, d, B, [1] * t) - 1) < 1e-12


@given(st.integers(3, 10 ** 8), st.integers(1, 100))
def test_matveev_strictly_decreasing_in_B(B, step):
    lo = matveev_log_lower_bound(MatveevInput(2, 4, B, (arb(1), arb(2))))
    hi = matveev_log_lower_bound(MatveevInput(2, 4, B + step, (arb(1), arb(2))))
    assert hi < lo


@pytest.mark.parametrize("kwargs", [
    dict(t=0, d=1, B=3, weights=()),
    dict(t=1, d=0, B=3, weights=(arb(1),)),
    dict(t=1, d=1, B=2, weights=(arb(1),)),
    dict(t=1, d=1, B=3, weights=(arb(0.1),)),
    dict(t=2, d=1, B=3, weights=(arb(1),)),
])
def test_matveev_input_invariants(kwargs):
    with pytest.raises(ValueError):
        MatveevInput(**kwargs)


def test_matveev_weights_from_data():
    inp = MatveevInput.from_data(4, 10, [arb(0.01), arb(2)], [arb(0.5), arb(1)])
    assert [float(w.mid()) for w in inp.weights] == pytest.approx([0.5, 8.0])
    assert inp.provenance == ("|log|", "d*h")
    floor = MatveevInput.from_data(1, 10, [arb(0.01)], [arb(0.01)])
    assert float(floor.weights[0].mid()) == pytest.approx(0.16)


@given(st.integers(0, 10 ** 30), st.integers(0, 1000))
def test_first_true_finds_threshold(n0, lo):
    assert first_true(lambda n: n >= n0, lo) == max(n0, lo)


def test_eventually_skips_initial_dip():
    # f(n) = (n - 50)^2 - 100 is >= 0 at n = 0, dips, then grows from 50 on
    f = lambda n: (n - 50) ** 2 - 100
    assert eventually(lambda n: f(n) >= 0, lambda n: n >= 50, 0) == 60


def test_growth_constants_without_tail():
    ledger = growth_constants(binet_data(pow2()), binet_data(x2p4()))
    assert ledger["c2"] == 0 and ledger["c5"] == 0
    assert ledger["c3"].overlaps(arb(0.5))
    assert ledger["c4"].overlaps(arb(1))
    assert ledger.thresholds["n3"] == 0


def test_splitting_degree_bound():
    # cyclic cubic: discriminant 49 is a square
    assert splitting_degree_bound([IntPoly([1, -2, -1, 1])])[0] == 3
    assert splitting_degree_bound([IntPoly([-1, -1, -1, 1])])[0] == 6
    assert splitting_degree_bound([IntPoly([-2, 1]), IntPoly([4, 0, 1])])[0] == 2


# -- certification ------------------------------------------------------------------

def test_tribonacci_pair_certifies(trib_cert):
    assert (trib_cert.witness["p"], trib_cert.witness["q"]) == (1, 2)
    assert trib_cert.delta == 2 and trib_cert.theta == Fraction(1, 2)
    assert all(v["verdict"] == "pass" for v in trib_cert.checklist.values())
    assert trib_cert.c0 > 0 and trib_cert.c1 > 10 ** 10


def test_counterexample_rejected_on_root_of_unity():
    with pytest.raises(HypothesisFailed) as exc:
        certify(pow2(), x2p4())
    assert exc.value.which == "beta2_over_beta1_not_root_of_unity"
    assert "order 2" in exc.value.detail


def test_double_root_rejected():
    with pytest.raises(HypothesisFailed) as exc:
        certify(RecurrenceSpec((-4, 4), (0, 1)), x2p4())
    assert exc.value.which == "m1_simple"


def test_wrong_type_rejected():
    with pytest.raises(HypothesisFailed) as exc:
        certify(pow2(), RecurrenceSpec((3,), (1,)))
    assert exc.value.which == "type_B_complex_pair_dominant"


def test_zero_dominant_coefficient_rejected():
    # a_n = 1 for all n: characteristic (X - 2)(X - 1), initial (1, 1) kills the 2^n part
    with pytest.raises(HypothesisFailed) as exc:
        certify(RecurrenceSpec((-2, 3), (1, 1)), trib_backward())
    assert exc.value.which in ("type_A_real_dominant", "A1_nonzero")


def test_irrational_exponent_ratio_is_undecided():
    with pytest.raises(DependenceUnknown) as exc:
        certify(pow2(), RecurrenceSpec((-3, 1), (2, 1)))
    assert exc.value.max_denominator == 64
    assert "no dependence with denominator <= 64" in exc.value.transcript[-1]


def test_pair_order_is_normalised():
    cert = certify(trib_backward(), trib_forward())
    assert cert.swapped and cert.spec_a == trib_forward()


def test_ledger_identities(trib_cert):
    L = trib_cert.ledger
    with working_precision(256):
        c16 = L["c16"]
        ratio = L["c15"] * L["c13"] / L["c14"]
        assert c16.overlaps(ratio)
        assert float(c16.rad() / abs(c16.mid())) <= 2.0 ** -50
        alpha = trib_cert.profiles[0].dominant_modulus
        assert arb(trib_cert.c0) >= 9 * L["c15"] / alpha.log()
        assert L["c15_tightened"] <= L["c15_paper_faithful"]


def test_paper_faithful_mode(trib_cert):
    cert = certify(trib_forward(), trib_backward(), CertifyConfig(mode="paper_faithful"))
    assert cert.ledger["c15"].overlaps(trib_cert.ledger["c15_paper_faithful"])
    assert cert.c0 >= trib_cert.c0


def test_paper_faithful_refused_when_undefined():
    # 2^n against X^2 + X + 2 (|beta|^2 = 2): k l = 2 is too small for the printed estimate
    a = RecurrenceSpec((2,), (1,))
    b = RecurrenceSpec((-2, -1), (1, 1))
    cert = certify(a, b)
    assert cert.witness["delta"] == "2"
    assert "c15_paper_faithful" not in cert.ledger.constants
    assert cert.ledger.notes["c15_paper_faithful"].startswith("undefined")
    with pytest.raises(ModeRefused):
        certify(a, b, CertifyConfig(mode="paper_faithful"))


def test_certificate_json_is_deterministic_and_round_trips(trib_cert):
    text = trib_cert.to_json()
    again = certify(trib_forward(), trib_backward()).to_json()
    assert text == again
    loaded = BoundCertificate.from_json(text)
    assert loaded.to_json() == text
    assert loaded.c0 == trib_cert.c0 and loaded.c1 == trib_cert.c1
    data = json.loads(text)
    assert data["schema_version"] and data["dependence_witness"]["delta"] == "2"


def test_certificate_rejects_unknown_schema(trib_cert):
    data = trib_cert.to_dict()
    data["schema_version"] = "999"
    with pytest.raises(ValueError):
        BoundCertificate.from_dict(data)
