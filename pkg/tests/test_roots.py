import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recurcommon.numerics import IntPoly
from recurcommon.roots import (
    Dominance,
    decay_exponent,
    dominance_profile,
    is_certified_real,
    isolate_roots,
    magnitude_classes,
    refine_rootset,
)

TRIB = IntPoly([-1, -1, -1, 1])
TRIB_BACK = IntPoly([-1, 1, 1, 1])


def test_tribonacci_roots_enclose_mpmath():
    rs = isolate_roots(TRIB, 256)
    mpmath.mp.dps = 60
    ref = mpmath.polyroots([1, -1, -1, -1], maxsteps=200, extraprec=200)
    assert len(rs) == 3 and rs.multiplicities == [1, 1, 1]
    for z in ref:
        near = [b for b in rs.balls
                if abs(mpmath.mpc(b.real.mid().str(50, radius=False), b.imag.mid().str(50, radius=False)) - z) < 1e-40]
        assert len(near) == 1


def test_multiplicities_recovered():
    rs = isolate_roots(IntPoly([-2, 1]) ** 2 * IntPoly([1, 0, 1]))
    assert sorted(rs.multiplicities) == [1, 1, 2]


def test_real_roots_are_certified_real():
    rs = isolate_roots(TRIB)
    assert sum(is_certified_real(b) for b in rs.balls) == 1


@pytest.mark.parametrize("poly,tag", [
    (TRIB, Dominance.REAL),
    (TRIB_BACK, Dominance.COMPLEX_PAIR),
    (IntPoly([4, 0, 1]), Dominance.COMPLEX_PAIR),
    (IntPoly([-2, 1]), Dominance.REAL),
    (IntPoly([-4, 0, 1]), Dominance.OTHER),   # +-2 share the top modulus
    (IntPoly([1, 0, 0, 0, 1]), Dominance.OTHER),
])
def test_classification(poly, tag):
    assert dominance_profile(poly).tag is tag


def test_equal_moduli_decided_exactly():
    # X^3 + X^2 + X - 1: the complex pair has modulus alpha^(1/2) exactly, real root 1/alpha
    _, classes, _ = magnitude_classes(TRIB_BACK)
    assert [len(c) for c in classes] == [2, 1]


def test_tribonacci_decay_is_one_quarter():
    # |alpha_2|^2 = 1/alpha_1, so log|alpha_2| / log alpha_1 = -1/2
    delta = decay_exponent(dominance_profile(TRIB))
    assert delta.overlaps(0.25)
    assert float(delta.rad()) < 1e-60


def test_decay_without_subdominant_roots():
    assert decay_exponent(dominance_profile(IntPoly([-2, 1]))) == 0


def test_refine_keeps_order():
    rs = isolate_roots(TRIB, 128)
    fine = refine_rootset(rs, 1024)
    for a, b in zip(rs.balls, fine.balls):
        assert a.overlaps(b)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=2, max_size=5).filter(lambda c: c[0] != 0 and c[-1] != 0))
def test_root_balls_are_disjoint_and_count_degree(coeffs):
    f = IntPoly(coeffs)
    rs = isolate_roots(f)
    assert sum(rs.multiplicities) == f.degree
    balls = rs.balls
    assert all(not balls[i].overlaps(balls[j]) for i in range(len(balls)) for j in range(i))


def test_huge_nearly_equal_moduli_are_ordered():
    # roots 10^30 + 1 and 10^30 - 1 coincide as doubles
    f = IntPoly([10 ** 60 - 1, -2 * 10 ** 30, 1])
    prof = dominance_profile(f)
    assert prof.tag is Dominance.REAL
    assert prof.dominant_modulus > prof.second_magnitude
