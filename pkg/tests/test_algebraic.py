import math
import random
from fractions import Fraction

import mpmath
import pytest
from flint import acb, arb, fmpz_poly
from hypothesis import given, settings
from hypothesis import strategies as st

from recurcommon.algebraic import (
    Add,
    AlgebraicNumber,
    Div,
    Leaf,
    Mul,
    Pow,
    convergents,
    euler_phi,
    height_calculus_bound,
    inverse,
    is_one,
    is_root_of_unity,
    multiplicative_dependence,
    power,
    product,
    ratio_min_poly,
    root_of,
    weil_height,
)
from recurcommon.numerics import IntPoly

LOG2 = math.log(2)


def alg(coeffs, guess) -> AlgebraicNumber:
    return root_of(IntPoly(coeffs), guess)


def trib_alpha():
    return alg([-1, -1, -1, 1], 1.84)


def trib_beta():
    # dominant root of X^3 + X^2 + X - 1, upper half plane
    return alg([-1, 1, 1, 1], complex(-0.77, 1.12))


def random_algebraic(rng: random.Random) -> AlgebraicNumber:
    while True:
        deg = rng.randint(1, 3)
        coeffs = [rng.randint(-6, 6) for _ in range(deg)] + [rng.randint(1, 4)]
        if coeffs[0] == 0:
            continue
        f = fmpz_poly(coeffs)
        _, facs = f.factor()
        if len(facs) != 1 or facs[0][1] != 1:
            continue
        roots = f.complex_roots()
        z = roots[rng.randrange(len(roots))][0]
        return root_of(IntPoly(coeffs), complex(z.real.mid()) + 1j * float(z.imag.mid()))


def test_heights_of_small_numbers():
    assert abs(float(weil_height(AlgebraicNumber.rational(2)).mid()) - LOG2) < 1e-10
    assert abs(float(weil_height(alg([2, -2, 1], 1 + 1j)).mid()) - LOG2 / 2) < 1e-10
    assert weil_height(alg([1, 0, 1], 1j)).contains(0)


def test_height_of_rational_is_log_max():
    assert weil_height(AlgebraicNumber.rational(Fraction(-3, 7))).overlaps(arb(7).log())


def test_tribonacci_height_oracle():
    # h(alpha) = log(alpha) / 3 since the other conjugates lie inside the unit disc
    mpmath.mp.dps = 40
    a = mpmath.findroot(lambda x: x ** 3 - x ** 2 - x - 1, 1.8)
    assert abs(float(weil_height(trib_alpha()).mid()) - float(mpmath.log(a) / 3)) < 1e-12


def test_three_halves_power_rule_on_random_fixtures():
    # with zeta = eta^2, eta^3 is a value of zeta^(3/2)
    rng = random.Random(20240611)
    for _ in range(20):
        eta = random_algebraic(rng)
        zeta = power(eta, 2)
        lhs = weil_height(power(eta, 3))
        rhs = 3 * weil_height(zeta) / 2
        assert abs(float((lhs - rhs).mid())) < 1e-10


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-4, 4).filter(bool))
def test_integer_power_rule(seed, u):
    eta = random_algebraic(random.Random(seed))
    assert abs(float((weil_height(power(eta, u)) - abs(u) * weil_height(eta)).mid())) < 1e-10


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_ratio_with_itself_is_one(seed):
    eta = random_algebraic(random.Random(seed))
    if eta.minpoly == IntPoly([0, 1]):
        return
    assert is_one(ratio_min_poly(eta, eta))


def test_ratio_and_product_of_conjugates():
    r = alg([2, -2, 1], 1 + 1j)
    assert ratio_min_poly(r, r.conjugate()).minpoly == IntPoly([1, 0, 1])
    assert product(r, r.conjugate()).minpoly == IntPoly([-2, 1])


def test_tribonacci_beta_norm_is_alpha():
    b = trib_beta()
    gamma = product(b, b.conjugate())
    assert gamma.minpoly == IntPoly([-1, -1, -1, 1])
    assert is_one(ratio_min_poly(gamma, trib_alpha()))


def test_ratio_eta_over_theta_degree():
    q = ratio_min_poly(trib_alpha(), trib_beta())
    assert q.degree <= 9
    assert abs(float(abs(q.ball).mid()) - 1.839287 / 1.356203) < 1e-5


def test_height_calculus_rules():
    a, b = Leaf(arb(1)), Leaf(arb(2))
    cases = [(Add(a, b), 3 + arb(2).log()), (Mul(a, b), arb(3)), (Div(a, b), arb(3)),
             (Pow(b, Fraction(-3, 2)), arb(3))]
    for expr, exact in cases:
        bound = height_calculus_bound(expr)
        assert abs(float((bound - exact).mid())) < 1e-12


def test_height_calculus_bounds_true_height():
    eta, theta = trib_alpha(), AlgebraicNumber.rational(3)
    bound = height_calculus_bound(Mul(Leaf(weil_height(eta)), Leaf(weil_height(theta))))
    assert weil_height(product(eta, theta)) <= bound


@pytest.mark.parametrize("coeffs,guess,order", [
    ([1, 0, 1], 1j, 4),
    ([1, 1, 1], complex(-0.5, 0.866), 3),
    ([1, 1], -1, 2),
    ([-1, 1], 1, 1),
    ([1, -1, 1, -1, 1], complex(0.809, 0.588), 10),
])
def test_roots_of_unity(coeffs, guess, order):
    assert is_root_of_unity(alg(coeffs, guess)) == (True, order)


@pytest.mark.parametrize("coeffs,guess", [
    ([-2, 1], 2),
    ([1, -6, 1], complex(3.0, 0)),            # 3 + 2 sqrt 2
    ([1, -1, -1, -1, 1], complex(-0.651, 0.759)),  # Salem conjugate on the unit circle
    ([4, 0, 5], complex(0, 0.89)),            # modulus 1 roots, non-monic
])
def test_not_roots_of_unity(coeffs, guess):
    eta = alg(coeffs, guess)
    assert is_root_of_unity(eta) == (False, None)


def test_root_of_unity_has_zero_height():
    eta = alg([1, -1, 1, -1, 1], complex(0.809, 0.588))
    assert is_root_of_unity(eta)[0]
    assert weil_height(eta).contains(0)


def test_tribonacci_beta_ratio_not_root_of_unity():
    b = trib_beta()
    assert is_root_of_unity(ratio_min_poly(b.conjugate(), b)) == (False, None)


def test_euler_phi():
    assert [euler_phi(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_convergents_of_golden_ratio():
    assert convergents(Fraction(377, 233), 50) == [1, 2, Fraction(3, 2), Fraction(5, 3),
                                                    Fraction(8, 5), Fraction(13, 8),
                                                    Fraction(21, 13), Fraction(34, 21),
                                                    Fraction(55, 34)]


def test_dependence_examples():
    two, four = AlgebraicNumber.rational(2), AlgebraicNumber.rational(4)
    w = multiplicative_dependence(two, four).witness
    assert (w.p, w.q, w.delta) == (1, 1, 1)

    a = trib_alpha()
    b = trib_beta()
    w = multiplicative_dependence(a, product(b, b.conjugate())).witness
    assert (w.p, w.q, w.delta) == (1, 2, 2)

    res = multiplicative_dependence(two, AlgebraicNumber.rational(3), 64)
    assert res.witness is None
    assert "no dependence with denominator <= 64" in res.transcript[-1]


def test_dependence_witness_is_sound():
    # 8^2 = 4^3: log 4 / (2 log 8) = 1/3
    w = multiplicative_dependence(AlgebraicNumber.rational(8), AlgebraicNumber.rational(4)).witness
    assert (w.p, w.q) == (1, 3)
    assert 8 ** (2 * w.p) == 4 ** w.q


def test_inverse_of_tribonacci_root():
    inv = inverse(trib_alpha())
    assert inv.minpoly == IntPoly([-1, 1, 1, 1])
    assert (inv.ball * trib_alpha().ball).overlaps(acb(1))
