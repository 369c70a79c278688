import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from stochorder import dist as D
from stochorder.dist import ClosedFormDist, DiscreteDist, InvalidDistribution, NonVanishingTail, NotConvex
from stochorder.pwfun import PLF, eval_plf, eval_step

from strategies import discrete


def phi(n):
    return DiscreteDist.from_pairs([(0, 1 - F(1, n)), (n, F(1, n))])


def test_validation_messages():
    with pytest.raises(InvalidDistribution, match="probabilities sum to 9/10 ≠ 1"):
        DiscreteDist(((0, F(1, 2)), (1, F(2, 5))))
    with pytest.raises(InvalidDistribution, match="negative"):
        DiscreteDist(((-1, 1),))
    with pytest.raises(InvalidDistribution):
        DiscreteDist(())


def test_from_pairs_merges_and_sorts():
    X = DiscreteDist.from_pairs([(2, F(1, 4)), (0, F(1, 2)), (2, F(1, 4)), (5, 0)])
    assert X.atoms == ((0, F(1, 2)), (2, F(1, 2)))


def test_cdf_examples():
    d1 = D.point_mass(1)
    assert eval_step(D.cdf(d1), F(1, 2)) == 0
    assert eval_step(D.cdf(d1), 1) == 1
    assert eval_step(D.cdf(phi(2)), 1) == F(1, 2)
    assert eval_step(D.cdf(D.point_mass(0)), 0) == 1
    C4 = D.cdf(phi(4))
    assert [eval_step(C4, t) for t in (0, 2, 4, 9)] == [F(3, 4), F(3, 4), 1, 1]


def test_quantile_examples():
    assert D.quantile(D.point_mass(1), F(1, 2)) == 1
    assert D.quantile(phi(2), F(1, 2)) == 0
    assert D.quantile(phi(2), F(3, 5)) == 2


def test_isf_examples():
    H1 = D.isf(D.point_mass(1))
    assert eval_plf(H1, F(1, 2)) == F(1, 2) and eval_plf(H1, 2) == 0
    assert D.isf(phi(2)) == PLF.make((0, 2), (1, 0), 0)
    assert D.isf(phi(4)) == PLF.make((0, 4), (1, 0), 0)
    assert eval_plf(D.isf(phi(2)), 1) == F(1, 2)


def test_dist_from_isf_examples():
    assert D.dist_from_isf(PLF.make((0, 1), (1, 0), 0)) == D.point_mass(1)
    X = D.dist_from_isf(PLF.make((0, F(4, 15), 4), (F(6, 5), F(14, 15), 0), 0))
    assert X.atoms == ((F(4, 15), F(3, 4)), (4, F(1, 4)))
    with pytest.raises(NonVanishingTail):
        D.dist_from_isf(PLF.make((0, 2, 3), (F(11, 10), F(1, 10), F(1, 10)), 0))
    with pytest.raises(NotConvex):
        D.dist_from_isf(PLF.make((0, 1, 2), (2, F(3, 2), 0), 0))


def test_moment_examples():
    assert D.moment(D.point_mass(3), 2) == 9
    assert D.moment(phi(2), 2) == 2
    assert D.moment(ClosedFormDist("u_inv_pow", 1), 1) == math.inf
    assert D.moment_via_isf(phi(2), 2) == 2
    assert D.moment_via_isf(D.point_mass(1), 3) == 1
    assert D.moment_via_isf(phi(4), 2) == 4


def test_tail_integral_examples():
    A = D.tail_integral(phi(2))
    assert [eval_plf(A, u) for u in (0, F(1, 2), F(3, 4), 1)] == [1, 1, F(1, 2), 0]
    A4 = D.tail_integral(phi(4))
    assert eval_plf(A4, F(3, 4)) == 1 and eval_plf(A4, F(7, 8)) == F(1, 2)
    assert D.tail_integral(D.point_mass(1)) == PLF.make((0, 1), (1, 0), 0)


def test_hl_maximal_examples():
    C = D.hl_maximal(D.point_mass(F(5, 2)))
    assert all(C(u) == F(5, 2) for u in (F(1, 10), F(1, 2), F(9, 10)))
    C2 = D.hl_maximal(phi(2))
    assert C2(F(1, 4)) == F(4, 3) and C2(F(3, 4)) == 2
    assert C2.survival(F(3, 2)) == F(2, 3)
    assert abs(D.mean(C2) - (1 + math.log(2))) < 1e-12
    assert abs(D.moment(C2, 2) - 3) < 1e-12
    C4 = D.hl_maximal(phi(4))
    assert abs(D.mean(C4) - (1 + math.log(4))) < 1e-12
    with pytest.raises(TypeError):
        D.hl_maximal(ClosedFormDist("u_inv_pow", F(1, 2)))


def test_sample_examples():
    assert D.sample(D.point_mass(1), 5, 7) == [1.0] * 5
    xs = D.sample(phi(2), 100_000, 42)
    assert abs(sum(xs) / len(xs) - 1) < 0.02
    assert xs == D.sample(phi(2), 100_000, 42)


def test_closed_form_moments():
    U = ClosedFormDist("u_inv_pow", F(1, 2))
    assert D.moment(U, 1) == 2.0
    assert abs(D.moment(U, 1, numeric=True) - 2) < 1e-9
    assert D.moment(U, 2) == math.inf and D.moment(U, 2, numeric=True) == math.inf
    E = ClosedFormDist("exp_inv_u")
    assert D.moment(E, F(1, 2)) == math.inf
    assert D.moment(E, F(1, 2), numeric=True) == math.inf
    assert E.survival(math.e ** 2) == pytest.approx(0.5)
    with pytest.raises(InvalidDistribution):
        ClosedFormDist("nope")


@given(discrete())
def test_isf_round_trip(X):
    assert D.dist_from_isf(D.isf(X)) == X


@given(discrete())
def test_isf_at_zero_is_mean(X):
    assert eval_plf(D.isf(X), 0) == D.mean(X)


@given(discrete(), st.sampled_from([F(2), F(3), F(3, 2)]))
def test_moment_identity(X, p):
    a, b = D.moment_via_isf(X, p), D.moment(X, p)
    if p.denominator == 1:
        assert a == b
    else:
        assert abs(float(a) - float(b)) <= 1e-9 * float(b)


@given(discrete(), st.integers(1, 63).map(lambda k: F(k, 64)))
def test_quantile_is_generalised_inverse(X, u):
    x = D.quantile(X, u)
    assert eval_step(D.cdf(X), x) >= u
    below = [y for y in X.xs if y < x]
    assert all(eval_step(D.cdf(X), y) < u for y in below)


@given(discrete())
def test_hl_maximal_dominates_and_keeps_mean_bound(X):
    C = D.hl_maximal(X)
    for u in (F(1, 7), F(1, 2), F(6, 7)):
        assert C(u) >= D.quantile(X, u)
    assert D.moment(C, 2) <= 4 * float(D.moment(X, 2)) * (1 + 1e-12)
