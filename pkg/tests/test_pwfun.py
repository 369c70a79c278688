import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from stochorder import dist as D
from stochorder.pwfun import (PLF, IntegralDiverges, StepFn, eval_plf, eval_step, integrate,
                              max_envelope_convex, min_envelope, right_derivative)

from strategies import discrete, families


def phi(n):
    return D.DiscreteDist.from_pairs([(0, 1 - F(1, n)), (n, F(1, n))])


def test_eval_step_is_right_continuous():
    S = D.cdf(D.point_mass(1))
    assert eval_step(S, F(1, 2)) == 0
    assert eval_step(S, 1) == 1


def test_eval_plf_on_isf():
    H = D.isf(D.point_mass(1))
    assert eval_plf(H, F(1, 2)) == F(1, 2)
    assert eval_plf(H, 2) == 0


def test_min_envelope_takes_later_jump():
    F1, F2 = D.cdf(D.point_mass(1)), D.cdf(D.point_mass(2))
    assert min_envelope([F1, F2]) == F2


def test_max_envelope_crossing():
    H = max_envelope_convex([D.isf(D.point_mass(F(6, 5))), D.isf(phi(4))])
    assert H.knots == (0, F(4, 15), 4)
    assert H.knot_values == (F(6, 5), F(14, 15), 0)
    assert H.terminal_slope == 0


def test_right_derivative_examples():
    H = D.isf(D.point_mass(1))
    assert right_derivative(H, 0) == -1
    assert right_derivative(H, 1) == 0
    env = max_envelope_convex([D.isf(D.point_mass(F(6, 5))), D.isf(phi(4))])
    assert right_derivative(env, F(4, 15)) == F(-1, 4)


def test_integrate_survival_gives_mean():
    assert integrate(D.survival(D.point_mass(1)), 0, math.inf) == 1


def test_integrate_divergent_tail():
    with pytest.raises(IntegralDiverges):
        integrate(StepFn.make((), 1, ()), 0, math.inf)
    with pytest.raises(IntegralDiverges):
        integrate(PLF.make((0,), (1,), 1), 0, math.inf)


def test_canonical_forms_compare_equal():
    a = PLF.make((0, 1, 2), (2, 1, 0), 0)
    b = PLF.make((0, 2), (2, 0), 0)
    assert a == b


@given(families())
def test_min_envelope_is_pointwise_min(fam):
    env = min_envelope([D.cdf(X) for X in fam])
    pts = sorted({x for X in fam for x in X.xs})
    probes = pts + [(a + b) / 2 for a, b in zip(pts, pts[1:])] + [pts[-1] + 1]
    for t in probes:
        assert eval_step(env, t) == min(eval_step(D.cdf(X), t) for X in fam)


@given(families())
def test_max_envelope_is_pointwise_max_and_convex(fam):
    env = max_envelope_convex([D.isf(X) for X in fam])
    pts = sorted({F(0)} | {x for X in fam for x in X.xs})
    probes = pts + [(a + b) / 2 for a, b in zip(pts, pts[1:])] + [pts[-1] + 2]
    for t in probes:
        assert eval_plf(env, t) == max(eval_plf(D.isf(X), t) for X in fam)
    slopes = env.slopes()
    assert all(a <= b for a, b in zip(slopes, slopes[1:]))


@given(discrete(), st.integers(0, 80).map(lambda k: F(k, 8)))
def test_integral_of_survival_is_isf(X, t):
    assert integrate(D.survival(X), t, math.inf) == eval_plf(D.isf(X), t)
