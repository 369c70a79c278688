import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from stochorder import dist as D
from stochorder import families as FM
from stochorder import orders
from stochorder.dist import DiscreteDist
from stochorder.families import BuiltinFamily, FiniteFamily

from strategies import families


def phi(n):
    return DiscreteDist.from_pairs([(0, 1 - F(1, n)), (n, F(1, n))])


def test_builtin_validation():
    with pytest.raises(ValueError):
        BuiltinFamily("phi", N=1)
    with pytest.raises(ValueError):
        BuiltinFamily("phi", 2)
    with pytest.raises(ValueError):
        BuiltinFamily("nope")
    assert BuiltinFamily("phi_pow", 2, 10).member(3).atoms == ((0, F(2, 3)), (9, F(1, 3)))
    psi = BuiltinFamily("psi", 1, 10).member(2)
    assert float(psi.atoms[1][1]) == 1 / (2 * math.log(2))


def test_power_maps_exponents():
    assert BuiltinFamily("phi_pow", F(1, 2)).power(2) == BuiltinFamily("phi")
    assert BuiltinFamily("psi").power(3).name == "psi_pow"
    assert BuiltinFamily("u_inv_pow", F(1, 2)).power(2).r == 1


def test_ui_criterion_examples():
    assert FM.ui_criterion(FiniteFamily([phi(2), phi(4)]), 2) == F(1, 2)
    assert FM.ui_criterion(FiniteFamily([phi(2), phi(4)]), 9) == 0
    assert FM.ui_criterion(BuiltinFamily("phi", 1, 1000), 10) == F(99, 100)
    fam = BuiltinFamily("phi", 1, 10_000)
    for t in (0, F(1, 3), 17, 9999):
        assert FM.ui_criterion(fam, t) == 1 - F(t) / 10_000


def test_tight_criterion_examples():
    assert FM.tight_criterion(FiniteFamily([phi(2)]), 1) == F(1, 2)
    v = FM.tight_criterion(BuiltinFamily("psi", 1, 1000), 10)
    assert v == pytest.approx(1 / (11 * math.log(11)), rel=1e-15)
    assert FM.tight_criterion(BuiltinFamily("phi", 1, 50), 50) == 0


def test_stlp_criterion_examples():
    assert FM.stlp_criterion(FiniteFamily([D.point_mass(1)]), 1, 2) == 1
    psi = BuiltinFamily("psi", 1, 10**6)
    assert FM.stlp_criterion(psi, 1, 2e5) - FM.stlp_criterion(psi, 1, 1e5) >= 0.03
    root = BuiltinFamily("phi_pow", F(1, 2), 10**6)
    inc = FM.stlp_criterion(root, 1, 2e4) - FM.stlp_criterion(root, 1, 1e4)
    assert inc < 1e-3


def test_lp_bound_examples():
    assert FM.lp_bound(BuiltinFamily("phi"), 1) == 1
    assert FM.lp_bound(BuiltinFamily("psi"), 1) == pytest.approx(1 / math.log(2), rel=1e-15)
    assert FM.lp_bound(FiniteFamily([D.point_mass(3)]), 2) == 9
    assert FM.lp_bound(BuiltinFamily("u_inv_pow", 1), 1) == math.inf


def test_upi_tail_expectation_is_one_for_phi():
    fam = BuiltinFamily("phi", 1, 1000)
    assert all(FM.upi_criterion(fam, 1, t) == 1 for t in (0, 5, 999))
    assert FM.upi_criterion(fam, 1, 1000) == 0


def test_builtin_matches_truncation():
    for name, r in (("phi", 1), ("phi_pow", 2), ("psi", 1), ("psi_pow", F(1, 2))):
        fam = BuiltinFamily(name, r, 30)
        fin = fam.truncate()
        for t in (0, F(1, 2), 3, F(17, 2), 29, 31):
            assert float(FM.ui_criterion(fam, t)) == pytest.approx(float(FM.ui_criterion(fin, t)), rel=1e-12)
            assert float(FM.tight_criterion(fam, t)) == pytest.approx(float(FM.tight_criterion(fin, t)), rel=1e-12)
            for s in (F(1, 2), 1, 2):
                assert float(FM.stlp_criterion(fam, s, t)) == pytest.approx(
                    float(FM.stlp_criterion(fin, s, t)), rel=1e-9, abs=1e-12)


def test_psi_bound_contrast():
    members = BuiltinFamily("psi", 1, 20).truncate().members
    means = [D.mean(orders.least_st_upper_bound(list(members[:k]))) for k in range(1, len(members) + 1)]
    assert all(b > a for a, b in zip(means, means[1:]))
    for k in (1, 5, len(members)):
        Y = orders.least_icx_upper_bound(list(members[:k]))
        assert float(D.mean(Y)) == pytest.approx(1 / math.log(2), rel=1e-15)


def test_diagnose_point_mass_all_hold():
    rep = FM.diagnose(FiniteFamily([D.point_mass(1)]))
    assert len(rep.verdicts) == 10
    assert all(v.status == "holds" for v in rep.verdicts.values())


def test_diagnose_phi_and_psi():
    rep = FM.diagnose(BuiltinFamily("phi"), F(1, 2), 2, 10_000)
    assert rep["L1_bounded"].status == "holds"
    assert rep["UI"].status == "fails"
    rep = FM.diagnose(BuiltinFamily("psi"), N=10_000)
    assert rep["UI"].status == "holds"
    assert rep["st_bounded_by_integrable"].status == "fails"


def test_diagnose_rejects_bad_exponents():
    with pytest.raises(ValueError):
        FM.diagnose(FiniteFamily([D.point_mass(1)]), p=1, q=2)


def test_trend_classifiers():
    ts = [2.0**k for k in range(2, 12)]
    assert FM.classify_limit_zero(ts, [t**-2 for t in ts])[0] == "holds"
    assert FM.classify_limit_zero(ts, [1 / math.log(t) for t in ts])[0] == "holds"
    assert FM.classify_limit_zero(ts, [0.5] * len(ts))[0] == "fails"
    assert FM.classify_limit_zero(ts, [0.5 / t**0.1 for t in ts])[0] == "holds"
    assert FM.classify_limit_zero(ts, [0.005] * len(ts))[0] == "inconclusive"
    assert FM.classify_limit_zero(ts[:6], [2.0 / t for t in ts[:6]]) == ("holds", "decaying")
    assert FM.classify_limit_zero(ts[:2], [1.0, 0.5])[0] == "inconclusive"
    assert FM.classify_finite_limit(ts, [1.0] * len(ts)) == ("holds", "flat")
    assert FM.classify_finite_limit(ts, [2 - 1 / t for t in ts])[0] == "holds"
    assert FM.classify_finite_limit(ts, [math.log(t) for t in ts])[0] == "fails"


@settings(max_examples=40, deadline=None)
@given(families(4, 5))
def test_finite_diagnose_is_exact_and_monotone(fam):
    rep = FM.diagnose(FiniteFamily(fam))
    statuses = [rep.verdicts[n].status for n in FM.NODE_IDS]
    assert "inconclusive" not in statuses
    for a, b in zip(statuses, statuses[1:]):
        assert not (a == "holds" and b != "holds")


@given(families())
def test_criteria_monotone_in_t(fam):
    f = FiniteFamily(fam)
    ts = [F(k, 4) for k in range(0, 40)]
    ui = [FM.ui_criterion(f, t) for t in ts]
    ti = [FM.tight_criterion(f, t) for t in ts]
    sl = [FM.stlp_criterion(f, 1, t) for t in ts]
    assert all(b <= a for a, b in zip(ui, ui[1:]))
    assert all(b <= a for a, b in zip(ti, ti[1:]))
    assert all(b >= a for a, b in zip(sl, sl[1:]))
