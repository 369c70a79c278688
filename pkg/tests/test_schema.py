from fractions import Fraction as F

import pytest
from hypothesis import given

from stochorder import schema
from stochorder.dist import ClosedFormDist, InvalidDistribution
from stochorder.families import BuiltinFamily, FiniteFamily

from strategies import discrete, families


def test_decimals_parse_exactly():
    X = schema.dist_from_json(schema.loads('{"type":"discrete","atoms":[{"x":0.1,"p":0.3},{"x":"1/3","p":0.7}]}'))
    assert X.atoms == ((F(1, 10), F(3, 10)), (F(1, 3), F(7, 10)))


def test_rejects_bad_input():
    with pytest.raises(InvalidDistribution):
        schema.dist_from_json({"type": "discrete", "atoms": [{"x": 0, "p": "-1/2"}, {"x": 1, "p": "3/2"}]})
    with pytest.raises(schema.SchemaError):
        schema.dist_from_json({"type": "weird"})
    with pytest.raises(schema.SchemaError):
        schema.dist_from_json({"type": "discrete", "atoms": [{"x": True, "p": 1}]})
    with pytest.raises(schema.SchemaError):
        schema.family_from_json({"type": "builtin", "name": "phi", "N": 2.5})


@given(discrete())
def test_dist_round_trip(X):
    assert schema.dist_from_json(schema.loads(schema.dumps(schema.dist_to_json(X)))) == X


@given(families())
def test_family_round_trip(fam):
    f = FiniteFamily(fam)
    assert schema.family_from_json(schema.loads(schema.dumps(schema.family_to_json(f)))) == f


def test_builtin_round_trips():
    for fam in (BuiltinFamily("psi_pow", F(1, 2), 500), BuiltinFamily("u_inv_pow", F(2, 3))):
        assert schema.family_from_json(schema.family_to_json(fam)) == fam
    X = ClosedFormDist("u_inv_pow", F(1, 2))
    assert schema.dist_from_json(schema.dist_to_json(X)) == X
