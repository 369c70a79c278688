import json
from fractions import Fraction as F

import pytest

from stochorder import diagram
from stochorder.diagram import DiagramReport, render_report, verify_counterexamples, verify_implications
from stochorder.families import NODE_IDS, FiniteFamily
from stochorder.dist import point_mass


def test_nodes_and_edges():
    assert [n.id for n in diagram.DIAGRAM_NODES] == list(NODE_IDS)
    assert len(NODE_IDS) == 10 and len(diagram.EDGES) == 9
    v = diagram.DIAGRAM_NODES[0].evaluator(FiniteFamily([point_mass(1)]), F(1, 2), 2)
    assert v.status == "holds"


def test_small_implication_run():
    rep = verify_implications(seed=3, trials=15)
    assert rep.violations == 0
    assert [c.trials for c in rep.implications] == [15] * 9
    assert len(rep.equivalences) == len(diagram.EQUIVALENCES)


def test_empty_report_is_header_only():
    rep = verify_implications(seed=1, trials=0)
    text = render_report(rep)
    assert text.count("\n") == 1 and text.startswith("stochastic boundedness diagram")


def test_json_round_trip():
    rep = verify_implications(seed=2, trials=3)
    rep.bullets = verify_counterexamples(N=1000).bullets
    doc = render_report(rep, "json")
    back = DiagramReport.from_json(json.loads(doc))
    assert render_report(back, "json") == doc
    assert render_report(back) == render_report(rep)


def test_violation_carries_reproduction():
    rep = DiagramReport({"p": "1/2"})
    res = diagram.CheckResult("x -> y")
    fam = FiniteFamily([point_mass(1)])
    diagram._record(res, "broken", fam, F(1, 2), F(2), 1, 0)
    assert res.violations == 1
    assert res.counterexample["family"]["type"] == "finite"
    assert res.counterexample["detail"] == "broken"


def test_counterexample_text_layout():
    rep = verify_counterexamples(N=2000)
    text = render_report(rep)
    lines = [ln for ln in text.splitlines() if ln.startswith("  ✓ ") or ln.startswith("  ✗ ")]
    assert len(lines) == 9


def test_counterexample_validation():
    with pytest.raises(ValueError):
        verify_counterexamples(N=10)
    with pytest.raises(ValueError):
        verify_counterexamples(p=F(3, 2))


def test_render_is_deterministic():
    a = render_report(verify_implications(seed=5, trials=4), "json")
    b = render_report(verify_implications(seed=5, trials=4), "json")
    assert a == b
    with pytest.raises(ValueError):
        render_report(DiagramReport({}), "xml")
