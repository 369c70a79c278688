"""The ten-node stochastic boundedness diagram: implications and non-implications.

Downward edges are checked quantitatively on random finite families (each
edge has a concrete inequality behind it), and the nine strictness claims are
checked on the builtin counterexample families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import dist as D
from . import families as FM
from . import orders
from .families import NODE_IDS, NODES, BuiltinFamily, FiniteFamily, Verdict
from .metrics import wasserstein
from .pwfun import eval_plf, eval_step
from .rng import SplitMix64, random_family
from .schema import family_to_json, rstr

REL = 1e-12


@dataclass(frozen=True)
class DiagramNode:
    id: str
    description: str
    evaluator: Callable[..., Verdict]


def _evaluator(node_id):
    return lambda fam, p, q: FM.node_verdict(fam, node_id, p, q)


DIAGRAM_NODES = tuple(DiagramNode(i, d, _evaluator(i)) for i, d in NODES)
EDGES = tuple(zip(NODE_IDS, NODE_IDS[1:]))

EQUIVALENCES = (
    "ui_equals_least_icx_isf",
    "tight_equals_least_st_survival",
    "hl_maximal_pipeline",
    "power_commutes_with_least_st_bound",
    "uniform_integrability_sandwich",
    "wasserstein_to_zero_is_moment",
)


@dataclass
class CheckResult:
    name: str
    trials: int = 0
    violations: int = 0
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {"name": self.name, "trials": self.trials, "violations": self.violations,
                "counterexample": self.counterexample}


@dataclass
class BulletResult:
    index: int
    family: str
    holds: str
    fails: str
    confirmed: bool
    checks: list = field(default_factory=list)  # (name, passed, value)

    def to_json(self) -> dict:
        return {"index": self.index, "family": self.family, "holds": self.holds,
                "fails": self.fails, "confirmed": self.confirmed,
                "checks": [{"name": n, "passed": ok, "value": v} for n, ok, v in self.checks]}


@dataclass
class DiagramReport:
    params: dict
    implications: list = field(default_factory=list)
    equivalences: list = field(default_factory=list)
    bullets: list = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(c.violations for c in self.implications + self.equivalences)

    @property
    def all_confirmed(self) -> bool:
        return all(b.confirmed for b in self.bullets)

    def to_json(self) -> dict:
        return {"params": self.params,
                "implications": [c.to_json() for c in self.implications],
                "equivalences": [c.to_json() for c in self.equivalences],
                "bullets": [b.to_json() for b in self.bullets]}

    @classmethod
    def from_json(cls, obj: dict) -> "DiagramReport":
        return cls(
            dict(obj["params"]),
            [CheckResult(**c) for c in obj["implications"]],
            [CheckResult(**c) for c in obj["equivalences"]],
            [BulletResult(b["index"], b["family"], b["holds"], b["fails"], b["confirmed"],
                          [(c["name"], c["passed"], c["value"]) for c in b["checks"]])
             for b in obj["bullets"]],
        )


# --------------------------------------------------------------------------- #
# Implications on random finite families
# --------------------------------------------------------------------------- #


def _le(a, b) -> bool:
    """``a <= b``, exactly for rationals, with relative slack ``REL`` for floats."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a <= b
    a, b = float(a), float(b)
    return a <= b + REL * max(1.0, abs(b))


def _probe_points(fam: FiniteFamily) -> list[Fraction]:
    pts = sorted({Fraction(0)} | {x for X in fam.members for x in X.xs})
    return pts + [(a + b) / 2 for a, b in zip(pts, pts[1:])] + [pts[-1] + 1]


def _top_atom(X, s):
    return D.power(X, s).xs[-1]


def _edge_st_to_icx(fam, s):
    """st-bounded by Z (s-integrable) gives X^s <=icx Z^s; the integral criterion is E Z^s."""
    Z = orders.least_st_upper_bound(list(fam.members))
    Zs = D.power(Z, s)
    for X in fam.members:
        if not orders.icx_le(D.power(X, s), Zs):
            return f"member {X!r} raised to {s} is not icx below {Zs!r}"
    top = max(_top_atom(X, s) for X in fam.members)
    crit = FM.stlp_criterion(fam, s, top)
    if crit != D.moment(Z, s):
        return f"integral criterion {crit} differs from E Z^{s} = {D.moment(Z, s)}"
    return None


def _edge_icx_to_lp(fam, s):
    """|X|^s icx-bounded by Y gives sup E X^s <= E Y, with equality for the least bound."""
    Y = orders.least_icx_upper_bound(list(fam.power(s).members))
    c = FM.lp_bound(fam, s)
    if c != D.mean(Y):
        return f"sup E X^{s} = {c} but the least icx bound has mean {D.mean(Y)}"
    return None


def _edge_markov(fam, a, b):
    """Bounded in L^a gives int_0^inf sup P(X > t^(1/b)) dt <= c^(b/a) a/(a-b)."""
    c = FM.lp_bound(fam, a)
    top = max(_top_atom(X, b) for X in fam.members)
    crit = FM.stlp_criterion(fam, b, top)
    bound = float(c) ** float(b / a) * float(a / (a - b))
    if not _le(crit, bound):
        return f"integral criterion {float(crit)} exceeds the Markov bound {bound}"
    return None


def _edge_tight(fam, p):
    """Bounded in L^p gives sup P(X > t) <= min(1, c t^-p)."""
    c = float(FM.lp_bound(fam, p))
    for t in _probe_points(fam):
        bound = 1.0 if t == 0 else min(1.0, c * float(t) ** -float(p))
        if not _le(FM.tight_criterion(fam, t), bound):
            return f"sup P(X > {t}) exceeds min(1, {c} t^-{p})"
    return None


def _edge_checks(p, q):
    one = Fraction(1)
    return (
        lambda f: _edge_st_to_icx(f, q),
        lambda f: _edge_icx_to_lp(f, q),
        lambda f: _edge_markov(f, q, one),
        lambda f: _edge_st_to_icx(f, one),
        lambda f: _edge_icx_to_lp(f, one),
        lambda f: _edge_markov(f, one, p),
        lambda f: _edge_st_to_icx(f, p),
        lambda f: _edge_icx_to_lp(f, p),
        lambda f: _edge_tight(f, p),
    )


def _eq_ui(fam, p, q):
    Y = orders.least_icx_upper_bound(list(fam.members))
    H = D.isf(Y)
    for X in fam.members:
        if not orders.icx_le(X, Y):
            return f"least icx bound misses member {X!r}"
    for t in _probe_points(fam):
        if FM.ui_criterion(fam, t) != eval_plf(H, t):
            return f"ui criterion at {t} differs from the bound's ISF"
    return None


def _eq_tight(fam, p, q):
    Z = orders.least_st_upper_bound(list(fam.members))
    S = D.survival(Z)
    for X in fam.members:
        if not orders.st_le(X, Z):
            return f"least st bound misses member {X!r}"
    for t in _probe_points(fam):
        if FM.tight_criterion(fam, t) != eval_step(S, t):
            return f"tightness criterion at {t} differs from the bound's survival"
    return None


def _eq_hl(fam, p, q):
    Y = orders.least_icx_upper_bound(list(fam.members))
    C = D.hl_maximal(Y)
    for X in fam.members:
        if not orders.curve_le(orders.quantile_curve(X), C):
            return f"maximal variable of the icx bound does not st-dominate {X!r}"
    lhs, rhs = D.moment(C, q), (float(q) / (float(q) - 1)) ** float(q) * float(D.moment(Y, q))
    if not _le(lhs, rhs):
        return f"E (Y*)^{q} = {lhs} exceeds {rhs}"
    return None


def _eq_power(fam, p, q):
    for s in (q, p):
        left = orders.least_st_upper_bound(list(fam.power(s).members))
        right = D.power(orders.least_st_upper_bound(list(fam.members)), s)
        if left != right:
            return f"least st bound does not commute with the power {s}"
    return None


def _eq_sandwich(fam, p, q):
    g = fam.power(q)
    for t in _probe_points(g):
        h, e, h2 = FM.ui_criterion(g, t), FM.upi_criterion(g, 1, t), FM.ui_criterion(g, t / 2)
        if not (h <= e <= 2 * h2):
            return f"tail expectation at {t} escapes [H(t), 2 H(t/2)]"
    return None


def _eq_wasserstein(fam, p, q):
    zero = D.point_mass(0)
    for X in fam.members:
        w, m = wasserstein(X, zero, q), float(D.moment(X, q)) ** (1 / float(q))
        if abs(w - m) > REL * max(1.0, m):
            return f"W_{q}(X, 0) = {w} but moment root is {m}"
    return None


_EQ_CHECKS = (_eq_ui, _eq_tight, _eq_hl, _eq_power, _eq_sandwich, _eq_wasserstein)


def verify_implications(seed: int = 1, trials: int = 200, p=Fraction(1, 2), q=Fraction(2),
                        max_support: int = 8, max_members: int = 6) -> DiagramReport:
    """Check every downward edge and structural equivalence on random finite families."""
    p, q = FM._check_pq(p, q)
    params = {"p": rstr(p), "q": rstr(q), "seed": seed, "trials": trials,
              "max_support": max_support, "max_members": max_members}
    report = DiagramReport(params)
    if trials < 1:
        return report
    edges = [CheckResult(f"{a} -> {b}") for a, b in EDGES]
    eqs = [CheckResult(name) for name in EQUIVALENCES]
    edge_checks = _edge_checks(p, q)
    rng = SplitMix64(seed)
    for trial in range(trials):
        fam = FiniteFamily(tuple(random_family(rng, max_members, max_support)))
        verdicts = FM.diagnose(fam, p, q).verdicts
        for res, (a, b), check in zip(edges, EDGES, edge_checks):
            detail = check(fam)
            if detail is None and verdicts[a].status == "holds" and verdicts[b].status != "holds":
                detail = f"verdict {a}=holds but {b}={verdicts[b].status}"
            _record(res, detail, fam, p, q, seed, trial)
        for res, check in zip(eqs, _EQ_CHECKS):
            _record(res, check(fam, p, q), fam, p, q, seed, trial)
    report.implications, report.equivalences = edges, eqs
    return report


def _record(res: CheckResult, detail, fam, p, q, seed, trial):
    res.trials += 1
    if detail is None:
        return
    res.violations += 1
    if res.counterexample is None:
        res.counterexample = {"family": family_to_json(fam), "p": rstr(p), "q": rstr(q),
                              "seed": seed, "trial": trial, "detail": detail}


# --------------------------------------------------------------------------- #
# Non-implications on the counterexample catalogue
# --------------------------------------------------------------------------- #

PHI_N = 10_000
PSI_N = 1_000_000
PSI_T_MAX = 100_000


def _fnum(v):
    if isinstance(v, Fraction):
        return rstr(v)
    v = float(v)
    return v if math.isfinite(v) else "inf"


def _status_checks(fam, holds, fails, p, q):
    vh = FM.node_verdict(fam, holds, p, q)
    vf = FM.node_verdict(fam, fails, p, q)
    return [(f"{holds} verdict", vh.status == "holds", vh.status),
            (f"{fails} verdict", vf.status == "fails", vf.status)]


def _phi_checks(fam: BuiltinFamily, s):
    """``fam ** s`` is the plain phi sequence: E = 1 exactly, the tail expectation stays 1."""
    base = fam.power(s)
    N = base.N
    probes = [Fraction(0), Fraction(1), Fraction(N, 3), Fraction(N - 1), N - Fraction(1, 2)]
    tail_one = all(FM.upi_criterion(base, 1, t) == 1 for t in probes)
    ui_exact = all(FM.ui_criterion(base, t) == 1 - t / N for t in probes)
    lp = FM.lp_bound(fam, s)
    return [(f"sup E X^{s} == 1", lp == 1, _fnum(lp)),
            ("sup E X 1(X > t) == 1 for t < N", tail_one, N),
            ("ISF supremum == 1 - t/N for t < N", ui_exact, N)]


def _psi_checks(fam: BuiltinFamily, s):
    """``fam ** s`` is the plain psi sequence: its st integral grows like ln ln T."""
    base = fam.power(s)
    sup = FM.lp_bound(base, 1)
    Ts = [2.0**k for k in range(0, 17) if 2.0**k <= PSI_T_MAX] + [float(PSI_T_MAX)]
    Ts = [T for T in Ts if 2 * T <= base.N]
    incs = [FM.stlp_criterion(fam, s, 2 * T) - FM.stlp_criterion(fam, s, T) for T in Ts]
    small = base.with_N(24).truncate()
    Y = orders.least_icx_upper_bound(list(small.members))
    st_means = [float(D.mean(orders.least_st_upper_bound(list(small.members[:k]))))
                for k in range(1, len(small.members) + 1)]
    return [
        ("sup E psi_n == 1/ln 2", abs(sup - 1 / math.log(2)) <= REL, sup),
        ("st integral increments >= 0.03 up to T = 1e5", bool(incs) and min(incs) >= 0.03,
         min(incs) if incs else None),
        ("least icx bound of psi_2..psi_24 has mean 1/ln 2",
         abs(float(D.mean(Y)) - 1 / math.log(2)) <= REL, float(D.mean(Y))),
        ("least st bound mean strictly increases with N",
         all(b > a for a, b in zip(st_means, st_means[1:])), st_means[-1]),
    ]


def _closed_checks(X: D.ClosedFormDist, finite_at, infinite_at, expected):
    checks = []
    if finite_at is not None:
        fact = D.moment(X, finite_at)
        probe, _ = D.numeric_moment(X, finite_at)
        ok = abs(fact - float(expected)) <= REL * float(expected) and abs(probe - fact) <= 1e-6 * fact
        checks.append((f"E X^{finite_at} == {expected}", ok, probe))
    fact = D.moment(X, infinite_at)
    probe, windows = D.numeric_moment(X, infinite_at)
    growth = [w for _, w in windows[-3:]]
    ok = math.isinf(fact) and math.isinf(probe) and min(growth) >= FM.DELTA
    checks.append((f"E X^{infinite_at} diverges (truncated moment keeps growing)", ok, min(growth)))
    return checks


def _bullets(p, q, N_phi, N_psi):
    one = Fraction(1)
    ids = NODE_IDS
    return [
        (BuiltinFamily("exp_inv_u"), ids[9], ids[8], lambda f: _closed_checks(f.law, None, p, None)),
        (BuiltinFamily(*_pow("phi", 1 / p), N_phi), ids[8], ids[7], lambda f: _phi_checks(f, p)),
        (BuiltinFamily(*_pow("psi", 1 / p), N_psi), ids[7], ids[6], lambda f: _psi_checks(f, p)),
        (BuiltinFamily("u_inv_pow", one), ids[6], ids[5],
         lambda f: _closed_checks(f.law, p, one, 1 / (1 - p))),
        (BuiltinFamily("phi", one, N_phi), ids[5], ids[4], lambda f: _phi_checks(f, one)),
        (BuiltinFamily("psi", one, N_psi), ids[4], ids[3], lambda f: _psi_checks(f, one)),
        (BuiltinFamily("u_inv_pow", 1 / q), ids[3], ids[2],
         lambda f: _closed_checks(f.law, one, q, q / (q - 1))),
        (BuiltinFamily(*_pow("phi", 1 / q), N_phi), ids[2], ids[1], lambda f: _phi_checks(f, q)),
        (BuiltinFamily(*_pow("psi", 1 / q), N_psi), ids[1], ids[0], lambda f: _psi_checks(f, q)),
    ]


def _pow(base, r):
    return (base, r) if r == 1 else (base + "_pow", r)


def _describe(fam: BuiltinFamily) -> str:
    if fam.name == "exp_inv_u":
        return "exp(1/U)"
    if fam.name == "u_inv_pow":
        return f"U^(-{fam.r})"
    sym = "phi_n" if fam.base == "phi" else "psi_n"
    body = sym if fam.r == 1 else f"{sym}^({fam.r})"
    return f"{body}, n = 2..{fam.N}"


def verify_counterexamples(p=Fraction(1, 2), q=Fraction(2), N: Optional[int] = None) -> DiagramReport:
    """Run the nine strictness bullets; ``N`` overrides both default truncations."""
    p, q = FM._check_pq(p, q)
    if N is not None and N < 1000:
        raise ValueError("counterexample truncation N must be at least 1000")
    N_phi, N_psi = (N, N) if N is not None else (PHI_N, PSI_N)
    report = DiagramReport({"p": rstr(p), "q": rstr(q), "N_phi": N_phi, "N_psi": N_psi})
    for i, (fam, holds, fails, extra) in enumerate(_bullets(p, q, N_phi, N_psi), 1):
        checks = [(n, bool(ok), v if isinstance(v, (str, int, type(None))) else _fnum(v))
                  for n, ok, v in _status_checks(fam, holds, fails, p, q) + extra(fam)]
        report.bullets.append(BulletResult(i, _describe(fam), holds, fails,
                                           all(ok for _, ok, _ in checks), checks))
    return report


# --------------------------------------------------------------------------- #
# Rendering
# --------------------------------------------------------------------------- #


def render_report(r: DiagramReport, format: str = "text") -> str:
    """Deterministic text (diagram layout with marks) or canonical JSON."""
    if format == "json":
        from .schema import dumps
        return dumps(r.to_json()) + "\n"
    if format != "text":
        raise ValueError(f"unknown format {format!r}")
    head = "stochastic boundedness diagram  " + "  ".join(f"{k}={v}" for k, v in sorted(r.params.items()))
    lines = [head]
    if r.implications:
        lines.append("")
        for node, res in zip(NODE_IDS, r.implications + [None]):
            lines.append(f"[{node}]")
            if res is not None:
                mark = "✓" if res.violations == 0 else "✗"
                lines.append(f"    | {mark} {res.trials} trials, {res.violations} violations")
                lines.append("    v")
    if r.equivalences:
        lines.append("")
        lines.append("structural equivalences")
        for res in r.equivalences:
            mark = "✓" if res.violations == 0 else "✗"
            lines.append(f"  {mark} {res.name}: {res.trials} trials, {res.violations} violations")
    if r.bullets:
        lines.append("")
        lines.append("non-implications")
        for b in r.bullets:
            mark = "✓" if b.confirmed else "✗"
            lines.append(f"  {mark} {b.index}. {b.family}: {b.holds} holds, {b.fails} fails")
            for name, ok, val in b.checks:
                lines.append(f"       {'✓' if ok else '✗'} {name} [{val}]")
    return "\n".join(lines) + "\n"
