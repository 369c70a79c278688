"""Family-level boundedness criteria and the builtin counterexample families.

A family is either a finite list of discrete laws (criteria are exact and
reach their limits) or a builtin parametric sequence indexed by ``n = 2..N``
(criteria are exact scans over ``n``; limit claims become trend verdicts
over doubling windows).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np
from scipy import integrate as _quad

from . import dist as D
from . import orders
from ._rational import is_integral, rpow, to_rational
from .dist import ClosedFormDist, DiscreteDist
from .pwfun import eval_plf

EPS_TREND = 1e-3
DELTA = 1e-2
SHRINK = 1.5
LOG_DECAY_SLOPE = -0.5

BUILTIN_NAMES = ("phi", "psi", "phi_pow", "psi_pow", "exp_inv_u", "u_inv_pow")


@dataclass(frozen=True)
class FiniteFamily:
    members: tuple[DiscreteDist, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("a finite family needs at least one member")

    def power(self, s) -> "FiniteFamily":
        return FiniteFamily(tuple(D.power(X, s) for X in self.members))


@dataclass(frozen=True)
class BuiltinFamily:
    """``phi``/``psi`` sequences (optionally raised to ``r``) or a closed-form law.

    ``phi_n`` is ``n`` with probability ``1/n`` and 0 otherwise; ``psi_n`` is ``n``
    with probability ``1/(n ln n)``. Members run over ``n = 2..N``.
    """

    name: str
    r: Fraction = Fraction(1)
    N: int = 10_000

    def __post_init__(self):
        object.__setattr__(self, "r", to_rational(self.r))
        if self.name not in BUILTIN_NAMES:
            raise ValueError(f"unknown builtin family {self.name!r}")
        if self.r <= 0:
            raise ValueError("exponent r must be positive")
        if self.name in ("phi", "psi", "exp_inv_u") and self.r != 1:
            raise ValueError(f"{self.name} takes no exponent; use the *_pow variant")
        if int(self.N) != self.N or self.N < 2:
            raise ValueError("truncation N must be an integer >= 2")

    @property
    def base(self) -> str:
        return self.name.split("_pow")[0]

    @property
    def closed_form(self) -> bool:
        return self.name in ("exp_inv_u", "u_inv_pow")

    @property
    def law(self) -> ClosedFormDist:
        if not self.closed_form:
            raise TypeError(f"{self.name} is a sequence, not a single law")
        return ClosedFormDist(self.name, self.r)

    @property
    def exact(self) -> bool:
        return self.base == "phi" and is_integral(self.r)

    def power(self, s) -> "BuiltinFamily":
        s = to_rational(s)
        if self.name == "exp_inv_u":
            raise TypeError("powers of exp(1/U) are outside the catalogue")
        rs = self.r * s
        if self.name == "u_inv_pow":
            return BuiltinFamily("u_inv_pow", rs, self.N)
        name = self.base if rs == 1 else self.base + "_pow"
        return BuiltinFamily(name, rs, self.N)

    def with_N(self, N: int) -> "BuiltinFamily":
        return BuiltinFamily(self.name, self.r, N)

    def arrays(self):
        """``(atoms, masses)`` over ``n = 2..N``: Fraction objects when exact, else float64."""
        return _arrays(self.base, self.r, self.N)

    def member(self, n: int) -> DiscreteDist:
        n = int(n)
        if self.base == "phi":
            m = Fraction(1, n)
        else:
            m = Fraction(1.0 / (n * math.log(n)))
        return DiscreteDist.from_pairs([(0, 1 - m), (rpow(Fraction(n), self.r), m)])

    def truncate(self) -> FiniteFamily:
        """The first ``N - 1`` members as an explicit finite family."""
        return FiniteFamily(tuple(self.member(n) for n in range(2, self.N + 1)))


FamilyLike = Union[FiniteFamily, BuiltinFamily]


@lru_cache(maxsize=32)
def _arrays(base: str, r: Fraction, N: int):
    n = np.arange(2, N + 1)
    if base == "phi" and is_integral(r):
        k = int(r)
        atoms = np.array([int(v) ** k for v in n], dtype=object)
        masses = np.array([Fraction(1, int(v)) for v in n], dtype=object)
    else:
        nf = n.astype(np.float64)
        atoms = nf ** float(r)
        masses = 1.0 / nf if base == "phi" else 1.0 / (nf * np.log(nf))
    atoms.setflags(write=False)
    masses.setflags(write=False)
    return atoms, masses


def _coerce(arr: np.ndarray, v):
    return to_rational(v) if arr.dtype == object else float(v)


def _zero(arr: np.ndarray):
    return Fraction(0) if arr.dtype == object else 0.0


def _py(v):
    return float(v) if isinstance(v, np.floating) else v


def _suffix_max(v: np.ndarray) -> np.ndarray:
    return np.maximum.accumulate(v[::-1])[::-1]


@lru_cache(maxsize=64)
def _scan_tables(base: str, r: Fraction, N: int, s: Fraction):
    """Cached per (family, power ``s``): powered atoms, suffix maxima, envelope integrals.

    Atoms increase with ``n``, so ``sup{m_n : b_n > T}`` is a suffix maximum and
    ``int_0^T`` of that envelope is a prefix sum plus one partial cell.
    """
    a, m = _arrays(base, r, N)
    b, _ = _arrays(base, r * s, N)
    m_suf = _suffix_max(m)
    mb_suf = _suffix_max(m * b)
    widths = np.diff(np.concatenate([np.array([_zero(b)], dtype=b.dtype), b]))
    if b.dtype == object:
        cells = list(m_suf * widths)
        acc, run = [], Fraction(0)
        for c in cells:
            run += c
            acc.append(run)
        cum = np.array(acc, dtype=object)
    else:
        cum = np.cumsum(m_suf * widths)
    return a, b, m_suf, mb_suf, cum


def _first_above(arr: np.ndarray, t) -> int:
    return int(np.searchsorted(arr, t, side="right"))


# --------------------------------------------------------------------------- #
# Criteria
# --------------------------------------------------------------------------- #


def ui_criterion(fam: FamilyLike, t):
    """``sup_a int_t^inf P(X_a > u) du``, the supremum of the members' ISFs at ``t``."""
    if isinstance(fam, FiniteFamily):
        t = to_rational(t)
        return max(eval_plf(D.isf(X), t) for X in fam.members)
    if fam.closed_form:
        return _closed_tail_integral(fam.law, float(t))
    a, m = fam.arrays()
    t = _coerce(a, t)
    if a.dtype != object:
        return max(float(np.max(m * np.maximum(a - t, 0.0))), 0.0)
    # float prefilter with a rounding bound, then exact evaluation of the survivors
    af, mf, tf = a.astype(np.float64), m.astype(np.float64), float(t)
    vf = mf * np.maximum(af - tf, 0.0)
    err = 8 * np.finfo(np.float64).eps * (af + abs(tf)) * mf + 1e-300
    keep = np.nonzero(vf + err >= np.max(vf - err))[0]
    return max(max(m[i] * (a[i] - t) for i in keep), Fraction(0))


def tight_criterion(fam: FamilyLike, t):
    """``sup_a P(X_a > t)``."""
    if isinstance(fam, FiniteFamily):
        t = to_rational(t)
        return max(D.survival(X)(t) for X in fam.members)
    if fam.closed_form:
        return fam.law.survival(float(t))
    a, _, m_suf, _, _ = _scan_tables(fam.base, fam.r, fam.N, Fraction(1))
    k = _first_above(a, _coerce(a, t))
    return _py(m_suf[k]) if k < len(a) else _zero(a)


def upi_criterion(fam: FamilyLike, p, t):
    """``sup_a E X_a^p 1(X_a > t)``; with ``p = 1`` the uniform integrability quantity."""
    p = to_rational(p)
    if isinstance(fam, FiniteFamily):
        t = to_rational(t)
        return max(sum((m * rpow(x, p) for x, m in X.atoms if x > t), Fraction(0))
                   for X in fam.members)
    if fam.closed_form:
        raise TypeError("use moment facts for closed-form laws")
    a, _, _, mb_suf, _ = _scan_tables(fam.base, fam.r, fam.N, p)
    k = _first_above(a, _coerce(a, t))
    return _py(mb_suf[k]) if k < len(a) else _zero(a)


def stlp_criterion(fam: FamilyLike, p, T):
    """``int_0^T sup_a P(X_a > t^{1/p}) dt``; finite as ``T -> inf`` iff st-bounded in L^p."""
    p = to_rational(p)
    if isinstance(fam, FiniteFamily):
        T = to_rational(T)
        Z = orders.least_st_upper_bound(list(fam.members))
        # int_0^T P(Z^p > t) dt = E min(Z^p, T)
        return sum((m * min(rpow(z, p), T) for z, m in Z.atoms), Fraction(0))
    if fam.closed_form:
        inv = 1.0 / float(p)
        S = fam.law.survival
        val, _ = _quad.quad(lambda t: S(t**inv), 0.0, float(T), limit=400)
        return val
    _, b, m_suf, _, cum = _scan_tables(fam.base, fam.r, fam.N, p)
    T = _coerce(b, T)
    k = _first_above(b, T)  # cells 0..k-1 lie inside [0, T]
    done = cum[k - 1] if k else _zero(b)
    if k == len(b):
        return _py(done)
    return _py(done + m_suf[k] * (T - (b[k - 1] if k else _zero(b))))


def lp_bound(fam: FamilyLike, p):
    """``sup_a E X_a^p`` (``math.inf`` when a closed-form law has no such moment)."""
    p = to_rational(p)
    if isinstance(fam, FiniteFamily):
        return max(D.moment(X, p) for X in fam.members)
    if fam.closed_form:
        return D.moment(fam.law, p)
    return _py(_scan_tables(fam.base, fam.r, fam.N, p)[3][0])


def lp_bound_profile(fam: BuiltinFamily, p, Ns: Sequence[int]) -> list:
    """``sup_{n <= N'} E X_n^p`` for each truncation ``N'`` in ``Ns``."""
    b, m = fam.power(p).arrays()
    running = np.maximum.accumulate(m * b)
    return [_py(running[min(N, fam.N) - 2]) for N in Ns]


def _closed_tail_integral(X: ClosedFormDist, t: float) -> float:
    """``int_t^inf S(u) du`` with the same doubling-window divergence probe as moments."""
    total = 0.0
    lo = t
    width = max(1.0, t)
    prev = None
    for _ in range(48):
        w, _ = _quad.quad(X.survival, lo, lo + width, limit=200)
        total += w
        if w < 1e-13 * max(1.0, total):
            return total
        if prev is not None and w >= prev and w > DELTA:
            return math.inf
        prev = w
        lo += width
        width *= 2
    return math.inf if prev >= 1e-9 else total


# --------------------------------------------------------------------------- #
# Trend verdicts
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class Verdict:
    status: str  # holds | fails | inconclusive
    evidence: tuple[tuple[float, float], ...] = ()
    trend: str = "none"  # decaying | flat | growing | none
    criterion: str = ""
    structural: bool = False

    def to_json(self) -> dict:
        return {"status": self.status, "trend": self.trend, "criterion": self.criterion,
                "structural": self.structural,
                "evidence": [[_jnum(a), _jnum(b)] for a, b in self.evidence]}


def _jnum(v):
    v = float(v)
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")


def classify_limit_zero(ts: Sequence[float], cs: Sequence[float]) -> tuple[str, str]:
    """Verdict for a claim ``c(t) -> 0`` from values on an increasing grid.

    ``holds`` on geometric decay (below ``EPS_TREND``, each of the last three
    windows shrinking by ``SHRINK``) or on at least logarithmic decay (local
    slope of ``ln c`` against ``ln ln t`` at most ``LOG_DECAY_SLOPE`` on the
    last three windows, ``c`` nonincreasing throughout). ``fails`` when the
    values stay above ``DELTA``.
    """
    cs = [float(c) for c in cs]
    ts = [float(t) for t in ts]
    if not cs:
        return "inconclusive", "none"
    if cs[-1] == 0:
        return "holds", "decaying"
    if len(cs) < 4:
        return "inconclusive", "none"
    shrinking = _shrinking(cs[-4:])
    if shrinking and cs[-1] < EPS_TREND:
        return "holds", "decaying"
    monotone = all(b <= a for a, b in zip(cs, cs[1:]))
    if monotone and min(cs) > 0 and ts[-4] > 1:
        slopes = []
        for i in range(len(cs) - 3, len(cs)):
            dl = math.log(math.log(ts[i])) - math.log(math.log(ts[i - 1]))
            slopes.append((math.log(cs[i]) - math.log(cs[i - 1])) / dl)
        if all(s <= LOG_DECAY_SLOPE for s in slopes):
            return "holds", "decaying"
    if min(cs) >= DELTA and not shrinking:
        return "fails", "growing" if cs[-1] > cs[0] else "flat"
    return "inconclusive", "decaying" if monotone else "none"


def _shrinking(window: Sequence[float]) -> bool:
    """Each consecutive value is at most ``1/SHRINK`` of the previous one."""
    return all(b == 0 or (a > 0 and a / b >= SHRINK) for a, b in zip(window, window[1:]))


def classify_finite_limit(xs: Sequence[float], values: Sequence[float]) -> tuple[str, str]:
    """Verdict for a nondecreasing quantity staying finite, from its doubling-window increments."""
    vals = [float(v) for v in values]
    if any(math.isinf(v) for v in vals):
        return "fails", "growing"
    inc = [b - a for a, b in zip(vals, vals[1:])]
    if not inc:
        return "inconclusive", "none"
    if len(inc) >= 3 and all(i == 0 for i in inc[-3:]):
        return "holds", "flat"
    if len(inc) < 4:
        return "inconclusive", "none"
    shrinking = _shrinking(inc[-4:])
    if shrinking and inc[-1] < EPS_TREND:
        return "holds", "decaying"
    if min(inc) >= DELTA and not shrinking:
        return "fails", "growing" if inc[-1] > inc[0] else "flat"
    return "inconclusive", "decaying" if shrinking else "none"


# --------------------------------------------------------------------------- #
# Figure-1 nodes and diagnostics
# --------------------------------------------------------------------------- #

NODES = (
    ("st_bounded_by_q_integrable", "{|X|} is st-bounded by a q-integrable r.v."),
    ("pow_q_icx_bounded_by_integrable", "{|X|^q} is icx-bounded by an integrable r.v."),
    ("Lq_bounded", "{X} is bounded in L^q"),
    ("st_bounded_by_integrable", "{|X|} is st-bounded by an integrable r.v."),
    ("icx_bounded_by_integrable", "{|X|} is icx-bounded by an integrable r.v."),
    ("L1_bounded", "{X} is bounded in L^1"),
    ("st_bounded_by_p_integrable", "{|X|} is st-bounded by a p-integrable r.v."),
    ("pow_p_icx_bounded_by_integrable", "{|X|^p} is icx-bounded by an integrable r.v."),
    ("Lp_bounded", "{X} is bounded in L^p"),
    ("st_bounded_by_finite", "{|X|} is st-bounded by a finite r.v."),
)
NODE_IDS = tuple(n for n, _ in NODES)

# side-column properties that are equivalent to a center node
ALIASES = {
    "st_pow_q_bounded_by_integrable": "st_bounded_by_q_integrable",
    "icx_bounded_by_q_integrable": "st_bounded_by_q_integrable",
    "uniformly_q_integrable": "pow_q_icx_bounded_by_integrable",
    "W_q_relatively_compact": "pow_q_icx_bounded_by_integrable",
    "W_q_bounded": "Lq_bounded",
    "UI": "icx_bounded_by_integrable",
    "W_1_relatively_compact": "icx_bounded_by_integrable",
    "W_1_bounded": "L1_bounded",
    "st_pow_p_bounded_by_integrable": "st_bounded_by_p_integrable",
    "uniformly_p_integrable": "pow_p_icx_bounded_by_integrable",
    "tight": "st_bounded_by_finite",
    "prohorov_relatively_compact": "st_bounded_by_finite",
}


def _node_kinds(p: Fraction, q: Fraction):
    """``(node id, kind, exponent)``; kinds: stlp, ui_pow, lp, tight."""
    one = Fraction(1)
    return (
        (NODE_IDS[0], "stlp", q), (NODE_IDS[1], "ui_pow", q), (NODE_IDS[2], "lp", q),
        (NODE_IDS[3], "stlp", one), (NODE_IDS[4], "ui_pow", one), (NODE_IDS[5], "lp", one),
        (NODE_IDS[6], "stlp", p), (NODE_IDS[7], "ui_pow", p), (NODE_IDS[8], "lp", p),
        (NODE_IDS[9], "tight", None),
    )


@dataclass(frozen=True)
class Report:
    verdicts: dict
    params: dict = field(default_factory=dict)

    def __getitem__(self, node: str) -> Verdict:
        return self.verdicts[ALIASES.get(node, node)]

    def to_json(self) -> dict:
        return {"params": self.params,
                "verdicts": {k: v.to_json() for k, v in self.verdicts.items()}}


def _check_pq(p, q) -> tuple[Fraction, Fraction]:
    p, q = to_rational(p), to_rational(q)
    if not 0 < p < 1 < q:
        raise ValueError("need 0 < p < 1 < q")
    return p, q


def diagnose(fam: FamilyLike, p=Fraction(1, 2), q=Fraction(2), N: Optional[int] = None,
             t_grid: Optional[Sequence] = None, T_grid: Optional[Sequence] = None) -> Report:
    """One verdict per Figure-1 node.

    Finite families are decided exactly; builtin sequences get trend verdicts
    from doubling grids (or the supplied ``t_grid`` / ``T_grid``).
    """
    p, q = _check_pq(p, q)
    if isinstance(fam, BuiltinFamily) and N is not None:
        fam = fam.with_N(N)
    params = {"p": str(p), "q": str(q)}
    if isinstance(fam, BuiltinFamily):
        params["N"] = fam.N
    verdicts = {node: node_verdict(fam, node, p, q, t_grid, T_grid) for node in NODE_IDS}
    return Report(verdicts, params)


def node_verdict(fam: FamilyLike, node: str, p=Fraction(1, 2), q=Fraction(2),
                 t_grid: Optional[Sequence] = None, T_grid: Optional[Sequence] = None) -> Verdict:
    """Verdict for a single Figure-1 node (aliases accepted)."""
    p, q = _check_pq(p, q)
    node = ALIASES.get(node, node)
    kind, s = {n: (k, e) for n, k, e in _node_kinds(p, q)}[node]
    if isinstance(fam, FiniteFamily):
        return _finite_verdict(fam, kind, s)
    if fam.closed_form:
        return _closed_verdict(fam, kind, s)
    return _builtin_verdict(fam, kind, s, t_grid, T_grid)


def _finite_verdict(fam: FiniteFamily, kind: str, s) -> Verdict:
    # every node holds for a finite discrete family; values are the exact limits
    if kind == "tight":
        top = max(X.xs[-1] for X in fam.members)
        c = tight_criterion(fam, top)
        return Verdict("holds" if c == 0 else "fails", ((float(top), float(c)),), "none",
                       "sup survival at the largest atom", True)
    if kind == "ui_pow":
        g = fam.power(s)
        top = max(X.xs[-1] for X in g.members)
        c = ui_criterion(g, top)
        return Verdict("holds" if c == 0 else "fails", ((float(top), float(c)),), "none",
                       f"sup ISF of X^{s} at the largest atom", True)
    if kind == "stlp":
        top = max(rpow(X.xs[-1], s) for X in fam.members)
        v = stlp_criterion(fam, s, top)
        return Verdict("holds", ((float(top), float(v)),), "none",
                       f"int_0^inf sup P(X > t^(1/{s})) dt", True)
    v = lp_bound(fam, s)
    return Verdict("holds", ((float(s), float(v)),), "none", f"sup E X^{s}", True)


def _closed_verdict(fam: BuiltinFamily, kind: str, s) -> Verdict:
    X = fam.law
    if kind == "tight":
        ts = [2.0**k for k in range(2, 41)]
        cs = [X.survival(t) for t in ts]
        status, trend = classify_limit_zero(ts, cs)
        return Verdict(status, tuple(zip(ts, cs))[-6:], trend, "P(X > t)")
    fact = D.moment(X, s)
    probe, windows = D.numeric_moment(X, s)
    if math.isinf(fact) != math.isinf(probe):
        status = "inconclusive"
    else:
        status = "fails" if math.isinf(fact) else "holds"
    trend = "growing" if math.isinf(probe) else "decaying"
    ev = ((float(s), fact), (float(s), probe)) + tuple(windows[-4:])
    return Verdict(status, ev, trend, f"E X^{s} (analytic, numeric, last windows)")


def _doubling(lo_exp: int, top: float, margin: float) -> list[float]:
    grid = []
    k = lo_exp
    while 2.0**k <= top / margin:
        grid.append(2.0**k)
        k += 1
    return grid


def _builtin_verdict(fam: BuiltinFamily, kind: str, s, t_grid, T_grid) -> Verdict:
    if kind in ("tight", "ui_pow"):
        g = fam if kind == "tight" else fam.power(s)
        top = float(g.arrays()[0][-1])
        ts = list(t_grid) if t_grid else _doubling(2, top, 16)
        fn = tight_criterion if kind == "tight" else ui_criterion
        cs = [fn(g, t) for t in ts]
        status, trend = classify_limit_zero(ts, cs)
        name = "sup P(X > t)" if kind == "tight" else f"sup ISF of X^{s} at t"
        return Verdict(status, tuple((float(t), float(c)) for t, c in zip(ts, cs)), trend, name)
    if kind == "stlp":
        top = float(fam.power(s).arrays()[0][-1])
        Ts = list(T_grid) if T_grid else _doubling(0, top, 8)
        vals = [stlp_criterion(fam, s, T) for T in Ts]
        status, trend = classify_finite_limit(Ts, vals)
        return Verdict(status, tuple((float(T), float(v)) for T, v in zip(Ts, vals)), trend,
                       f"int_0^T sup P(X > t^(1/{s})) dt")
    Ns = sorted({max(2, fam.N >> j) for j in range(8, -1, -1)})
    vals = lp_bound_profile(fam, s, Ns)
    status, trend = classify_finite_limit(Ns, vals)
    return Verdict(status, tuple((float(n), float(v)) for n, v in zip(Ns, vals)), trend,
                   f"sup_(n<=N') E X_n^{s}")
