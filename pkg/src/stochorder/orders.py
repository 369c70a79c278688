"""Exact decision procedures for the strong and increasing convex orders.

Both orders are checked on the survival side (step functions, ISFs) and on
the quantile side (tail integrals, maximal quantile curves); the two routes
are computed independently so they can be cross-checked.
"""

from __future__ import annotations

import bisect
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from . import dist as D
from .dist import DiscreteDist, QuantileCurve
from .pwfun import eval_plf, eval_step, max_envelope_convex, min_envelope


class NotTight(ValueError):
    """The pointwise infimum of the CDFs does not reach 1."""


class Comparison(NamedTuple):
    holds: bool
    witness: Optional[Fraction] = None

    def __bool__(self):
        return self.holds


def st_le(X: DiscreteDist, Y: DiscreteDist) -> Comparison:
    """``X <=st Y`` via survival dominance on the merged jump partition.

    On failure the witness is the midpoint of the first cell where the
    survival of ``X`` exceeds that of ``Y``.
    """
    SX, SY = D.survival(X), D.survival(Y)
    pts = sorted({Fraction(0)} | set(X.xs) | set(Y.xs))
    for lo, hi in zip(pts, pts[1:] + [None]):
        if eval_step(SX, lo) > eval_step(SY, lo):
            return Comparison(False, lo + 1 if hi is None else (lo + hi) / 2)
    return Comparison(True)


def icx_le(X: DiscreteDist, Y: DiscreteDist) -> Comparison:
    """``X <=icx Y`` via ISF dominance at the merged knots."""
    HX, HY = D.isf(X), D.isf(Y)
    for t in sorted(set(HX.knots) | set(HY.knots)):
        if eval_plf(HX, t) > eval_plf(HY, t):
            return Comparison(False, t)
    return Comparison(True)


def icx_le_quantile_oracle(X: DiscreteDist, Y: DiscreteDist) -> bool:
    """``X <=icx Y`` via ``int_u^1 F_X^{-1} <= int_u^1 F_Y^{-1}`` on [0, 1]."""
    AX, AY = D.tail_integral(X), D.tail_integral(Y)
    return all(eval_plf(AX, u) <= eval_plf(AY, u) for u in set(AX.knots) | set(AY.knots))


def quantile_curve(X: DiscreteDist) -> QuantileCurve:
    """The step quantile function of ``X`` written as a QuantileCurve."""
    return QuantileCurve(tuple(X.cumulative[:-1]), tuple((x, -x) for x in X.xs))


def curve_le(C1: QuantileCurve, C2: QuantileCurve) -> bool:
    """``C1(u) <= C2(u)`` on (0, 1).

    The common factor ``1/(1-u)`` cancels, leaving linear numerators on each
    cell of the merged partition; comparing them at both cell ends decides.
    """
    bps = sorted({Fraction(0), Fraction(1)} | set(C1.breakpoints) | set(C2.breakpoints))
    for lo, hi in zip(bps, bps[1:]):
        mid = (lo + hi) / 2
        (a1, b1), (a2, b2) = _segment_at(C1, mid), _segment_at(C2, mid)
        if a1 + b1 * lo > a2 + b2 * lo or a1 + b1 * hi > a2 + b2 * hi:
            return False
    return True


def _segment_at(C: QuantileCurve, u: Fraction) -> tuple[Fraction, Fraction]:
    return C.segments[bisect.bisect_left(C.breakpoints, u)]


def hl_st_check(X: DiscreteDist, Y: DiscreteDist) -> bool:
    """``X* <=st Y*`` for the Hardy-Littlewood maximal variables."""
    return curve_le(D.hl_maximal(X), D.hl_maximal(Y))


def least_st_upper_bound(family: Sequence[DiscreteDist]) -> DiscreteDist:
    """Law of the pointwise minimum of the members' CDFs."""
    if not family:
        raise ValueError("empty family")
    F = min_envelope([D.cdf(X) for X in family])
    if F.final_value != 1:
        raise NotTight(f"infimum of the CDFs tends to {F.final_value}, not 1")
    pairs = [(Fraction(0), F.left_value)]
    prev = F.left_value
    for t, v in zip(F.jump_points, F.values):
        pairs.append((t, v - prev))
        prev = v
    return DiscreteDist.from_pairs(pairs)


def least_icx_upper_bound(family: Sequence[DiscreteDist]) -> DiscreteDist:
    """Law whose ISF is the pointwise maximum of the members' ISFs."""
    if not family:
        raise ValueError("empty family")
    return D.dist_from_isf(max_envelope_convex([D.isf(X) for X in family]))


class CouplingCell(NamedTuple):
    lo: Fraction
    hi: Fraction
    x: Fraction
    y: Fraction


def comonotone_coupling(X: DiscreteDist, Y: DiscreteDist) -> list[CouplingCell]:
    """``(F_X^{-1}(U), F_Y^{-1}(U))`` as constant cells ``(lo, hi]`` of (0, 1)."""
    cuts = sorted({Fraction(0)} | set(X.cumulative) | set(Y.cumulative))
    cells = []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        cells.append(CouplingCell(lo, hi, D.quantile(X, mid), D.quantile(Y, mid)))
    return cells
