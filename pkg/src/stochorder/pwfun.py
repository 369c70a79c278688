"""Exact step functions and continuous piecewise-linear functions on [0, inf).

Both types store Fractions and are kept in canonical form, so two values
compare equal exactly when they describe the same function.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence, Union

from ._rational import to_rational


class IntegralDiverges(ArithmeticError):
    """Raised when an integral to infinity has a non-vanishing tail."""


@dataclass(frozen=True)
class StepFn:
    """Right-continuous step function.

    Takes ``left_value`` on ``[0, jump_points[0])`` and ``values[i]`` on
    ``[jump_points[i], jump_points[i+1])``.
    """

    jump_points: tuple[Fraction, ...]
    left_value: Fraction
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.jump_points) != len(self.values):
            raise ValueError("jump_points and values differ in length")
        if any(b <= a for a, b in zip(self.jump_points, self.jump_points[1:])):
            raise ValueError("jump_points must be strictly increasing")
        if self.jump_points and self.jump_points[0] < 0:
            raise ValueError("jump_points must be >= 0")

    @classmethod
    def make(cls, jump_points: Sequence, left_value, values: Sequence) -> "StepFn":
        """Build a canonical StepFn: zero-size jumps dropped, a jump at 0 folded in."""
        pts = [to_rational(t) for t in jump_points]
        vals = [to_rational(v) for v in values]
        left = to_rational(left_value)
        out_p: list[Fraction] = []
        out_v: list[Fraction] = []
        for t, v in zip(pts, vals):
            if t == 0:
                left = v
                continue
            prev = out_v[-1] if out_v else left
            if v != prev:
                out_p.append(t)
                out_v.append(v)
        return cls(tuple(out_p), left, tuple(out_v))

    @property
    def final_value(self) -> Fraction:
        return self.values[-1] if self.values else self.left_value

    def __call__(self, t) -> Fraction:
        return eval_step(self, t)


@dataclass(frozen=True)
class PLF:
    """Continuous piecewise-linear function.

    Linear between consecutive knots; beyond the last knot it continues with
    ``terminal_slope``. Left of the first knot the first segment is extended.
    """

    knots: tuple[Fraction, ...]
    knot_values: tuple[Fraction, ...]
    terminal_slope: Fraction

    def __post_init__(self):
        if not self.knots:
            raise ValueError("a PLF needs at least one knot")
        if len(self.knots) != len(self.knot_values):
            raise ValueError("knots and knot_values differ in length")
        if any(b <= a for a, b in zip(self.knots, self.knots[1:])):
            raise ValueError("knots must be strictly increasing")

    @classmethod
    def make(cls, knots: Sequence, knot_values: Sequence, terminal_slope=0) -> "PLF":
        """Build a canonical PLF with collinear interior knots merged."""
        ks = [to_rational(k) for k in knots]
        vs = [to_rational(v) for v in knot_values]
        ts = to_rational(terminal_slope)
        if len(ks) != len(vs):
            raise ValueError("knots and knot_values differ in length")
        out_k = [ks[0]]
        out_v = [vs[0]]
        for k, v in zip(ks[1:], vs[1:]):
            if len(out_k) >= 2:
                s_prev = (out_v[-1] - out_v[-2]) / (out_k[-1] - out_k[-2])
                s_new = (v - out_v[-1]) / (k - out_k[-1])
                if s_prev == s_new:
                    out_k[-1], out_v[-1] = k, v
                    continue
            out_k.append(k)
            out_v.append(v)
        # A last knot whose incoming slope equals the terminal slope is redundant.
        if len(out_k) >= 2 and (out_v[-1] - out_v[-2]) / (out_k[-1] - out_k[-2]) == ts:
            out_k.pop()
            out_v.pop()
        return cls(tuple(out_k), tuple(out_v), ts)

    def slopes(self) -> list[Fraction]:
        """Segment slopes including the terminal one (``len(knots)`` entries)."""
        ks, vs = self.knots, self.knot_values
        inner = [(vs[i + 1] - vs[i]) / (ks[i + 1] - ks[i]) for i in range(len(ks) - 1)]
        return inner + [self.terminal_slope]

    def __call__(self, t) -> Fraction:
        return eval_plf(self, t)


def eval_step(f: StepFn, t) -> Fraction:
    t = to_rational(t)
    i = bisect.bisect_right(f.jump_points, t)
    return f.values[i - 1] if i else f.left_value


def eval_plf(f: PLF, t) -> Fraction:
    t = to_rational(t)
    ks, vs = f.knots, f.knot_values
    if t >= ks[-1]:
        return vs[-1] + f.terminal_slope * (t - ks[-1])
    if t <= ks[0]:
        return vs[0] + right_derivative(f, ks[0]) * (t - ks[0])
    i = bisect.bisect_right(ks, t) - 1
    return vs[i] + (vs[i + 1] - vs[i]) * (t - ks[i]) / (ks[i + 1] - ks[i])


def right_derivative(f: PLF, t) -> Fraction:
    """Slope of the segment that starts at (or contains) ``t``."""
    t = to_rational(t)
    ks = f.knots
    if t >= ks[-1]:
        return f.terminal_slope
    i = max(bisect.bisect_right(ks, t) - 1, 0)
    return (f.knot_values[i + 1] - f.knot_values[i]) / (ks[i + 1] - ks[i])


def min_envelope(fs: Sequence[StepFn]) -> StepFn:
    """Pointwise infimum of step functions, exact on the merged jump set."""
    if not fs:
        raise ValueError("min_envelope of an empty list")
    pts = sorted({t for f in fs for t in f.jump_points})
    left = min(f.left_value for f in fs)
    vals = [min(eval_step(f, t) for f in fs) for t in pts]
    return StepFn.make(pts, left, vals)


def max_envelope_convex(fs: Sequence[PLF]) -> PLF:
    """Pointwise supremum of convex PLFs.

    The merged knot set is refined with every pairwise crossing inside each
    cell (and beyond the last knot), after which the maximum is linear
    between consecutive points.
    """
    if not fs:
        raise ValueError("max_envelope_convex of an empty list")
    if len(fs) == 1:
        return fs[0]
    start = min(f.knots[0] for f in fs)
    grid = sorted({k for f in fs for k in f.knots} | {start})
    points = set(grid)
    cells = list(zip(grid, grid[1:])) + [(grid[-1], None)]
    for lo, hi in cells:
        probe = lo if hi is None else (lo + hi) / 2
        lines = []
        for f in fs:
            s = right_derivative(f, probe)
            lines.append((s, eval_plf(f, probe) - s * probe))
        for (s1, c1), (s2, c2) in combinations(set(lines), 2):
            if s1 == s2:
                continue
            x = (c2 - c1) / (s1 - s2)
            if x > lo and (hi is None or x < hi):
                points.add(x)
    pts = sorted(points)
    vals = [max(eval_plf(f, t) for f in fs) for t in pts]
    last = pts[-1]
    tail = max(right_derivative(f, last) for f in fs if eval_plf(f, last) == vals[-1])
    return PLF.make(pts, vals, tail)


def integrate(f: Union[StepFn, PLF], a, b) -> Fraction:
    """Exact integral of ``f`` over ``[a, b]``; ``b`` may be ``math.inf``."""
    a = to_rational(a)
    infinite = isinstance(b, float) and math.isinf(b)
    if not infinite:
        b = to_rational(b)
        if b < a:
            raise ValueError("integrate needs a <= b")
        if b == a:
            return Fraction(0)
    if isinstance(f, StepFn):
        return _integrate_step(f, a, None if infinite else b)
    return _integrate_plf(f, a, None if infinite else b)


def _integrate_step(f: StepFn, a: Fraction, b: Fraction | None) -> Fraction:
    if b is None:
        if f.final_value != 0:
            raise IntegralDiverges("step function does not vanish at infinity")
        b = max([a] + list(f.jump_points))
    edges = [a] + [t for t in f.jump_points if a < t < b] + [b]
    return sum(((hi - lo) * eval_step(f, lo) for lo, hi in zip(edges, edges[1:])), Fraction(0))


def _integrate_plf(f: PLF, a: Fraction, b: Fraction | None) -> Fraction:
    if b is None:
        if f.terminal_slope != 0 or f.knot_values[-1] != 0:
            raise IntegralDiverges("piecewise-linear function does not vanish at infinity")
        b = max(a, f.knots[-1])
    edges = [a] + [k for k in f.knots if a < k < b] + [b]
    total = Fraction(0)
    for lo, hi in zip(edges, edges[1:]):
        total += (hi - lo) * (eval_plf(f, lo) + eval_plf(f, hi)) / 2
    return total
