"""Distributions on [0, inf) and their per-distribution transforms.

``DiscreteDist`` is the exact workhorse: every transform of it (CDF, survival,
integrated survival function, quantile tail integral, Hardy-Littlewood
maximal quantile curve) is computed in rational arithmetic. ``ClosedFormDist``
covers the two continuous counterexample laws, whose moments are probed
numerically with a divergence detector.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Union

from scipy import integrate as _quad

from ._rational import is_integral, rpow, to_rational
from .pwfun import PLF, StepFn
from .rng import SplitMix64


class InvalidDistribution(ValueError):
    """Input violates a DiscreteDist invariant; the message names which."""


class ISFError(ValueError):
    """A function fails one of the integrated-survival-function conditions."""


class NotConvex(ISFError):
    pass


class NonVanishingTail(ISFError):
    pass


class BoundaryViolation(ISFError):
    pass


# --------------------------------------------------------------------------- #
# Discrete distributions
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class DiscreteDist:
    """Finitely supported law on [0, inf).

    ``atoms`` holds ``(x, p)`` pairs with ``x`` strictly increasing and the
    masses summing to exactly one.
    """

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        atoms = tuple((to_rational(x), to_rational(p)) for x, p in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise InvalidDistribution("a distribution needs at least one atom")
        for x, p in atoms:
            if x < 0:
                raise InvalidDistribution(f"atom position {x} is negative")
            if p <= 0:
                raise InvalidDistribution(f"atom mass {p} at x={x} is not positive")
        for (a, _), (b, _) in zip(atoms, atoms[1:]):
            if b <= a:
                raise InvalidDistribution("atom positions must be strictly increasing")
        total = sum(p for _, p in atoms)
        if total != 1:
            raise InvalidDistribution(f"probabilities sum to {total} ≠ 1")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple]) -> "DiscreteDist":
        """Sort, merge repeated positions and drop zero masses before validating."""
        merged: dict[Fraction, Fraction] = {}
        for x, p in pairs:
            x, p = to_rational(x), to_rational(p)
            merged[x] = merged.get(x, Fraction(0)) + p
        return cls(tuple((x, p) for x, p in sorted(merged.items()) if p != 0))

    @cached_property
    def xs(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.atoms)

    @cached_property
    def ps(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.atoms)

    @cached_property
    def cumulative(self) -> tuple[Fraction, ...]:
        out, acc = [], Fraction(0)
        for p in self.ps:
            acc += p
            out.append(acc)
        return tuple(out)

    def __repr__(self):
        body = ", ".join(f"{x}: {p}" for x, p in self.atoms)
        return f"DiscreteDist({{{body}}})"


def point_mass(c) -> DiscreteDist:
    return DiscreteDist(((to_rational(c), Fraction(1)),))


@lru_cache(maxsize=8192)
def cdf(X: DiscreteDist) -> StepFn:
    return StepFn.make(X.xs, 0, X.cumulative)


@lru_cache(maxsize=8192)
def survival(X: DiscreteDist) -> StepFn:
    return StepFn.make(X.xs, 1, [1 - c for c in X.cumulative])


def quantile(X: DiscreteDist, u) -> Fraction:
    """Left-continuous quantile ``inf{t : F(t) >= u}`` for ``u`` in (0, 1)."""
    u = to_rational(u)
    if not 0 < u < 1:
        raise ValueError("quantile level must lie in (0, 1)")
    return X.xs[bisect.bisect_left(X.cumulative, u)]


@lru_cache(maxsize=8192)
def isf(X: DiscreteDist) -> PLF:
    """Integrated survival function ``t -> E(X - t)+``, knotted at 0 and the atoms."""
    knots = [Fraction(0)] + [x for x in X.xs if x > 0]
    values = [sum((p * (x - t) for x, p in X.atoms if x > t), Fraction(0)) for t in knots]
    return PLF.make(knots, values, 0)


def dist_from_isf(H: PLF) -> DiscreteDist:
    """Recover the law whose ISF is ``H`` through ``F = 1 + H'_+``."""
    if H.knots[0] != 0:
        raise ValueError("an ISF must be given from t = 0")
    if H.terminal_slope != 0 or H.knot_values[-1] != 0:
        raise NonVanishingTail("H(t) does not tend to 0 as t -> inf")
    slopes = H.slopes()
    if any(b < a for a, b in zip(slopes, slopes[1:])):
        raise NotConvex("H is not convex (slopes decrease somewhere)")
    h0 = H.knot_values[0]
    for k, v in zip(H.knots, H.knot_values):
        if v + k < h0:
            raise BoundaryViolation(f"H(t) + t < H(0) at t = {k}")
    pairs = [(Fraction(0), 1 + slopes[0])]
    pairs += [(k, s1 - s0) for k, s0, s1 in zip(H.knots[1:], slopes, slopes[1:])]
    return DiscreteDist.from_pairs(pairs)


def power(X: DiscreteDist, s) -> DiscreteDist:
    """Law of ``X ** s`` for ``s > 0``."""
    s = to_rational(s)
    if s <= 0:
        raise ValueError("power exponent must be positive")
    return DiscreteDist.from_pairs((rpow(x, s), p) for x, p in X.atoms)


@lru_cache(maxsize=8192)
def tail_integral(X: DiscreteDist) -> PLF:
    """``u -> int_u^1 F^{-1}(v) dv`` on [0, 1], knotted at cumulative masses."""
    knots = [Fraction(0)] + list(X.cumulative)
    values, acc = [], Fraction(0)
    for x, p in reversed(X.atoms):
        values.append(acc)
        acc += x * p
    values.append(acc)
    return PLF.make(knots, values[::-1], 0)


# --------------------------------------------------------------------------- #
# Hardy-Littlewood maximal quantile curves
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class QuantileCurve:
    """Nondecreasing function on (0, 1) made of pieces ``(a + b*u) / (1 - u)``.

    Segment ``i`` covers ``(breakpoints[i-1], breakpoints[i]]`` and is stored
    as the numerator coefficients ``(a, b)``; a constant ``c`` is ``(c, -c)``.
    """

    breakpoints: tuple[Fraction, ...]
    segments: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        if len(self.segments) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more segment than breakpoints")
        bps = (Fraction(0),) + self.breakpoints + (Fraction(1),)
        if any(b <= a for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing inside (0, 1)")
        for a, b in self.segments:
            if a + b < 0:
                raise ValueError("segment is decreasing")
        for i, u in enumerate(self.breakpoints):
            if _seg_value(self.segments[i], u) > _seg_value(self.segments[i + 1], u):
                raise ValueError(f"curve jumps down at u = {u}")

    def intervals(self):
        """Yield ``(lo, hi, (a, b))`` for each segment."""
        bps = (Fraction(0),) + self.breakpoints + (Fraction(1),)
        for lo, hi, seg in zip(bps, bps[1:], self.segments):
            yield lo, hi, seg

    def numerator(self, u) -> Fraction:
        """``(1 - u) * curve(u)``, the linear numerator at ``u``."""
        u = to_rational(u)
        a, b = self.segments[bisect.bisect_left(self.breakpoints, u)]
        return a + b * u

    def __call__(self, u) -> Fraction:
        u = to_rational(u)
        if not 0 < u < 1:
            raise ValueError("curve argument must lie in (0, 1)")
        return _seg_value(self.segments[bisect.bisect_left(self.breakpoints, u)], u)

    def survival(self, t) -> Fraction:
        """``P(curve(U) > t)`` for uniform ``U``."""
        t = to_rational(t)
        below = Fraction(0)  # measure of {u : curve(u) <= t}
        for lo, hi, (a, b) in self.intervals():
            if a + b == 0:
                if a <= t:
                    below = hi
                    continue
                break
            # increasing piece: curve(u) <= t  <=>  u <= (t - a) / (t + b)
            if _seg_value((a, b), lo) > t:
                break
            if hi < 1 and _seg_value((a, b), hi) <= t:
                below = hi
                continue
            below = (t - a) / (t + b)
            break
        return 1 - below


def _seg_value(seg: tuple[Fraction, Fraction], u: Fraction) -> Fraction:
    a, b = seg
    if a + b == 0:
        return a
    return (a + b * u) / (1 - u)


def hl_maximal(X) -> QuantileCurve:
    """Quantile curve ``u -> (1-u)^{-1} int_u^1 F^{-1}`` of the maximal variable."""
    if not isinstance(X, DiscreteDist):
        raise TypeError("hl_maximal is defined here for discrete laws only")
    segments = []
    tail = Fraction(0)  # sum of x_i p_i over atoms above the current one
    for (x, p), c in reversed(list(zip(X.atoms, X.cumulative))):
        segments.append((x * c + tail, -x))
        tail += x * p
    segments.reverse()
    return QuantileCurve(tuple(X.cumulative[:-1]), tuple(segments))


def _curve_moment(C: QuantileCurve, q: Fraction) -> float:
    total = 0.0
    exact = Fraction(0)
    for lo, hi, (a, b) in C.intervals():
        if a + b == 0:
            exact += rpow(a, q) * (hi - lo) if a > 0 else 0
            continue
        if hi == 1:
            return math.inf
        c = a + b
        w0, w1 = 1 - lo, 1 - hi  # integrate (c/w - b)^q over w in [w1, w0]
        if is_integral(q):
            n = int(q)
            for k in range(n + 1):
                coef = math.comb(n, k) * c**k * (-b) ** (n - k)
                if coef == 0:
                    continue
                if k == 1:
                    total += float(coef) * math.log(w0 / w1)
                else:
                    exact += coef * (w0 ** (1 - k) - w1 ** (1 - k)) / (1 - k)
        else:
            fc, fb, fq = float(c), float(b), float(q)
            val, _ = _quad.quad(lambda w: (fc / w - fb) ** fq, float(w1), float(w0),
                                epsabs=0, epsrel=1e-13, limit=200)
            total += val
    return float(exact) + total


# --------------------------------------------------------------------------- #
# Closed-form continuous laws
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class ClosedFormDist:
    """Continuous law built from a uniform ``U``: ``exp(1/U)`` or ``U**(-r)``."""

    catalog_id: str
    r: Fraction = Fraction(1)
    survival_fn: Callable[[float], float] = field(init=False, repr=False, compare=False)
    kink: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "r", to_rational(self.r))
        if self.catalog_id == "exp_inv_u":
            fn = lambda t: 1.0 if t <= math.e else 1.0 / math.log(t)
            knk = math.e
        elif self.catalog_id == "u_inv_pow":
            if self.r <= 0:
                raise InvalidDistribution("u_inv_pow needs r > 0")
            inv = 1.0 / float(self.r)
            fn = lambda t: 1.0 if t <= 1.0 else t ** (-inv)
            knk = 1.0
        else:
            raise InvalidDistribution(f"unknown closed-form law {self.catalog_id!r}")
        object.__setattr__(self, "survival_fn", fn)
        object.__setattr__(self, "kink", knk)
        grid = [0.0] + [2.0**k for k in range(-4, 60)]
        vals = [fn(t) for t in grid]
        if any(b > a for a, b in zip(vals, vals[1:])) or vals[-1] > 0.05:
            raise InvalidDistribution("survival function is not a vanishing nonincreasing curve")

    def survival(self, t: float) -> float:
        return self.survival_fn(float(t))

    def moment_fact(self, p) -> float:
        """Analytic ``E X^p`` (``math.inf`` when it diverges)."""
        p = to_rational(p)
        if self.catalog_id == "exp_inv_u":
            return math.inf
        rp = self.r * p
        return math.inf if rp >= 1 else float(1 / (1 - rp))

    @property
    def moment_facts(self) -> list[tuple[str, str]]:
        if self.catalog_id == "exp_inv_u":
            return [("p > 0", "infinite")]
        return [(f"p < {1 / self.r}", "1/(1 - r p)"), (f"p >= {1 / self.r}", "infinite")]


def numeric_moment(X: ClosedFormDist, p, t_max: float = 1e12,
                   tol: float = 1e-9) -> tuple[float, list[tuple[float, float]]]:
    """``E X^p = int_0^inf S(s^{1/p}) ds`` over doubling windows.

    Returns the value (``math.inf`` on detected divergence) and the window
    integrals ``(T, int_T^{2T})`` used as evidence.
    """
    inv = 1.0 / float(to_rational(p))
    g = lambda s: X.survival(s**inv)
    kink = X.kink ** float(to_rational(p))

    def window(lo, hi):
        pts = [kink] if lo < kink < hi else None
        val, _ = _quad.quad(g, lo, hi, points=pts, epsabs=0, epsrel=1e-12, limit=200)
        return val

    total = window(0.0, 1.0)
    windows = []
    T = 1.0
    growing = 0
    while T < t_max:
        w = window(T, 2 * T)
        windows.append((T, w))
        total += w
        growing = growing + 1 if len(windows) > 1 and w > windows[-2][1] else 0
        if growing >= 5 and w > 1:
            return math.inf, windows
        if w < 1e-13 * max(1.0, total):
            return total, windows
        T *= 2
    if windows[-1][1] >= tol:
        return math.inf, windows
    return total, windows


# --------------------------------------------------------------------------- #
# Moments
# --------------------------------------------------------------------------- #

Dist = Union[DiscreteDist, ClosedFormDist, QuantileCurve]


def mean(X: Dist):
    return moment(X, 1)


def moment(X: Dist, p, *, numeric: bool = False):
    """``E X^p``.

    Exact Fraction for a DiscreteDist (float-promoted powers when ``p`` is
    fractional), float for a QuantileCurve, and for a ClosedFormDist the
    analytic value unless ``numeric=True`` forces the windowed probe.
    Divergence is reported as ``math.inf``.
    """
    p = to_rational(p)
    if p <= 0:
        raise ValueError("moment order must be positive")
    if isinstance(X, DiscreteDist):
        return sum((m * rpow(x, p) for x, m in X.atoms), Fraction(0))
    if isinstance(X, QuantileCurve):
        return _curve_moment(X, p)
    if isinstance(X, ClosedFormDist):
        if numeric:
            return numeric_moment(X, p)[0]
        return X.moment_fact(p)
    raise TypeError(f"no moment for {type(X).__name__}")


def moment_via_isf(X: DiscreteDist, p):
    """``E X^p`` as ``p * int_0^inf H(t^{1/(p-1)}) dt`` for ``p > 1``.

    After substituting ``t = s^{p-1}`` each linear ISF piece ``alpha + beta*s``
    on ``[s0, s1]`` contributes ``p*alpha*[s^{p-1}] + (p-1)*beta*[s^p]``.
    """
    p = to_rational(p)
    if p <= 1:
        raise ValueError("moment_via_isf needs p > 1")
    H = isf(X)
    slopes = H.slopes()
    exact = is_integral(p)
    fp = float(p)
    total = Fraction(0) if exact else 0.0
    for i in range(len(H.knots) - 1):
        s0, s1 = H.knots[i], H.knots[i + 1]
        beta = slopes[i]
        alpha = H.knot_values[i] - beta * s0
        if exact:
            n = int(p)
            total += n * alpha * (s1 ** (n - 1) - s0 ** (n - 1)) + (n - 1) * beta * (s1**n - s0**n)
        else:
            f0, f1 = float(s0), float(s1)
            total += fp * float(alpha) * (f1 ** (fp - 1) - f0 ** (fp - 1))
            total += (fp - 1) * float(beta) * (f1**fp - f0**fp)
    return total


def sample(X: DiscreteDist, n: int, seed: int) -> list[float]:
    """``n`` inverse-transform draws ``quantile(X, U_i)`` from SplitMix64(seed)."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = SplitMix64(seed)
    cum = X.cumulative
    xs = [float(x) for x in X.xs]
    # exact comparison against the rational cumulative masses
    return [xs[bisect.bisect_left(cum, Fraction(rng.uniform()))] for _ in range(n)]
