"""One-dimensional Wasserstein and Prohorov distances between discrete laws.

Each metric has a fast primary route and an independent oracle:

* Wasserstein: quantile integral on the merged partition of (0, 1) versus a
  min-cost transportation problem over atom pairs.
* Prohorov: bisection on epsilon with a max-flow feasibility test versus an
  enumeration of atom subsets over the finite set of critical epsilons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._flow import FlowNetwork
from ._rational import rpow, to_rational
from .dist import DiscreteDist, quantile


class SupportTooLarge(ValueError):
    pass


class InternalInvariantError(RuntimeError):
    """A monotonicity or consistency invariant failed during computation."""


@dataclass(frozen=True)
class Coupling:
    entries: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def marginals(self) -> tuple[DiscreteDist, DiscreteDist]:
        return (DiscreteDist.from_pairs((x, m) for x, _, m in self.entries),
                DiscreteDist.from_pairs((y, m) for _, y, m in self.entries))


def _check_order(p) -> Fraction:
    p = to_rational(p)
    if p < 1:
        raise ValueError("Wasserstein order must be >= 1")
    return p


def wasserstein_cost(X: DiscreteDist, Y: DiscreteDist, p) -> Fraction:
    """``int_0^1 |F_X^{-1} - F_Y^{-1}|^p du``, exact for integral ``p``."""
    p = _check_order(p)
    cuts = sorted({Fraction(0)} | set(X.cumulative) | set(Y.cumulative))
    total = Fraction(0)
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        gap = abs(quantile(X, mid) - quantile(Y, mid))
        if gap:
            total += (hi - lo) * rpow(gap, p)
    return total


def wasserstein(X: DiscreteDist, Y: DiscreteDist, p=1) -> float:
    p = _check_order(p)
    cost = wasserstein_cost(X, Y, p)
    return float(cost) if p == 1 else float(cost) ** (1 / float(p))


def wasserstein_lp_oracle(X: DiscreteDist, Y: DiscreteDist, p=1) -> tuple[float, Coupling]:
    """Optimal transport over atom pairs by min-cost flow, costs ``|x-y|^p``."""
    p = _check_order(p)
    m, n = len(X.atoms), len(Y.atoms)
    if m > 64 or n > 64:
        raise SupportTooLarge("transport oracle accepts at most 64 atoms per side")
    net = FlowNetwork(m + n + 2)
    s, t = 0, m + n + 1
    for i, (_, mu) in enumerate(X.atoms):
        net.add_arc(s, 1 + i, mu)
    for j, (_, nu) in enumerate(Y.atoms):
        net.add_arc(1 + m + j, t, nu)
    arcs = {}
    for i, (x, _) in enumerate(X.atoms):
        for j, (y, _) in enumerate(Y.atoms):
            gap = abs(x - y)
            arcs[i, j] = net.add_arc(1 + i, 1 + m + j, Fraction(1), rpow(gap, p) if gap else Fraction(0))
    sent, cost = net.min_cost_flow(s, t, Fraction(1))
    if sent != 1:
        raise InternalInvariantError("transport problem did not move all mass")
    entries = []
    for (i, j), arc in sorted(arcs.items()):
        mass = net.flow_on(arc)
        if mass > 0:
            entries.append((X.xs[i], Y.xs[j], mass))
    value = float(cost) if p == 1 else float(cost) ** (1 / float(p))
    return value, Coupling(tuple(entries))


# --------------------------------------------------------------------------- #
# Prohorov
# --------------------------------------------------------------------------- #


def _flow_feasible(X: DiscreteDist, Y: DiscreteDist, eps: Fraction) -> bool:
    """Whether ``X(B) <= Y(B^eps) + eps`` for every Borel ``B``.

    Max-flow with arcs between atoms closer than ``eps`` plus a slack node
    of capacity ``eps``: every cut through the slack node costs
    ``1 - X(B) + Y(B^eps) + eps``, so full flow is equivalent to the condition.
    """
    m, n = len(X.atoms), len(Y.atoms)
    net = FlowNetwork(m + n + 3)
    s, slack, t = 0, m + n + 1, m + n + 2
    for i, (x, mu) in enumerate(X.atoms):
        net.add_arc(s, 1 + i, mu)
        net.add_arc(1 + i, slack, Fraction(1))
        for j, (y, _) in enumerate(Y.atoms):
            if abs(x - y) < eps:
                net.add_arc(1 + i, 1 + m + j, Fraction(1))
    for j, (_, nu) in enumerate(Y.atoms):
        net.add_arc(1 + m + j, t, nu)
    net.add_arc(slack, t, eps)
    return net.max_flow(s, t) >= 1


def prohorov_feasible(X: DiscreteDist, Y: DiscreteDist, eps) -> bool:
    eps = to_rational(eps)
    return _flow_feasible(X, Y, eps) and _flow_feasible(Y, X, eps)


def prohorov(X: DiscreteDist, Y: DiscreteDist, tol=Fraction(1, 10**9)) -> float:
    """Prohorov distance by bisection on epsilon, absolute tolerance ``tol``.

    The answer is the simplest rational inside the final bracket, so exact
    values such as 1/2 come out exactly.
    """
    tol = to_rational(tol)
    lo, hi = Fraction(0), Fraction(1)
    feasible_seen: list[Fraction] = [hi]
    infeasible_seen: list[Fraction] = [lo]
    if prohorov_feasible(X, Y, lo) or not prohorov_feasible(X, Y, hi):
        raise InternalInvariantError("Prohorov feasibility fails at the bracket ends")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if prohorov_feasible(X, Y, mid):
            hi = mid
            feasible_seen.append(mid)
        else:
            lo = mid
            infeasible_seen.append(mid)
    if max(infeasible_seen) >= min(feasible_seen):
        raise InternalInvariantError("Prohorov feasibility is not monotone in epsilon")
    return float(simplest_between(lo, hi))


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in ``[lo, hi]`` (``0 <= lo <= hi``)."""
    fl = lo.numerator // lo.denominator
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl))


def prohorov_bruteforce(X: DiscreteDist, Y: DiscreteDist) -> Fraction:
    """Exact Prohorov distance from the definition, by subset enumeration.

    Between consecutive critical distances ``d_k < eps <= d_{k+1}`` the
    neighbourhoods are fixed, so the condition reads ``eps >= h_k`` with
    ``h_k`` the largest ``X(B) - Y(B^eps)`` over atom subsets (both ways).
    """
    if len(X.atoms) + len(Y.atoms) > 16:
        raise SupportTooLarge("brute force accepts at most 16 atoms in total")
    levels = sorted({Fraction(0)} | {abs(x - y) for x in X.xs for y in Y.xs})
    best = Fraction(1)
    for k, d in enumerate(levels):
        h = max(_worst_gap(X, Y, d), _worst_gap(Y, X, d), Fraction(0))
        cand = max(d, h)
        upper = levels[k + 1] if k + 1 < len(levels) else None
        # d itself is excluded from the cell: eps must exceed d, so cand == d is an infimum
        if upper is None or cand <= upper:
            best = min(best, cand)
    return best


def _worst_gap(X: DiscreteDist, Y: DiscreteDist, d: Fraction) -> Fraction:
    """``max_B X(B) - Y(B^eps)`` when ``B^eps`` reaches atoms at distance ``<= d``."""
    m, n = len(X.atoms), len(Y.atoms)
    reach = [sum(1 << j for j, y in enumerate(Y.xs) if abs(x - y) <= d) for x in X.xs]
    ymass = [Fraction(0)] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        ymass[mask] = ymass[mask & (mask - 1)] + Y.ps[low]
    worst = None
    for B in range(1, 1 << m):
        xm, nb = Fraction(0), 0
        for i in range(m):
            if B >> i & 1:
                xm += X.ps[i]
                nb |= reach[i]
        gap = xm - ymass[nb]
        if worst is None or gap > worst:
            worst = gap
    return worst
