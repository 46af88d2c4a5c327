"""Exact short-vector enumeration for positive definite rational quadratic forms.

Fincke-Pohst branch and bound over the completed-square decomposition

    Q(x) = sum_i d_i * (x_i + sum_{j>i} m_ij x_j)^2

computed in exact rationals.  Floats only seed the integer interval search;
every interval endpoint is then confirmed with exact arithmetic, so nothing is
ever pruned on a floating point comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence]


class NotPositiveDefinite(ValueError):
    pass


@dataclass(frozen=True)
class EnumRequest:
    gram: tuple
    bound: Fraction
    mode: str = "all_leq"

    def __post_init__(self):
        if self.mode not in ("all_leq", "shortest_nonzero"):
            raise ValueError(f"unknown enumeration mode {self.mode!r}")


def _as_fraction_matrix(gram: Matrix) -> list[list[Fraction]]:
    n = len(gram)
    g = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        if len(gram[i]) != n:
            raise ValueError("Gram matrix must be square")
        for j in range(i):
            if g[i][j] != g[j][i]:
                raise ValueError("Gram matrix must be symmetric")
    return g


def completed_squares(gram: Matrix) -> list[list[Fraction]]:
    """Return q with q[i][i] = d_i and q[i][j] = m_ij for j > i.

    Raises NotPositiveDefinite if some pivot is <= 0.
    """
    q = _as_fraction_matrix(gram)
    n = len(q)
    for i in range(n):
        if q[i][i] <= 0:
            raise NotPositiveDefinite(f"pivot {i} is {q[i][i]}; Gram matrix is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def is_positive_definite(gram: Matrix) -> bool:
    try:
        completed_squares(gram)
    except NotPositiveDefinite:
        return False
    return True


def quad_value(gram: Matrix, x: Sequence[int]) -> Fraction:
    n = len(x)
    total = Fraction(0)
    for i in range(n):
        if x[i] == 0:
            continue
        row = gram[i]
        s = Fraction(0)
        for j in range(n):
            if x[j]:
                s += row[j] * x[j]
        total += s * x[i]
    return total


def _int_range(center: Fraction, radius_sq: Fraction) -> tuple[int, int] | None:
    """Integers t with (t - center)^2 <= radius_sq, as an inclusive range.

    Floats only give starting points; every end is settled by the exact test."""
    if radius_sq < 0:
        return None

    def inside(t: int) -> bool:
        return (t - center) ** 2 <= radius_sq

    # a nonempty range always contains the integer nearest to the center
    mid = math.floor(center + Fraction(1, 2))
    if not inside(mid):
        return None
    r = math.sqrt(float(radius_sq))
    c = float(center)
    lo = min(math.ceil(c - r), mid)
    if inside(lo):
        while inside(lo - 1):
            lo -= 1
    else:
        while not inside(lo):
            lo += 1
    hi = max(math.floor(c + r), mid)
    if inside(hi):
        while inside(hi + 1):
            hi += 1
    else:
        while not inside(hi):
            hi -= 1
    return lo, hi


def _enumerate(q: list[list[Fraction]], bound: Fraction, shrink: bool = False) -> list[tuple[tuple[int, ...], Fraction]]:
    """Nonzero x with Q(x) <= bound, one per +-pair (last nonzero coordinate positive),
    with their values.

    With ``shrink`` the bound drops to the best value found so far, so only the
    vectors of minimal value survive; candidates are visited nearest-first."""
    n = len(q)
    bound = Fraction(bound)
    out: list[tuple[tuple[int, ...], Fraction]] = []
    best = [bound]
    x = [0] * n
    d = [q[i][i] for i in range(n)]

    def rec(i: int, remaining: Fraction, all_zero_above: bool) -> None:
        center = Fraction(0)
        for j in range(i + 1, n):
            if x[j]:
                center -= q[i][j] * x[j]
        slack = remaining - (bound - best[0])
        rng = _int_range(center, slack / d[i])
        if rng is None:
            return
        lo, hi = rng
        if all_zero_above:
            lo = max(lo, 0)
        ts = range(lo, hi + 1)
        if shrink:
            ts = sorted(ts, key=lambda t: abs(t - center))
        for t in ts:
            x[i] = t
            rem = remaining - d[i] * (t - center) ** 2
            if bound - rem > best[0]:
                continue  # only possible after the bound shrank
            if i == 0:
                if not (all_zero_above and t == 0):
                    val = bound - rem
                    if shrink and val < best[0]:
                        best[0] = val
                        out[:] = [(y, v) for y, v in out if v <= val]
                    out.append((tuple(x), val))
            else:
                rec(i - 1, rem, all_zero_above and t == 0)
        x[i] = 0

    rec(n - 1, bound, True)
    return out


def short_vectors(
    gram: Matrix,
    bound,
    mode: str = "all_leq",
    both_signs: bool = False,
) -> list[tuple[tuple[int, ...], Fraction]]:
    """Enumerate lattice vectors of a positive definite Gram matrix.

    mode ``all_leq``: every nonzero x with x^T G x <= bound.
    mode ``shortest_nonzero``: the minimal nonzero value and all vectors attaining
    it; ``bound`` is ignored (the smallest diagonal entry is always a valid bound).

    One representative per {x, -x} pair is returned unless ``both_signs``.
    Output is sorted by (value, x).
    """
    req = EnumRequest(tuple(tuple(r) for r in gram), Fraction(bound), mode)
    g = _as_fraction_matrix(req.gram)
    q = completed_squares(g)
    if mode == "all_leq":
        if req.bound <= 0:
            raise ValueError("bound must be positive")
        found = _enumerate(q, req.bound)
    else:
        # some basis vector attains the smallest diagonal entry, so this bound is never empty
        b = min(g[i][i] for i in range(len(g)))
        found = _enumerate(q, b, shrink=True)
        m = min(v for _, v in found)
        found = [(x, v) for x, v in found if v == m]
    if both_signs:
        found = found + [(tuple(-c for c in x), v) for x, v in found]
    found.sort(key=lambda xv: (xv[1], xv[0]))
    return found


def minimum(gram: Matrix) -> Fraction:
    return short_vectors(gram, 0, mode="shortest_nonzero")[0][1]
