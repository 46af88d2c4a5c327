"""Property checks shared by the hypothesis suites and the acceptance run.

Each ``check_*`` takes its inputs and raises AssertionError on a violation;
each ``run_*`` draws ``n`` cases from a seeded generator and returns the number
of cases checked.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from functools import lru_cache

from cyclovoronoi import lattice_enum
from cyclovoronoi.cyclotomic import (
    CycNum,
    KNum,
    U5,
    gcd_k,
    is_totally_positive,
    rel_norm,
    solve_rel_norm,
    torsion_units,
    tp_decompose,
)
from cyclovoronoi.hermitian import (
    GMat,
    HermForm,
    OVec,
    act,
    det2,
    evaluate,
    is_perfect,
    minimum_and_vectors,
    pairing,
    q_coords,
    q_form,
)
from cyclovoronoi.voronoi import reference_form

# ---------------------------------------------------------------------------
# generators


def rand_cyc(rng: random.Random, h: int = 2) -> CycNum:
    return CycNum.from_ints([rng.randint(-h, h) for _ in range(4)])


def rand_vec(rng: random.Random, h: int = 2) -> OVec:
    while True:
        v = OVec(rand_cyc(rng, h), rand_cyc(rng, h))
        if not v.is_zero():
            return v


def rand_rational(rng: random.Random, lo: int = 1, hi: int = 9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, hi))


def rand_form(rng: random.Random, h: int = 2) -> HermForm:
    """Any Hermitian form, not necessarily positive definite."""
    a = KNum(Fraction(rng.randint(-5 * h, 5 * h), rng.randint(1, 5)), rng.randint(-h, h))
    c = KNum(Fraction(rng.randint(-5 * h, 5 * h), rng.randint(1, 5)), rng.randint(-h, h))
    b = CycNum(*(Fraction(rng.randint(-h, h), rng.randint(1, 5)) for _ in range(4)))
    return HermForm(a, b, c)


def rand_pd_form(rng: random.Random) -> HermForm:
    """Positive definite: a positive combination of q(v_i) over vectors spanning F^2."""
    while True:
        vs = [rand_vec(rng, 1) for _ in range(rng.randint(2, 3))]
        if not det2(vs[0], vs[1]).is_zero():
            break
    phi = HermForm.from_coords([0] * 8)
    for v in vs:
        phi = phi + q_form(v).scale(rand_rational(rng, 1, 4))
    return phi


def rand_gamma(rng: random.Random, steps: int = 2) -> GMat:
    """Product of elementary and diagonal-torsion matrices."""
    units = torsion_units()
    g = GMat.identity()
    one, zero = CycNum(1), CycNum(0)
    for _ in range(steps):
        kind = rng.randrange(3)
        if kind == 0:
            e = GMat(one, CycNum.from_ints([rng.randint(-1, 1) for _ in range(4)]), zero, one)
        elif kind == 1:
            e = GMat(one, zero, CycNum.from_ints([rng.randint(-1, 1) for _ in range(4)]), one)
        else:
            e = GMat(rng.choice(units), zero, zero, rng.choice(units))
        g = g * e
    return g


def tp_integers(max_trace: int) -> list[KNum]:
    """All totally positive integers p + q u5 with trace 2p + q <= max_trace."""
    out = []
    for q in range(-3 * max_trace, 3 * max_trace + 1):
        for p in range(-3 * max_trace, 3 * max_trace + 1):
            if 2 * p + q > max_trace:
                continue
            x = KNum(p, q)
            if is_totally_positive(x):
                out.append(x)
    return out


# ---------------------------------------------------------------------------
# checks


def direct_value(phi: HermForm, v: OVec) -> Fraction:
    """Tr_{k/Q}(v* A v) expanded by hand, independent of the pairing matrix."""
    a, b, c = phi.a.to_cyc(), phi.b, phi.c.to_cyc()
    al, be = v.alpha, v.beta
    s = al.conj() * a * al + al.conj() * b * be + be.conj() * b.conj() * al + be.conj() * c * be
    return s.to_knum().trace()


def check_pairing_identity(phi: HermForm, v: OVec) -> None:
    oracle = direct_value(phi, v)
    assert pairing(phi, q_form(v)) == oracle
    assert evaluate(phi, v) == oracle


def check_homothety(phi: HermForm, c: Fraction) -> None:
    md = minimum_and_vectors(phi)
    mc = minimum_and_vectors(phi.scale(c))
    assert mc.minimum == c * md.minimum
    assert set(mc.vectors) == set(md.vectors)
    assert is_perfect(phi.scale(c)) == is_perfect(phi)


def check_m_hat(phi: HermForm, b: KNum) -> None:
    assert minimum_and_vectors(phi.scale(b)).minimum >= minimum_and_vectors(phi).minimum


@lru_cache(maxsize=None)
def _norm_solvable(b: KNum) -> bool:
    return solve_rel_norm(b) is not None


def check_coprime_norms(a: KNum, b: KNum) -> None:
    assert _norm_solvable(a * b) == (_norm_solvable(a) and _norm_solvable(b))


def check_tp_decompose(b: KNum) -> None:
    alpha, t = tp_decompose(b)
    assert not alpha.is_zero() and alpha.is_integral()
    assert rel_norm(alpha) + t == b
    assert t.is_zero() or is_totally_positive(t)


def box_oracle(gram, bound) -> set[tuple[int, ...]]:
    """All nonzero x (one per sign pair) with x^T G x <= bound, by scanning a box.

    |x_i| <= sqrt(bound * (G^-1)_ii) holds for every such x."""
    n = len(gram)
    g = [[Fraction(x) for x in row] for row in gram]
    inv = _inverse(g)
    radii = [math.isqrt(int(Fraction(bound) * inv[i][i]) + 1) + 1 for i in range(n)]
    out = set()
    for x in itertools.product(*(range(-r, r + 1) for r in radii)):
        if not any(x):
            continue
        if lattice_enum.quad_value(g, x) <= bound:
            first = next(c for c in x if c)
            out.add(x if first > 0 else tuple(-c for c in x))
    return out


def _inverse(g):
    n = len(g)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(g)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def rand_gram(rng: random.Random, n: int):
    """Positive definite integer Gram matrix A^T A + I."""
    a = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
    return [[sum(a[k][i] * a[k][j] for k in range(n)) + int(i == j) for j in range(n)] for i in range(n)]


def check_enumeration(gram, bound) -> None:
    got = lattice_enum.short_vectors(gram, bound)
    normalized = set()
    for x, val in got:
        assert val == lattice_enum.quad_value(gram, x)
        first = next(c for c in x if c)
        normalized.add(x if first > 0 else tuple(-c for c in x))
    assert len(normalized) == len(got)
    assert normalized == box_oracle(gram, bound)


# ---------------------------------------------------------------------------
# seeded runs


def run_pairing(n: int, seed: int = 1) -> int:
    rng = random.Random(seed)
    for _ in range(n):
        check_pairing_identity(rand_form(rng), rand_vec(rng, 3))
    return n


def run_torsion(height: int = 1) -> int:
    """q(u) = q(v) iff u = tau v, over every primitive vector with coordinates in [-height, height]."""
    fibres: dict[tuple, set] = {}
    count = 0
    rng = range(-height, height + 1)
    for x in itertools.product(rng, repeat=8):
        v = OVec.from_ints(x)
        if v.is_zero() or not v.is_primitive():
            continue
        count += 1
        fibres.setdefault(q_coords(v), set()).add(v.canonical())
        for t in torsion_units():
            assert q_coords(v * t) == q_coords(v)
    for reps in fibres.values():
        assert len(reps) == 1, f"distinct torsion orbits share a q-point: {reps}"
    return count


def run_homothety(n: int, seed: int = 2) -> int:
    rng = random.Random(seed)
    phi0 = reference_form()
    for i in range(n):
        if i % 10 == 0:
            phi = act(rand_gamma(rng, 1).theta(), phi0)
        else:
            phi = rand_pd_form(rng)
        check_homothety(phi, rand_rational(rng))
    return n


def run_m_hat(n: int, seed: int = 3) -> int:
    rng = random.Random(seed)
    bs = [b for b in tp_integers(8) if not b == KNum(1)]
    forms = [reference_form()] + [rand_pd_form(rng) for _ in range(40)]
    for _ in range(n):
        check_m_hat(rng.choice(forms), rng.choice(bs))
    return n


def run_coprime_norms(n: int, seed: int = 4) -> int:
    rng = random.Random(seed)
    pool = tp_integers(12)
    done = 0
    while done < n:
        a, b = rng.choice(pool), rng.choice(pool)
        if abs(gcd_k(a, b).norm()) != 1:
            continue
        check_coprime_norms(a, b)
        done += 1
    return done


def run_tp_decompose(n: int, seed: int = 5) -> int:
    rng = random.Random(seed)
    pool = tp_integers(30)
    for _ in range(n):
        check_tp_decompose(rng.choice(pool))
    return n


def run_no_preimage(height: int = 3) -> int:
    """No alpha with coordinates in [-height, height] has relative norm 4 + u5."""
    target = KNum(4) + U5
    count = 0
    for x in itertools.product(range(-height, height + 1), repeat=4):
        count += 1
        assert rel_norm(CycNum.from_ints(x)) != target
    assert solve_rel_norm(target) is None
    return count


def run_enumeration(n: int, seed: int = 6) -> int:
    rng = random.Random(seed)
    for _ in range(n):
        dim = rng.randint(1, 4)
        g = rand_gram(rng, dim)
        bound = Fraction(rng.randint(1, 6 * dim), rng.randint(1, 2))
        check_enumeration(g, bound)
    return n
