"""GL_2(O)-conjugacy and stabilizers of finite sets of rank-one points.

A configuration is a set of q-points q(v_1), ..., q(v_n) given through
primitive vectors v_i (one per torsion orbit).  gamma maps a configuration X
onto Y when every gamma v_i lies in a torsion orbit of some w_j; since q(tau v)
= q(v) this is exactly gamma . X = Y as point sets.

When X contains a pair (v_1, v_2) with unit determinant, gamma is determined by
(gamma v_1, gamma v_2), which must be (tau_1 w_a, tau_2 w_b) for a pair of
Y with unit determinant.  Running over all such images is a complete search.
Configurations whose vectors all lie on one F-line (a single cusp) have an
infinite stabilizer containing a unipotent element; they are handled apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from cyclovoronoi.cyclotomic import ONE, ZERO, CycNum, torsion_units
from cyclovoronoi.hermitian import GMat, OVec, complete_to_basis, det2

INFINITE = float("inf")


class Undecided(RuntimeError):
    """The configuration has no unimodular pair and is not a single cusp."""


def _abs_norm_int(x: CycNum) -> int:
    return int(x.abs_norm())


class Config:
    """Primitive vectors (one per torsion orbit) with cached search data."""

    def __init__(self, vectors: Sequence[OVec]):
        self.vectors = [v.canonical() for v in vectors]
        if len(set(self.vectors)) != len(self.vectors):
            raise ValueError("configuration repeats a torsion orbit")
        self.n = len(self.vectors)
        self.lookup: dict[tuple[int, ...], tuple[int, int]] = {}
        for i, v in enumerate(self.vectors):
            for t, tau in enumerate(torsion_units()):
                self.lookup[(v * tau).coords] = (i, t)

    @cached_property
    def det_norms(self) -> list[list[int]]:
        n = self.n
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                m[i][j] = m[j][i] = _abs_norm_int(det2(self.vectors[i], self.vectors[j]))
        return m

    @cached_property
    def profiles(self) -> list[tuple[int, ...]]:
        return [tuple(sorted(self.det_norms[i][j] for j in range(self.n) if j != i)) for i in range(self.n)]

    @cached_property
    def invariant(self) -> tuple:
        """GL_2(O)-invariant fingerprint: size and sorted vertex profiles."""
        return (self.n, tuple(sorted(self.profiles)))

    def unimodular_pairs(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.n)
            for j in range(self.n)
            if i != j and self.det_norms[i][j] == 1
        ]

    def is_single_cusp(self) -> bool:
        return all(self.det_norms[i][j] == 0 for i in range(self.n) for j in range(i + 1, self.n))

    def maps_onto(self, gamma: GMat, target: "Config") -> list[int] | None:
        """The index permutation induced by gamma: self -> target, or None."""
        if self.n != target.n:
            return None
        images = []
        for v in self.vectors:
            hit = target.lookup.get((gamma * v).coords)
            if hit is None:
                return None
            images.append(hit[0])
        if len(set(images)) != self.n:
            return None
        return images


def _candidates(test: Config, target: Config, first_only: bool):
    """All gamma with gamma . test = target, found through a unimodular pair of test.

    Only candidates sending v_i to w_a exactly (tau_1 = 1) are produced; the full set
    is obtained by multiplying by the ten torsion scalars."""
    pairs = test.unimodular_pairs()
    if not pairs:
        raise Undecided("no unimodular pair in test configuration")
    # rarest profile pair prunes the most
    def weight(p):
        i, j = p
        return sum(1 for a in range(target.n) if target.profiles[a] == test.profiles[i]) * sum(
            1 for b in range(target.n) if target.profiles[b] == test.profiles[j]
        )

    i, j = min(pairs, key=weight)
    vinv = GMat.from_columns(test.vectors[i], test.vectors[j]).inverse()
    out = []
    for a in range(target.n):
        if target.profiles[a] != test.profiles[i]:
            continue
        for b in range(target.n):
            if b == a or target.profiles[b] != test.profiles[j]:
                continue
            if target.det_norms[a][b] != 1:
                continue
            wa, wb = target.vectors[a], target.vectors[b]
            for tau in torsion_units():
                gamma = GMat.from_columns(wa, wb * tau) * vinv
                perm = test.maps_onto(gamma, target)
                if perm is not None:
                    out.append((gamma, perm))
                    if first_only:
                        return out
    return out


def _cusp_data(cfg: Config) -> tuple[OVec, list[CycNum]]:
    """Primitive generator p of the common line and the units e_i with v_i = e_i p."""
    v0 = cfg.vectors[0]
    g = v0.gcd()
    p = OVec(v0.alpha / g, v0.beta / g)
    units = []
    for v in cfg.vectors:
        e = v.alpha / p.alpha if not p.alpha.is_zero() else v.beta / p.beta
        if OVec(p.alpha * e, p.beta * e) != v or not e.is_unit():
            raise Undecided("vectors on a common line are not unit multiples of each other")
        units.append(e)
    return p, units


def _torsion_class(e: CycNum) -> frozenset:
    return frozenset((e * t).coords for t in torsion_units())


def _cusp_conjugacy(test: Config, target: Config) -> GMat | None:
    p, eps = _cusp_data(test)
    p2, eps2 = _cusp_data(target)
    targets = {_torsion_class(e) for e in eps2}
    c1 = complete_to_basis(p)
    c2 = complete_to_basis(p2)
    for e2 in eps2:
        mu = e2 / eps[0]
        if {_torsion_class(e * mu) for e in eps} == targets:
            gamma = c2 * GMat(mu, ZERO, ZERO, ONE) * c1.inverse()
            if test.maps_onto(gamma, target) is None:
                raise ArithmeticError("cusp conjugator does not map the configuration")
            return gamma
    return None


def find_conjugator(test: Sequence[OVec] | Config, target: Sequence[OVec] | Config) -> GMat | None:
    """gamma in GL_2(O) with gamma . test = target, or None if there is none."""
    test = test if isinstance(test, Config) else Config(test)
    target = target if isinstance(target, Config) else Config(target)
    if test.invariant != target.invariant:
        return None
    if test.n == 1:
        return complete_to_basis(target.vectors[0]) * complete_to_basis(test.vectors[0]).inverse()
    if not test.unimodular_pairs():
        if test.is_single_cusp() and target.is_single_cusp():
            return _cusp_conjugacy(test, target)
        raise Undecided("configuration has neither a unimodular pair nor a single cusp")
    found = _candidates(test, target, first_only=True)
    return found[0][0] if found else None


# ---------------------------------------------------------------------------
# stabilizers


@dataclass
class GroupRecord:
    order: float  # int for finite groups, INFINITE otherwise
    generators: list[GMat]
    vertex_perms: list[tuple[int, ...]] = field(default_factory=list)
    certificate: GMat | None = None
    invariants: dict = field(default_factory=dict)
    elements: list[GMat] = field(default_factory=list, repr=False)

    @property
    def is_infinite(self) -> bool:
        return self.order == INFINITE

    def to_json(self) -> dict:
        out = {
            "order": "INFINITE" if self.is_infinite else int(self.order),
            "generators": [g.to_json() for g in self.generators],
            "invariants": self.invariants,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def _vector_perm(gamma: GMat, cfg: Config, keys: list[tuple[int, ...]]) -> tuple[int, ...]:
    index = {k: i for i, k in enumerate(keys)}
    return tuple(index[(gamma * OVec.from_ints(k)).coords] for k in keys)


def perm_group_invariants(perms: np.ndarray) -> dict:
    """Order, abelian flag, exponent and number of conjugacy classes of a
    permutation group given by all of its elements (rows)."""
    n_el, deg = perms.shape
    ident = np.arange(deg)
    index = {row.tobytes(): i for i, row in enumerate(perms)}
    inv = np.argsort(perms, axis=1)
    abelian = True
    for a in range(n_el):
        ga = perms[a]
        if not np.array_equal(ga[perms], perms[:, ga]):
            abelian = False
            break
    exponent = 1
    for g in perms:
        k, x = 1, g.copy()
        while not np.array_equal(x, ident):
            x = g[x]
            k += 1
        exponent = exponent * k // math.gcd(exponent, k)
    seen = np.zeros(n_el, dtype=bool)
    n_classes = 0
    rows = np.arange(n_el)[:, None]
    for g_i in range(n_el):
        if seen[g_i]:
            continue
        n_classes += 1
        g = perms[g_i]
        # h g h^-1 for every h
        conj = perms[rows, g[inv]]
        for row in conj:
            seen[index[row.tobytes()]] = True
    return {"order": int(n_el), "abelian": bool(abelian), "exponent": int(exponent), "classes": int(n_classes)}


def _generators(elements: list[GMat], perms: list[tuple[int, ...]]) -> list[GMat]:
    """Small generating set picked greedily from the element list."""
    if not perms:
        return []
    deg = len(perms[0])
    ident = tuple(range(deg))
    gens: list[int] = []
    group = {ident}
    for k, p in enumerate(perms):
        if p in group:
            continue
        gens.append(k)
        # closure
        frontier = list(group)
        group = set(group)
        gen_perms = [perms[g] for g in gens]
        frontier = list(group)
        while frontier:
            new = []
            for x in frontier:
                for gp in gen_perms:
                    y = tuple(gp[i] for i in x)
                    if y not in group:
                        group.add(y)
                        new.append(y)
            frontier = new
        if len(group) == len(perms):
            break
    return [elements[g] for g in gens]


def stabilizer(cfg: Sequence[OVec] | Config, with_invariants: bool = True) -> GroupRecord:
    cfg = cfg if isinstance(cfg, Config) else Config(cfg)
    if cfg.n >= 2 and not cfg.unimodular_pairs():
        if not cfg.is_single_cusp():
            raise Undecided("configuration has neither a unimodular pair nor a single cusp")
        p, _ = _cusp_data(cfg)
        c = complete_to_basis(p)
        unip = c * GMat(ONE, ONE, ZERO, ONE) * c.inverse()
        if cfg.maps_onto(unip, cfg) != list(range(cfg.n)):
            raise ArithmeticError("unipotent certificate does not fix the cusp configuration")
        return GroupRecord(INFINITE, [unip], certificate=unip)
    if cfg.n < 2:
        raise Undecided("a single point has an infinite stabilizer; not recorded")
    found = _candidates(cfg, cfg, first_only=False)
    elements = [GMat.scalar(t) * g for g, _ in found for t in torsion_units()]
    vertex_perms = sorted({tuple(p) for _, p in found})
    keys = sorted(cfg.lookup)
    perms = [_vector_perm(g, cfg, keys) for g in elements]
    if len(set(perms)) != len(elements):
        raise ArithmeticError("stabilizer action on vertex vectors is not faithful")
    rec = GroupRecord(len(elements), _generators(elements, perms), vertex_perms, elements=elements)
    if with_invariants:
        rec.invariants = perm_group_invariants(np.array(perms, dtype=np.int32))
        if rec.invariants["order"] != rec.order:
            raise ArithmeticError("group order mismatch")
    return rec
