"""Binary Hermitian forms over Q(zeta_5), the rank-one map q and minimal vectors.

A form phi is stored through its associated matrix A = [[a, b], [conj(b), c]]
with a, c in k and b in F, i.e. through eight rational coordinates

    (a.p, a.q, b0, b1, b2, b3, c.p, c.q).

Vectors v in O^2 use the Z-basis (zeta^j, 0), (0, zeta^j), j = 0..3, so an
OVec is the same thing as an integer 8-vector.  The value of phi at v is
Tr_{k/Q}(v^* A v), which equals the scalar product <phi, q(v)>.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from cyclovoronoi import linalg
from cyclovoronoi.cyclotomic import (
    ONE,
    ZERO,
    CycNum,
    KNum,
    gcd_k,
    is_totally_positive,
    rel_norm,
    rel_norm_solutions,
    torsion_units,
    xgcd_o,
)
from cyclovoronoi.lattice_enum import completed_squares, NotPositiveDefinite, short_vectors

# Scalar product on form coordinates: <phi, psi> = Tr_{k/Q} tr(A_phi A_psi).
# Tr_k(a a') gives [[2, 1], [1, 3]]; Tr_{F/Q}(b conj(b')) gives 5I - J.
PAIRING_MATRIX: tuple[tuple[int, ...], ...] = (
    (2, 1, 0, 0, 0, 0, 0, 0),
    (1, 3, 0, 0, 0, 0, 0, 0),
    (0, 0, 4, -1, -1, -1, 0, 0),
    (0, 0, -1, 4, -1, -1, 0, 0),
    (0, 0, -1, -1, 4, -1, 0, 0),
    (0, 0, -1, -1, -1, 4, 0, 0),
    (0, 0, 0, 0, 0, 0, 2, 1),
    (0, 0, 0, 0, 0, 0, 1, 3),
)


def pair_coords(x: Sequence, y: Sequence):
    """<x, y> for two coordinate 8-vectors."""
    total = 0
    for i in range(8):
        xi = x[i]
        if xi:
            row = PAIRING_MATRIX[i]
            total += xi * sum(row[j] * y[j] for j in range(8) if row[j])
    return total


def dual_coords(x: Sequence) -> tuple:
    """P x, so that <f, x> is the ordinary dot product f . (P x)."""
    return tuple(sum(PAIRING_MATRIX[i][j] * x[j] for j in range(8)) for i in range(8))


# ---------------------------------------------------------------------------
# Forms


@dataclass(frozen=True)
class HermForm:
    a: KNum
    b: CycNum
    c: KNum

    def __post_init__(self):
        object.__setattr__(self, "a", KNum.coerce(self.a))
        object.__setattr__(self, "b", CycNum.coerce(self.b))
        object.__setattr__(self, "c", KNum.coerce(self.c))

    @classmethod
    def from_coords(cls, x: Sequence) -> "HermForm":
        if len(x) != 8:
            raise ValueError(f"a Hermitian form has 8 coordinates, got {len(x)}")
        x = [Fraction(t) for t in x]
        return cls(KNum(x[0], x[1]), CycNum(*x[2:6]), KNum(x[6], x[7]))

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence]) -> "HermForm":
        """Build from a 2x2 matrix of field elements; checks it is Hermitian."""
        a, b = CycNum.coerce(m[0][0]), CycNum.coerce(m[0][1])
        c, d = CycNum.coerce(m[1][0]), CycNum.coerce(m[1][1])
        if c != b.conj():
            raise ValueError(f"matrix is not Hermitian: {c} != conj({b}) = {b.conj()}")
        if not (a.is_real() and d.is_real()):
            raise ValueError("diagonal entries must lie in Q(sqrt 5)")
        return cls(a.to_knum(), b, d.to_knum())

    @classmethod
    def identity(cls) -> "HermForm":
        return cls(KNum(1), ZERO, KNum(1))

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return (self.a.p, self.a.q, *self.b.coords, self.c.p, self.c.q)

    def matrix(self) -> tuple[tuple[CycNum, CycNum], tuple[CycNum, CycNum]]:
        return ((self.a.to_cyc(), self.b), (self.b.conj(), self.c.to_cyc()))

    def det(self) -> KNum:
        return self.a * self.c - rel_norm(self.b)

    def __add__(self, other: "HermForm") -> "HermForm":
        return HermForm(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: "HermForm") -> "HermForm":
        return HermForm(self.a - other.a, self.b - other.b, self.c - other.c)

    def __neg__(self) -> "HermForm":
        return HermForm(-self.a, -self.b, -self.c)

    def scale(self, s) -> "HermForm":
        """Multiply by a scalar from Q or k (A -> s*A)."""
        s = KNum.coerce(s)
        return HermForm(self.a * s, self.b * s.to_cyc(), self.c * s)

    def is_integral(self) -> bool:
        return self.a.is_integral() and self.b.is_integral() and self.c.is_integral()

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json(), "c": self.c.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "HermForm":
        return cls(KNum.from_json(data["a"]), CycNum.from_json(data["b"]), KNum.from_json(data["c"]))

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.b.conj()}, {self.c}]]"


# ---------------------------------------------------------------------------
# Vectors


@dataclass(frozen=True)
class OVec:
    alpha: CycNum
    beta: CycNum

    def __post_init__(self):
        object.__setattr__(self, "alpha", CycNum.coerce(self.alpha))
        object.__setattr__(self, "beta", CycNum.coerce(self.beta))

    @classmethod
    def from_ints(cls, x: Sequence[int]) -> "OVec":
        return cls(CycNum.from_ints(x[:4]), CycNum.from_ints(x[4:8]))

    @property
    def coords(self) -> tuple[int, ...]:
        return self.alpha.int_coords + self.beta.int_coords

    def is_zero(self) -> bool:
        return self.alpha.is_zero() and self.beta.is_zero()

    def __mul__(self, s) -> "OVec":
        s = CycNum.coerce(s)
        return OVec(self.alpha * s, self.beta * s)

    __rmul__ = __mul__

    def __neg__(self) -> "OVec":
        return OVec(-self.alpha, -self.beta)

    def __add__(self, other: "OVec") -> "OVec":
        return OVec(self.alpha + other.alpha, self.beta + other.beta)

    def key(self) -> tuple:
        c = self.coords
        return (sum(t * t for t in c), tuple(-t for t in c))

    def torsion_orbit(self) -> list["OVec"]:
        return [self * t for t in torsion_units()]

    def canonical(self) -> "OVec":
        """Torsion-orbit representative with the least canonical key."""
        return min(self.torsion_orbit(), key=OVec.key)

    def gcd(self) -> CycNum:
        return xgcd_o(self.alpha, self.beta)[0]

    def is_primitive(self) -> bool:
        if self.is_zero():
            return False
        return self.gcd().abs_norm() == 1

    def to_json(self) -> dict:
        return {"alpha": self.alpha.to_json(), "beta": self.beta.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "OVec":
        return cls(CycNum.from_json(data["alpha"]), CycNum.from_json(data["beta"]))

    def __str__(self) -> str:
        return f"({self.alpha}, {self.beta})"


def det2(v: OVec, w: OVec) -> CycNum:
    return v.alpha * w.beta - v.beta * w.alpha


# ---------------------------------------------------------------------------
# Group elements


@dataclass(frozen=True)
class GMat:
    """2x2 matrix [[a, b], [c, d]] over O with unit determinant."""

    a: CycNum
    b: CycNum
    c: CycNum
    d: CycNum

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, CycNum.coerce(getattr(self, name)))

    @classmethod
    def identity(cls) -> "GMat":
        return cls(ONE, ZERO, ZERO, ONE)

    @classmethod
    def from_columns(cls, v: OVec, w: OVec) -> "GMat":
        return cls(v.alpha, w.alpha, v.beta, w.beta)

    @classmethod
    def scalar(cls, t: CycNum) -> "GMat":
        return cls(t, ZERO, ZERO, t)

    def det(self) -> CycNum:
        return self.a * self.d - self.b * self.c

    def is_invertible_over_o(self) -> bool:
        return all(x.is_integral() for x in (self.a, self.b, self.c, self.d)) and self.det().is_unit()

    def check(self) -> "GMat":
        if not self.is_invertible_over_o():
            raise ValueError(f"{self} is not in GL_2(O): determinant {self.det()} is not a unit")
        return self

    def inverse(self) -> "GMat":
        dinv = self.det().inverse()
        return GMat(self.d * dinv, -self.b * dinv, -self.c * dinv, self.a * dinv)

    def star(self) -> "GMat":
        """Conjugate transpose."""
        return GMat(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())

    def theta(self) -> "GMat":
        """(gamma^*)^{-1}: the twist making minimal vectors move like vectors."""
        return self.star().inverse()

    def __mul__(self, other):
        if isinstance(other, GMat):
            return GMat(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        if isinstance(other, OVec):
            return OVec(self.a * other.alpha + self.b * other.beta, self.c * other.alpha + self.d * other.beta)
        return NotImplemented

    def columns(self) -> tuple[OVec, OVec]:
        return OVec(self.a, self.c), OVec(self.b, self.d)

    def to_json(self) -> list[list[list[str]]]:
        return [[self.a.to_json(), self.b.to_json()], [self.c.to_json(), self.d.to_json()]]

    @classmethod
    def from_json(cls, data) -> "GMat":
        return cls(
            CycNum.from_json(data[0][0]),
            CycNum.from_json(data[0][1]),
            CycNum.from_json(data[1][0]),
            CycNum.from_json(data[1][1]),
        )

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def act(gamma: GMat, phi: HermForm) -> HermForm:
    """gamma . phi = gamma A gamma^*, so that (gamma . phi)(v) = phi(gamma^* v)."""
    gamma.check()
    (a, b), (c, d) = phi.matrix()
    g = gamma
    # M = gamma A
    m00 = g.a * a + g.b * c
    m01 = g.a * b + g.b * d
    m10 = g.c * a + g.d * c
    m11 = g.c * b + g.d * d
    gs = g.star()
    r00 = m00 * gs.a + m01 * gs.c
    r01 = m00 * gs.b + m01 * gs.d
    r11 = m10 * gs.b + m11 * gs.d
    return HermForm(r00.to_knum(), r01, r11.to_knum())


def act_vec(gamma: GMat, v: OVec) -> OVec:
    gamma.check()
    return gamma * v


def complete_to_basis(v: OVec) -> GMat:
    """A matrix in SL_2(O) whose first column is the primitive vector v."""
    g, s, t = xgcd_o(v.alpha, v.beta)
    if g.abs_norm() != 1:
        raise ValueError(f"{v} is not primitive")
    ginv = g.inverse()
    s, t = s * ginv, t * ginv
    # s*alpha + t*beta = 1  ->  det [[alpha, -t], [beta, s]] = 1
    return GMat(v.alpha, -t, v.beta, s)


# ---------------------------------------------------------------------------
# Rank-one points


@dataclass(frozen=True)
class RankOnePoint:
    form: HermForm
    scale: KNum | None = None
    vec: OVec | None = None

    def __post_init__(self):
        f = self.form
        if not f.det().is_zero() or (f.a.is_zero() and f.c.is_zero()):
            raise ValueError(f"{f} is not a rank one point")
        if self.vec is not None:
            s = self.scale if self.scale is not None else KNum(1)
            if q_form(self.vec).scale(s) != f:
                raise ValueError("certificate does not reproduce the point")

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return self.form.coords


def q_form(v: OVec) -> HermForm:
    return HermForm(rel_norm(v.alpha), v.alpha * v.beta.conj(), rel_norm(v.beta))


def q_coords(v: OVec) -> tuple[int, ...]:
    """Integer coordinates of q(v) for v in O^2."""
    return tuple(int(x) for x in q_form(v).coords)


def q_map(v: OVec) -> RankOnePoint:
    if v.is_zero():
        raise ValueError("q is undefined at the zero vector")
    if v.is_primitive():
        return RankOnePoint(q_form(v), KNum(1), v)
    return RankOnePoint(q_form(v))


def pairing(phi: HermForm, psi: HermForm) -> Fraction:
    return Fraction(pair_coords(phi.coords, psi.coords))


def evaluate(phi: HermForm, v: OVec) -> Fraction:
    """Tr_{k/Q}(v^* A_phi v)."""
    a, b, c = phi.a, phi.b, phi.c
    val = (
        (a * rel_norm(v.alpha)).trace()
        + (b * v.alpha.conj() * v.beta).trace()
        + (c * rel_norm(v.beta)).trace()
    )
    return Fraction(val)


# ---------------------------------------------------------------------------
# Gram matrices of the trace form on Z^8


def basis_vectors() -> list[OVec]:
    out = []
    for j in range(4):
        e = [0] * 8
        e[j] = 1
        out.append(OVec.from_ints(e))
    for j in range(4):
        e = [0] * 8
        e[4 + j] = 1
        out.append(OVec.from_ints(e))
    return out


@lru_cache(maxsize=1)
def _gram_components() -> tuple:
    """M[k] with gram(phi) = sum_k phi.coords[k] * M[k]."""
    basis = basis_vectors()
    half = Fraction(1, 2)
    # Hermitian part of e_i e_j^* as form coordinates
    sym = {}
    for i, v in enumerate(basis):
        for j, w in enumerate(basis):
            a = (v.alpha * w.alpha.conj() + w.alpha * v.alpha.conj()) * half
            b = (v.alpha * w.beta.conj() + w.alpha * v.beta.conj()) * half
            c = (v.beta * w.beta.conj() + w.beta * v.beta.conj()) * half
            sym[i, j] = dual_coords(HermForm(a.to_knum(), b, c.to_knum()).coords)
    return tuple(
        tuple(tuple(sym[i, j][k] for j in range(8)) for i in range(8)) for k in range(8)
    )


def gram_matrix(phi: HermForm) -> tuple[tuple[Fraction, ...], ...]:
    comps = _gram_components()
    x = phi.coords
    return tuple(
        tuple(sum((x[k] * comps[k][i][j] for k in range(8) if x[k]), Fraction(0)) for j in range(8))
        for i in range(8)
    )


def quad(gram: Sequence[Sequence], x: Sequence[int]) -> Fraction:
    return sum((gram[i][j] * x[i] * x[j] for i in range(8) for j in range(8) if x[i] and x[j]), Fraction(0))


# ---------------------------------------------------------------------------
# Definiteness, minima, perfection


def is_positive_definite(phi: HermForm) -> bool:
    by_det = is_totally_positive(phi.a) and is_totally_positive(phi.det())
    try:
        completed_squares(gram_matrix(phi))
        by_gram = True
    except NotPositiveDefinite:
        by_gram = False
    if by_det != by_gram:
        raise ArithmeticError(f"definiteness tests disagree for {phi}")
    return by_det


@dataclass(frozen=True)
class MinData:
    minimum: Fraction
    vectors: tuple[OVec, ...]
    reps_mod_torsion: tuple[OVec, ...]


def torsion_reps(vectors: Iterable[OVec]) -> list[OVec]:
    """Canonical representatives of the torsion orbits met by ``vectors``."""
    return sorted({v.canonical() for v in vectors}, key=OVec.key)


def minimum_and_vectors(phi: HermForm) -> MinData:
    if not is_positive_definite(phi):
        raise ValueError(f"{phi} is not positive definite")
    found = short_vectors(gram_matrix(phi), 0, mode="shortest_nonzero", both_signs=True)
    m = found[0][1]
    vecs = sorted((OVec.from_ints(x) for x, _ in found), key=OVec.key)
    reps = torsion_reps(vecs)
    if len(vecs) != 10 * len(reps):
        raise ArithmeticError("minimal vectors are not a union of torsion orbits")
    return MinData(m, tuple(vecs), tuple(reps))


def vectors_below(phi: HermForm, bound) -> list[tuple[OVec, Fraction]]:
    """All nonzero v (up to sign) with phi(v) <= bound."""
    return [(OVec.from_ints(x), val) for x, val in short_vectors(gram_matrix(phi), bound)]


def q_rank(vectors: Iterable[OVec]) -> int:
    return linalg.rank([q_coords(v) for v in vectors])


def is_perfect(phi: HermForm) -> bool:
    md = minimum_and_vectors(phi)
    return q_rank(md.reps_mod_torsion) == 8


# ---------------------------------------------------------------------------
# Lifting rank-one lattice points


def _divides_k(x: KNum, d: KNum) -> bool:
    return (x / d).is_integral()


def lift_rank_one(rho) -> tuple[KNum, OVec]:
    """Write an integral rank-one point as scale * q(v), v primitive, scale totally positive."""
    form = rho.form if isinstance(rho, RankOnePoint) else rho
    if not form.is_integral():
        raise ValueError(f"{form} is not integral")
    if not form.det().is_zero():
        raise ValueError(f"{form} is not rank one")
    a, b, c = form.a, form.b, form.c
    if a.is_zero() and c.is_zero():
        raise ValueError("zero point")
    s = gcd_k(a, c)
    if not is_totally_positive(s):
        raise ValueError(f"{form} is not positive semidefinite")
    a0, c0 = a / s, c / s
    b0 = b / s.to_cyc()
    if not (a0.is_integral() and c0.is_integral() and b0.is_integral()):
        raise ArithmeticError(f"{s} does not divide the off-diagonal entry of {form}")
    if a0.is_zero():
        betas = rel_norm_solutions(c0)
        if not betas:
            raise ArithmeticError(f"{c0} is not a relative norm; {form} is not a lattice rank-one point")
        v = OVec(ZERO, betas[0])
    else:
        v = None
        for alpha in rel_norm_solutions(a0):
            beta = (b0 / alpha).conj()
            if beta.is_integral():
                v = OVec(alpha, beta)
                break
        if v is None:
            raise ArithmeticError(f"no primitive lift of {form}: norm equations unsolvable")
    if not v.is_primitive():
        raise ArithmeticError(f"lift {v} of {form} is not primitive")
    if q_form(v).scale(s) != form:
        raise ArithmeticError("lift does not reproduce the point")
    return s, v


# ---------------------------------------------------------------------------
# The lattice spanned by q(O^2)


def lambda_basis(bound: int = 6, step: int = 2, max_bound: int = 40) -> list[tuple[int, ...]]:
    """HNF basis of the Z-span of q(v), grown until two consecutive bounds agree."""
    ident = gram_matrix(HermForm.identity())
    prev = None
    stable = 0
    b = bound
    while b <= max_bound:
        pts = [q_coords(OVec.from_ints(x)) for x, _ in short_vectors(ident, b)]
        basis = linalg.hnf(pts)
        if basis == prev:
            stable += 1
            if stable >= 1:
                return basis
        else:
            stable = 0
        prev = basis
        b += step
    raise RuntimeError("lattice generated by q-points did not stabilize")
