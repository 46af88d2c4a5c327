"""Exact arithmetic in F = Q(zeta), zeta a primitive 5th root of unity.

Elements of F are stored in the power basis {1, zeta, zeta^2, zeta^3} as four
integer numerators over one positive common denominator.  Elements of the real
subfield k = Q(sqrt 5) use the basis {1, u5} with u5 = (1 + sqrt 5)/2, which
sits inside F as u5 = -zeta^2 - zeta^3.

Galois maps used throughout:

* ``conj``  -- complex conjugation, zeta -> zeta^4
* ``prime`` -- the second embedding, zeta -> zeta^3 (sends sqrt 5 to -sqrt 5)
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def _normalize(nums: Sequence[int], d: int) -> tuple[tuple[int, ...], int]:
    if d == 0:
        raise ZeroDivisionError("zero denominator")
    if d < 0:
        nums = [-n for n in nums]
        d = -d
    if d != 1:
        g = math.gcd(d, *nums)
        if g != 1:
            nums = [n // g for n in nums]
            d //= g
    return tuple(nums), d


def _reduce7(p: Sequence[int]) -> tuple[int, int, int, int]:
    # p holds coefficients of zeta^0..zeta^6; zeta^5 = 1, zeta^4 = -(1+zeta+zeta^2+zeta^3)
    c0 = p[0] + p[5]
    c1 = p[1] + p[6]
    c2 = p[2]
    c3 = p[3]
    p4 = p[4]
    return (c0 - p4, c1 - p4, c2 - p4, c3 - p4)


class CycNum:
    """Element c0 + c1*zeta + c2*zeta^2 + c3*zeta^3 of Q(zeta_5). Immutable."""

    __slots__ = ("_n", "_d", "_h")

    def __init__(self, c0: Rational = 0, c1: Rational = 0, c2: Rational = 0, c3: Rational = 0):
        fr = [_frac(c) for c in (c0, c1, c2, c3)]
        d = 1
        for f in fr:
            d = d * f.denominator // math.gcd(d, f.denominator)
        self._n, self._d = _normalize([f.numerator * (d // f.denominator) for f in fr], d)
        self._h = None

    @classmethod
    def _raw(cls, nums: Sequence[int], d: int = 1) -> "CycNum":
        obj = cls.__new__(cls)
        obj._n, obj._d = _normalize(nums, d)
        obj._h = None
        return obj

    @classmethod
    def from_ints(cls, coords: Iterable[int]) -> "CycNum":
        return cls._raw(tuple(coords), 1)

    @classmethod
    def coerce(cls, x) -> "CycNum":
        if isinstance(x, CycNum):
            return x
        if isinstance(x, KNum):
            return x.to_cyc()
        if isinstance(x, int):
            return cls._raw((x, 0, 0, 0), 1)
        if isinstance(x, Fraction):
            return cls._raw((x.numerator, 0, 0, 0), x.denominator)
        raise TypeError(f"cannot coerce {x!r} to CycNum")

    # ---- accessors -------------------------------------------------------
    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(Fraction(n, self._d) for n in self._n)

    @property
    def int_coords(self) -> tuple[int, int, int, int]:
        if self._d != 1:
            raise ValueError(f"{self} is not integral")
        return self._n

    @property
    def denominator(self) -> int:
        return self._d

    def is_integral(self) -> bool:
        return self._d == 1

    def is_zero(self) -> bool:
        return not any(self._n)

    def __bool__(self) -> bool:
        return any(self._n)

    # ---- ring operations -------------------------------------------------
    def __add__(self, other):
        try:
            o = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        if self._d == o._d:
            return CycNum._raw([a + b for a, b in zip(self._n, o._n)], self._d)
        return CycNum._raw([a * o._d + b * self._d for a, b in zip(self._n, o._n)], self._d * o._d)

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        obj = CycNum.__new__(CycNum)
        obj._n = tuple(-a for a in self._n)
        obj._d = self._d
        obj._h = None
        return obj

    def __sub__(self, other):
        try:
            o = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return CycNum.coerce(other) - self

    def __mul__(self, other):
        try:
            o = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        a0, a1, a2, a3 = self._n
        b0, b1, b2, b3 = o._n
        p = (
            a0 * b0,
            a0 * b1 + a1 * b0,
            a0 * b2 + a1 * b1 + a2 * b0,
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
            a1 * b3 + a2 * b2 + a3 * b1,
            a2 * b3 + a3 * b2,
            a3 * b3,
        )
        return CycNum._raw(_reduce7(p), self._d * o._d)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_5)")
        # product of the three non-trivial conjugates divided by the absolute norm
        others = self.sigma(2) * self.sigma(3) * self.sigma(4)
        n = (self * others).coords[0]
        return others * CycNum.coerce(1 / n)

    def __truediv__(self, other):
        try:
            o = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return CycNum.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "CycNum":
        if e < 0:
            return self.inverse() ** (-e)
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, CycNum):
            return self._n == other._n and self._d == other._d
        if isinstance(other, (int, Fraction, KNum)):
            return self == CycNum.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash((self._n, self._d))
        return self._h

    # ---- Galois structure ------------------------------------------------
    def sigma(self, j: int) -> "CycNum":
        """Image under the automorphism zeta -> zeta^j (j prime to 5)."""
        j %= 5
        if j == 0:
            raise ValueError("zeta -> 1 is not an automorphism")
        p = [0] * 7
        for i, c in enumerate(self._n):
            p[(i * j) % 5] += c
        return CycNum._raw(_reduce7(p), self._d)

    def conj(self) -> "CycNum":
        c0, c1, c2, c3 = self._n
        return CycNum._raw((c0 - c1, -c1, c3 - c1, c2 - c1), self._d)

    def prime(self) -> "CycNum":
        c0, c1, c2, c3 = self._n
        return CycNum._raw((c0 - c3, c2 - c3, -c3, c1 - c3), self._d)

    def is_real(self) -> bool:
        return self._n[1] == 0 and self._n[2] == self._n[3]

    def to_knum(self) -> "KNum":
        if not self.is_real():
            raise ValueError(f"{self} does not lie in Q(sqrt 5)")
        return KNum(Fraction(self._n[0], self._d), Fraction(-self._n[2], self._d))

    def rel_norm(self) -> "KNum":
        return rel_norm(self)

    def trace(self) -> Fraction:
        """Absolute trace Tr_{F/Q}."""
        c0, c1, c2, c3 = self._n
        return Fraction(4 * c0 - c1 - c2 - c3, self._d)

    def abs_norm(self) -> Fraction:
        """Absolute norm N_{F/Q}; always >= 0 in a CM field."""
        return rel_norm(self).norm()

    def is_unit(self) -> bool:
        return self.is_integral() and not self.is_zero() and self.abs_norm() == 1

    # ---- ordering, display, serialization --------------------------------
    def key(self) -> tuple:
        """Canonical sort key: small coordinates first, then lexicographically largest."""
        return (sum(c * c for c in self._n), self._d, tuple(-c for c in self._n))

    def __repr__(self) -> str:
        return f"CycNum({', '.join(str(c) for c in self.coords)})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            mon = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mon and abs(c) == 1:
                s = ("-" if c < 0 else "+") + mon
            else:
                s = ("-" if c < 0 else "+") + str(abs(c)) + ("*" + mon if mon else "")
            terms.append(s)
        if not terms:
            return "0"
        out = "".join(terms)
        return out[1:] if out.startswith("+") else out

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "CycNum":
        if len(data) != 4:
            raise ValueError(f"expected 4 coordinates, got {len(data)}")
        return cls(*(Fraction(s) for s in data))


class KNum:
    """Element p + q*u5 of k = Q(sqrt 5), u5 = (1 + sqrt 5)/2. Immutable."""

    __slots__ = ("p", "q")

    def __init__(self, p: Rational = 0, q: Rational = 0):
        self.p = _frac(p)
        self.q = _frac(q)

    @classmethod
    def coerce(cls, x) -> "KNum":
        if isinstance(x, KNum):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        if isinstance(x, CycNum):
            return x.to_knum()
        raise TypeError(f"cannot coerce {x!r} to KNum")

    def __add__(self, other):
        if isinstance(other, CycNum):
            return self.to_cyc() + other
        try:
            o = KNum.coerce(other)
        except TypeError:
            return NotImplemented
        return KNum(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __neg__(self) -> "KNum":
        return KNum(-self.p, -self.q)

    def __sub__(self, other):
        if isinstance(other, CycNum):
            return self.to_cyc() - other
        try:
            o = KNum.coerce(other)
        except TypeError:
            return NotImplemented
        return KNum(self.p - o.p, self.q - o.q)

    def __rsub__(self, other):
        return KNum.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, CycNum):
            return self.to_cyc() * other
        try:
            o = KNum.coerce(other)
        except TypeError:
            return NotImplemented
        # u5^2 = u5 + 1
        return KNum(self.p * o.p + self.q * o.q, self.p * o.q + self.q * o.p + self.q * o.q)

    __rmul__ = __mul__

    def prime(self) -> "KNum":
        # u5' = 1 - u5
        return KNum(self.p + self.q, -self.q)

    def norm(self) -> Fraction:
        return self.p * self.p + self.p * self.q - self.q * self.q

    def trace(self) -> Fraction:
        return 2 * self.p + self.q

    def inverse(self) -> "KNum":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt 5)")
        c = self.prime()
        return KNum(c.p / n, c.q / n)

    def __truediv__(self, other):
        if isinstance(other, CycNum):
            return self.to_cyc() / other
        return self * KNum.coerce(other).inverse()

    def __rtruediv__(self, other):
        return KNum.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "KNum":
        if e < 0:
            return self.inverse() ** (-e)
        result = KNum(1)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, KNum):
            return self.p == other.p and self.q == other.q
        if isinstance(other, (int, Fraction)):
            return self.q == 0 and self.p == other
        if isinstance(other, CycNum):
            return self.to_cyc() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.q))

    def is_integral(self) -> bool:
        return self.p.denominator == 1 and self.q.denominator == 1

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def to_cyc(self) -> CycNum:
        return CycNum(self.p, 0, -self.q, -self.q)

    def is_totally_positive(self) -> bool:
        return is_totally_positive(self)

    def key(self) -> tuple:
        return (self.p * self.p + self.q * self.q, -self.p, -self.q)

    def __repr__(self) -> str:
        return f"KNum({self.p}, {self.q})"

    def __str__(self) -> str:
        if self.q == 0:
            return str(self.p)
        qs = "u5" if abs(self.q) == 1 else f"{abs(self.q)}*u5"
        if self.p == 0:
            return qs if self.q > 0 else "-" + qs
        return f"{self.p}{'+' if self.q > 0 else '-'}{qs}"

    def to_json(self) -> list[str]:
        return [str(self.p), str(self.q)]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "KNum":
        if len(data) != 2:
            raise ValueError(f"expected 2 coordinates, got {len(data)}")
        return cls(Fraction(data[0]), Fraction(data[1]))


ONE = CycNum._raw((1, 0, 0, 0))
ZERO = CycNum._raw((0, 0, 0, 0))
ZETA = CycNum._raw((0, 1, 0, 0))
U5 = KNum(0, 1)
# the unit zeta + zeta^2
OMEGA = CycNum._raw((0, 1, 1, 0))

assert U5.to_cyc() == -(ZETA**2) - ZETA**3
assert U5.to_cyc() * U5.to_cyc() == U5.to_cyc() + 1


def galois(x: CycNum, tag: str) -> CycNum:
    if tag == "conj":
        return x.conj()
    if tag == "prime":
        return x.prime()
    raise ValueError(f"unknown Galois tag {tag!r}; expected 'conj' or 'prime'")


def arith(x: CycNum, y: CycNum, op: str) -> CycNum:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def rel_norm(x: CycNum) -> KNum:
    """N_{F/k}(x) = x * conj(x)."""
    y = x * x.conj()
    if not y.is_real():
        raise ArithmeticError(f"relative norm of {x} left the real subfield: {y}")
    return y.to_knum()


def trace_k(x: KNum) -> Fraction:
    return KNum.coerce(x).trace()


# ---------------------------------------------------------------------------
# Real embeddings and sign decisions


def sqrt5_enclosure(bits: int) -> tuple[Fraction, Fraction]:
    """Rational interval [lo, hi] of width 2^-bits containing sqrt 5."""
    s = math.isqrt(5 << (2 * bits))
    return Fraction(s, 1 << bits), Fraction(s + 1, 1 << bits)


class EmbeddingApprox:
    """Interval enclosures of the embeddings of an element of k or F.

    For x in k the two real embeddings send sqrt 5 to +sqrt 5 and -sqrt 5.
    For x in F, ``iota1``/``iota2`` are the complex embeddings zeta -> e^(2 pi i/5)
    and zeta -> e^(6 pi i/5), returned as mpmath interval pairs (re, im).
    """

    def __init__(self, x, bits: int = 32):
        self.x = x
        self.bits = bits

    def real(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        x = KNum.coerce(self.x)
        lo, hi = sqrt5_enclosure(self.bits)
        a = x.p + x.q / 2
        b = x.q / 2
        # a + b*s for s in [lo, hi], and a - b*s
        e1 = sorted((a + b * lo, a + b * hi))
        e2 = sorted((a - b * lo, a - b * hi))
        return (e1[0], e1[1]), (e2[0], e2[1])

    def refine(self) -> "EmbeddingApprox":
        return EmbeddingApprox(self.x, self.bits * 2)

    def complex(self):
        import mpmath

        iv = mpmath.iv
        iv.prec = max(53, self.bits + 10)
        x = CycNum.coerce(self.x)
        out = []
        for j in (1, 3):
            re = iv.mpf(0)
            im = iv.mpf(0)
            for i, c in enumerate(x.coords):
                if c == 0:
                    continue
                ang = 2 * iv.pi * (i * j) / 5
                cf = iv.mpf(c.numerator) / c.denominator
                re += cf * iv.cos(ang)
                im += cf * iv.sin(ang)
            out.append((re, im))
        return tuple(out)


def _sign_a_plus_b_sqrt5(a: Fraction, b: Fraction) -> int:
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sa == 0:
        return sb
    if sb == 0 or sa == sb:
        return sa
    # opposite signs: compare a^2 with 5 b^2
    d = a * a - 5 * b * b
    return sa if d > 0 else (-sa if d < 0 else 0)


def real_signs(x: KNum, max_bits: int = 128) -> tuple[int, int]:
    """Signs of both real embeddings of x, decided without floating point."""
    x = KNum.coerce(x)
    if x.is_zero():
        return (0, 0)
    approx = EmbeddingApprox(x, 16)
    while approx.bits <= max_bits:
        e1, e2 = approx.real()
        if (e1[0] > 0 or e1[1] < 0) and (e2[0] > 0 or e2[1] < 0):
            return (1 if e1[0] > 0 else -1, 1 if e2[0] > 0 else -1)
        approx = approx.refine()
    a = x.p + x.q / 2
    b = x.q / 2
    return (_sign_a_plus_b_sqrt5(a, b), _sign_a_plus_b_sqrt5(a, -b))


def is_totally_positive(x: KNum) -> bool:
    x = KNum.coerce(x)
    if x.is_zero():
        return False
    return real_signs(x) == (1, 1)


# ---------------------------------------------------------------------------
# Units, Euclidean division, norm equations


@lru_cache(maxsize=None)
def torsion_units() -> tuple[CycNum, ...]:
    """The ten roots of unity in O: zeta^0..zeta^4 followed by their negatives."""
    pos = [ZETA**i for i in range(5)]
    return tuple(pos + [-z for z in pos])


def _round_candidates(coords: Sequence[Fraction], spread: int):
    base = [math.floor(c) for c in coords]
    rng = range(-spread + 1, spread + 1) if spread > 0 else range(0, 1)
    for off in itertools.product(rng, repeat=len(coords)):
        yield [b + o for b, o in zip(base, off)]


def divmod_o(x: CycNum, y: CycNum) -> tuple[CycNum, CycNum]:
    """Euclidean division in Z[zeta]: x = q*y + r with N(r) < N(y)."""
    if y.is_zero():
        raise ZeroDivisionError("division by zero in O")
    exact = (x / y).coords
    ny = y.abs_norm()
    for spread in (1, 2):
        best = None
        for cand in _round_candidates(exact, spread):
            q = CycNum.from_ints(cand)
            r = x - q * y
            nr = r.abs_norm()
            if best is None or nr < best[0]:
                best = (nr, q, r)
        if best[0] < ny:
            return best[1], best[2]
    raise ArithmeticError(f"Euclidean step failed for {x} / {y}")


def xgcd_o(x: CycNum, y: CycNum) -> tuple[CycNum, CycNum, CycNum]:
    """Return (g, s, t) with s*x + t*y = g, g a generator of the ideal (x, y)."""
    r0, r1 = x, y
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while not r1.is_zero():
        q, r = divmod_o(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def gcd_o(x: CycNum, y: CycNum) -> CycNum:
    return xgcd_o(x, y)[0]


def divmod_k(x: KNum, y: KNum) -> tuple[KNum, KNum]:
    """Euclidean division in Z[u5] with respect to |N_{k/Q}|."""
    if y.is_zero():
        raise ZeroDivisionError("division by zero in O_k")
    exact = x / y
    ny = abs(y.norm())
    for spread in (1, 2):
        best = None
        for cand in _round_candidates((exact.p, exact.q), spread):
            q = KNum(cand[0], cand[1])
            r = x - q * y
            nr = abs(r.norm())
            if best is None or nr < best[0]:
                best = (nr, q, r)
        if best[0] < ny:
            return best[1], best[2]
    raise ArithmeticError(f"Euclidean step failed for {x} / {y}")


def gcd_k(x: KNum, y: KNum) -> KNum:
    """A generator of the O_k-ideal (x, y), normalized to be totally positive when possible."""
    a, b = KNum.coerce(x), KNum.coerce(y)
    while not b.is_zero():
        _, r = divmod_k(a, b)
        a, b = b, r
    return make_totally_positive(a)


def make_totally_positive(x: KNum) -> KNum:
    """Multiply x by a unit from {+-1, +-u5} so both embeddings are positive."""
    if x.is_zero():
        return x
    s1, s2 = real_signs(x)
    # u5 has signs (+, -)
    if s1 != s2:
        x = x * U5
        s1, s2 = real_signs(x)
    return x if s1 > 0 else -x


@lru_cache(maxsize=1)
def trace_form_gram() -> tuple[tuple[Fraction, ...], ...]:
    """Gram matrix of alpha -> Tr_{k/Q}(alpha * conj(alpha)) on Z[zeta] = Z^4."""
    return tuple(
        tuple(Fraction(2) if i == j else Fraction(-1, 2) for j in range(4)) for i in range(4)
    )


def _check_tp_integral(b: KNum) -> KNum:
    b = KNum.coerce(b)
    if not b.is_integral():
        raise ValueError(f"{b} is not an integer of Q(sqrt 5)")
    if not is_totally_positive(b):
        raise ValueError(f"{b} is not totally positive")
    return b


def elements_of_trace_at_most(bound: Rational) -> list[CycNum]:
    """All nonzero alpha in O with Tr_{k/Q}(alpha*conj(alpha)) <= bound, both signs."""
    from cyclovoronoi.lattice_enum import short_vectors

    out = []
    for x, _ in short_vectors(trace_form_gram(), bound, mode="all_leq"):
        a = CycNum.from_ints(x)
        out.append(a)
        out.append(-a)
    return out


def rel_norm_solutions(b: KNum) -> list[CycNum]:
    """Every alpha in O with alpha*conj(alpha) = b, canonically sorted."""
    from cyclovoronoi.lattice_enum import short_vectors

    b = _check_tp_integral(b)
    t = b.trace()
    # the trace form value of alpha is Tr(rel_norm(alpha)), so only the shell value == t can solve
    sols = []
    for x, val in short_vectors(trace_form_gram(), t, mode="all_leq"):
        if val != t:
            continue
        a = CycNum.from_ints(x)
        if rel_norm(a) == b:
            sols.extend((a, -a))
    return sorted(sols, key=CycNum.key)


def solve_rel_norm(b: KNum) -> CycNum | None:
    """Canonical alpha in O with alpha*conj(alpha) = b, or None if b is not a norm."""
    sols = rel_norm_solutions(b)
    return sols[0] if sols else None


def tp_decompose(b: KNum) -> tuple[CycNum, KNum]:
    """Write b = alpha*conj(alpha) + t with alpha != 0 and t totally positive or zero."""
    b = _check_tp_integral(b)
    alpha = solve_rel_norm(b)
    if alpha is not None:
        return alpha, KNum(0)
    from cyclovoronoi.lattice_enum import short_vectors

    # walk the shells sum(c_i^2) = s in key order; N(alpha) << b forces
    # Tr N(alpha) < Tr b, and Tr N(alpha) >= sum(c_i^2)/2, so s < 2 Tr b
    ident4 = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))
    limit = 2 * b.trace()
    done, bound = Fraction(0), Fraction(2)
    while done < limit:
        bound = min(bound, limit)
        shells: dict[Fraction, list[CycNum]] = {}
        for x, val in short_vectors(ident4, bound, mode="all_leq", both_signs=True):
            if val > done:
                shells.setdefault(val, []).append(CycNum.from_ints(x))
        for s in sorted(shells):
            for a in sorted(shells[s], key=CycNum.key):
                t = b - rel_norm(a)
                if is_totally_positive(t):
                    return a, t
        done, bound = bound, 2 * bound
    raise ArithmeticError(f"no decomposition found for {b}")
