"""Arithmetic in the ring of integers O_K of an imaginary quadratic field.

Elements are written ``x + y*w`` where ``w`` is the standard generator:
``w = sqrt(-d)`` if ``d = 1, 2 (mod 4)`` and ``w = (1 + sqrt(-d))/2`` if
``d = 3 (mod 4)``.  So ``w**2 = s*w - n`` with ``s = Tr(w)`` and ``n = N(w)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd, isqrt
from typing import Callable, Iterable, Sequence

EUCLIDEAN_D = (1, 2, 3, 7, 11)
CLASS_NUMBER_ONE_D = (1, 2, 3, 7, 11, 19, 43, 67, 163)


class UnsupportedFieldError(ValueError):
    pass


class SplittingError(ValueError):
    pass


@dataclass(frozen=True)
class FieldData:
    d: int
    s: int = dc_field(compare=False)
    n: int = dc_field(compare=False)

    @property
    def disc(self) -> int:
        return -self.d if self.d % 4 == 3 else -4 * self.d

    @property
    def omega_rule(self) -> str:
        return "(1+sqrt(-%d))/2" % self.d if self.s else "sqrt(-%d)" % self.d

    @property
    def euclidean(self) -> bool:
        return self.d in EUCLIDEAN_D

    @property
    def units(self) -> tuple["QuadInt", ...]:
        return _units(self)

    def __call__(self, x: int = 0, y: int = 0) -> "QuadInt":
        return QuadInt(x, y, self)

    @property
    def one(self) -> "QuadInt":
        return QuadInt(1, 0, self)

    @property
    def zero(self) -> "QuadInt":
        return QuadInt(0, 0, self)

    @property
    def w(self) -> "QuadInt":
        return QuadInt(0, 1, self)

    def __repr__(self) -> str:
        return "FieldData(d=%d)" % self.d


@lru_cache(maxsize=None)
def make_field(d: int, *, allow_external: bool = False) -> FieldData:
    """Field data for Q(sqrt(-d)).

    Only the five norm-Euclidean fields are supported out of the box; the four
    remaining class-number-one fields need ``allow_external=True`` (their
    presentation data must then come from a file).
    """
    if d not in EUCLIDEAN_D and not (allow_external and d in CLASS_NUMBER_ONE_D):
        raise UnsupportedFieldError(
            "d=%d is not supported (built-in: %s; class number one fields %s need an external presentation)"
            % (d, EUCLIDEAN_D, CLASS_NUMBER_ONE_D[5:])
        )
    if d % 4 == 3:
        return FieldData(d, 1, (1 + d) // 4)
    return FieldData(d, 0, d)


@dataclass(frozen=True, slots=True)
class QuadInt:
    x: int
    y: int
    field: FieldData

    def _coerce(self, other) -> "QuadInt":
        if isinstance(other, QuadInt):
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadInt(self.x + other.x, self.y + other.y, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadInt(self.x - other.x, self.y - other.y, self.field)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QuadInt(-self.x, -self.y, self.field)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        s, n = self.field.s, self.field.n
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        yy = y1 * y2
        return QuadInt(x1 * x2 - n * yy, x1 * y2 + x2 * y1 + s * yy, self.field)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = self.field.one
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.x or self.y)

    def conj(self) -> "QuadInt":
        return QuadInt(self.x + self.field.s * self.y, -self.y, self.field)

    def norm(self) -> int:
        x, y = self.x, self.y
        return x * x + self.field.s * x * y + self.field.n * y * y

    def trace(self) -> int:
        return 2 * self.x + self.field.s * self.y

    def is_unit(self) -> bool:
        return self.norm() == 1

    def divides(self, other: "QuadInt | int") -> bool:
        other = self._coerce(other)
        if not self:
            return not other
        m = other * self.conj()
        N = self.norm()
        return m.x % N == 0 and m.y % N == 0

    def exact_div(self, other: "QuadInt | int") -> "QuadInt":
        """``self / other``, raising if the quotient is not integral."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero in O_K")
        m = self * other.conj()
        N = other.norm()
        if m.x % N or m.y % N:
            raise ArithmeticError("%s is not divisible by %s" % (self, other))
        return QuadInt(m.x // N, m.y // N, self.field)

    def inverse(self) -> "QuadInt":
        return self.field.one.exact_div(self)

    def __str__(self) -> str:
        return format_quadint(self)

    def __repr__(self) -> str:
        return "QuadInt(%s; d=%d)" % (format_quadint(self), self.field.d)


def format_quadint(a: QuadInt) -> str:
    x, y = a.x, a.y
    if y == 0:
        return str(x)
    wpart = "w" if abs(y) == 1 else "%dw" % abs(y)
    if x == 0:
        return wpart if y > 0 else "-" + wpart
    return "%d%s%s" % (x, "+" if y > 0 else "-", wpart)


_TERM = re.compile(r"([+-]?)(\d*)(w?)")


def parse_quadint(text: str, field: FieldData) -> QuadInt:
    """Parse strings like ``"3+2w"``, ``"1 - 3w"``, ``"w"``, ``"-7"``; ``ω`` (and ``i`` when d=1) mean ``w``."""
    s = text.replace(" ", "").replace("*", "").replace("ω", "w")
    if field.d == 1:
        s = s.replace("i", "w")
    if not s:
        raise ValueError("empty element string")
    x = y = 0
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError("cannot parse %r as an element of O_K" % text)
        sign, digits, wflag = m.groups()
        if not digits and not wflag:
            raise ValueError("cannot parse %r as an element of O_K" % text)
        coef = int(digits) if digits else 1
        if sign == "-":
            coef = -coef
        if wflag:
            y += coef
        else:
            x += coef
        pos = m.end()
    return QuadInt(x, y, field)


@lru_cache(maxsize=None)
def _units(field: FieldData) -> tuple[QuadInt, ...]:
    found = []
    for y in range(-2, 3):
        for x in range(-2, 3):
            q = QuadInt(x, y, field)
            if q.norm() == 1:
                found.append(q)
    found.sort(key=lambda q: (q.x != 1 or q.y != 0, q.x != -1 or q.y != 0, -q.x, -q.y))
    return tuple(found)


def euclid_divmod(a: QuadInt, b: QuadInt) -> tuple[QuadInt, QuadInt]:
    """Division with remainder: ``a = q*b + r`` and ``N(r) < N(b)``.

    ``q`` is the lattice point nearest to ``a/b`` among the 3x3 block around the
    coordinatewise rounding; for the five Euclidean fields this always
    satisfies the norm inequality.
    """
    if not b:
        raise ZeroDivisionError("euclid_divmod by zero")
    F = a.field
    m = a * b.conj()
    N = b.norm()
    qx0 = (2 * m.x + N) // (2 * N)
    qy0 = (2 * m.y + N) // (2 * N)
    best = None
    for dy in (0, -1, 1):
        for dx in (0, -1, 1):
            q = QuadInt(qx0 + dx, qy0 + dy, F)
            r = a - q * b
            nr = r.norm()
            if best is None or nr < best[0]:
                best = (nr, q, r)
    nr, q, r = best
    if nr >= N:
        raise ArithmeticError("no Euclidean quotient for %s / %s in d=%d" % (a, b, F.d))
    return q, r


def quad_gcd(a: QuadInt, b: QuadInt) -> QuadInt:
    while b:
        _, r = euclid_divmod(a, b)
        a, b = b, r
    return a


def canonical_associate(a: QuadInt) -> QuadInt:
    """The associate with ``x > 0`` (or ``x == 0, y > 0``) that is lexicographically least."""
    if not a:
        return a
    cands = [u * a for u in a.field.units]
    good = [c for c in cands if c.x > 0 or (c.x == 0 and c.y > 0)]
    return min(good, key=lambda c: (c.x, c.y))


def content(entries: Iterable[QuadInt]) -> QuadInt:
    g = None
    for e in entries:
        g = e if g is None else quad_gcd(g, e)
    return g


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_rational_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class SplitPrime:
    """A split rational prime ``ell = lambda * lambda_bar`` with both reductions."""

    field: FieldData
    ell: int
    lam: QuadInt
    lam_bar: QuadInt
    root1: int  # tau1(w)
    root2: int  # tau2(w)

    def tau1(self, a: QuadInt | int) -> int:
        if isinstance(a, int):
            return a % self.ell
        return (a.x + a.y * self.root1) % self.ell

    def tau2(self, a: QuadInt | int) -> int:
        if isinstance(a, int):
            return a % self.ell
        return (a.x + a.y * self.root2) % self.ell

    def tau(self, which: int) -> Callable[[QuadInt], int]:
        if which == 1:
            return self.tau1
        if which == 2:
            return self.tau2
        raise ValueError("reduction index must be 1 or 2")


def split_prime(field: FieldData, ell: int) -> SplitPrime:
    """Factor a split odd prime ``ell`` as ``lambda * lambda_bar``.

    ``tau1`` reduces modulo ``lambda`` and sends ``w`` to the larger root of the
    minimal polynomial of ``w`` mod ``ell``.
    """
    if ell == 2 or not is_rational_prime(ell):
        raise SplittingError("ell=%d is not an odd rational prime" % ell)
    leg = legendre(field.disc, ell)
    if leg == 0:
        raise SplittingError("ell=%d is ramified in Q(sqrt(-%d))" % (ell, field.d))
    if leg < 0:
        raise SplittingError("ell=%d is inert in Q(sqrt(-%d))" % (ell, field.d))
    roots = sorted(x for x in range(ell) if (x * x - field.s * x + field.n) % ell == 0)
    assert len(roots) == 2
    x1, x2 = roots[1], roots[0]
    lam = canonical_associate(quad_gcd(QuadInt(ell, 0, field), QuadInt(x1, -1, field)))
    lam_bar = canonical_associate(lam.conj())
    assert lam.norm() == ell and lam_bar.norm() == ell
    sp = SplitPrime(field, ell, lam, lam_bar, x1, x2)
    assert sp.tau1(lam) == 0 and sp.tau2(lam_bar) == 0
    return sp


def _elements_of_norm(field: FieldData, N: int) -> list[QuadInt]:
    s, n = field.s, field.n
    out = []
    disc = 4 * n - s * s
    ymax = isqrt(4 * N // disc) + 1
    for y in range(-ymax, ymax + 1):
        # x^2 + s*y*x + (n*y^2 - N) = 0
        D = s * s * y * y - 4 * (n * y * y - N)
        if D < 0:
            continue
        r = isqrt(D)
        if r * r != D:
            continue
        for sgn in (1, -1):
            num = -s * y + sgn * r
            if num % 2 == 0:
                q = QuadInt(num // 2, y, field)
                if q not in out:
                    out.append(q)
    return out


def enumerate_primes(
    field: FieldData, norm_bound: int, avoid: Sequence[QuadInt] = (), *, degree_one: bool = False
) -> list[QuadInt]:
    """One canonical generator per prime ideal of norm <= ``norm_bound``.

    Primes dividing any element of ``avoid`` are skipped; ``degree_one`` drops
    the inert primes (norm p^2).  Ordered by norm, then by ``(x, -y)``.
    """
    primes: list[QuadInt] = []
    for p in range(2, norm_bound + 1):
        if not is_rational_prime(p):
            continue
        leg = legendre(field.disc, p) if p != 2 else _legendre2(field)
        if leg < 0:
            if p * p <= norm_bound and not degree_one:
                primes.append(QuadInt(p, 0, field))
            continue
        seen = set()
        for q in _elements_of_norm(field, p):
            c = canonical_associate(q)
            if (c.x, c.y) not in seen:
                seen.add((c.x, c.y))
                primes.append(c)
    primes = [pi for pi in primes if not any(pi.divides(m) for m in avoid)]
    primes.sort(key=lambda q: (q.norm(), q.x, -q.y))
    return primes


def _legendre2(field: FieldData) -> int:
    disc = field.disc
    if disc % 2 == 0:
        return 0
    return 1 if disc % 8 in (1, 7) else -1


@dataclass(frozen=True, slots=True)
class Mat2:
    """A 2x2 matrix over O_K, row-major ``[[a, b], [c, d]]``."""

    a: QuadInt
    b: QuadInt
    c: QuadInt
    d: QuadInt

    @classmethod
    def from_ints(cls, field: FieldData, a, b, c, d) -> "Mat2":
        def conv(v):
            if isinstance(v, QuadInt):
                return v
            if isinstance(v, tuple):
                return QuadInt(v[0], v[1], field)
            return QuadInt(v, 0, field)

        return cls(conv(a), conv(b), conv(c), conv(d))

    @classmethod
    def identity(cls, field: FieldData) -> "Mat2":
        return cls(field.one, field.zero, field.zero, field.one)

    @property
    def field(self) -> FieldData:
        return self.a.field

    def __mul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def scale(self, k: QuadInt | int) -> "Mat2":
        return Mat2(self.a * k, self.b * k, self.c * k, self.d * k)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def det(self) -> QuadInt:
        return self.a * self.d - self.b * self.c

    def iota(self) -> "Mat2":
        """``det(m) * m^-1``, i.e. the adjugate."""
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> "Mat2":
        dt = self.det()
        if not dt.is_unit():
            raise ArithmeticError("matrix is not invertible over O_K")
        u = dt.inverse()
        return self.iota().scale(u)

    def entries(self) -> tuple[QuadInt, QuadInt, QuadInt, QuadInt]:
        return (self.a, self.b, self.c, self.d)

    def is_identity(self) -> bool:
        F = self.field
        return self == Mat2.identity(F)

    def key(self) -> tuple[int, ...]:
        return tuple(v for e in self.entries() for v in (e.x, e.y))

    def __str__(self) -> str:
        return "[[%s, %s], [%s, %s]]" % self.entries()

    __repr__ = __str__


def elementary(field: FieldData, x: QuadInt, upper: bool = True) -> Mat2:
    """E12(x) (upper) or E21(x) (lower)."""
    if upper:
        return Mat2(field.one, x, field.zero, field.one)
    return Mat2(field.one, field.zero, x, field.one)


def diag(field: FieldData, x: QuadInt | int, y: QuadInt | int) -> Mat2:
    return Mat2.from_ints(field, x, 0, 0, y)


def double_coset_member(g: Mat2, pi: QuadInt) -> bool:
    """Whether ``g`` lies in ``SL2(O) diag(pi, 1) SL2(O)``.

    Over a Euclidean ring the SL2-double coset is pinned down by the
    determinant and the elementary divisors, so this is ``det g == pi`` plus
    ``content(g)`` being a unit.
    """
    if g.det() != pi:
        return False
    return content(g.entries()).is_unit()
