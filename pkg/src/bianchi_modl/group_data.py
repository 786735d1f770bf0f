"""Presentations of SL2(O_K), the word problem, and congruence-subgroup cosets.

Words are lists of nonzero ints: ``k`` stands for generator ``k-1`` and ``-k``
for its inverse.  Shipped presentations live in ``data/sl2_d{d}.json`` and are
checked by matrix evaluation every time they are loaded.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from importlib import resources
from itertools import product
from typing import Iterable, Sequence

from .quad_arith import (
    FieldData,
    Mat2,
    QuadInt,
    euclid_divmod,
    format_quadint,
    enumerate_primes,
    make_field,
    parse_quadint,
    quad_gcd,
)

Word = list[int]

DEFAULT_INDEX_BOUND = 10**6


class PresentationError(ValueError):
    pass


class WordProblemError(ValueError):
    pass


class CosetEnumerationError(RuntimeError):
    pass


@dataclass
class GroupPresentation:
    field: FieldData
    names: list[str]
    generators: list[Mat2]
    relators: list[Word]
    minus_identity: Word | None = None
    # generator indices (0-based) of E12(1), E12(w) and S = [[0,-1],[1,0]]
    roles: dict[str, int] = dc_field(default_factory=dict)
    source: str = ""

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def has_minus_identity(self) -> bool:
        return self.minus_identity is not None

    @property
    def supports_word_problem(self) -> bool:
        return self.field.euclidean and {"E12_1", "E12_w", "S"} <= set(self.roles)

    def evaluate(self, word: Sequence[int]) -> Mat2:
        return evaluate_word(word, self)

    def word_str(self, word: Sequence[int]) -> str:
        out = []
        for k in word:
            nm = self.names[abs(k) - 1]
            out.append(nm if k > 0 else nm + "^-1")
        return "*".join(out) or "1"

    def digest(self) -> str:
        blob = json.dumps(presentation_to_dict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def evaluate_word(word: Sequence[int], P: GroupPresentation) -> Mat2:
    M = Mat2.identity(P.field)
    invs = [g.inverse() for g in P.generators]
    for k in word:
        M = M * (P.generators[k - 1] if k > 0 else invs[-k - 1])
    return M


def free_reduce(word: Iterable[int]) -> Word:
    out: Word = []
    for k in word:
        if out and out[-1] == -k:
            out.pop()
        else:
            out.append(k)
    return out


def invert_word(word: Sequence[int]) -> Word:
    return [-k for k in reversed(word)]


def presentation_to_dict(P: GroupPresentation) -> dict:
    return {
        "d": P.field.d,
        "generators": [
            {"name": nm, "matrix": [format_quadint(e) for e in g.entries()]} for nm, g in zip(P.names, P.generators)
        ],
        "relators": [list(r) for r in P.relators],
        "minus_identity": P.minus_identity,
        "roles": P.roles,
        "source": P.source,
    }


def presentation_from_dict(data: dict, *, field: FieldData | None = None, verify: bool = True) -> GroupPresentation:
    d = int(data["d"])
    F = field or make_field(d, allow_external=True)
    names, gens = [], []
    for g in data["generators"]:
        names.append(g["name"])
        entries = [parse_quadint(s, F) for s in g["matrix"]]
        M = Mat2(*entries)
        if M.det() != F.one:
            raise PresentationError("generator %s does not have determinant 1" % g["name"])
        gens.append(M)
    P = GroupPresentation(
        field=F,
        names=names,
        generators=gens,
        relators=[list(map(int, r)) for r in data["relators"]],
        minus_identity=data.get("minus_identity"),
        roles={k: int(v) for k, v in data.get("roles", {}).items()},
        source=data.get("source", ""),
    )
    if verify:
        verify_presentation(P)
    return P


def verify_presentation(P: GroupPresentation) -> None:
    I = Mat2.identity(P.field)
    for r in P.relators:
        if any(k == 0 or abs(k) > P.ngens for k in r):
            raise PresentationError("relator %r uses an unknown generator" % (r,))
        if evaluate_word(r, P) != I:
            raise PresentationError("relator %s does not evaluate to I" % P.word_str(r))
    if P.minus_identity is not None and evaluate_word(P.minus_identity, P) != -I:
        raise PresentationError("minus_identity word does not evaluate to -I")
    F = P.field
    expected = {
        "E12_1": Mat2.from_ints(F, 1, 1, 0, 1),
        "E12_w": Mat2.from_ints(F, 1, (0, 1), 0, 1),
        "S": Mat2.from_ints(F, 0, -1, 1, 0),
    }
    for role, idx in P.roles.items():
        if role in expected and P.generators[idx] != expected[role]:
            raise PresentationError("generator for role %s is not %s" % (role, expected[role]))


def load_presentation(path: str, *, verify: bool = True) -> GroupPresentation:
    with open(path) as fh:
        return presentation_from_dict(json.load(fh), verify=verify)


@lru_cache(maxsize=None)
def builtin_presentation(field: FieldData | int) -> GroupPresentation:
    """The shipped presentation of SL2(O_K) for a Euclidean field."""
    if isinstance(field, int):
        field = make_field(field)
    if not field.euclidean:
        raise PresentationError("no built-in presentation for d=%d; supply a presentation file" % field.d)
    text = resources.files("bianchi_modl").joinpath("data").joinpath("sl2_d%d.json" % field.d).read_text()
    return presentation_from_dict(json.loads(text), field=field)


# --- word problem -----------------------------------------------------------


def _power(gen: int, e: int) -> Word:
    return [gen] * e if e >= 0 else [-gen] * (-e)


@lru_cache(maxsize=None)
def _unit_diagonal_words(P: GroupPresentation) -> dict[tuple[int, int], Word]:
    """Words for diag(u, u^-1), found by a short search over the generators."""
    F = P.field
    targets = {(u.x, u.y): None for u in F.units}
    letters = [k for i in range(P.ngens) for k in (i + 1, -(i + 1))]
    targets[(1, 0)] = []
    for length in range(1, 5):
        for w in product(letters, repeat=length):
            M = evaluate_word(w, P)
            if M.b or M.c:
                continue
            key = (M.a.x, M.a.y)
            if key in targets and targets[key] is None:
                targets[key] = list(w)
        if all(v is not None for v in targets.values()):
            break
    missing = [k for k, v in targets.items() if v is None]
    if missing:
        raise PresentationError("cannot express diagonal unit matrices %s" % missing)
    return targets


# GroupPresentation is a mutable dataclass; hash by identity for the cache above
GroupPresentation.__hash__ = object.__hash__  # type: ignore[assignment]


def _translation_word(P: GroupPresentation, x: QuadInt) -> Word:
    return _power(P.roles["E12_1"] + 1, x.x) + _power(P.roles["E12_w"] + 1, x.y)


def word_decompose(m: Mat2, P: GroupPresentation) -> Word:
    """A word in the generators of ``P`` evaluating exactly to ``m`` (signs included).

    Euclidean reduction of the first column: left-multiply by E12(-q) and S
    until the lower-left entry vanishes, then peel off the diagonal unit and
    the remaining translation.
    """
    if not P.supports_word_problem:
        raise WordProblemError("word problem unavailable for d=%d (non-Euclidean or missing roles)" % P.field.d)
    F = P.field
    if m.det() != F.one:
        raise WordProblemError("matrix %s does not have determinant 1" % (m,))
    S = P.roles["S"] + 1
    word: Word = []
    a, b, c, d = m.a, m.b, m.c, m.d
    while c:
        q, r = euclid_divmod(a, c)
        word += _translation_word(P, q)
        b = b - q * d
        a = r
        # S * [[a, b], [c, d]] = [[-c, -d], [a, b]]
        word.append(-S)
        a, b, c, d = -c, -d, a, b
    e = a
    if not e.is_unit():
        raise WordProblemError("reduction ended at a non-unit diagonal; input not in SL2(O)")
    word += _unit_diagonal_words(P)[(e.x, e.y)]
    word += _translation_word(P, e.inverse() * b)
    return free_reduce(word)


def syllables(word: Sequence[int]) -> list[tuple[int, int]]:
    """Run-length form ``[(gen0, exponent), ...]`` of a word."""
    out: list[tuple[int, int]] = []
    for k in word:
        g, e = abs(k) - 1, (1 if k > 0 else -1)
        if out and out[-1][0] == g:
            g0, e0 = out[-1]
            if e0 + e == 0:
                out.pop()
            else:
                out[-1] = (g0, e0 + e)
        else:
            out.append((g, e))
    return out


# --- residue rings and congruence subgroups --------------------------------


class ResidueRing:
    """O_K / (m) with canonical representatives ``(x, y)``, ``0 <= x < A``, ``0 <= y < C``."""

    def __init__(self, modulus: QuadInt):
        if not modulus:
            raise ValueError("zero modulus")
        self.modulus = modulus
        self.field = modulus.field
        F = self.field
        v1 = modulus
        v2 = modulus * F.w
        g, u, v = _xgcd(v1.y, v2.y)
        if g == 0:
            raise ValueError("degenerate modulus")
        # basis (A, 0), (B, C) of the lattice m*O in coordinates (x, y)
        B = u * v1.x + v * v2.x
        C = g
        A = abs((v2.y // g) * v1.x - (v1.y // g) * v2.x)
        self.A, self.C = A, C
        self.B = B % A
        self.size = A * C
        assert self.size == modulus.norm()

    def reduce(self, z: QuadInt | int) -> tuple[int, int]:
        if isinstance(z, int):
            x, y = z, 0
        else:
            x, y = z.x, z.y
        k = y // self.C
        x -= k * self.B
        y -= k * self.C
        return (x % self.A, y)

    def code(self, z: QuadInt | int) -> int:
        x, y = self.reduce(z)
        return x * self.C + y

    def lift(self, code: int) -> QuadInt:
        return QuadInt(code // self.C, code % self.C, self.field)

    def elements(self) -> list[QuadInt]:
        return [self.lift(c) for c in range(self.size)]

    @lru_cache(maxsize=None)
    def unit_codes(self) -> tuple[int, ...]:
        m = self.modulus
        return tuple(c for c in range(self.size) if quad_gcd(self.lift(c), m).is_unit() or self.size == 1)

    def is_unit(self, z: QuadInt) -> bool:
        return quad_gcd(z, self.modulus).is_unit()

    def inverse(self, z: QuadInt) -> QuadInt:
        for c in self.unit_codes():
            u = self.lift(c)
            if self.code(u * z) == self.code(1):
                return u
        raise ZeroDivisionError("%s is not invertible mod %s" % (z, self.modulus))

    __hash__ = object.__hash__


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


KINDS = ("G0", "G0T", "G1", "P")


@dataclass(frozen=True)
class CongruenceSubgroup:
    """``kind`` level-``modulus`` subgroup intersected with Gamma_1(base_level).

    G0: c = 0;  G0T: b = 0;  G1: c = 0, d = 1;  P: g = I  (all mod ``modulus``).
    """

    kind: str
    modulus: QuadInt
    base_level: QuadInt | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("unknown subgroup kind %r" % self.kind)

    @property
    def field(self) -> FieldData:
        return self.modulus.field

    @property
    def is_full(self) -> bool:
        base_trivial = self.base_level is None or self.base_level.is_unit()
        return self.modulus.is_unit() and base_trivial

    def label(self) -> str:
        s = "%s:%s" % (self.kind, format_quadint(self.modulus))
        if self.base_level is not None and not self.base_level.is_unit():
            s += "@G1:%s" % format_quadint(self.base_level)
        return s

    def contains(self, m: Mat2) -> bool:
        return subgroup_membership(m, self)


def parse_level(text: str, field: FieldData) -> CongruenceSubgroup:
    """``"1"``, ``"G0:11"``, ``"G1:1+w"``, ``"P:3"``."""
    text = text.strip()
    if ":" not in text:
        m = parse_quadint(text, field)
        if not m.is_unit():
            return CongruenceSubgroup("G0", m)
        return CongruenceSubgroup("G0", field.one)
    kind, mod = text.split(":", 1)
    kind = kind.strip().upper().replace("GAMMA", "G")
    return CongruenceSubgroup(kind, parse_quadint(mod, field))


def subgroup_membership(m: Mat2, H: CongruenceSubgroup) -> bool:
    mod = H.modulus
    if H.base_level is not None and not H.base_level.is_unit():
        bl = H.base_level
        if not (bl.divides(m.c) and bl.divides(m.d - 1)):
            return False
    if H.kind == "G0":
        return mod.divides(m.c)
    if H.kind == "G0T":
        return mod.divides(m.b)
    if H.kind == "G1":
        return mod.divides(m.c) and mod.divides(m.d - 1)
    return mod.divides(m.a - 1) and mod.divides(m.b) and mod.divides(m.c) and mod.divides(m.d - 1)


class _KeyMaker:
    """Canonical key of the left coset ``x H`` read off from ``x`` mod the modulus.

    For G0 the key is the first column up to units of O/(m) (the second
    column for G0T, whose elements have b = 0); for G1 it is the
    first column itself; for P it is the whole matrix.  A matrix ``alpha x`` of
    determinant coprime to the modulus is keyed the same way, which realises the
    rewriting ``alpha x = y beta`` with ``beta`` upper triangular mod the
    modulus and ``beta_11 = 1`` (G1) or ``beta = diag(1, det)`` (P).
    """

    def __init__(self, H: CongruenceSubgroup):
        self.H = H
        self.R = ResidueRing(H.modulus)
        self.Rb = ResidueRing(H.base_level) if H.base_level is not None and not H.base_level.is_unit() else None
        self._proj: dict[tuple[int, int], tuple[int, int]] = {}
        if H.kind in ("G0", "G0T"):
            self._build_projective()

    def _build_projective(self):
        R = self.R
        N = R.size
        units = [R.lift(c) for c in R.unit_codes()]
        elems = R.elements()
        proj = self._proj
        mult = {}
        for u in units:
            mult[R.code(u)] = [R.code(u * e) for e in elems]
        for c1 in range(N):
            for c2 in range(N):
                if (c1, c2) in proj:
                    continue
                orbit = [(mult[uc][c1], mult[uc][c2]) for uc in mult]
                canon = min(orbit)
                for o in orbit:
                    proj[o] = canon

    def key(self, m: Mat2):
        R = self.R
        H = self.H
        if H.kind == "G0":
            k = self._proj[(R.code(m.a), R.code(m.c))]
        elif H.kind == "G0T":
            k = self._proj[(R.code(m.b), R.code(m.d))]
        elif H.kind == "G1":
            k = (R.code(m.a), R.code(m.c))
        else:
            dt = m.det()
            if dt != m.field.one:
                inv = R.inverse(dt)
                m = Mat2(m.a, m.b * inv, m.c, m.d * inv)
            k = (R.code(m.a), R.code(m.b), R.code(m.c), R.code(m.d))
        if self.Rb is not None:
            k = (k, (self.Rb.code(m.a), self.Rb.code(m.c)))
        return k


@dataclass
class CosetTable:
    """Left cosets ``rep_i H`` of a congruence subgroup in SL2(O_K).

    ``gen_perm[g][i] = j`` and ``gen_h[g][i] = h`` record
    ``generator_g * rep_i = rep_j * h`` with ``h`` in ``H``.
    """

    subgroup: CongruenceSubgroup
    presentation: GroupPresentation
    reps: list[Mat2]
    gen_perm: list[list[int]]
    gen_h: list[list[Mat2]]
    _keys: _KeyMaker = dc_field(repr=False)
    _index: dict = dc_field(repr=False)

    def __len__(self) -> int:
        return len(self.reps)

    def index_of(self, m: Mat2) -> int:
        try:
            return self._index[self._keys.key(m)]
        except KeyError:
            raise KeyError("no coset for %s (determinant not coprime to the modulus?)" % (m,)) from None

    def rewrite(self, alpha: Mat2, i: int) -> tuple[int, Mat2]:
        """``alpha * rep_i = rep_j * beta``; returns ``(j, beta)``."""
        m = alpha * self.reps[i]
        j = self.index_of(m)
        beta = self.reps[j].iota() * m  # reps have det 1
        return j, beta


def coset_table(
    H: CongruenceSubgroup, P: GroupPresentation, *, index_bound: int = DEFAULT_INDEX_BOUND
) -> CosetTable:
    """Breadth-first enumeration of ``SL2(O_K) / H`` from the identity coset."""
    keys = _KeyMaker(H)
    F = P.field
    I = Mat2.identity(F)
    reps = [I]
    index = {keys.key(I): 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for g in P.generators:
            m = g * reps[i]
            k = keys.key(m)
            if k not in index:
                if len(reps) >= index_bound:
                    raise CosetEnumerationError("coset enumeration exceeded the bound %d" % index_bound)
                index[k] = len(reps)
                reps.append(m)
                queue.append(len(reps) - 1)
    perm, hs = [], []
    for g in P.generators:
        row_p, row_h = [], []
        for rep in reps:
            m = g * rep
            j = index[keys.key(m)]
            row_p.append(j)
            row_h.append(reps[j].iota() * m)
        perm.append(row_p)
        hs.append(row_h)
    return CosetTable(H, P, reps, perm, hs, keys, index)


def index_formula(H: CongruenceSubgroup) -> int | None:
    """[SL2(O) : H] from the factorisation of the modulus (G0/G1, trivial base level)."""
    if H.base_level is not None and not H.base_level.is_unit():
        return None
    F = H.field
    N = H.modulus.norm()
    if N == 1:
        return 1
    # factor the ideal (m) into prime ideal powers via norms of prime elements
    factors: dict[tuple[int, int], tuple[int, int]] = {}
    m = H.modulus
    for pi in enumerate_primes(F, N):
        e = 0
        while pi.divides(m):
            m = m.exact_div(pi)
            e += 1
        if e:
            factors[(pi.x, pi.y)] = (pi.norm(), e)
    if not m.is_unit():
        return None
    idx = 1
    for q, e in factors.values():
        if H.kind in ("G0", "G0T"):
            idx *= q ** (e - 1) * (q + 1)
        elif H.kind == "G1":
            idx *= q ** (2 * e - 2) * (q * q - 1)
        else:
            idx *= q ** (3 * e - 3) * q * (q * q - 1)
    return idx
