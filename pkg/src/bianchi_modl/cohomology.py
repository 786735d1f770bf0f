"""H^0 and H^1 of a finitely presented group with coefficients in an FpRepModule.

Cocycle convention: ``c(g h) = c(g) act(h) + c(h)``, hence
``c(g^-1) = -c(g) act(g^-1)``.  A cocycle is stored as one row of length
``ngens * dim``: the concatenated values on the generators.  Several cocycles
are rows of a matrix and are evaluated together.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import linalg
from .group_data import CongruenceSubgroup, CosetTable, GroupPresentation, syllables, word_decompose
from .quad_arith import Mat2
from .rep_modules import FpRepModule, minus_identity_sign


class GroupActions:
    """Action matrices of generators, their inverses and their powers on a module."""

    def __init__(self, P: GroupPresentation, M: FpRepModule):
        self.P, self.M, self.p = P, M, M.p
        self.gen = [M.act(g) for g in P.generators]
        self.inv = [M.act(g.inverse()) for g in P.generators]
        self._pow: dict[tuple[int, int], np.ndarray] = {}
        self._geo: dict[tuple[int, int], np.ndarray] = {}

    def power(self, g: int, e: int) -> np.ndarray:
        """``act(gen_g ** e)``."""
        key = (g, e)
        A = self._pow.get(key)
        if A is None:
            if e == 0:
                A = np.eye(self.M.dim, dtype=np.int64)
            elif e > 0:
                A = self.gen[g] if e == 1 else linalg.matmul(self.power(g, e - 1), self.gen[g], self.p)
            else:
                A = self.inv[g] if e == -1 else linalg.matmul(self.power(g, e + 1), self.inv[g], self.p)
            self._pow[key] = A
        return A

    def geometric(self, g: int, e: int) -> np.ndarray:
        """``S`` with ``c(gen_g ** e) = c(gen_g) @ S``."""
        key = (g, e)
        S = self._geo.get(key)
        if S is None:
            p = self.p
            if e == 0:
                S = np.zeros((self.M.dim, self.M.dim), dtype=np.int64)
            elif e > 0:
                # c(g^e) = c(g^(e-1)) act(g) + c(g)
                S = (linalg.matmul(self.geometric(g, e - 1), self.gen[g], p) + np.eye(self.M.dim, dtype=np.int64)) % p
            else:
                S = (-linalg.matmul(self.geometric(g, -e), self.power(g, e), p)) % p
            self._geo[key] = S
        return S

    def word_action(self, word: Sequence[int]) -> np.ndarray:
        A = np.eye(self.M.dim, dtype=np.int64)
        for g, e in syllables(word):
            A = linalg.matmul(A, self.power(g, e), self.p)
        return A

    def evaluate(self, C: np.ndarray, word: Sequence[int]) -> np.ndarray:
        """Values ``c(word)`` for the cocycles in the rows of ``C``."""
        n, p = self.M.dim, self.p
        C = np.atleast_2d(C)
        V = np.zeros((C.shape[0], n), dtype=np.int64)
        for g, e in syllables(word):
            V = (linalg.matmul(V, self.power(g, e), p) + linalg.matmul(C[:, g * n : (g + 1) * n], self.geometric(g, e), p)) % p
        return V


def relation_matrix(P: GroupPresentation, M: FpRepModule, acts: GroupActions | None = None) -> np.ndarray:
    """Fox-calculus matrix ``R`` with ``Z^1 = {c : c @ R = 0}``.

    Block ``(i, rel)`` is the derivative of the relator with respect to
    generator ``i``, evaluated in the module.
    """
    acts = acts or GroupActions(P, M)
    n, m, p = M.dim, P.ngens, M.p
    R = np.zeros((m * n, n * len(P.relators)), dtype=np.int64)
    for col, rel in enumerate(P.relators):
        D = [None] * m
        S = np.eye(n, dtype=np.int64)  # action of the suffix to the right of the current letter
        for k in reversed(rel):
            g = abs(k) - 1
            if k > 0:
                D[g] = S.copy() if D[g] is None else (D[g] + S) % p
                S = linalg.matmul(acts.gen[g], S, p)
            else:
                S = linalg.matmul(acts.inv[g], S, p)
                D[g] = (-S) % p if D[g] is None else (D[g] - S) % p
        for g in range(m):
            if D[g] is not None:
                R[g * n : (g + 1) * n, col * n : (col + 1) * n] = D[g]
    return R


def coboundary_matrix(P: GroupPresentation, M: FpRepModule, acts: GroupActions | None = None) -> np.ndarray:
    """Rows ``v -> (v act(g) - v)_g`` for the standard basis vectors v."""
    acts = acts or GroupActions(P, M)
    eye = np.eye(M.dim, dtype=np.int64)
    return np.hstack([(A - eye) % M.p for A in acts.gen])


def cocycle_space(P: GroupPresentation, M: FpRepModule, acts: GroupActions | None = None) -> np.ndarray:
    """Basis (rows) of Z^1, in reduced echelon form."""
    R = relation_matrix(P, M, acts)
    if R.shape[1] == 0:
        return np.eye(P.ngens * M.dim, dtype=np.int64)
    return linalg.row_basis(linalg.left_kernel(R, M.p), M.p)


def is_cocycle(P: GroupPresentation, M: FpRepModule, C: np.ndarray, acts: GroupActions | None = None) -> bool:
    acts = acts or GroupActions(P, M)
    C = np.atleast_2d(C)
    return all(not acts.evaluate(C, rel).any() for rel in P.relators)


@dataclass
class CohomologySpace:
    degree: int
    module: FpRepModule
    presentation: GroupPresentation
    basis: np.ndarray
    acts: GroupActions = dc_field(repr=False)
    _B: np.ndarray = dc_field(default=None, repr=False)  # B^1 in RREF
    _Bpiv: np.ndarray = dc_field(default=None, repr=False)
    _Hpiv: np.ndarray = dc_field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def p(self) -> int:
        return self.module.p

    def project(self, cocycles: np.ndarray, *, check: bool = True) -> np.ndarray:
        """Coordinates of cocycle classes in ``basis`` (rows in, rows out)."""
        p = self.p
        X = linalg.as_mod(np.atleast_2d(cocycles), p).copy()
        if self.degree == 0:
            return linalg.coordinates(self.basis, X, p, check=check)
        if self._B is not None and len(self._Bpiv):
            X = (X - linalg.matmul(X[:, self._Bpiv], self._B, p)) % p
        if self.dim == 0:
            if check and X.any():
                raise ValueError("vector is not a cocycle")
            return np.zeros((X.shape[0], 0), dtype=np.int64)
        coords = X[:, self._Hpiv]
        if check and not np.array_equal(linalg.matmul(coords, self.basis, p), X):
            raise ValueError("vector is not a cocycle")
        return coords

    def values(self, row: np.ndarray) -> list[np.ndarray]:
        n = self.module.dim
        return [row[i * n : (i + 1) * n] for i in range(self.presentation.ngens)]


def h0(M: FpRepModule, gens: Sequence[Mat2]) -> np.ndarray:
    """Invariant vectors (rows): common left kernel of ``act(g) - 1``."""
    eye = np.eye(M.dim, dtype=np.int64)
    if not gens:
        return eye
    A = np.hstack([(M.act(g) - eye) % M.p for g in gens])
    return linalg.row_basis(linalg.left_kernel(A, M.p), M.p)


def h0_space(P: GroupPresentation, M: FpRepModule) -> CohomologySpace:
    return CohomologySpace(0, M, P, h0(M, P.generators), GroupActions(P, M))


def h1(P: GroupPresentation, M: FpRepModule, *, central_shortcut: bool = True) -> CohomologySpace:
    """``Z^1 / B^1`` with a canonical complement basis.

    The basis is the reduced echelon form of ``Z^1`` reduced modulo the echelon
    form of ``B^1``, so it depends only on the two subspaces.
    """
    acts = GroupActions(P, M)
    p, n = M.p, M.dim
    empty = np.zeros((0, P.ngens * n), dtype=np.int64)
    if central_shortcut and p != 2 and P.has_minus_identity and minus_identity_sign(M, P.field) == -1:
        # -I is central and acts by -1: multiplication by -1 on H^1 is the identity
        return CohomologySpace(1, M, P, empty, acts, empty, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    Z = cocycle_space(P, M, acts)
    Bgen = coboundary_matrix(P, M, acts)
    B, Bpiv = linalg.rref(Bgen, p)
    B = B[: len(Bpiv)]
    Zr = Z.copy()
    if len(Bpiv):
        Zr = (Zr - linalg.matmul(Zr[:, Bpiv], B, p)) % p
    H, Hpiv = linalg.rref(Zr, p)
    H = H[: len(Hpiv)]
    return CohomologySpace(1, M, P, H, acts, B, Bpiv, Hpiv)


def cocycle_eval(space: CohomologySpace, C: np.ndarray, m: Mat2 | Sequence[int]) -> np.ndarray:
    """``c(m)`` for the cocycles in the rows of ``C``; ``m`` a matrix or a word."""
    word = m if not isinstance(m, Mat2) else word_decompose(m, space.presentation)
    return space.acts.evaluate(C, word)


def coboundary(P: GroupPresentation, M: FpRepModule, v: np.ndarray) -> np.ndarray:
    return linalg.matmul(np.atleast_2d(v), coboundary_matrix(P, M), M.p)


# --- subgroups: Reidemeister-Schreier and Shapiro ------------------------------------


@dataclass
class SubgroupPresentation:
    """Presentation of ``H`` on the Schreier generators ``rep_j^-1 g rep_i``.

    Generator ``g * len(T) + i`` belongs to ``(generator g, coset i)``.
    """

    table: CosetTable
    presentation: GroupPresentation

    def rewrite(self, word: Sequence[int], start: int = 0) -> tuple[list[int], int]:
        """Rewrite ``word * rep_start = rep_end * h``; returns (word for h, end)."""
        T = self.table
        N = len(T)
        out: list[int] = []
        i = start
        for k in reversed(word):
            g = abs(k) - 1
            if k > 0:
                j = T.gen_perm[g][i]
                out.append(g * N + i + 1)
                i = j
            else:
                j = self._inverse_perm[g][i]
                out.append(-(g * N + j + 1))
                i = j
        return list(reversed(out)), i

    def __post_init__(self):
        T = self.table
        self._inverse_perm = []
        for row in T.gen_perm:
            inv = [0] * len(row)
            for i, j in enumerate(row):
                inv[j] = i
            self._inverse_perm.append(inv)

    def word_for(self, h: Mat2) -> list[int]:
        w, end = self.rewrite(word_decompose(h, self.table.presentation))
        if end != 0:
            raise ValueError("%s is not in the subgroup" % (h,))
        return w


def reidemeister_schreier(T: CosetTable) -> SubgroupPresentation:
    """Schreier generators and rewritten relators of the subgroup of ``T``.

    Relators: each ambient relator rewritten from every coset, plus ``s = 1``
    for the generators along the BFS tree (which are literally the identity).
    """
    P = T.presentation
    N = len(T)
    gens = [T.gen_h[g][i] for g in range(P.ngens) for i in range(N)]
    names = ["%s_%d" % (P.names[g], i) for g in range(P.ngens) for i in range(N)]
    I = Mat2.identity(P.field)
    sub = SubgroupPresentation(T, P)  # temporary, for rewriting
    rels = []
    for idx, h in enumerate(gens):
        if h == I:
            rels.append([idx + 1])
    for rel in P.relators:
        for i in range(N):
            w, end = sub.rewrite(rel, i)
            assert end == i
            if w:
                rels.append(w)
    minus = None
    if P.minus_identity is not None:
        w, end = sub.rewrite(P.minus_identity, 0)
        if end == 0:
            minus = w
    H = GroupPresentation(P.field, names, gens, rels, minus_identity=minus, source="Reidemeister-Schreier")
    return SubgroupPresentation(T, H)


def shapiro_transport(space: CohomologySpace, T: CosetTable, sub: SubgroupPresentation, V: FpRepModule) -> np.ndarray:
    """Restrict classes of ``H^1(SL2(O), Ind V)`` to ``H`` and evaluate at the identity coset.

    Returns cocycles of the subgroup presentation (rows); ``f -> f(I)``.
    """
    m = V.dim
    C = space.basis
    out = []
    for h in sub.presentation.generators:
        vals = cocycle_eval(space, C, h)
        out.append(vals[:, :m])  # block of rep_0 = I
    return np.hstack(out) if out else np.zeros((C.shape[0], 0), dtype=np.int64)


def exponent_matrix(P: GroupPresentation) -> np.ndarray:
    """Relators as rows of generator exponent sums (the abelianised relations)."""
    E = np.zeros((len(P.relators), P.ngens), dtype=np.int64)
    for r, rel in enumerate(P.relators):
        for k in rel:
            E[r, abs(k) - 1] += 1 if k > 0 else -1
    return E


def abelian_invariants(P: GroupPresentation) -> list[int]:
    """Invariant factors of the abelianisation (0 for each free Z summand).

    Integer Smith normal form via sympy; meant for the small ambient
    presentations (large Schreier presentations should use ``hom_to_Fp_dim``).
    """
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import invariant_factors

    rows = exponent_matrix(P).tolist()
    if not rows:
        return [0] * P.ngens
    facs = [abs(int(f)) for f in invariant_factors(Matrix(rows), domain=ZZ)]
    facs += [0] * (P.ngens - len(facs))
    return sorted([f for f in facs if f != 1], key=lambda f: (f == 0, f))


def hom_to_Fp_dim(P: GroupPresentation, p: int) -> int:
    """dim Hom(G^ab, F_p) = ngens - rank of the exponent-sum matrix mod p."""
    E = exponent_matrix(P)
    return P.ngens - (linalg.rank(E, p) if E.size else 0)
