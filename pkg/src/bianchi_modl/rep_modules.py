"""Coefficient modules over F_ell with a right action of integral 2x2 matrices.

Vectors are rows and ``act(g)`` multiplies on the right, so
``act(g * h) == act(g) @ act(h)``.  Modules factoring through O/ell carry a
reduction map ``tau`` (one of the two residue maps of a split prime); the
``E^{a,b}_{r,s}`` family reduces its first factor with ``tau1`` and its second
with ``tau2``.

Bases:
  * ``E_r``: ``X^r, X^(r-1) Y, ..., Y^r``.
  * ``I_n``: degree-``n`` homogeneous functions on ``F_ell^2 - 0``, by their
    values at ``(1,0), (1,1), ..., (1,ell-1), (0,1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Callable, Iterable, Sequence

import numpy as np

from . import linalg
from .group_data import CosetTable
from .quad_arith import Mat2, QuadInt, SplitPrime

Tau = Callable[[QuadInt], int]


@dataclass(eq=False)
class FpRepModule:
    p: int
    dim: int
    action: Callable[[Mat2], np.ndarray] = dc_field(repr=False)
    name: str = ""
    basis_labels: list[str] = dc_field(default_factory=list, repr=False)
    reduction_tag: str = "none"
    _memo: dict = dc_field(default_factory=dict, repr=False)

    def act(self, g: Mat2) -> np.ndarray:
        A = self._memo.get(g)
        if A is None:
            A = np.ascontiguousarray(linalg.as_mod(self.action(g), self.p))
            if A.shape != (self.dim, self.dim):
                raise ValueError("action of %s has shape %s, expected %d" % (g, A.shape, self.dim))
            A.setflags(write=False)
            if len(self._memo) < 50000:
                self._memo[g] = A
        return A

    def __repr__(self):
        return "FpRepModule(%s, dim=%d, F_%d)" % (self.name, self.dim, self.p)


@dataclass(eq=False)
class ModuleMap:
    source: FpRepModule
    target: FpRepModule
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = linalg.as_mod(self.matrix, self.source.p)
        if self.matrix.shape != (self.source.dim, self.target.dim):
            raise ValueError("map matrix has shape %s" % (self.matrix.shape,))

    def intertwines(self, elements: Iterable[Mat2]) -> bool:
        p = self.source.p
        M = self.matrix
        for g in elements:
            lhs = linalg.matmul(M, self.target.act(g), p)
            rhs = linalg.matmul(self.source.act(g), M, p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def rank(self) -> int:
        return linalg.rank(self.matrix, self.source.p)


# --- basic constructions ----------------------------------------------------


def trivial_module(p: int) -> FpRepModule:
    one = np.ones((1, 1), dtype=np.int64)
    return FpRepModule(p, 1, lambda g: one, "F_%d" % p, ["1"])


def _poly_pow(lin: tuple[int, int], e: int, p: int) -> np.ndarray:
    # coefficients of (u X + v Y)^e indexed by the Y-degree
    u, v = lin
    out = np.zeros(e + 1, dtype=np.int64)
    for i in range(e + 1):
        out[i] = comb(e, i) * pow(u, e - i, p) * pow(v, i, p) % p
    return out


def sym_power_matrix(r: int, a: int, b: int, c: int, d: int, p: int) -> np.ndarray:
    """Row i: coefficients of ``(aX+bY)^(r-i) (cX+dY)^i``."""
    M = np.zeros((r + 1, r + 1), dtype=np.int64)
    for i in range(r + 1):
        M[i] = np.convolve(_poly_pow((a, b), r - i, p), _poly_pow((c, d), i, p)) % p
    return M


def _reduce(g: Mat2, tau: Tau) -> tuple[int, int, int, int]:
    return tau(g.a), tau(g.b), tau(g.c), tau(g.d)


def build_E(r: int, p: int, tau: Tau, tag: str = "lambda") -> FpRepModule:
    if r < 0:
        raise ValueError("negative weight")
    cache: dict = {}

    def action(g: Mat2) -> np.ndarray:
        key = _reduce(g, tau)
        M = cache.get(key)
        if M is None:
            M = cache[key] = sym_power_matrix(r, *key, p)
        return M

    labels = [_monomial(r - i, i) for i in range(r + 1)]
    return FpRepModule(p, r + 1, action, "E_%d" % r, labels, tag)


def _monomial(i: int, j: int) -> str:
    parts = [("X" if i == 1 else "X^%d" % i) if i else "", ("Y" if j == 1 else "Y^%d" % j) if j else ""]
    return "".join(parts) or "1"


def twist_det(M: FpRepModule, a: int, tau: Tau) -> FpRepModule:
    if a == 0:
        return M
    p = M.p

    def action(g: Mat2) -> np.ndarray:
        return M.act(g) * pow(tau(g.det()), a, p) % p

    return FpRepModule(p, M.dim, action, "det^%d(%s)" % (a, M.name), M.basis_labels, M.reduction_tag)


def tensor(M1: FpRepModule, M2: FpRepModule) -> FpRepModule:
    if M1.p != M2.p:
        raise ValueError("modules over different fields")
    labels = ["%s(x)%s" % (u, v) for u in M1.basis_labels for v in M2.basis_labels]
    tag = M1.reduction_tag if M1.reduction_tag == M2.reduction_tag else "both"
    return FpRepModule(
        M1.p, M1.dim * M2.dim, lambda g: np.kron(M1.act(g), M2.act(g)) % M1.p, "%s(x)%s" % (M1.name, M2.name), labels, tag
    )


def direct_sum(M1: FpRepModule, M2: FpRepModule) -> FpRepModule:
    n1, n2 = M1.dim, M2.dim

    def action(g: Mat2) -> np.ndarray:
        A = np.zeros((n1 + n2, n1 + n2), dtype=np.int64)
        A[:n1, :n1] = M1.act(g)
        A[n1:, n1:] = M2.act(g)
        return A

    return FpRepModule(M1.p, n1 + n2, action, "%s+%s" % (M1.name, M2.name), M1.basis_labels + M2.basis_labels, "both")


def submodule(M: FpRepModule, basis: np.ndarray, name: str = "") -> FpRepModule:
    """Action restricted to the invariant row space ``basis`` (recomputed per element)."""
    basis = linalg.as_mod(basis, M.p)
    k = basis.shape[0]

    def action(g: Mat2) -> np.ndarray:
        return linalg.restrict(basis, M.act(g), M.p)

    return FpRepModule(M.p, k, action, name or "sub(%s)" % M.name, ["b%d" % i for i in range(k)], M.reduction_tag)


def E_weight(r: int, s: int, a: int, b: int, sp: SplitPrime) -> FpRepModule:
    """``E^{a,b}_{r,s} = det^a E_r (via tau1)  (x)  det^b E_s (via tau2)``."""
    M1 = twist_det(build_E(r, sp.ell, sp.tau1, "lambda"), a, sp.tau1)
    M2 = twist_det(build_E(s, sp.ell, sp.tau2, "lambda_bar"), b, sp.tau2)
    M = tensor(M1, M2)
    M.name = "E^{%d,%d}_{%d,%d}" % (a, b, r, s)
    return M


# --- function modules -------------------------------------------------------


def projective_points(p: int) -> list[tuple[int, int]]:
    return [(1, x) for x in range(p)] + [(0, 1)]


def _normalize_point(u: int, v: int, p: int) -> tuple[int, int]:
    """``(u, v) = x * P_j``; returns ``(j, x)`` with ``x = 0`` for the zero vector."""
    if u % p:
        x = u % p
        return (v * pow(x, p - 2, p) % p, x)
    if v % p:
        return (p, v % p)
    return (-1, 0)


def build_I(n: int, p: int, tau: Tau, tag: str = "lambda") -> FpRepModule:
    n %= p - 1
    pts = projective_points(p)
    cache: dict = {}

    def action(g: Mat2) -> np.ndarray:
        key = _reduce(g, tau)
        A = cache.get(key)
        if A is None:
            a, b, c, d = key
            A = np.zeros((p + 1, p + 1), dtype=np.int64)
            for k, (u, v) in enumerate(pts):
                # (f.g)(P_k) = f(P_k g^T)
                j, x = _normalize_point(u * a + v * b, u * c + v * d, p)
                if j >= 0:
                    A[j, k] = pow(x, n, p)
            cache[key] = A
        return A

    labels = ["d(%d,%d)" % pt for pt in pts]
    return FpRepModule(p, p + 1, action, "I_%d" % n, labels, tag)


def build_I_full(p: int, tau: Tau) -> FpRepModule:
    """All functions on ``F_p^2 - 0``; basis of deltas in the order of ``nonzero_points``."""
    pts = nonzero_points(p)
    index = {pt: i for i, pt in enumerate(pts)}
    N = len(pts)

    def action(g: Mat2) -> np.ndarray:
        a, b, c, d = _reduce(g, tau)
        A = np.zeros((N, N), dtype=np.int64)
        for k, (u, v) in enumerate(pts):
            img = ((u * a + v * b) % p, (u * c + v * d) % p)
            if img != (0, 0):
                A[index[img], k] = 1
        return A

    return FpRepModule(p, N, action, "I", ["d(%d,%d)" % pt for pt in pts])


def nonzero_points(p: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(p) for v in range(p) if (u, v) != (0, 0)]


def grading_projections(p: int) -> list[np.ndarray]:
    """Idempotents of the full function module onto its degree-n parts, n = 0..p-2.

    ``f_n(v) = -sum_x x^(-n) f(x v)``, using ``sum_{x != 0} x^m = -[p-1 | m]``.
    """
    pts = nonzero_points(p)
    index = {pt: i for i, pt in enumerate(pts)}
    N = len(pts)
    out = []
    for n in range(p - 1):
        Pn = np.zeros((N, N), dtype=np.int64)
        for k, (u, v) in enumerate(pts):
            for x in range(1, p):
                j = index[(x * u % p, x * v % p)]
                Pn[j, k] = (Pn[j, k] - pow(x, (p - 1 - n) % (p - 1), p)) % p
        out.append(Pn)
    return out


def graded_piece_inclusion(n: int, p: int) -> np.ndarray:
    """``I_n -> I``: extend values at the section points by degree-n homogeneity."""
    pts = projective_points(p)
    full = nonzero_points(p)
    index = {pt: i for i, pt in enumerate(full)}
    A = np.zeros((p + 1, len(full)), dtype=np.int64)
    for k, (u, v) in enumerate(pts):
        for x in range(1, p):
            A[k, index[(x * u % p, x * v % p)]] = pow(x, n, p)
    return A


# --- maps between E and I ----------------------------------------------------


def map_alpha(r: int, p: int, tau: Tau, tag: str = "lambda") -> ModuleMap:
    """``E_r -> I_r``, a polynomial goes to its values."""
    pts = projective_points(p)
    A = np.zeros((r + 1, p + 1), dtype=np.int64)
    for i in range(r + 1):
        for k, (u, v) in enumerate(pts):
            A[i, k] = pow(u, r - i, p) * pow(v, i, p) % p
    return ModuleMap(build_E(r, p, tau, tag), build_I(r, p, tau, tag), A)


def beta_matrix(r: int, p: int) -> np.ndarray:
    """``beta_r(f) = sum_{v != 0} f(v) (bX - aY)^(p-1-r)`` on the delta basis of ``I_r``.

    Along the line through ``P_k = (a, b)`` the summand is ``x^(p-1) (bX - aY)^(p-1-r)``,
    so each delta maps to ``-(bX - aY)^(p-1-r)``.
    """
    e = p - 1 - r
    B = np.zeros((p + 1, e + 1), dtype=np.int64)
    for k, (a, b) in enumerate(projective_points(p)):
        B[k] = (-_poly_pow((b, -a), e, p)) % p
    return B


def map_beta(r: int, p: int, tau: Tau, tag: str = "lambda") -> ModuleMap:
    """``I_r -> E^r_{p-1-r}``."""
    target = twist_det(build_E(p - 1 - r, p, tau, tag), r, tau)
    return ModuleMap(build_I(r, p, tau, tag), target, beta_matrix(r, p))


@dataclass
class ExactSequenceData:
    """``0 -> E_{r,s} -> I_{r,s} -> U_{r,s} -> V_{r,s} -> 0`` with ``W = ker(pi')``."""

    r: int
    s: int
    E: FpRepModule
    I: FpRepModule
    U: FpRepModule
    V: FpRepModule
    W: FpRepModule
    iota: ModuleMap
    pi: ModuleMap
    pi_prime: ModuleMap
    W_basis: np.ndarray  # rows in U


def build_sequence(r: int, s: int, sp: SplitPrime) -> ExactSequenceData:
    p = sp.ell
    t1, t2 = sp.tau1, sp.tau2
    E = tensor(build_E(r, p, t1, "lambda"), build_E(s, p, t2, "lambda_bar"))
    E.name = "E_{%d,%d}" % (r, s)
    Ir, Is = build_I(r, p, t1, "lambda"), build_I(s, p, t2, "lambda_bar")
    I = tensor(Ir, Is)
    I.name = "I_{%d,%d}" % (r, s)
    Er_ = twist_det(build_E(p - 1 - r, p, t1, "lambda"), r, t1)
    Es_ = twist_det(build_E(p - 1 - s, p, t2, "lambda_bar"), s, t2)
    U = direct_sum(tensor(Er_, Is), tensor(Ir, Es_))
    U.name = "U_{%d,%d}" % (r, s)
    V = tensor(Er_, Es_)
    V.name = "V_{%d,%d}" % (r, s)
    Ar = map_alpha(r, p, t1).matrix
    As = map_alpha(s, p, t2).matrix
    Br, Bs = beta_matrix(r, p), beta_matrix(s, p)
    eye_r, eye_s = np.eye(p + 1, dtype=np.int64), np.eye(p + 1, dtype=np.int64)
    iota = ModuleMap(E, I, np.kron(Ar, As))
    pi = ModuleMap(I, U, np.hstack([np.kron(Br, eye_s), np.kron(eye_r, Bs)]))
    pp = np.vstack([np.kron(np.eye(Er_.dim, dtype=np.int64), Bs), -np.kron(Br, np.eye(Es_.dim, dtype=np.int64))])
    pi_prime = ModuleMap(U, V, pp)
    W_basis = linalg.left_kernel(pi_prime.matrix, p)
    W = submodule(U, W_basis, "W_{%d,%d}" % (r, s))
    return ExactSequenceData(r, s, E, I, U, V, W, iota, pi, pi_prime, W_basis)


# --- pairings -----------------------------------------------------------------


def pairing_E(r: int, p: int) -> np.ndarray:
    """``<X^(r-i) Y^i, X^(r-j) Y^j> = (-1)^i / C(r,i)`` when ``i + j = r``."""
    G = np.zeros((r + 1, r + 1), dtype=np.int64)
    for i in range(r + 1):
        c = comb(r, i) % p
        if c == 0:
            raise ValueError("binomial coefficient vanishes mod %d (r >= p)" % p)
        G[i, r - i] = (-1) ** i * pow(c, p - 2, p) % p
    return G


def pairing_I(r: int, p: int) -> np.ndarray:
    """``<f, g> = sum_{v != 0} f(v) g(v)`` between ``I_r`` and ``I_(p-1-r)``; equals ``-Id``."""
    G = np.zeros((p + 1, p + 1), dtype=np.int64)
    for k in range(p + 1):
        G[k, k] = sum(pow(x, p - 1, p) for x in range(1, p)) % p
    return G


def pairing_invariant(G: np.ndarray, A: np.ndarray, B: np.ndarray, p: int) -> bool:
    """``<v A, w B> = <v, w>`` for all v, w."""
    return np.array_equal(linalg.matmul(linalg.matmul(A, G, p), B.T, p), linalg.as_mod(G, p))


# --- characters and induction --------------------------------------------------


def build_char_module(r: int, s: int, sp: SplitPrime) -> FpRepModule:
    """One-dimensional, ``[[a,b],[c,d]]`` acting by ``tau1(d)^r tau2(d)^s``."""
    p = sp.ell

    def action(g: Mat2) -> np.ndarray:
        t1, t2 = sp.tau1(g.d), sp.tau2(g.d)
        if (r and t1 == 0) or (s and t2 == 0):
            raise ValueError("%s is outside Gamma^0(ell): tau(d) = 0" % (g,))
        return np.array([[pow(t1, r, p) * pow(t2, s, p) % p]], dtype=np.int64)

    return FpRepModule(p, 1, action, "chi(%d,%d)" % (r, s), ["1"], "both")


def build_induced(T: CosetTable, V: FpRepModule) -> FpRepModule:
    """``Ind(H, SL2(O), V)``: functions with ``f(x h) = f(x) h``, stored by values at the reps.

    ``(f alpha)(x_k) = f(x_j) beta`` where ``alpha x_k = x_j beta``.
    """
    n, m = len(T), V.dim
    p = V.p
    gen_index = {g: i for i, g in enumerate(T.presentation.generators)}

    def action(alpha: Mat2) -> np.ndarray:
        A = np.zeros((n * m, n * m), dtype=np.int64)
        gi = gen_index.get(alpha)
        for k in range(n):
            if gi is not None:
                j, beta = T.gen_perm[gi][k], T.gen_h[gi][k]
            else:
                j, beta = T.rewrite(alpha, k)
            A[j * m : (j + 1) * m, k * m : (k + 1) * m] = V.act(beta)
        return A

    labels = ["%s@%d" % (lab, k) for k in range(n) for lab in V.basis_labels]
    return FpRepModule(p, n * m, action, "Ind[%s](%s)" % (T.subgroup.label(), V.name), labels, V.reduction_tag)


# --- weight specifications ---------------------------------------------------------

_WEIGHT_RE = re.compile(r"^\s*(E|I|U|V|W|char|triv)\s*(?::\s*([-\d,\s]*))?$", re.IGNORECASE)


@dataclass(frozen=True)
class WeightSpec:
    construction: str
    r: int = 0
    s: int = 0
    a: int = 0
    b: int = 0

    def __str__(self) -> str:
        if self.construction == "triv":
            return "triv"
        if self.construction == "E":
            return "E:%d,%d,%d,%d" % (self.r, self.s, self.a, self.b)
        return "%s:%d,%d" % (self.construction, self.r, self.s)

    def validate(self, ell: int) -> None:
        for v in (self.r, self.s):
            if not 0 <= v <= ell - 1:
                raise ValueError("weight index %d outside [0, %d]" % (v, ell - 1))
        for v in (self.a, self.b):
            if not 0 <= v <= ell - 2:
                raise ValueError("twist %d outside [0, %d]" % (v, ell - 2))


def parse_weight(text: str) -> WeightSpec:
    m = _WEIGHT_RE.match(text or "triv")
    if not m:
        raise ValueError("cannot parse weight %r" % text)
    kind = m.group(1)
    kind = {"e": "E", "i": "I", "u": "U", "v": "V", "w": "W"}.get(kind.lower(), kind.lower())
    nums = [int(x) for x in (m.group(2) or "").replace(" ", "").split(",") if x != ""]
    if kind == "triv":
        if nums:
            raise ValueError("trivial weight takes no parameters")
        return WeightSpec("triv")
    if kind == "E":
        if len(nums) not in (2, 4):
            raise ValueError("E weight needs r,s or r,s,a,b")
        nums += [0] * (4 - len(nums))
        return WeightSpec("E", *nums)
    if len(nums) != 2:
        raise ValueError("%s weight needs r,s" % kind)
    return WeightSpec(kind, nums[0], nums[1])


def build_weight_module(w: WeightSpec, sp: SplitPrime) -> FpRepModule:
    p = sp.ell
    w.validate(p)
    if w.construction == "triv":
        return trivial_module(p)
    if w.construction == "E":
        return E_weight(w.r, w.s, w.a, w.b, sp)
    if w.construction == "char":
        return build_char_module(w.r, w.s, sp)
    seq = build_sequence(w.r, w.s, sp)
    return {"I": seq.I, "U": seq.U, "V": seq.V, "W": seq.W}[w.construction]


def minus_identity_sign(M: FpRepModule, field) -> int:
    """+1 or -1 if ``-I`` acts by that scalar, 0 otherwise."""
    A = M.act(Mat2.from_ints(field, -1, 0, 0, -1))
    eye = np.eye(M.dim, dtype=np.int64)
    if np.array_equal(A, eye):
        return 1
    if np.array_equal(A, (-eye) % M.p):
        return -1
    return 0


def random_delta_elements(field, count: int, rng: np.random.Generator, *, coprime_to: int | None = None, sl2_only=False):
    """Random integral matrices: products of generators of SL2(O) and ``diag(pi, 1)``-type factors."""
    from .group_data import builtin_presentation
    from .quad_arith import enumerate_primes

    P = builtin_presentation(field)
    gens = P.generators + [g.inverse() for g in P.generators]
    primes = [] if sl2_only else [q for q in enumerate_primes(field, 30) if coprime_to is None or q.norm() % coprime_to]
    out = []
    for _ in range(count):
        M = Mat2.identity(field)
        for _ in range(int(rng.integers(1, 8))):
            M = M * gens[int(rng.integers(len(gens)))]
        if primes and rng.random() < 0.5:
            q = primes[int(rng.integers(len(primes)))]
            M = M * Mat2(q, field.zero, field.zero, field.one)
            for _ in range(int(rng.integers(1, 4))):
                M = M * gens[int(rng.integers(len(gens)))]
        out.append(M)
    return out


def intertwiner_space(A: FpRepModule, B: FpRepModule, elements: Sequence[Mat2]) -> np.ndarray:
    """Basis (rows, row-major flattened) of ``{X : act_A(g) X = X act_B(g)}``."""
    p = A.p
    m, n = A.dim, B.dim
    eq = []
    for g in elements:
        # row-major vec: vec(A X) = (A (x) I) vec X,  vec(X B) = (I (x) B^T) vec X
        eq.append((np.kron(A.act(g), np.eye(n, dtype=np.int64)) - np.kron(np.eye(m, dtype=np.int64), B.act(g).T)) % p)
    return linalg.right_kernel(np.vstack(eq), p)


def find_isomorphism(
    A: FpRepModule, B: FpRepModule, elements: Sequence[Mat2], rng: np.random.Generator, tries: int = 20
) -> np.ndarray | None:
    """An invertible intertwiner ``A -> B`` (random combination of the Hom basis), or None."""
    if A.dim != B.dim:
        return None
    K = intertwiner_space(A, B, elements)
    if K.shape[0] == 0:
        return None
    p = A.p
    for _ in range(tries):
        coef = rng.integers(0, p, size=K.shape[0])
        X = linalg.matmul(coef[None, :], K, p).reshape(A.dim, B.dim)
        if linalg.rank(X, p) == A.dim:
            return X
    return None
