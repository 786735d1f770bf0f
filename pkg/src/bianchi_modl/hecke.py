"""Hecke operators on H^1, simultaneous eigensystems, twists and weight matching.

For a prime ``alpha`` the double coset of ``diag(alpha, 1)`` splits into the
left cosets of

    [[alpha, b], [0, 1]]  (b over O/alpha)   and   [[1, 0], [0, alpha]],

and ``(T c)(g) = sum_i c(gamma_j^-1 g gamma_i) . gamma_i^iota`` with ``j = j(i)``
the unique index for which ``gamma_j^-1 g gamma_i`` lies in the group.
Operator matrices use the row convention of the rest of the package: row ``i``
holds the coordinates of ``T(basis_i)``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field as dc_field
from math import lcm
from typing import Callable, Iterable, Sequence

import numpy as np

from . import linalg
from .cohomology import CohomologySpace, SubgroupPresentation, h1
from .finite_fields import GF, factor_poly
from .finite_fields import field as gf_field
from .group_data import (
    CongruenceSubgroup,
    ResidueRing,
    builtin_presentation,
    coset_table,
    subgroup_membership,
    word_decompose,
)
from .quad_arith import FieldData, Mat2, QuadInt, SplitPrime, double_coset_member, enumerate_primes, format_quadint
from .rep_modules import FpRepModule, WeightSpec, build_induced, build_weight_module, parse_weight

DEFAULT_MAX_EXT = 4


class HeckeError(RuntimeError):
    pass


# --- coset representatives -------------------------------------------------------


def hecke_reps(alpha: QuadInt, level: CongruenceSubgroup | None = None, *, verify: bool = True) -> list[Mat2]:
    """Left coset representatives of ``G diag(alpha,1) G`` for ``G = SL2(O)`` or ``Gamma_0``.

    All representatives are upper triangular, so the same family serves any
    Gamma_0 level coprime to ``alpha``.
    """
    F = alpha.field
    if alpha.is_unit() or not alpha:
        raise HeckeError("alpha must be a non-unit")
    if level is not None:
        if level.kind != "G0" and not level.modulus.is_unit():
            raise HeckeError("explicit representatives are provided for Gamma_0 levels only")
        from .quad_arith import quad_gcd

        if not quad_gcd(alpha, level.modulus).is_unit():
            raise HeckeError("%s is not coprime to the level %s" % (alpha, level.label()))
    R = ResidueRing(alpha)
    reps = [Mat2(alpha, b, F.zero, F.one) for b in R.elements()]
    reps.append(Mat2(F.one, F.zero, F.zero, alpha))
    if verify:
        verify_hecke_reps(reps, alpha)
    return reps


def _divisible(m: Mat2, alpha: QuadInt) -> bool:
    return all(alpha.divides(e) for e in m.entries())


def verify_hecke_reps(reps: Sequence[Mat2], alpha: QuadInt) -> None:
    if len(reps) != alpha.norm() + 1:
        raise HeckeError("expected %d representatives, got %d" % (alpha.norm() + 1, len(reps)))
    for g in reps:
        if not double_coset_member(g, alpha):
            raise HeckeError("%s is not in the double coset of diag(%s, 1)" % (g, alpha))
    adj = [g.iota() for g in reps]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            # gamma_i^-1 gamma_j integral  <=>  alpha | gamma_i^iota gamma_j
            if _divisible(adj[i] * reps[j], alpha):
                raise HeckeError("representatives %d and %d define the same coset" % (i, j))


# --- Hecke matrices -----------------------------------------------------------------


@dataclass
class HeckeOperator:
    alpha: QuadInt
    reps: list[Mat2]
    matrix: np.ndarray

    @property
    def label(self) -> str:
        return format_quadint(self.alpha)

    def matrix_hash(self) -> str:
        M = np.ascontiguousarray(self.matrix, dtype=np.int64)
        h = hashlib.sha256(("%dx%d:" % M.shape).encode() + M.tobytes()).hexdigest()
        return h[:16]


def hecke_matrix(
    alpha: QuadInt,
    H: CohomologySpace,
    *,
    reps: Sequence[Mat2] | None = None,
    subgroup: SubgroupPresentation | None = None,
    check_cocycle: bool = False,
) -> HeckeOperator:
    """Matrix of ``T_alpha`` on ``H``.

    ``H`` lives on the shipped SL2(O) presentation, or on the Schreier
    presentation ``subgroup`` of a Gamma_0 subgroup (then the membership test
    includes the congruence condition).
    """
    p = H.p
    P = H.presentation
    level = subgroup.table.subgroup if subgroup is not None else None
    reps = list(reps) if reps is not None else hecke_reps(alpha, level)
    k, n = H.dim, H.module.dim
    if k == 0:
        return HeckeOperator(alpha, reps, np.zeros((0, 0), dtype=np.int64))
    adj = [g.iota() for g in reps]
    acts_iota = [H.module.act(a) for a in adj]
    plan = _summand_words(P, alpha, tuple(reps), subgroup)
    C = H.basis
    out = np.zeros((k, P.ngens * n), dtype=np.int64)
    for gi in range(P.ngens):
        acc = np.zeros((k, n), dtype=np.int64)
        for i, w in enumerate(plan[gi]):
            vals = H.acts.evaluate(C, w)
            acc = (acc + linalg.matmul(vals, acts_iota[i], p)) % p
        out[:, gi * n : (gi + 1) * n] = acc
    if check_cocycle:
        from .cohomology import is_cocycle

        if not is_cocycle(P, H.module, out, H.acts):
            raise HeckeError("T_%s does not preserve cocycles" % alpha)
    return HeckeOperator(alpha, reps, H.project(out))


_PLAN_CACHE: dict = {}


def _summand_words(P, alpha: QuadInt, reps: tuple[Mat2, ...], subgroup: SubgroupPresentation | None):
    """For each generator g and rep i, a word for ``gamma_j(i)^-1 g gamma_i``.

    Depends only on the presentation and the representatives, so it is shared
    by every module and cached.
    """
    key = (id(P), alpha, reps)
    hit = _PLAN_CACHE.get(key)
    if hit is not None and hit[0] is P:
        return hit[1]
    level = subgroup.table.subgroup if subgroup is not None else None
    adj = [g.iota() for g in reps]
    plan = []
    for gi, g in enumerate(P.generators):
        row = []
        for i, gam in enumerate(reps):
            ggam = g * gam
            found = None
            for j in range(len(reps)):
                m = adj[j] * ggam
                if _divisible(m, alpha):
                    h = Mat2(*(e.exact_div(alpha) for e in m.entries()))
                    if level is None or subgroup_membership(h, level):
                        if found is not None:
                            raise HeckeError("coset index j(i) is not unique")
                        found = h
            if found is None:
                raise HeckeError("no j(i) for generator %d and representative %d" % (gi, i))
            row.append(subgroup.word_for(found) if subgroup is not None else word_decompose(found, P))
        plan.append(row)
    if len(_PLAN_CACHE) > 256:
        _PLAN_CACHE.clear()
    _PLAN_CACHE[key] = (P, plan)
    return plan


# --- eigensystems --------------------------------------------------------------------


@dataclass
class EigenSystem:
    primes: tuple[QuadInt, ...]
    values: tuple[int, ...]  # codes in ``gf``
    k: int
    multiplicity: int
    gf: GF | None
    unresolved: tuple | None = None  # irreducible factors, when k exceeds the bound
    provenance: dict = dc_field(default_factory=dict)

    @property
    def labels(self) -> list[str]:
        return [format_quadint(q) for q in self.primes]

    @property
    def resolved(self) -> bool:
        return self.unresolved is None

    def value_strings(self) -> list[str]:
        if not self.resolved:
            return ["?"] * len(self.primes)
        return [self.gf.format(v) for v in self.values]

    def as_dict(self) -> dict:
        d = {
            "values": dict(zip(self.labels, self.value_strings())),
            "ext_degree": self.k,
            "multiplicity": self.multiplicity,
        }
        if self.k > 1 and self.gf is not None:
            d["field_modulus"] = list(self.gf.modulus)
        if not self.resolved:
            d["unresolved_factors"] = {lab: list(map(list, f)) for lab, f in zip(self.labels, self.unresolved)}
        return d

    def prime_values(self) -> dict[tuple[int, int], int]:
        return {(q.x, q.y): v for q, v in zip(self.primes, self.values)}


def _split_blocks(ops: Sequence[np.ndarray], p: int, basis: np.ndarray, depth: int, facs: tuple):
    """Recursive generalized-eigenspace splitting over F_p."""
    if depth == len(ops):
        yield basis, facs
        return
    T = linalg.restrict(basis, ops[depth], p)
    cp = linalg.charpoly(T, p)
    for f, e in factor_poly(cp, p):
        fe = _poly_pow(f, e, p)
        K = linalg.left_kernel(linalg.poly_eval_matrix(fe, T, p), p)
        if K.shape[0]:
            yield from _split_blocks(ops, p, linalg.matmul(K, basis, p), depth + 1, facs + (f,))


def _poly_pow(f: Sequence[int], e: int, p: int) -> list[int]:
    out = [1]
    for _ in range(e):
        out = [int(c) % p for c in np.convolve(out, f)]
    return out


def commute(ops: Sequence[np.ndarray], p: int) -> bool:
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not np.array_equal(linalg.matmul(ops[i], ops[j], p), linalg.matmul(ops[j], ops[i], p)):
                return False
    return True


def eigensystems(
    ops: Sequence[HeckeOperator], p: int, max_ext_degree: int = DEFAULT_MAX_EXT, *, check_commute: bool = True
) -> list[EigenSystem]:
    """Simultaneous eigensystems of commuting operators, one per Frobenius orbit.

    The space is first split over F_p into joint generalized eigenspaces by
    irreducible factors; each block is then split over F_{p^k}, k the lcm of
    the factor degrees, and its joint eigenvalue tuples grouped into Galois
    orbits.  Each orbit is reported once, by its lexicographically least
    tuple, with the F_{p^k}-dimension of that tuple's generalized eigenspace.
    """
    mats = [linalg.as_mod(T.matrix, p) for T in ops]
    primes = tuple(T.alpha for T in ops)
    if not mats:
        return []
    n = mats[0].shape[0]
    if n == 0:
        return []
    if check_commute and not commute(mats, p):
        raise HeckeError("Hecke operators do not commute")
    systems: list[EigenSystem] = []
    for basis, facs in _split_blocks(mats, p, np.eye(n, dtype=np.int64), 0, ()):
        k = lcm(*(len(f) - 1 for f in facs))
        dim_block = basis.shape[0]
        if k > max_ext_degree:
            mult = dim_block // k
            systems.append(EigenSystem(primes, (), k, mult, None, tuple(facs)))
            continue
        G = gf_field(p, k)
        restricted = [linalg.restrict(basis, T, p) for T in mats]
        big = [G.embed_matrix(T) for T in restricted]
        tuples = []
        _branch(G, big, [f for f in facs], 0, np.eye(dim_block * k, dtype=np.int64), (), tuples)
        dims = dict(tuples)
        seen: set = set()
        for tup, _ in sorted(tuples):
            if tup in seen:
                continue
            orbit = {tup}
            cur = tup
            for _ in range(k - 1):
                cur = tuple(G.frobenius(v) for v in cur)
                orbit.add(cur)
            seen |= orbit
            # the tuple generates F_{p^k}: its orbit has exactly k elements
            rep = min(orbit)
            systems.append(EigenSystem(primes, rep, k, dims[rep] // k, G))
    systems.sort(key=lambda s: (not s.resolved, s.k, s.values, s.unresolved or ()))
    return systems


def _branch(G: GF, big, facs, depth, S, tup, out):
    if depth == len(big):
        out.append((tup, S.shape[0]))
        return
    p = G.p
    A_S = linalg.restrict(S, big[depth], p)
    dimS = S.shape[0]
    for theta in G.roots(facs[depth]):
        B = (A_S - _scalar_on(S, G, theta)) % p
        K = linalg.left_kernel(linalg.matpow(B, dimS, p), p)
        if K.shape[0]:
            _branch(G, big, facs, depth + 1, linalg.matmul(K, S, p), tup + (theta,), out)


def _scalar_on(S: np.ndarray, G: GF, theta: int) -> np.ndarray:
    # S spans an F_q-subspace, so multiplication by theta restricts to it
    d = S.shape[1] // G.k
    return linalg.restrict(S, G.scalar_matrix(d, theta), G.p)


# --- twists and matching ----------------------------------------------------------------


def twist_factor(q: QuadInt, a: int, b: int, sp: SplitPrime) -> int:
    p = sp.ell
    return pow(sp.tau1(q), a, p) * pow(sp.tau2(q), b, p) % p


def twist_eigensystem(phi: EigenSystem, a: int, b: int, sp: SplitPrime) -> EigenSystem:
    """``phi'(pi) = tau1(pi)^a tau2(pi)^b phi(pi)``."""
    if not phi.resolved:
        raise HeckeError("cannot twist an unresolved system")
    for q in phi.primes:
        if sp.tau1(q) == 0 or sp.tau2(q) == 0:
            raise HeckeError("prime %s is not coprime to %d" % (q, sp.ell))
    G = phi.gf
    vals = tuple(G.mul(v, twist_factor(q, a, b, sp)) for q, v in zip(phi.primes, phi.values))
    prov = dict(phi.provenance, twist=[a, b])
    return EigenSystem(phi.primes, vals, phi.k, phi.multiplicity, G, None, prov)


def _conjugates(s: EigenSystem, support: Sequence[tuple[int, int]]) -> list[tuple[int, ...]]:
    pv = s.prime_values()
    cur = tuple(pv[q] for q in support)
    out = [cur]
    for _ in range(s.k - 1):
        cur = tuple(s.gf.frobenius(v) for v in cur)
        out.append(cur)
    return out


def systems_equal(phi: EigenSystem, psi: EigenSystem, *, min_support: int = 1) -> bool:
    """Equality on the shared prime support, up to Galois conjugation."""
    if not (phi.resolved and psi.resolved) or phi.k != psi.k:
        return False
    keys_phi = [(q.x, q.y) for q in phi.primes]
    shared = [q for q in keys_phi if q in psi.prime_values()]
    if len(shared) < min_support:
        raise HeckeError("shared prime support %d is below the minimum %d" % (len(shared), min_support))
    target = tuple(phi.prime_values()[q] for q in shared)
    return target in _conjugates(psi, shared)


def match_up_to_twist(
    phi: EigenSystem,
    candidates: Sequence[EigenSystem],
    sp: SplitPrime,
    *,
    twists: Iterable[tuple[int, int]] | None = None,
    min_support: int = 9,
) -> list[tuple[int, int, int]]:
    """All ``(candidate index, a, b)`` with ``twist(candidate, a, b) == phi``."""
    if twists is None:
        twists = [(a, b) for a in range(sp.ell - 1) for b in range(sp.ell - 1)]
    twists = list(twists)
    out = []
    for ci, psi in enumerate(candidates):
        if not psi.resolved:
            continue
        for a, b in twists:
            if systems_equal(phi, twist_eigensystem(psi, a, b, sp), min_support=min_support):
                out.append((ci, a, b))
    return out


# --- end-to-end helpers -----------------------------------------------------------------


def hecke_primes(field: FieldData, ell: int, level: CongruenceSubgroup | None, bound: int) -> list[QuadInt]:
    avoid = [field(ell, 0)]
    if level is not None and not level.modulus.is_unit():
        avoid.append(level.modulus)
    return enumerate_primes(field, bound, avoid, degree_one=True)


@dataclass
class SpaceResult:
    space: CohomologySpace
    operators: list[HeckeOperator]
    systems: list[EigenSystem]


def level_module(V: FpRepModule, level: CongruenceSubgroup | None, field: FieldData) -> FpRepModule:
    if level is None or level.is_full:
        return V
    T = coset_table(level, builtin_presentation(field))
    return build_induced(T, V)


def compute_space(
    field: FieldData,
    sp: SplitPrime,
    level: CongruenceSubgroup | None,
    weight: WeightSpec | str,
    primes: Sequence[QuadInt],
    max_ext_degree: int = DEFAULT_MAX_EXT,
    *,
    map_fn: Callable = map,
) -> SpaceResult:
    """H^1(level, weight) with Hecke operators at ``primes`` and its eigensystems.

    ``map_fn`` must preserve order (``map`` or ``Executor.map``).
    """
    w = parse_weight(weight) if isinstance(weight, str) else weight
    P = builtin_presentation(field)
    M = level_module(build_weight_module(w, sp), level, field)
    H = h1(P, M)
    ops = list(map_fn(lambda q: hecke_matrix(q, H), primes))
    systems = eigensystems(ops, sp.ell, max_ext_degree) if H.dim else []
    prov = {"d": field.d, "ell": sp.ell, "level": level.label() if level else "1", "weight": str(w)}
    for s in systems:
        s.provenance = dict(prov)
    return SpaceResult(H, ops, systems)


@dataclass
class WeightReductionReport:
    field: int
    ell: int
    level: str
    primes: list[str]
    rows: list[dict]

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.rows)

    def as_dict(self) -> dict:
        return {
            "field": self.field,
            "ell": self.ell,
            "level": self.level,
            "primes": self.primes,
            "passed": self.passed,
            "weights": self.rows,
        }


def weight_reduction_check(
    field: FieldData,
    sp: SplitPrime,
    *,
    level: CongruenceSubgroup | None = None,
    prime_norm_bound: int = 30,
    weights: Iterable[tuple[int, int, int, int]] | None = None,
    max_ext_degree: int = DEFAULT_MAX_EXT,
    progress: Callable[[str], None] | None = None,
    map_fn: Callable = map,
) -> WeightReductionReport:
    """Every eigensystem of ``H^1(G, E^{a,b}_{r,s})`` must be an (a,b)-twist of one of ``H^1(G, I_{r,s})``."""
    ell = sp.ell
    if weights is None:
        weights = [
            (r, s, a, b)
            for r in range(ell)
            for s in range(ell)
            if (r + s) % 2 == 0
            for a in range(ell - 1)
            for b in range(ell - 1)
        ]
    primes = hecke_primes(field, ell, level, prime_norm_bound)
    targets: dict[tuple[int, int], SpaceResult] = {}
    rows = []
    for r, s, a, b in weights:
        if (r, s) not in targets:
            targets[(r, s)] = compute_space(field, sp, level, WeightSpec("I", r, s), primes, max_ext_degree, map_fn=map_fn)
        tgt = targets[(r, s)]
        src = compute_space(field, sp, level, WeightSpec("E", r, s, a, b), primes, max_ext_degree, map_fn=map_fn)
        matches, unmatched = [], []
        for si, phi in enumerate(src.systems):
            if not phi.resolved:
                unmatched.append({"source": si, "reason": "unresolved (extension degree %d)" % phi.k})
                continue
            hits = match_up_to_twist(phi, tgt.systems, sp, twists=[(a, b)], min_support=len(primes))
            if hits:
                matches.append({"source": si, "target": hits[0][0], "twist": [a, b]})
            else:
                unmatched.append({"source": si, "values": phi.value_strings()})
        row = {
            "weight": "E:%d,%d,%d,%d" % (r, s, a, b),
            "h1_dim": src.space.dim,
            "target_h1_dim": tgt.space.dim,
            "systems": len(src.systems),
            "matches": matches,
            "unmatched": unmatched,
            "passed": not unmatched,
        }
        rows.append(row)
        if progress:
            progress("%s dim=%d systems=%d %s" % (row["weight"], row["h1_dim"], row["systems"], "ok" if row["passed"] else "FAIL"))
    return WeightReductionReport(field.d, ell, level.label() if level else "1", [format_quadint(q) for q in primes], rows)
