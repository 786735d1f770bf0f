"""Verification suites: structural identities checked by exact computation.

Every suite returns a ``SuiteResult`` of named checks; randomised checks draw
from ``numpy.random.default_rng(seed)`` so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from . import linalg
from .cohomology import (
    GroupActions,
    cocycle_eval,
    cocycle_space,
    coboundary_matrix,
    h0,
    h1,
    hom_to_Fp_dim,
    is_cocycle,
    reidemeister_schreier,
    shapiro_transport,
)
from .group_data import CongruenceSubgroup, builtin_presentation, coset_table, evaluate_word, word_decompose
from .hecke import (
    commute,
    compute_space,
    eigensystems,
    hecke_matrix,
    hecke_primes,
    hecke_reps,
    match_up_to_twist,
    systems_equal,
    twist_eigensystem,
    twist_factor,
    EigenSystem,
)
from .quad_arith import FieldData, Mat2, enumerate_primes, format_quadint, make_field, parse_quadint, split_prime
from .rep_modules import (
    E_weight,
    beta_matrix,
    build_char_module,
    build_E,
    build_I,
    build_I_full,
    build_induced,
    build_sequence,
    find_isomorphism,
    graded_piece_inclusion,
    grading_projections,
    map_alpha,
    map_beta,
    pairing_E,
    pairing_I,
    pairing_invariant,
    random_delta_elements,
    tensor,
    trivial_module,
)

DEFAULT_SEED = 20240607


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = dc_field(default_factory=list)
    tables: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "tables": self.tables,
        }


def _sl2_samples(F: FieldData, count: int, rng) -> list[Mat2]:
    P = builtin_presentation(F)
    return P.generators + random_delta_elements(F, count, rng, sl2_only=True)


# --- exactness -------------------------------------------------------------------------


def suite_exactness(d: int, ell: int, seed: int = DEFAULT_SEED, n_random: int = 50) -> SuiteResult:
    F = make_field(d)
    sp = split_prime(F, ell)
    p = ell
    rng = np.random.default_rng(seed)
    elements = builtin_presentation(F).generators + random_delta_elements(F, n_random, rng, coprime_to=ell)
    res = SuiteResult("exactness")
    for r in range(p):
        a = map_alpha(r, p, sp.tau1)
        b = map_beta(r, p, sp.tau1)
        res.add("alpha_%d injective" % r, a.rank() == r + 1)
        res.add("beta_%d rank %d" % (r, p - r), b.rank() == p - r)
        res.add("beta_%d o alpha_%d = 0" % (r, r), not linalg.matmul(a.matrix, b.matrix, p).any())
        res.add("alpha_%d, beta_%d equivariant" % (r, r), a.intertwines(elements) and b.intertwines(elements))
    for r in range(p):
        for s in range(p):
            seq = build_sequence(r, s, sp)
            ri, rp, rpp = seq.iota.rank(), seq.pi.rank(), seq.pi_prime.rank()
            comp1 = not linalg.matmul(seq.iota.matrix, seq.pi.matrix, p).any()
            comp2 = not linalg.matmul(seq.pi.matrix, seq.pi_prime.matrix, p).any()
            exact = (
                ri == seq.E.dim
                and comp1
                and seq.I.dim - rp == ri
                and comp2
                and seq.U.dim - rpp == rp
                and rpp == seq.V.dim
            )
            tag = "(r,s)=(%d,%d)" % (r, s)
            res.add("0->E->I->U->V->0 exact %s" % tag, exact, "ranks iota=%d pi=%d pi'=%d" % (ri, rp, rpp))
            want = (p + 1) ** 2 - (r + 1) * (s + 1)
            res.add("dim Im(pi) %s" % tag, rp == want, "%d vs %d" % (rp, want))
            res.add(
                "dim I = dim E + dim W %s" % tag,
                seq.I.dim == seq.E.dim + seq.W.dim and seq.W.dim == seq.U.dim - seq.V.dim,
                "dim W=%d" % seq.W.dim,
            )
            eq = all(m.intertwines(elements) for m in (seq.iota, seq.pi, seq.pi_prime))
            res.add("iota, pi, pi' equivariant %s" % tag, eq)
    # grading of the full function module
    full = build_I_full(p, sp.tau1)
    projs = grading_projections(p)
    total = sum(projs) % p
    res.add("grading projections sum to identity", np.array_equal(total, np.eye(full.dim, dtype=np.int64)))
    ok_idem = all(np.array_equal(linalg.matmul(Q, Q, p), Q) for Q in projs)
    ok_eq = all(np.array_equal(linalg.matmul(Q, full.act(g), p), linalg.matmul(full.act(g), Q, p)) for Q in projs for g in elements[:10])
    res.add("grading projections idempotent and equivariant", ok_idem and ok_eq)
    ok_img = True
    for n, Q in enumerate(projs):
        inc = graded_piece_inclusion(n, p)
        ok_img &= linalg.rank(Q, p) == p + 1 and linalg.rank(np.vstack([inc, Q]), p) == p + 1
        In = build_I(n, p, sp.tau1)
        ok_img &= all(np.array_equal(linalg.matmul(In.act(g), inc, p), linalg.matmul(inc, full.act(g), p)) for g in elements[:10])
    res.add("degree-n parts are the I_n", ok_img)
    return res


# --- pairings --------------------------------------------------------------------------


def suite_pairings(d: int, ell: int, seed: int = DEFAULT_SEED, n_random: int = 50) -> SuiteResult:
    F = make_field(d)
    sp = split_prime(F, ell)
    p = ell
    rng = np.random.default_rng(seed)
    elements = _sl2_samples(F, n_random, rng)
    res = SuiteResult("pairings")
    for r in range(p):
        G = pairing_E(r, p)
        for tag, tau in (("tau1", sp.tau1), ("tau2", sp.tau2)):
            E = build_E(r, p, tau)
            inv = all(pairing_invariant(G, E.act(g), E.act(g), p) for g in elements)
            res.add("E_%d pairing invariant (%s)" % (r, tag), inv)
        res.add("E_%d pairing perfect" % r, linalg.rank(G, p) == r + 1)
        GI = pairing_I(r, p)
        res.add("I_%d x I_%d pairing is -Id" % (r, p - 1 - r), np.array_equal(GI, (-np.eye(p + 1, dtype=np.int64)) % p))
        A, B = build_I(r, p, sp.tau1), build_I(p - 1 - r, p, sp.tau1)
        inv = all(pairing_invariant(GI, A.act(g), B.act(g), p) for g in elements)
        res.add("I_%d x I_%d pairing invariant" % (r, p - 1 - r), inv)
        res.add("I_%d pairing perfect" % r, linalg.rank(GI, p) == p + 1)
        # the pairing is the literal sum over nonzero vectors
        direct = np.zeros((p + 1, p + 1), dtype=np.int64)
        inc_a, inc_b = graded_piece_inclusion(r, p), graded_piece_inclusion(p - 1 - r, p)
        direct = linalg.matmul(inc_a, inc_b.T, p)
        res.add("I_%d pairing equals sum over nonzero vectors" % r, np.array_equal(direct, GI))
    return res


# --- invariants ---------------------------------------------------------------------------


def expected_h0(kind: str, r: int, s: int, ell: int) -> int:
    top = ell - 1
    if kind == "E":
        return int(r == 0 and s == 0)
    if kind == "I":
        return int(r % top == 0 and s % top == 0)
    corners = {(top, top): 2, (0, top): 1, (top, 0): 1}
    if kind == "U":
        return corners.get((r, s), 0)
    if kind == "W":
        return int((r, s) in corners)
    raise ValueError(kind)


def h0_tables(d: int, ell: int) -> dict[str, list[list[int]]]:
    F = make_field(d)
    sp = split_prime(F, ell)
    gens = builtin_presentation(F).generators
    tables = {k: [[0] * ell for _ in range(ell)] for k in "EIUW"}
    for r in range(ell):
        for s in range(ell):
            seq = build_sequence(r, s, sp)
            for k, M in (("E", seq.E), ("I", seq.I), ("U", seq.U), ("W", seq.W)):
                tables[k][r][s] = int(h0(M, gens).shape[0])
    return tables


def suite_invariants(d: int, ell: int, seed: int = DEFAULT_SEED, full_tensor: bool | None = None) -> SuiteResult:
    F = make_field(d)
    sp = split_prime(F, ell)
    p = ell
    P = builtin_presentation(F)
    rng = np.random.default_rng(seed)
    res = SuiteResult("invariants")
    tables = h0_tables(d, ell)
    res.tables = {"H0_%s" % k: v for k, v in tables.items()}
    for k in "EIUW":
        bad = [
            (r, s, tables[k][r][s], expected_h0(k, r, s, p))
            for r in range(p)
            for s in range(p)
            if tables[k][r][s] != expected_h0(k, r, s, p)
        ]
        res.add("H0 table %s" % k, not bad, "mismatches (r,s,got,want): %s" % bad if bad else "")
    minus = Mat2.from_ints(F, -1, 0, 0, -1)
    ok = True
    for r in range(p):
        for s in range(p):
            A = E_weight(r, s, 0, 0, sp).act(minus)
            ok &= np.array_equal(A, ((-1) ** (r + s) * np.eye((r + 1) * (s + 1), dtype=np.int64)) % p)
    res.add("-I acts on E_{r,s} by (-1)^(r+s)", ok)
    # Ind(Gamma^0(lambda), chi_1^k) = I_k, as Delta-modules
    elements = P.generators + random_delta_elements(F, 6, rng, coprime_to=ell)
    T = coset_table(CongruenceSubgroup("G0T", sp.lam), P)
    for k in range(p - 1):
        Ind = build_induced(T, build_char_module(k, 0, sp))
        X = find_isomorphism(Ind, build_I(k, p, sp.tau1), elements, rng)
        res.add("Ind(Gamma^0(lambda), chi_1^%d) = I_%d" % (k, k), X is not None)
    # Ind(Gamma^0(ell), chi(r,s)) = I_r (x) I_s
    Tl = coset_table(CongruenceSubgroup("G0T", F(ell, 0)), P)
    if full_tensor is None:
        full_tensor = p <= 3
    pairs = [(r, s) for r in range(p - 1) for s in range(p - 1)]
    if not full_tensor:
        pairs = [pairs[0], pairs[len(pairs) // 2], pairs[-1]]
    for r, s in pairs:
        Ind = build_induced(Tl, build_char_module(r, s, sp))
        IrIs = tensor(build_I(r, p, sp.tau1), build_I(s, p, sp.tau2))
        X = find_isomorphism(Ind, IrIs, elements[: len(P.generators) + 2], rng)
        res.add("Ind(Gamma^0(ell), chi(%d,%d)) = I_%d (x) I_%d" % (r, s, r, s), X is not None)
    return res


def suite_injectivity(d: int, ell: int) -> SuiteResult:
    """H^1(G, E_{r,s}) -> H^1(G, I_{r,s}) has full rank for every (r,s)."""
    F = make_field(d)
    sp = split_prime(F, ell)
    P = builtin_presentation(F)
    res = SuiteResult("injectivity")
    for r in range(ell):
        for s in range(ell):
            seq = build_sequence(r, s, sp)
            HE, HI = h1(P, seq.E), h1(P, seq.I)
            # 0 -> H0(E) -> H0(I) -> H0(W) -> H1(E) -> H1(I): with injectivity the H0 terms are exact
            d0 = [h0(M, P.generators).shape[0] for M in (seq.E, seq.I, seq.W)]
            res.add("(r,s)=(%d,%d) H0 terms of the long exact sequence" % (r, s), d0[0] - d0[1] + d0[2] == 0, "dims %s" % d0)
            if HE.dim == 0:
                res.add("(r,s)=(%d,%d)" % (r, s), True, "H1(E)=0")
                continue
            m = P.ngens
            big = np.kron(np.eye(m, dtype=np.int64), seq.iota.matrix)
            img = HI.project(linalg.matmul(HE.basis, big, ell))
            rk = linalg.rank(img, ell)
            res.add("(r,s)=(%d,%d)" % (r, s), rk == HE.dim, "rank %d of %d" % (rk, HE.dim))
    return res


# --- Shapiro -----------------------------------------------------------------------------


def shapiro_levels(F: FieldData, ell: int, max_norm: int = 13) -> list[CongruenceSubgroup]:
    out = []
    for q in enumerate_primes(F, max_norm, [F(ell, 0)], degree_one=True):
        out.append(CongruenceSubgroup("G0", q))
    return out


def suite_shapiro(d: int, ell: int, seed: int = DEFAULT_SEED, levels=None, prime_bound: int = 20) -> SuiteResult:
    F = make_field(d)
    P = builtin_presentation(F)
    res = SuiteResult("shapiro")
    levels = levels if levels is not None else shapiro_levels(F, ell)
    for L in levels:
        T = coset_table(L, P)
        V = trivial_module(ell)
        H = h1(P, build_induced(T, V))
        sub = reidemeister_schreier(T)
        Hd = h1(sub.presentation, V)
        hom = hom_to_Fp_dim(sub.presentation, ell)
        tag = L.label()
        res.add("dim H1 %s: induced = direct = Hom(ab, F_%d)" % (tag, ell), H.dim == Hd.dim == hom, "%d / %d / %d" % (H.dim, Hd.dim, hom))
        tr = shapiro_transport(H, T, sub, V)
        ok_cocycle = is_cocycle(sub.presentation, V, tr) if tr.size else True
        rk = linalg.rank(Hd.project(tr), ell) if H.dim else 0
        res.add("Shapiro transport is an isomorphism %s" % tag, ok_cocycle and rk == H.dim, "rank %d" % rk)
        for q in hecke_primes(F, ell, L, prime_bound)[:4]:
            A = hecke_matrix(q, H).matrix
            B = hecke_matrix(q, Hd, subgroup=sub).matrix
            ca, cb = linalg.charpoly(A, ell), linalg.charpoly(B, ell)
            # transport intertwines: tr(T c) = T tr(c) in cohomology
            lhs = linalg.matmul(A, Hd.project(tr), ell)
            rhs = linalg.matmul(Hd.project(tr), B, ell)
            res.add(
                "charpoly T_%s agrees on %s" % (format_quadint(q), tag),
                ca == cb and np.array_equal(lhs, rhs),
                "%s vs %s" % (ca, cb),
            )
    return res


# --- Hecke structure -----------------------------------------------------------------------


def suite_hecke(d: int, ell: int, seed: int = DEFAULT_SEED, n_words: int = 1000) -> SuiteResult:
    F = make_field(d)
    sp = split_prime(F, ell)
    P = builtin_presentation(F)
    rng = np.random.default_rng(seed)
    res = SuiteResult("hecke")
    # word problem round trip
    samples = random_delta_elements(F, n_words, rng, sl2_only=True)
    ok = all(evaluate_word(word_decompose(m, P), P) == m for m in samples)
    res.add("word_decompose round trip (%d samples)" % n_words, ok)
    # coset tables
    for L in shapiro_levels(F, ell, 11)[:2] + [CongruenceSubgroup("G1", shapiro_levels(F, ell, 11)[0].modulus)]:
        T = coset_table(L, P)
        sound = all(L.contains(T.reps[T.gen_perm[g][i]].inverse() * P.generators[g] * T.reps[i]) for g in range(P.ngens) for i in range(len(T)))
        bij = all(sorted(T.gen_perm[g]) == list(range(len(T))) for g in range(P.ngens))
        comp = all(L.contains(T.reps[T.index_of(m)].inverse() * m) for m in samples[:100])
        res.add("coset table %s sound, bijective, complete" % L.label(), sound and bij and comp, "index %d" % len(T))
    # spaces to test on
    spaces = []
    for w in ("E:0,0,0,0", "E:1,1,0,0", "E:2,0,0,0", "E:%d,%d,0,0" % (ell - 1, ell - 1)):
        R = compute_space(F, sp, None, w, [])
        if R.space.dim:
            spaces.append((w, R.space))
    L = shapiro_levels(F, ell, 11)[0]
    T = coset_table(L, P)
    spaces.append(("triv@" + L.label(), h1(P, build_induced(T, trivial_module(ell)))))
    primes = hecke_primes(F, ell, L, 20)[:4]
    for w, H in spaces:
        # cocycle evaluation: c(I) = 0, c(g^-1 g) = 0, two words give the same value
        C = H.basis
        I = Mat2.identity(F)
        ok = not cocycle_eval(H, C, I).any()
        for idx, m in enumerate(samples[:30]):
            w1 = word_decompose(m, P)
            z = P.minus_identity or []
            w2 = list(w1) + list(z) + list(z)  # m * (-I)^2, a different word for m
            w3 = [-k for k in reversed(w1)] + list(w1)
            ok &= np.array_equal(cocycle_eval(H, C, w1), cocycle_eval(H, C, w2))
            ok &= not cocycle_eval(H, C, w3).any()
            # rule c(gh) = c(g) act(h) + c(h)
            h = samples[idx + 30]
            lhs = cocycle_eval(H, C, m * h)
            rhs = (linalg.matmul(cocycle_eval(H, C, m), H.module.act(h), ell) + cocycle_eval(H, C, h)) % ell
            ok &= np.array_equal(lhs, rhs)
        res.add("cocycle evaluation well defined on %s" % w, ok)
        # round trip: project(basis) = identity, coboundaries project to zero
        ok = np.array_equal(H.project(C), np.eye(H.dim, dtype=np.int64))
        v = rng.integers(0, ell, size=(3, H.module.dim))
        cob = linalg.matmul(v, coboundary_matrix(P, H.module), ell)
        ok &= not H.project(cob).any()
        res.add("cocycle projection round trip on %s" % w, ok)
        ops = [hecke_matrix(q, H, check_cocycle=True) for q in primes]
        res.add("Hecke operators commute on %s" % w, commute([o.matrix for o in ops], ell), "primes %s" % [o.label for o in ops])
        # rep-set independence: right-multiply reps by random group elements
        ok = True
        for q, op in zip(primes[:2], ops[:2]):
            reps = hecke_reps(q)
            twisted = [g * samples[int(rng.integers(len(samples)))] for g in reps]
            alt = hecke_matrix(q, H, reps=twisted).matrix
            ok &= np.array_equal(alt, op.matrix)
        res.add("Hecke matrix independent of representatives on %s" % w, ok)
    # trivial-module count: T_alpha acts on H^0 by N(alpha)+1
    M = trivial_module(ell)
    ok = True
    for q in primes:
        total = sum(1 for _ in hecke_reps(q)) % ell
        ok &= total == (q.norm() + 1) % ell
    res.add("T_alpha on H^0(trivial) is N(alpha)+1", ok)
    return res


# --- twist lemma ---------------------------------------------------------------------------


def suite_twist(d: int, ell: int, seed: int = DEFAULT_SEED, prime_bound: int = 20) -> SuiteResult:
    F = make_field(d)
    sp = split_prime(F, ell)
    P = builtin_presentation(F)
    res = SuiteResult("twist")
    primes = hecke_primes(F, ell, None, prime_bound)
    for r, s in [(0, 0), (1, 1), (2, 0), (0, 2), (ell - 1, ell - 1)]:
        if r >= ell or s >= ell or (r + s) % 2:
            continue
        base = h1(P, E_weight(r, s, 0, 0, sp))
        if base.dim == 0:
            continue
        T0 = {q: hecke_matrix(q, base).matrix for q in primes}
        for a in range(ell - 1):
            for b in range(ell - 1):
                tw = h1(P, E_weight(r, s, a, b, sp))
                same_basis = np.array_equal(tw.basis, base.basis)
                ok = same_basis
                for q in primes:
                    M = hecke_matrix(q, tw).matrix
                    ok &= np.array_equal(M, T0[q] * twist_factor(q, a, b, sp) % ell)
                res.add("T on E^{%d,%d}_{%d,%d} = tau1^a tau2^b T on E_{%d,%d}" % (a, b, r, s, r, s), ok)
        # eigensystem twisting is a homomorphism and trivial at (ell-1, ell-1)
        ops = [hecke_matrix(q, base) for q in primes]
        for phi in eigensystems(ops, ell):
            if not phi.resolved:
                continue
            ok = systems_equal(twist_eigensystem(phi, ell - 1, ell - 1, sp), phi)
            ok &= systems_equal(twist_eigensystem(phi, 0, 0, sp), phi)
            for a, b, a2, b2 in [(1, 0, 0, 1), (1, 1, ell - 2, 1)]:
                two = twist_eigensystem(twist_eigensystem(phi, a, b, sp), a2, b2, sp)
                one = twist_eigensystem(phi, (a + a2) % (ell - 1), (b + b2) % (ell - 1), sp)
                ok &= systems_equal(two, one)
            res.add("twist of %s composes additively" % phi.value_strings(), ok)
    return res


# --- the worked example ---------------------------------------------------------------------

PAPER_PHI = {
    "w": 9,
    "1+w": 10,
    "1-w": 10,
    "3+2w": 9,
    "3-2w": 9,
    "1+3w": 0,
    "1-3w": 0,
    "3+4w": 5,
    "3-4w": 5,
}
# char-0 table at level 11, reduced mod 11 (-2 = 9, -1 = 10, -6 = 5)
PAPER_PSI = {"w": -2, "1+w": -1, "1-w": -1, "3+2w": -2, "3-2w": -2, "1+3w": 0, "1-3w": 0, "3+4w": -6, "3-4w": -6}


def elliptic_curve_ap(p: int, coeffs=(0, -1, 1, -10, -20)) -> int:
    """``a_p = p + 1 - #E(F_p)`` by point counting; default curve y^2 + y = x^3 - x^2 - 10x - 20."""
    a1, a2, a3, a4, a6 = coeffs
    count = 1
    for x in range(p):
        rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                count += 1
    return p + 1 - count


def system_from_table(F: FieldData, table: dict, ell: int) -> EigenSystem:
    from .finite_fields import field as gf_field

    primes = tuple(parse_quadint(k, F) for k in table)
    vals = tuple(int(v) % ell for v in table.values())
    return EigenSystem(primes, vals, 1, 1, gf_field(ell, 1), None, {"source": "table"})


def find_system(systems, phi: EigenSystem) -> int | None:
    for i, s in enumerate(systems):
        if systems_equal(phi, s, min_support=len(phi.primes)):
            return i
    return None


def suite_paper_example(d: int = 2, ell: int = 11, seed: int = DEFAULT_SEED, prime_bound: int = 43) -> SuiteResult:
    F = make_field(d)
    sp = split_prime(F, ell)
    res = SuiteResult("paper-example")
    phi = system_from_table(F, PAPER_PHI, ell)
    primes = hecke_primes(F, ell, None, prime_bound)
    top = compute_space(F, sp, None, "E:%d,%d,0,0" % (ell - 1, ell - 1), primes)
    res.tables["level_1_weight_E"] = _space_table(top, primes)
    hit = find_system(top.systems, phi)
    res.add("Phi occurs in H1(SL2(O), E_{%d,%d})" % (ell - 1, ell - 1), hit is not None, _closest(top.systems, phi))
    # the negative check at Gamma_0(lambda), Gamma_0(lambda_bar)
    for lam in (sp.lam, sp.lam_bar):
        L = CongruenceSubgroup("G0", lam)
        R = compute_space(F, sp, L, "triv", hecke_primes(F, ell, L, prime_bound))
        res.tables["Gamma0(%s)" % format_quadint(lam)] = _space_table(R, R.systems[0].primes if R.systems else [])
        res.add("dim H1(Gamma0(%s), F_%d) = 2" % (format_quadint(lam), ell), R.space.dim == 2, "dim %d" % R.space.dim)
        m = match_up_to_twist(phi, R.systems, sp, min_support=len(phi.primes))
        res.add("Phi matches no system of Gamma0(%s) at any twist" % format_quadint(lam), not m, "matches %s" % m)
    L = CongruenceSubgroup("G0", F(ell, 0))
    R11 = compute_space(F, sp, L, "triv", hecke_primes(F, ell, L, prime_bound))
    res.tables["Gamma0(%d)" % ell] = _space_table(R11, R11.systems[0].primes if R11.systems else [])
    psi = system_from_table(F, PAPER_PSI, ell)
    res.add("Psi mod %d occurs in H1(Gamma0(%d), F_%d)" % (ell, ell, ell), find_system(R11.systems, psi) is not None, _closest(R11.systems, psi))
    # independent oracle: a_p of the conductor-11 curve by point counting, at both primes above p
    oracle = {}
    for q in primes:
        oracle[format_quadint(q)] = elliptic_curve_ap(q.norm())
    ec = system_from_table(F, oracle, ell)
    res.tables["base_change_oracle"] = {k: v % ell for k, v in oracle.items()}
    for label, R in (("level 1, E_{%d,%d}" % (ell - 1, ell - 1), top), ("Gamma0(%d)" % ell, R11)):
        res.add("point-count oracle system occurs at %s (%d primes)" % (label, len(primes)), find_system(R.systems, ec) is not None, _closest(R.systems, ec))
    res.tables["phi_table"] = dict(PAPER_PHI)
    return res


def _space_table(R, primes) -> dict:
    rows = [{"values": s.value_strings(), "multiplicity": s.multiplicity, "ext_degree": s.k} for s in R.systems]
    return {"h1_dim": R.space.dim, "primes": [format_quadint(q) for q in primes], "systems": rows}


def _closest(systems, phi: EigenSystem) -> str:
    """Human-readable note on the nearest system (number of agreeing primes)."""
    best, best_agree = None, -1
    keys = [(q.x, q.y) for q in phi.primes]
    want = phi.prime_values()
    for s in systems:
        if not s.resolved or s.k != 1:
            continue
        pv = s.prime_values()
        agree = sum(1 for q in keys if q in pv and pv[q] == want[q])
        if agree > best_agree:
            best, best_agree = s, agree
    if best is None:
        return "no rational systems"
    pv = best.prime_values()
    diff = [
        "%s: table %d, computed %s" % (format_quadint(q), want[(q.x, q.y)], pv.get((q.x, q.y)))
        for q in phi.primes
        if pv.get((q.x, q.y)) != want[(q.x, q.y)]
    ]
    return "closest system agrees at %d/%d primes%s" % (best_agree, len(keys), ("; " + ", ".join(diff)) if diff else "")


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "exactness": suite_exactness,
    "pairings": suite_pairings,
    "invariants": suite_invariants,
    "shapiro": suite_shapiro,
    "twist": suite_twist,
    "hecke": suite_hecke,
    "injectivity": suite_injectivity,
    "paper-example": suite_paper_example,
}
