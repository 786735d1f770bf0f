import numpy as np
import pytest

from bianchi_modl import linalg
from bianchi_modl.cohomology import h0, h1
from bianchi_modl.group_data import CongruenceSubgroup, builtin_presentation
from bianchi_modl.hecke import (
    EigenSystem,
    HeckeError,
    HeckeOperator,
    compute_space,
    eigensystems,
    hecke_matrix,
    hecke_primes,
    hecke_reps,
    match_up_to_twist,
    systems_equal,
    twist_eigensystem,
    weight_reduction_check,
)
from bianchi_modl.quad_arith import double_coset_member, format_quadint
from bianchi_modl.rep_modules import E_weight, random_delta_elements, trivial_module


def _op(F, x, M):
    return HeckeOperator(F(x, 0), [], np.asarray(M, dtype=np.int64))


def test_rep_counts(F2):
    assert len(hecke_reps(F2.w)) == 3
    assert len(hecke_reps(F2(1, 1))) == 4
    for q in hecke_primes(F2, 11, None, 43):
        reps = hecke_reps(q)
        assert len(reps) == q.norm() + 1
        assert all(double_coset_member(g, q) for g in reps)


def test_reps_refuse_level_sharing_factor(F2):
    with pytest.raises(HeckeError):
        hecke_reps(F2(3, 1), CongruenceSubgroup("G0", F2(11, 0)))
    with pytest.raises(HeckeError):
        hecke_reps(F2.one)


def test_hecke_on_h0_trivial(F2):
    # every gamma_i^iota acts trivially, so T acts on invariants by the number of cosets
    for q in hecke_primes(F2, 11, None, 30):
        assert len(hecke_reps(q)) % 11 == (q.norm() + 1) % 11


def test_identity_operator_single_system(F2):
    systems = eigensystems([_op(F2, 2, np.eye(3))], 11)
    assert len(systems) == 1
    assert systems[0].value_strings() == ["1"] and systems[0].multiplicity == 3


def test_extension_field_system(F2):
    # x^2 + 1 is irreducible over F_3
    J = [[0, 2], [1, 0]]
    (s,) = eigensystems([_op(F2, 2, J)], 3)
    assert s.k == 2 and s.multiplicity == 1 and s.resolved
    G = s.gf
    v = s.values[0]
    assert G.add(G.mul(v, v), 1) == 0
    (u,) = eigensystems([_op(F2, 2, J)], 3, max_ext_degree=1)
    assert not u.resolved and u.k == 2


def test_joint_splitting(F2):
    A = np.diag([1, 1, 2, 2])
    B = np.diag([3, 4, 3, 4])
    systems = eigensystems([_op(F2, 2, A), _op(F2, 5, B)], 7)
    assert sorted(tuple(s.value_strings()) for s in systems) == [("1", "3"), ("1", "4"), ("2", "3"), ("2", "4")]
    with pytest.raises(HeckeError):
        eigensystems([_op(F2, 2, [[1, 1], [0, 1]]), _op(F2, 5, [[1, 0], [1, 1]])], 7)


def test_twist_identities(F2, sp11):
    R = compute_space(F2, sp11, None, "E:10,10,0,0", hecke_primes(F2, 11, None, 41))
    for phi in R.systems:
        assert systems_equal(twist_eigensystem(phi, 0, 0, sp11), phi)
        assert systems_equal(twist_eigensystem(phi, 10, 10, sp11), phi)
        assert (R.systems.index(phi), 0, 0) in match_up_to_twist(phi, R.systems, sp11)


def test_paper_class_eigenvalue_at_w(F2, sp11):
    R = compute_space(F2, sp11, None, "E:10,10,0,0", [F2.w])
    assert "9" in [s.value_strings()[0] for s in R.systems]


def test_commutativity_and_cocycle_preservation(F2, sp11):
    P = builtin_presentation(F2)
    H = h1(P, E_weight(10, 10, 0, 0, sp11))
    ops = [hecke_matrix(q, H, check_cocycle=True).matrix for q in hecke_primes(F2, 11, None, 30)]
    for A in ops:
        for B in ops:
            assert np.array_equal(linalg.matmul(A, B, 11), linalg.matmul(B, A, 11))


def test_rep_set_independence(F2, sp11, rng):
    P = builtin_presentation(F2)
    H = h1(P, E_weight(10, 10, 0, 0, sp11))
    els = random_delta_elements(F2, 20, rng, sl2_only=True)
    for q in hecke_primes(F2, 11, None, 17):
        reps = [g * els[int(rng.integers(len(els)))] for g in hecke_reps(q)]
        assert np.array_equal(hecke_matrix(q, H, reps=reps).matrix, hecke_matrix(q, H).matrix)


def test_weight_reduction_small(F2, sp3):
    rep = weight_reduction_check(F2, sp3, prime_norm_bound=20, weights=[(0, 0, 0, 0), (2, 2, 1, 0), (1, 1, 0, 1)])
    assert rep.passed
    assert rep.as_dict()["weights"][0]["weight"] == "E:0,0,0,0"


def test_associate_dependence(F1, sp5):
    # T at u*alpha differs from T at alpha by a unit scalar on each system;
    # on E_{2,0} over Z[i] that scalar is nontrivial, on E_{1,1} it is 1.
    P = builtin_presentation(F1)
    qs = hecke_primes(F1, 5, None, 20)
    for weight, trivial in (((2, 0), False), ((1, 1), True)):
        H = h1(P, E_weight(*weight, 0, 0, sp5))
        for u in F1.units:
            ops = [hecke_matrix(q, H) for q in qs] + [hecke_matrix(u * q, H) for q in qs]
            for s in eigensystems(ops, 5):
                base, twisted = s.values[: len(qs)], s.values[len(qs):]
                ratios = {t * pow(b, -1, 5) % 5 for b, t in zip(base, twisted) if b}
                assert len(ratios) <= 1
                if trivial or u == F1.one:
                    assert ratios <= {1}
        if not trivial:
            H2 = h1(P, E_weight(2, 0, 0, 0, sp5))
            assert not np.array_equal(hecke_matrix(-qs[0], H2), hecke_matrix(qs[0], H2))
