import numpy as np
import pytest

from bianchi_modl import linalg
from bianchi_modl.group_data import CongruenceSubgroup, builtin_presentation, coset_table
from bianchi_modl.quad_arith import Mat2
from bianchi_modl.rep_modules import (
    E_weight,
    beta_matrix,
    build_char_module,
    build_E,
    build_I,
    build_induced,
    build_sequence,
    build_weight_module,
    graded_piece_inclusion,
    map_alpha,
    map_beta,
    nonzero_points,
    pairing_E,
    pairing_I,
    pairing_invariant,
    parse_weight,
    random_delta_elements,
    tensor,
    trivial_module,
    twist_det,
)


def test_build_E_substitution_example(F2, sp3):
    g = Mat2.from_ints(F2, 1, 1, 0, 1)
    A = build_E(2, 3, sp3.tau1).act(g)
    # X^2 -> X^2 + 2XY + Y^2, XY -> XY + Y^2, Y^2 -> Y^2
    assert A.tolist() == [[1, 2, 1], [0, 1, 1], [0, 0, 1]]


def test_build_E_trivial_cases(F2, sp11, rng):
    I = Mat2.identity(F2)
    for r in range(11):
        assert np.array_equal(build_E(r, 11, sp11.tau1).act(I), np.eye(r + 1, dtype=np.int64))
    for g in random_delta_elements(F2, 10, rng):
        assert build_E(0, 11, sp11.tau1).act(g).tolist() == [[1]]


def test_action_is_homomorphism(F2, sp11, rng):
    M = E_weight(3, 2, 1, 4, sp11)
    els = random_delta_elements(F2, 20, rng, coprime_to=11)
    for g, h in zip(els, els[1:]):
        assert np.array_equal(M.act(g * h), linalg.matmul(M.act(g), M.act(h), 11))


def test_twist_det(F2, sp11, rng):
    M = build_E(3, 11, sp11.tau1)
    assert twist_det(M, 0, sp11.tau1) is M
    for g in random_delta_elements(F2, 10, rng, sl2_only=True):
        assert np.array_equal(twist_det(M, 5, sp11.tau1).act(g), M.act(g))
    pi = F2(1, 1)
    g = Mat2(pi, F2.zero, F2.zero, F2.one)
    assert np.array_equal(twist_det(M, 1, sp11.tau1).act(g), M.act(g) * sp11.tau1(pi) % 11)


def test_tensor_dimensions(F2, sp11, rng):
    assert E_weight(10, 10, 0, 0, sp11).dim == 121
    assert tensor(build_E(2, 11, sp11.tau1), build_E(4, 11, sp11.tau2)).dim == 15
    M = build_E(3, 11, sp11.tau1)
    T = tensor(M, trivial_module(11))
    for g in random_delta_elements(F2, 5, rng):
        assert np.array_equal(T.act(g), M.act(g))


def test_minus_identity_sign(F2, sp11):
    minus = Mat2.from_ints(F2, -1, 0, 0, -1)
    for r, s in [(0, 0), (1, 0), (3, 4), (10, 10)]:
        A = E_weight(r, s, 2, 3, sp11).act(minus)
        assert np.array_equal(A, (-1) ** (r + s) * np.eye((r + 1) * (s + 1), dtype=np.int64) % 11)


def test_build_I_examples(F2, sp3):
    for n in range(2):
        assert build_I(n, 3, sp3.tau1).dim == 4
    assert np.array_equal(build_I(1, 3, sp3.tau1).act(Mat2.identity(F2)), np.eye(4, dtype=np.int64))
    # indicator of the line through (1,0), extended with degree 2: f(2,0) = 2^2 f(1,0) = 1
    inc = graded_piece_inclusion(2, 3)
    pts = nonzero_points(3)
    assert inc[0, pts.index((2, 0))] == 1
    assert inc[0, pts.index((1, 0))] == 1
    # I_k = I_{k + ell - 1}
    assert build_I(2, 3, sp3.tau1).name == build_I(0, 3, sp3.tau1).name


def test_alpha_examples(sp3):
    A = map_alpha(2, 3, sp3.tau1).matrix
    # XY at (1,0),(1,1),(1,2),(0,1)
    assert A[1].tolist() == [0, 1, 2, 0]
    assert map_alpha(0, 3, sp3.tau1).matrix.tolist() == [[1, 1, 1, 1]]
    for r in range(3):
        assert map_alpha(r, 3, sp3.tau1).rank() == r + 1


def test_beta_examples(sp3, sp5):
    # beta_1 of the delta at (1,0) over F_3 is Y
    assert beta_matrix(1, 3)[0].tolist() == [0, 1]
    for sp in (sp3, sp5):
        p = sp.ell
        for r in range(p):
            b = map_beta(r, p, sp.tau1)
            assert b.rank() == p - r
            assert not linalg.matmul(map_alpha(r, p, sp.tau1).matrix, b.matrix, p).any()


def test_sequence_dimensions(sp3, sp5):
    for sp in (sp3, sp5):
        p = sp.ell
        for r in range(p):
            for s in range(p):
                seq = build_sequence(r, s, sp)
                assert seq.U.dim == (p - r) * (p + 1) + (p + 1) * (p - s)
                assert seq.V.dim == (p - r) * (p - s)
                assert seq.W.dim == seq.U.dim - seq.V.dim
                assert seq.I.dim == seq.E.dim + seq.W.dim
    assert build_sequence(1, 1, sp3).W.dim == 12


def test_pairing_examples(F2, sp11, rng):
    assert pairing_E(0, 11).tolist() == [[1]]
    assert np.array_equal(pairing_I(3, 11), 10 * np.eye(12, dtype=np.int64))
    for g in random_delta_elements(F2, 20, rng, sl2_only=True):
        for r in (1, 4, 10):
            A = build_E(r, 11, sp11.tau1).act(g)
            assert pairing_invariant(pairing_E(r, 11), A, A, 11)


def test_char_module(F2, sp11):
    assert build_char_module(0, 0, sp11).act(Mat2.from_ints(F2, 1, 5, 0, 1)).tolist() == [[1]]
    g = Mat2.from_ints(F2, 1, 0, 0, 12)  # d = 12 = 1 mod 11
    for r, s in [(1, 2), (10, 3)]:
        assert build_char_module(r, s, sp11).act(g).tolist() == [[1]]
    g = Mat2.from_ints(F2, 1, 0, 11, 1)
    assert build_char_module(4, 7, sp11).act(g).tolist() == [[1]]
    with pytest.raises(ValueError):
        build_char_module(1, 0, sp11).act(Mat2(F2.one, F2.zero, F2.zero, sp11.lam))


def test_induced_module(F2, sp11, rng):
    P = builtin_presentation(F2)
    T1 = coset_table(CongruenceSubgroup("G0", F2.one), P)
    V = build_E(2, 11, sp11.tau1)
    Ind1 = build_induced(T1, V)
    g = random_delta_elements(F2, 1, rng, coprime_to=11)[0]
    assert np.array_equal(Ind1.act(g), V.act(g))
    T = coset_table(CongruenceSubgroup("G0", F2(3, 1)), P)
    Ind = build_induced(T, trivial_module(11))
    assert Ind.dim == 12
    els = random_delta_elements(F2, 20, rng, sl2_only=True)
    pi = Mat2(F2(1, 1), F2.zero, F2.zero, F2.one)
    for g, h in zip(els, els[1:] + [pi]):
        assert np.array_equal(Ind.act(g * h), linalg.matmul(Ind.act(g), Ind.act(h), 11))


def test_weight_parsing(sp11):
    assert str(parse_weight("E:10,10,0,0")) == "E:10,10,0,0"
    assert str(parse_weight("E:1,2")) == "E:1,2,0,0"
    assert str(parse_weight("W:1,2")) == "W:1,2"
    assert str(parse_weight("char:3,4")) == "char:3,4"
    assert str(parse_weight("triv")) == "triv"
    for bad in ("E:1", "Q:1,2", "I:1,2,3"):
        with pytest.raises(ValueError):
            parse_weight(bad)
    with pytest.raises(ValueError):
        build_weight_module(parse_weight("E:11,0"), sp11)
    assert build_weight_module(parse_weight("I:2,3"), sp11).dim == 144
