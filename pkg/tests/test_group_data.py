import json

import numpy as np
import pytest

from bianchi_modl.cohomology import abelian_invariants, h1, hom_to_Fp_dim
from bianchi_modl.group_data import (
    CongruenceSubgroup,
    PresentationError,
    builtin_presentation,
    coset_table,
    evaluate_word,
    index_formula,
    parse_level,
    presentation_from_dict,
    presentation_to_dict,
    word_decompose,
)
from bianchi_modl.quad_arith import Mat2, elementary, make_field
from bianchi_modl.rep_modules import random_delta_elements, trivial_module

FIELDS = (1, 2, 3, 7, 11)


@pytest.mark.parametrize("d", FIELDS)
def test_shipped_presentation_relators(d):
    P = builtin_presentation(d)
    I = Mat2.identity(P.field)
    for r in P.relators:
        assert evaluate_word(r, P) == I
    assert evaluate_word(P.minus_identity, P) == -I
    F = P.field
    assert P.generators[P.roles["E12_1"]] == Mat2.from_ints(F, 1, 1, 0, 1)
    assert P.generators[P.roles["E12_w"]] == Mat2.from_ints(F, 1, (0, 1), 0, 1)
    assert P.generators[P.roles["S"]] == Mat2.from_ints(F, 0, -1, 1, 0)


def test_bad_relator_rejected():
    data = presentation_to_dict(builtin_presentation(2))
    data["relators"].append([1, 1])
    with pytest.raises(PresentationError):
        presentation_from_dict(data)
    data = json.loads(json.dumps(presentation_to_dict(builtin_presentation(2))))
    assert presentation_from_dict(data).relators == builtin_presentation(2).relators


@pytest.mark.parametrize("d", FIELDS)
def test_word_decompose_round_trip(d, rng):
    P = builtin_presentation(d)
    F = P.field
    assert word_decompose(Mat2.identity(F), P) == []
    for m in random_delta_elements(F, 200, rng, sl2_only=True):
        assert evaluate_word(word_decompose(m, P), P) == m
    # products of 20 random elementary matrices
    for _ in range(20):
        m = Mat2.identity(F)
        for _ in range(20):
            x = F(int(rng.integers(-4, 5)), int(rng.integers(-4, 5)))
            m = m * elementary(F, x, upper=bool(rng.integers(2)))
        assert evaluate_word(word_decompose(m, P), P) == m


def test_word_decompose_example(F2):
    P = builtin_presentation(F2)
    m = elementary(F2, F2(5, 3))
    assert evaluate_word(word_decompose(m, P), P) == m


def test_membership_examples(F2):
    G0_11 = CongruenceSubgroup("G0", F2(11, 0))
    G0_l = CongruenceSubgroup("G0", F2(3, 1))
    low11 = Mat2.from_ints(F2, 1, 0, 11, 1)
    assert G0_11.contains(low11) and G0_l.contains(low11)
    assert not G0_l.contains(Mat2.from_ints(F2, 1, 0, 1, 1))
    assert CongruenceSubgroup("G1", F2(1, 1)).contains(Mat2.identity(F2))
    assert not CongruenceSubgroup("G1", F2(3, 0)).contains(Mat2.from_ints(F2, -1, 0, 0, -1))


def test_parse_level(F2):
    assert parse_level("1", F2).is_full
    assert parse_level("G0:11", F2) == CongruenceSubgroup("G0", F2(11, 0))
    assert parse_level("G1:1+w", F2) == CongruenceSubgroup("G1", F2(1, 1))
    assert parse_level("G0:3+w", F2).label() == "G0:3+w"
    with pytest.raises(ValueError):
        parse_level("X:3", F2)


@pytest.mark.parametrize(
    "level,count",
    [("1", 1), ("G0:3+w", 12), ("G0:11", 144), ("G1:1+w", 8), ("G0:w", 3), ("P:2", 48)],
)
def test_coset_counts(F2, level, count):
    H = parse_level(level, F2)
    T = coset_table(H, builtin_presentation(F2))
    assert len(T) == count
    if index_formula(H) is not None:
        assert index_formula(H) == count


def test_coset_table_consistency(F2, rng):
    P = builtin_presentation(F2)
    H = parse_level("G0:3+w", F2)
    T = coset_table(H, P)
    for g in range(P.ngens):
        assert sorted(T.gen_perm[g]) == list(range(len(T)))
        for i in range(len(T)):
            h = T.gen_h[g][i]
            assert H.contains(h)
            assert T.reps[T.gen_perm[g][i]] * h == P.generators[g] * T.reps[i]
    for m in random_delta_elements(F2, 50, rng, coprime_to=11):
        for i in range(len(T)):
            j, beta = T.rewrite(m, i)
            assert T.reps[j] * beta == m * T.reps[i]


@pytest.mark.parametrize("d", FIELDS)
def test_abelianization_matches_h1_trivial(d):
    P = builtin_presentation(d)
    inv = abelian_invariants(P)
    for ell in (2, 3, 5, 7):
        snf_dim = sum(1 for e in inv if e == 0 or e % ell == 0)
        assert snf_dim == hom_to_Fp_dim(P, ell)
        if ell > 2:
            assert h1(P, trivial_module(ell)).dim == snf_dim
