import itertools

import pytest

from bianchi_modl.quad_arith import (
    Mat2,
    QuadInt,
    SplittingError,
    UnsupportedFieldError,
    canonical_associate,
    double_coset_member,
    enumerate_primes,
    euclid_divmod,
    format_quadint,
    make_field,
    parse_quadint,
    quad_gcd,
    split_prime,
)

FIELDS = (1, 2, 3, 7, 11)


def test_ring_structure():
    F2, F3, F1 = make_field(2), make_field(3), make_field(1)
    assert F2.w * F2.w == F2(-2, 0)
    assert len(F2.units) == 2 and len(F1.units) == 4 and len(F3.units) == 6
    assert F1.w * F1.w == F1(-1, 0)
    w = F3.w
    assert w * w == w - 1  # w = (1 + sqrt(-3)) / 2
    for u in F3.units:
        assert u.norm() == 1


def test_unsupported_field():
    with pytest.raises(UnsupportedFieldError):
        make_field(5)
    with pytest.raises(UnsupportedFieldError):
        make_field(19)


@pytest.mark.parametrize("d", FIELDS)
def test_euclid_divmod_norm_inequality(d):
    F = make_field(d)
    rng = range(-7, 8)
    for ax, ay, bx, by in itertools.product(rng, rng, (-3, 1, 2, 5), (-2, 0, 1, 3)):
        a, b = F(ax, ay), F(bx, by)
        if not b:
            continue
        q, r = euclid_divmod(a, b)
        assert a == q * b + r
        assert r.norm() < b.norm()


def test_euclid_examples(F2):
    q, r = euclid_divmod(F2(5, 0), F2(2, 0))
    assert q in (F2(2, 0), F2(3, 0)) and r.norm() < 4
    assert euclid_divmod(F2.w, F2.one) == (F2.w, F2.zero)
    a, b = F2(3, 1), F2.w
    q, r = euclid_divmod(a, b)
    assert r.norm() < 2 and a == q * b + r
    # oracle: some q in a box achieves N(a - q b) < N(b)
    best = min((a - F2(x, y) * b).norm() for x in range(-5, 6) for y in range(-5, 6))
    assert r.norm() <= b.norm() - 1 and best < b.norm()


def test_gcd_and_associates(F2):
    g = quad_gcd(F2(11, 0), F2(8, -1))
    assert g.norm() == 11
    for q in enumerate_primes(F2, 50):
        assert canonical_associate(-q) == q


def test_parse_format_roundtrip(F2):
    for text in ("w", "1+w", "1-w", "3+2w", "-3-4w", "0", "7", "-w"):
        assert format_quadint(parse_quadint(text, F2)) == text
    assert parse_quadint("3+ω", F2) == F2(3, 1)
    assert parse_quadint("2i", make_field(1)) == make_field(1)(0, 2)


def test_split_prime_examples(F2):
    sp = split_prime(F2, 11)
    assert {sp.lam, sp.lam_bar} == {F2(3, 1), F2(3, -1)}
    assert sp.lam == F2(3, 1)
    assert (sp.tau1(F2.w), sp.tau2(F2.w)) == (8, 3)
    assert sp.tau1(sp.lam) == 0 and sp.tau2(sp.lam_bar) == 0
    with pytest.raises(SplittingError):
        split_prime(F2, 5)
    with pytest.raises(SplittingError):
        split_prime(F2, 2)
    # tau is a ring homomorphism
    for x, y, u, v in itertools.product(range(-3, 4), repeat=4):
        a, b = F2(x, y), F2(u, v)
        assert sp.tau1(a * b) == sp.tau1(a) * sp.tau1(b) % 11
        assert sp.tau2(a + b) == (sp.tau2(a) + sp.tau2(b)) % 11


def test_split_prime_other_fields():
    sp = split_prime(make_field(1), 5)
    assert sp.lam.norm() == 5 and sp.tau1(sp.lam) == 0
    sp = split_prime(make_field(2), 3)
    assert {format_quadint(sp.lam), format_quadint(sp.lam_bar)} == {"1+w", "1-w"}


def test_double_coset_member(F2):
    pi = F2(1, 1)
    assert double_coset_member(Mat2(pi, F2.zero, F2.zero, F2.one), pi)
    assert not double_coset_member(Mat2(pi, F2.zero, F2.zero, pi), pi)
    assert double_coset_member(Mat2(F2.one, F2(3, 0), F2.zero, pi), pi)


def test_enumerate_primes_examples(F2, F1):
    assert [format_quadint(q) for q in enumerate_primes(F2, 3)] == ["w", "1+w", "1-w"]
    labels = [format_quadint(q) for q in enumerate_primes(F2, 50, [F2(11, 0)])]
    assert "3+w" not in labels and "3-w" not in labels
    (q,) = enumerate_primes(F1, 2)  # the ramified prime above 2; 1-i and 1+i are associates
    assert q.norm() == 2 and canonical_associate(F1(1, 1)) == q


def test_paper_prime_order(F2):
    qs = enumerate_primes(F2, 41, [F2(11, 0)], degree_one=True)
    assert [format_quadint(q) for q in qs] == ["w", "1+w", "1-w", "3+2w", "3-2w", "1+3w", "1-3w", "3+4w", "3-4w"]


def test_inert_primes_excluded_when_degree_one(F2):
    # 5 is inert in Q(sqrt(-2)); norm 25
    assert F2(5, 0) in enumerate_primes(F2, 30)
    assert F2(5, 0) not in enumerate_primes(F2, 30, degree_one=True)


def test_mat2_algebra(F2):
    g = Mat2.from_ints(F2, (1, 1), 2, (0, 1), (1, -1))
    assert g.det() == F2(1, 1) * F2(1, -1) - F2(0, 2)
    assert g * g.iota() == Mat2(g.det(), F2.zero, F2.zero, g.det())
    h = Mat2.from_ints(F2, 1, (0, 1), 0, 1)
    assert h.inverse() * h == Mat2.identity(F2)


from hypothesis import given, settings, strategies as st  # noqa: E402

small = st.integers(-10**6, 10**6)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(FIELDS), small, small, small, small)
def test_euclid_property(d, ax, ay, bx, by):
    F = make_field(d)
    a, b = F(ax, ay), F(bx, by)
    if not b:
        return
    q, r = euclid_divmod(a, b)
    assert a == q * b + r and r.norm() < b.norm()
    g = quad_gcd(a, b)
    if g:
        assert g.divides(a) and g.divides(b)
