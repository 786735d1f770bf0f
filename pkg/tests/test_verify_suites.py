import pytest

from bianchi_modl.verify import SUITES, suite_injectivity, suite_invariants


@pytest.mark.parametrize("d,ell", [(2, 3), (1, 5)])
def test_invariants_suite(d, ell):
    res = suite_invariants(d, ell)
    assert res.passed, res.failures()
    assert set(res.tables) == {"H0_E", "H0_I", "H0_U", "H0_W"}


def test_injectivity_suite():
    res = suite_injectivity(2, 3)
    assert res.passed, res.failures()
    assert len(res.checks) == 18


def test_paper_example_suite_content():
    res = SUITES["paper-example"](2, 11)
    failed = {c.name for c in res.failures()}
    # only the two checks of the literal nine-prime table fail, at 3+-4w
    assert failed == {"Phi occurs in H1(SL2(O), E_{10,10})", "Psi mod 11 occurs in H1(Gamma0(11), F_11)"}
    for c in res.failures():
        assert "3+4w: table 5, computed 3" in c.detail
    assert res.tables["phi_table"] == {"w": 9, "1+w": 10, "1-w": 10, "3+2w": 9, "3-2w": 9, "1+3w": 0, "1-3w": 0, "3+4w": 5, "3-4w": 5}
