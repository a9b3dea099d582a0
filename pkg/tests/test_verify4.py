import pytest

from lattes_fsr import verify4 as v4


@pytest.fixture(scope="module")
def plus():
    return v4.solve_coefficients("plus")


def test_coefficients(plus):
    assert abs(plus.A - complex(0.69178, 0.47807)) < 1e-4
    # the quoted B is only rounded to about three places
    assert abs(plus.B - complex(-0.4055, -1.6324)) < 2e-3
    assert abs(2 * plus.A ** 2 - v4.ALPHA) < 1e-12
    assert abs(plus.A ** 2 + 1) > 0.2


def test_bad_branch():
    with pytest.raises(ValueError):
        v4.solve_coefficients("sideways")


def test_evaluate(plus):
    assert abs(v4.evaluate(plus, None) - plus.A) < 1e-12
    assert abs(v4.evaluate(plus, -plus.A) + plus.A) < 1e-9
    assert abs(v4.evaluate(plus, plus.B) + plus.B) < 1e-9
    # z = i is a pole
    assert v4.evaluate(plus, 1j) is None


def test_chordal_distance():
    assert v4.chordal(v4.INF, v4.point(0)) == pytest.approx(1.0)
    assert v4.chordal(v4.point(2), v4.point(2)) == 0


def test_scheme(plus):
    s = v4.mapping_scheme(plus)
    g = s.graph()
    post = {t for _, t, _ in s.arrows}
    crit = {n for n, _, k in s.arrows if k == 2}
    assert len(post) == 4 and not post & crit
    assert v4.scheme_matches(plus)
    assert v4.scheme_matches(v4.solve_coefficients("minus"))
    assert g.number_of_nodes() == 6


def test_perturbed_scheme(plus):
    bad = v4.QuadraticLattesMap(plus.A + 0.01, plus.B, "plus")
    assert not v4.scheme_matches(bad)


def test_milnor():
    assert v4.milnor_equiv(v4.ALPHA)
    assert v4.milnor_equiv(v4.ALPHA.conjugate())
    assert not v4.milnor_equiv(2)


def test_preimages(plus):
    for t in (0.3 + 0.1j, -2j, 5):
        roots = v4.preimages(plus, t)
        assert len(roots) == 2
        assert all(abs(v4.evaluate(plus, z) - t) < 1e-9 for z in roots)


def test_full_table():
    rows = v4.verify_quadratic()
    assert len(rows) == 26
    assert all(r.passed for r in rows), v4.format_table(rows)
    assert max(r.residual for r in rows) < 1e-9
