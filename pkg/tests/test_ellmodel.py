from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from oracles import pole_count
from relulrich.ellmodel import (SingularCurve, WeierstrassCurve, basis_generates, decompose_ell,
                                ell_multiply, elliptic_report, multmap_image_ell, pole_basis)
from relulrich.gradedgeom import NotInImage

SMOOTH = [(-1, 1), (0, 1), (1, 0), (-2, 3), (Fraction(1, 2), Fraction(-3, 4)), (5, -7)]
X, Y, ONE = (1, 0), (0, 1), (0, 0)


def test_singular_rejected():
    with pytest.raises(SingularCurve):
        WeierstrassCurve(-3, 2)
    with pytest.raises(SingularCurve):
        WeierstrassCurve(0, 0)


def test_pole_basis_examples():
    c = WeierstrassCurve(-1, 1)
    assert pole_basis(c, 2) == [ONE, X]
    assert set(pole_basis(c, 4)) == {ONE, X, (2, 0), Y}
    assert pole_basis(c, 0) == [ONE]


@pytest.mark.parametrize("k", range(0, 12))
def test_riemann_roch_counts(k):
    assert len(pole_basis(WeierstrassCurve(-1, 1), k)) == pole_count(k)


def test_multiply_examples():
    c = WeierstrassCurve(-1, 1)
    assert ell_multiply(c, {Y: 1}, {Y: 1}) == {(3, 0): 1, X: -1, ONE: 1}
    assert ell_multiply(c, {X: 1}, {X: 1}) == {(2, 0): 1}
    assert ell_multiply(c, {X: 1, Y: 1}, {Y: 1}) == {(1, 1): 1, (3, 0): 1, X: -1, ONE: 1}


@given(st.fractions(-6, 6, max_denominator=4), st.fractions(-6, 6, max_denominator=4))
def test_image_codimension_one_for_every_smooth_curve(a, b):
    assume(4 * a ** 3 + 27 * b ** 2 != 0)
    c = WeierstrassCurve(a, b)
    img = multmap_image_ell(c, 2, 2)
    assert (img.image_dim, img.target_dim) == (3, 4)
    assert img.cokernel == [Y]
    assert basis_generates(c, 2)


@pytest.mark.parametrize("A, B", SMOOTH)
def test_y_is_not_in_image(A, B):
    c = WeierstrassCurve(A, B)
    with pytest.raises(NotInImage):
        decompose_ell(c, {Y: 1})
    with pytest.raises(NotInImage):
        decompose_ell(c, {Y: 2, (2, 0): 1, ONE: 5})


@pytest.mark.parametrize("A, B", SMOOTH)
def test_x_sections_decompose(A, B):
    c = WeierstrassCurve(A, B)
    s = {(2, 0): 3, X: -1, ONE: 2}
    terms = decompose_ell(c, s)
    total = {}
    for f, g in terms:
        for mono, v in ell_multiply(c, f, g).items():
            total[mono] = total.get(mono, 0) + v
    assert {m: v for m, v in total.items() if v} == s


def test_other_folds():
    c = WeierstrassCurve(-1, 1)
    img = multmap_image_ell(c, 3, 2)
    assert (img.image_dim, img.target_dim) == (6, 6)
    img = multmap_image_ell(c, 2, 1)
    assert (img.image_dim, img.target_dim) == (2, 2)


def test_report():
    rep = elliptic_report(WeierstrassCurve(-1, 1))
    assert rep["pole_basis_2"] == ["1", "x"]
    assert rep["image_dim"] == 3 and rep["target_dim"] == 4
    assert rep["cokernel"] == ["y"]
    assert rep["branch_y_verdict"] == "NotInImage"
