from itertools import product

import pytest
from sympy import Symbol

from algebra.exact import ONE, Tensor, wedge
from algebra.lie import cobracket_equal, drinfeld_double, is_homomorphism
from algebra.twists import compose_twists, double_twist_iso, pick_free_parameters, twist, twist_defect
from conftest import problem
from errors import AxiomError


def test_any_wedge_twists_an_abelian_algebra():
    b = problem("abelian2").bialgebra
    f = wedge(b.space, 0, 1)
    assert twist_defect(b, f).is_zero()
    assert all(d.is_zero() for d in twist(b, f).cobracket)


def test_borel_wedge_twists_zero_cobracket_sl2():
    b = problem("sl2-zero").bialgebra
    assert twist_defect(b, wedge(b.space, 0, 2)).is_zero()
    assert not twist_defect(b, wedge(b.space, 0, 1)).is_zero()


def test_twist_must_be_antisymmetric():
    b = problem("abelian2").bialgebra
    with pytest.raises(AxiomError):
        twist_defect(b, Tensor((b.space, b.space), {(0, 1): ONE}))


def test_twisting_adds_the_coboundary(sl2_z2):
    b = sl2_z2.bialgebra
    f_s = sl2_z2.gamma.twists[1]
    twisted = twist(b, f_s)
    # 𝔞_f for f = θ(r) − r is the coboundary bialgebra of θ(r)
    theta_r = sl2_z2.action.wedge2(1, sl2_z2.qt.r)
    expected = [-sl2_z2.algebra.ad(i, theta_r) for i in range(3)]
    assert all(x == y for x, y in zip(twisted.cobracket, expected))


def test_composed_twists_add_up():
    b = problem("abelian2").bialgebra
    f = wedge(b.space, 0, 1)
    pair = compose_twists(b, f, -f)
    assert pair.total.is_zero()
    assert pair.certificate["twisting_associative"]


def test_composition_rejects_a_non_twist():
    b = problem("sl2-zero").bialgebra
    with pytest.raises(AxiomError):
        compose_twists(b, wedge(b.space, 0, 1), wedge(b.space, 0, 2))


def test_double_isomorphism_on_abelian_algebra():
    b = problem("abelian2").bialgebra
    f = wedge(b.space, 0, 1)
    matrix = double_twist_iso(b, f)
    assert matrix[:2] == [{0: ONE}, {1: ONE}]
    assert matrix[2] == {2: ONE, 1: -ONE}
    assert matrix[3] == {3: ONE, 0: ONE}


def test_double_isomorphism_intertwines_brackets(sl2_z2):
    b = sl2_z2.bialgebra
    f = sl2_z2.gamma.twists[1]
    matrix = double_twist_iso(b, f)
    assert len(matrix) == 6
    assert is_homomorphism(drinfeld_double(b).algebra, drinfeld_double(twist(b, f)).algebra, matrix)


def test_borel_wedge_twists_standard_sl2(sl2):
    assert twist_defect(sl2.bialgebra, wedge(sl2.algebra.space, 0, 2)).is_zero()


def test_rescaled_borel_twists_compose_on_sl2(sl2):
    b = sl2.bialgebra
    f = wedge(sl2.algebra.space, 0, 2)
    pair = compose_twists(b, f, f.scale(2 * ONE))
    assert pair.certificate["twisting_associative"]
    assert twist_defect(b, pair.total).is_zero()


@pytest.mark.parametrize("name", ["sl2-s3", "solvable2-s3"])
def test_twist_families_compose_associatively(name):
    p = problem(name)
    b, group, action, twists = p.bialgebra, p.group, p.action, p.gamma.twists
    for g, h, s in product(group.elements(), repeat=3):
        f1 = twists[g]
        f2 = action.wedge2(g, twists[h])
        f3 = action.wedge2(group.mul(g, h), twists[s])
        compose_twists(b, f1, f2)
        compose_twists(b, f1 + f2, f3)
        compose_twists(b, f1, f2 + f3)
        compose_twists(twist(b, f1), f2, f3)
        stacked = twist(twist(twist(b, f1), f2), f3)
        assert cobracket_equal(stacked.cobracket, twist(b, f1 + f2 + f3).cobracket)


def test_double_isomorphism_with_a_free_parameter(sl2):
    b = sl2.bialgebra
    f = wedge(sl2.algebra.space, 0, 2)
    matrix = double_twist_iso(b, f)
    assert matrix[:3] == [{0: ONE}, {1: ONE}, {2: ONE}]
    assert all(matrix[3 + j].get(3 + j) == ONE for j in range(3))
    assert is_homomorphism(drinfeld_double(b).algebra, drinfeld_double(twist(b, f)).algebra, matrix)


def test_free_parameters_prefer_zero():
    t = Symbol("t")
    assert pick_free_parameters([t], [t**2 - t], [t]) == {t: 0}


def test_free_parameters_follow_the_quadratic_rows():
    t, u = Symbol("t"), Symbol("u")
    assert pick_free_parameters([t], [t**2 - 2 * t + 1], [t]) == {t: 1}
    # u is fixed by the linear rows to 2t
    assert pick_free_parameters([t, 2 * t], [u - 2], [t, u]) == {t: 1}
    assert pick_free_parameters([t], [t**2 + 1], [t]) is None
