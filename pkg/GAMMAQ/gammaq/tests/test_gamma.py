import pytest

from algebra.exact import ONE, Tensor
from algebra.gamma import (FiniteGroup, GroupAction, check_action, gamma_defects, gamma_inverse_identity,
                           gamma_morphism_check, quasitriangular_gamma)
from algebra.lie import mat_from_rows
import catalog
from catalog import solvable_z2
from conftest import problem
from errors import AxiomError, NonInvertibleError, ShapeMismatchError
from schema import load_document


# ─────────────────────────────────────────────
# GROUPS
# ─────────────────────────────────────────────
def test_symmetric_group_structure():
    s3 = FiniteGroup.symmetric3()
    assert s3.order == 6
    for g in s3.elements():
        assert s3.mul(g, s3.inv(g)) == s3.identity
    assert s3.sign(s3.index("(12)")) == -1
    assert s3.sign(s3.index("(123)")) == 1


def test_sign_follows_the_table_not_the_labels():
    s3 = FiniteGroup.symmetric3()
    renamed = FiniteGroup(["g0", "g1", "g2", "g3", "g4", "g5"], s3.table)
    assert [renamed.sign(g) for g in renamed.elements()] == [s3.sign(g) for g in s3.elements()]
    odd = {s3.labels[g] for g in s3.elements() if s3.sign(g) == -1}
    assert odd == {"(12)", "(23)", "(13)"}


def test_sign_is_multiplicative():
    for group in (FiniteGroup.symmetric3(), FiniteGroup.cyclic(2), FiniteGroup.cyclic(4)):
        for a in group.elements():
            for b in group.elements():
                assert group.sign(group.mul(a, b)) == group.sign(a) * group.sign(b)


def test_catalog_odd_permutations():
    assert {label for label in catalog.S3_LABELS if catalog.is_odd(label)} == {"(12)", "(23)", "(13)"}


def test_cyclic_group_inverse():
    z3 = FiniteGroup.cyclic(3)
    assert z3.inv(1) == 2


def test_table_without_inverses_is_rejected():
    with pytest.raises(AxiomError):
        FiniteGroup(["e", "a"], [[0, 1], [1, 1]])


def test_table_without_identity_is_rejected():
    with pytest.raises(AxiomError):
        FiniteGroup(["a", "b"], [[1, 0], [0, 1]])


# ─────────────────────────────────────────────
# ACTIONS
# ─────────────────────────────────────────────
def test_cartan_involution_is_an_action(sl2_z2):
    assert check_action(sl2_z2.action, sl2_z2.algebra).passed


def test_swap_without_sign_is_not_an_automorphism(sl2_z2):
    swap = mat_from_rows([["0", "1", "0"], ["1", "0", "0"], ["0", "0", "1"]])
    action = GroupAction(sl2_z2.group, [sl2_z2.action.theta(0), swap])
    report = check_action(action, sl2_z2.algebra)
    assert not report.passed
    assert report.sections["automorphism"]
    assert not report.sections["homomorphism"]


def test_singular_action_matrix_is_rejected(sl2_z2):
    with pytest.raises(NonInvertibleError):
        GroupAction(sl2_z2.group, [sl2_z2.action.theta(0), [{}, {1: ONE}, {2: ONE}]])


# ─────────────────────────────────────────────
# Γ-LIE BIALGEBRAS
# ─────────────────────────────────────────────
@pytest.mark.parametrize("name", ["sl2-z2", "sl2-trivial", "sl2-s3", "solvable2-z2", "solvable2-s3",
                                  "abelian2-swap", "abelian2-swap-mismatch"])
def test_catalog_gamma_structures(name):
    gamma = problem(name).gamma
    assert gamma_defects(gamma).passed
    assert gamma_inverse_identity(gamma).passed


def test_wrong_twist_scale_breaks_transport():
    doc = solvable_z2()
    doc["twists"] = {"s": [[0, 1, "2"]]}
    report = gamma_defects(load_document(doc).gamma)
    assert report.sections["a"]
    assert not report.sections["b"]


def test_quasitriangular_twist_of_cartan_involution(sl2_z2):
    gamma = quasitriangular_gamma(sl2_z2.qt, sl2_z2.action)
    space = sl2_z2.algebra.space
    assert gamma.twists[0].is_zero()
    assert gamma.twists[1] == Tensor((space, space), {(1, 0): ONE, (0, 1): -ONE})


def test_quasitriangular_construction_needs_an_action():
    p = problem("sl2")
    scale = mat_from_rows([["2", "0", "0"], ["0", "1/2", "0"], ["0", "0", "1"]])
    group = FiniteGroup.cyclic(2)
    # θ_e must be the identity
    with pytest.raises(AxiomError):
        quasitriangular_gamma(p.qt, GroupAction(group, [scale, scale]))


# ─────────────────────────────────────────────
# MORPHISMS
# ─────────────────────────────────────────────
def test_rescaling_x_is_a_gamma_morphism():
    src = problem("solvable2-z2").gamma
    dst = load_document(solvable_z2("2")).gamma
    scale = mat_from_rows([["2", "0"], ["0", "1"]])
    assert gamma_morphism_check(src, dst, scale).passed


def test_identity_between_different_actions_fails():
    src = problem("solvable2-z2").gamma
    dst = load_document(solvable_z2("2")).gamma
    report = gamma_morphism_check(src, dst, mat_from_rows([["1", "0"], ["0", "1"]]))
    assert not report.sections["bracket"]
    assert not report.sections["cobracket"]
    assert report.sections["equivariance"]
    assert report.sections["twists"]


def test_morphism_needs_the_same_group():
    with pytest.raises(ShapeMismatchError):
        gamma_morphism_check(problem("sl2-z2").gamma, problem("sl2-s3").gamma, mat_from_rows(
            [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]))


def rescaled_solvable(c, twist):
    doc = solvable_z2(c)
    doc["twists"] = {"s": [[0, 1, twist]]}
    return load_document(doc).gamma


@pytest.mark.parametrize("twists, valid", [(("1", "2"), True), (("2", "4"), False)])
def test_gamma_defects_are_natural_under_isomorphisms(twists, valid):
    src = rescaled_solvable("1", twists[0])
    dst = rescaled_solvable("2", twists[1])
    scale = mat_from_rows([["2", "0"], ["0", "1"]])
    assert gamma_morphism_check(src, dst, scale).passed
    src_report, dst_report = gamma_defects(src), gamma_defects(dst)
    assert src_report.passed == dst_report.passed == valid
    assert {k for k, v in src_report.sections.items() if v} == {k for k, v in dst_report.sections.items() if v}
