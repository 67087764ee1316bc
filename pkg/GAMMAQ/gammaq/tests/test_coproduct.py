import pytest

from algebra.envelope import Envelope
from algebra.exact import ONE, HSeries, SparseVector, Tensor, wedge
from algebra.lie import QuasitriangularData
from conftest import problem
from quant.coproduct import (TruncatedCoproduct, coassoc_defect, quasitriangular_coproduct, solve_coproduct,
                             solve_J_quasitriangular, transport_coproduct)
from quant.engine import HALF, SeriesMap, SeriesOps
from quant.twisting import (TwistLadder, check_v_cocycle, gauge_transform, iso_defect, solve_iso_i, solve_twist_F,
                            twist_cocycle_defect, v_relation_defect)


@pytest.fixture
def plane():
    return problem("abelian2")


# ─────────────────────────────────────────────
# Δ_ℏ
# ─────────────────────────────────────────────
def test_cocommutative_abelian_coproduct_stays_primitive(plane):
    env = Envelope(plane.algebra)
    delta = solve_coproduct(plane.bialgebra, 2, envelope=env)
    assert delta.equals(TruncatedCoproduct.primitive(env, 2))


def test_first_order_coproduct_quantizes_the_cobracket(sl2):
    env = Envelope(sl2.algebra)
    delta = solve_coproduct(sl2.bialgebra, 1, envelope=env)
    for i, table in enumerate(delta.tables):
        assert table[0] == env.delta0(env.gen(i))
        assert env.alt2(table[1]) == env.from_tensor(sl2.bialgebra.cobracket[i])
    assert all(d.is_zero() for d in coassoc_defect(delta))


def test_solvable_coproduct_to_second_order():
    p = problem("solvable2")
    env = Envelope(p.algebra)
    delta = solve_coproduct(p.bialgebra, 2, envelope=env)
    assert all(d.is_zero() for d in coassoc_defect(delta))
    assert env.alt2(delta.tables[0][1]) == env.from_tensor(p.bialgebra.cobracket[0])


def test_ad_half_r_is_coassociative_to_first_order(sl2):
    env = Envelope(sl2.algebra)
    J = HSeries([env.one(2), env.from_tensor(sl2.qt.r).scale(HALF)], 1)
    delta = quasitriangular_coproduct(env, J)
    assert all(d.is_zero() for d in coassoc_defect(delta))
    for i, table in enumerate(delta.tables):
        assert env.alt2(table[1]) == env.from_tensor(sl2.bialgebra.cobracket[i])


def test_zero_r_gives_trivial_J(plane):
    space = plane.algebra.space
    qt = QuasitriangularData(plane.algebra, Tensor((space, space)))
    env = Envelope(plane.algebra)
    J = solve_J_quasitriangular(qt, 2, envelope=env)
    assert J == SeriesOps(env, 2).one(2)


def test_abelian_J_keeps_half_r(abelian_swap):
    env = Envelope(abelian_swap.algebra)
    J = solve_J_quasitriangular(abelian_swap.qt, 2, envelope=env)
    assert J[1] == env.from_tensor(abelian_swap.qt.r).scale(HALF)


def test_transport_along_the_identity(sl2):
    env = Envelope(sl2.algebra)
    delta = solve_coproduct(sl2.bialgebra, 1, envelope=env)
    identity = [{i: ONE} for i in range(3)]
    assert transport_coproduct(delta, identity).equals(delta)


# ─────────────────────────────────────────────
# TWISTS
# ─────────────────────────────────────────────
def test_twist_of_a_commutative_envelope(plane):
    env = Envelope(plane.algebra)
    delta = TruncatedCoproduct.primitive(env, 2)
    f = wedge(plane.algebra.space, 0, 1)
    F = solve_twist_F(delta, f)
    assert env.alt2(F[1]) == env.from_tensor(f)
    assert twist_cocycle_defect(delta, F).is_zero()
    iso, F_aligned = solve_iso_i(delta, F, delta, plane.algebra)
    assert iso.equals(SeriesMap.identity(env, 2))
    assert F_aligned == F


def test_gauge_transform_keeps_the_cocycle(plane):
    env = Envelope(plane.algebra)
    delta = TruncatedCoproduct.primitive(env, 2)
    F = solve_twist_F(delta, wedge(plane.algebra.space, 0, 1))
    u = HSeries([env.one(), env.gen(0), env.from_word((0, 1))], 2)
    F_new, iso_new = gauge_transform(delta, F, SeriesMap.identity(env, 2), u)
    assert twist_cocycle_defect(delta, F_new).is_zero()
    assert iso_new.equals(SeriesMap.identity(env, 2))


def test_composition_element_of_opposite_twists(plane):
    env = Envelope(plane.algebra)
    ladder = TwistLadder(env, 2)
    f = wedge(plane.algebra.space, 0, 1)
    v = ladder.v(plane.bialgebra, f, -f)
    assert v[0] == env.one()
    assert v_relation_defect(ladder, plane.bialgebra, f, -f, v).is_zero()


def test_v_cocycle_with_zero_twists(plane):
    env = Envelope(plane.algebra)
    ladder = TwistLadder(env, 1)
    space = plane.algebra.space
    f = wedge(space, 0, 1)
    zero = Tensor((space, space))
    result = check_v_cocycle(ladder, plane.bialgebra, f, zero, zero)
    assert result.passed
    assert result.aligned == SeriesOps(env, 1).one()
    assert result.gauge.is_zero()


def spoil_v(ladder, monkeypatch, shift):
    """Adds shift to every v(𝔞, f, 0) the ladder hands out."""
    solved = ladder.v

    def v(bialgebra, f, f_prime):
        value = solved(bialgebra, f, f_prime)
        return value + shift if f_prime.is_zero() else value

    monkeypatch.setattr(ladder, "v", v)


def test_v_cocycle_round_trip_on_a_plane(plane):
    env = Envelope(plane.algebra)
    ladder = TwistLadder(env, 1)
    f = wedge(plane.algebra.space, 0, 1)
    result = check_v_cocycle(ladder, plane.bialgebra, f, -f, f)
    assert result.passed
    assert result.relation.is_zero()


def test_v_cocycle_detects_a_wrong_v(plane, monkeypatch):
    env = Envelope(plane.algebra)
    ladder = TwistLadder(env, 1)
    f = wedge(plane.algebra.space, 0, 1)
    spoil_v(ladder, monkeypatch, HSeries([SparseVector(), env.from_word((0, 1))], 1))
    result = check_v_cocycle(ladder, plane.bialgebra, f, -f, f)
    assert not result.relation.is_zero()
    assert not result.passed


def test_v_cocycle_on_sl2(sl2):
    ladder = TwistLadder(Envelope(sl2.algebra), 1)
    f = wedge(sl2.algebra.space, 0, 2)
    result = check_v_cocycle(ladder, sl2.bialgebra, f, -f, f)
    assert result.passed
    assert all(d.is_zero() for d in result.intertwining)


def test_v_cocycle_detects_a_primitive_shift_through_the_isomorphisms(sl2, monkeypatch):
    env = Envelope(sl2.algebra)
    ladder = TwistLadder(env, 1)
    f = wedge(sl2.algebra.space, 0, 2)
    spoil_v(ladder, monkeypatch, HSeries([SparseVector(), env.gen(0)], 1))
    result = check_v_cocycle(ladder, sl2.bialgebra, f, -f, f)
    assert result.relation.is_zero()
    assert not all(d.is_zero() for d in result.composition)
    assert not result.passed


def family_triple(p, labels):
    """(f_g, g·f_h, gh·f_s) from the twist family of p."""
    group, action, twists = p.group, p.action, p.gamma.twists
    g, h, s = (group.index(label) for label in labels)
    return twists[g], action.wedge2(g, twists[h]), action.wedge2(group.mul(g, h), twists[s])


@pytest.mark.parametrize("name, labels", [
    ("sl2-z2", ("s", "s", "s")),
    ("sl2-s3", ("(12)", "(23)", "(13)")),
    ("solvable2-z2", ("s", "s", "s")),
    ("solvable2-s3", ("(12)", "(23)", "(13)")),
])
def test_v_cocycle_on_twist_families_to_second_order(name, labels):
    p = problem(name)
    ladder = TwistLadder(Envelope(p.algebra), 2)
    result = check_v_cocycle(ladder, p.bialgebra, *family_triple(p, labels))
    assert result.relation.is_zero()
    assert all(d.is_zero() for d in result.composition)
    assert result.gauge_is_primitive
    assert result.passed


# ─────────────────────────────────────────────
# MUTATIONS AND GAUGES
# ─────────────────────────────────────────────
def test_perturbed_first_order_coproduct_is_not_coassociative(sl2):
    env = Envelope(sl2.algebra)
    delta = solve_coproduct(sl2.bialgebra, 1, envelope=env)
    tables = list(delta.tables)
    tables[0] = tables[0] + HSeries([SparseVector(), env.outer(env.from_word((0, 0)), env.gen(2))], 1)
    defects = coassoc_defect(TruncatedCoproduct(env, tables))
    assert not defects[0].is_zero()
    assert defects[1].is_zero() and defects[2].is_zero()


def test_intertwining_survives_a_gauge_transform(sl2):
    env = Envelope(sl2.algebra)
    ladder = TwistLadder(env, 1)
    f = wedge(sl2.algebra.space, 0, 2)
    data = ladder.twist(sl2.bialgebra, f)
    delta = ladder.coproduct(sl2.bialgebra)
    dst = ladder.coproduct(data.twisted)
    u = HSeries([env.one(), env.gen(0)], 1)
    F_new, iso_new = gauge_transform(delta, data.F, data.iso, u)
    assert not iso_new.equals(data.iso)
    assert twist_cocycle_defect(delta, F_new).is_zero()
    assert all(d.is_zero() for d in iso_defect(iso_new, delta, F_new, dst))


# ─────────────────────────────────────────────
# SECOND ORDER ON sl2
# ─────────────────────────────────────────────
@pytest.fixture(scope="module")
def sl2_second_order():
    p = problem("sl2")
    env = Envelope(p.algebra)
    return p, env, TwistLadder(env, 2)


def test_sl2_coproduct_to_second_order(sl2_second_order):
    p, env, ladder = sl2_second_order
    delta = ladder.coproduct(p.bialgebra)
    assert delta.order == 2
    assert all(d.is_zero() for d in coassoc_defect(delta))
    for i, table in enumerate(delta.tables):
        assert env.alt2(table[1]) == env.from_tensor(p.bialgebra.cobracket[i])


def test_sl2_borel_twist_to_second_order(sl2_second_order):
    p, env, ladder = sl2_second_order
    f = wedge(p.algebra.space, 0, 2)
    delta = ladder.coproduct(p.bialgebra)
    F = solve_twist_F(delta, f)
    assert env.alt2(F[1]) == env.from_tensor(f)
    assert twist_cocycle_defect(delta, F).is_zero()


def test_sl2_borel_twist_isomorphism_to_second_order(sl2_second_order):
    p, env, ladder = sl2_second_order
    f = wedge(p.algebra.space, 0, 2)
    data = ladder.twist(p.bialgebra, f)
    src = ladder.coproduct(p.bialgebra)
    dst = ladder.coproduct(data.twisted)
    assert all(d.is_zero() for d in iso_defect(data.iso, src, data.F, dst))


def test_sl2_composition_element_to_second_order(sl2_second_order):
    p, env, ladder = sl2_second_order
    f = wedge(p.algebra.space, 0, 2)
    v = ladder.v(p.bialgebra, f, -f)
    assert v.order == 2
    assert v_relation_defect(ladder, p.bialgebra, f, -f, v).is_zero()
