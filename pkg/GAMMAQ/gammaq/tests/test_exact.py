from itertools import permutations

import pytest
from hypothesis import given, strategies as st
from sympy import QQ

from algebra.exact import (ONE, ZERO, BasedSpace, HSeries, LinSystem, LinearForm, SparseVector, Tensor,
                           alt2, cyclic_sum3, format_scalar, hseries_inverse, hseries_mul, lin_solve, scalar,
                           tensor_permute, wedge)
from errors import ArityError, NonInvertibleError, NonlinearTermError, ShapeMismatchError

SPACE = BasedSpace(("e", "f", "h"))

small = st.integers(min_value=-5, max_value=5)


def number_mult(a, b):
    return SparseVector({(): a.get(()) * b.get(())})


def number_series(values):
    return HSeries([SparseVector({(): QQ(v)}) for v in values])


# ─────────────────────────────────────────────
# SCALARS
# ─────────────────────────────────────────────
def test_scalar_reads_rational_strings():
    assert scalar("3/6") == QQ(1, 2)
    assert scalar(" -4 ") == QQ(-4)
    assert format_scalar(scalar("4/2")) == "2"
    assert format_scalar(QQ(-1, 3)) == "-1/3"


def test_scalar_rejects_zero_denominator_and_floats():
    with pytest.raises(ValueError):
        scalar("1/0")
    with pytest.raises(TypeError):
        scalar(0.5)
    with pytest.raises(TypeError):
        scalar(True)


def test_linear_forms_stay_linear():
    u, v = LinearForm.variable(0), LinearForm.variable(1)
    form = u * QQ(2) + v - QQ(3)
    assert form.evaluate([QQ(5), QQ(1)]) == QQ(8)
    with pytest.raises(NonlinearTermError):
        u * v


# ─────────────────────────────────────────────
# TENSORS
# ─────────────────────────────────────────────
def test_permute_moves_slot_k_to_sigma_k():
    t = Tensor((SPACE,) * 3, {(0, 1, 2): ONE})
    assert tensor_permute(t, (1, 2, 0)) == Tensor((SPACE,) * 3, {(2, 0, 1): ONE})


@given(st.sampled_from(list(permutations(range(3)))), st.sampled_from(list(permutations(range(3)))),
       st.dictionaries(st.tuples(*(st.integers(0, 2),) * 3), small, max_size=6))
def test_permute_composition(sigma, tau, terms):
    t = Tensor((SPACE,) * 3, {k: QQ(v) for k, v in terms.items()})
    composed = tuple(tau[sigma[k]] for k in range(3))
    assert tensor_permute(tensor_permute(t, sigma), tau) == tensor_permute(t, composed)


@given(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=6))
def test_alt2_is_antisymmetric(terms):
    t = Tensor((SPACE, SPACE), {k: QQ(v) for k, v in terms.items()})
    assert alt2(t).is_antisymmetric() or alt2(t).is_zero()


def test_cyclic_sum_of_a_basis_tensor():
    t = Tensor((SPACE,) * 3, {(0, 1, 2): ONE})
    expected = Tensor((SPACE,) * 3, {(0, 1, 2): ONE, (2, 0, 1): ONE, (1, 2, 0): ONE})
    assert cyclic_sum3(t) == expected
    with pytest.raises(ArityError):
        cyclic_sum3(wedge(SPACE, 0, 1))


@given(st.dictionaries(st.tuples(*(st.integers(0, 2),) * 3), small, max_size=6))
def test_cyclic_sum_is_cyclically_invariant(terms):
    t = Tensor((SPACE,) * 3, {k: QQ(v) for k, v in terms.items()})
    total = cyclic_sum3(t)
    assert tensor_permute(total, (1, 2, 0)) == total


def test_wedge_and_shape_checks():
    w = wedge(SPACE, 0, 1)
    assert w.get((0, 1)) == ONE and w.get((1, 0)) == -ONE
    with pytest.raises(ShapeMismatchError):
        Tensor((SPACE,), {(3,): ONE})


def test_apply_matrix_on_every_slot():
    swap = [{1: ONE}, {0: ONE}, {2: -ONE}]
    t = Tensor((SPACE, SPACE), {(0, 1): ONE, (2, 2): QQ(1, 4)})
    assert t.apply_matrix(swap) == Tensor((SPACE, SPACE), {(1, 0): ONE, (2, 2): QQ(1, 4)})


# ─────────────────────────────────────────────
# SERIES
# ─────────────────────────────────────────────
def test_series_product_truncates():
    a = number_series([1, 2])
    b = number_series([1, 3])
    assert hseries_mul(a, b, number_mult) == number_series([1, 5])


def test_series_inverse_of_one_plus_two_h():
    a = number_series([1, 2, 0])
    inv = hseries_inverse(a, number_mult, SparseVector({(): ONE}))
    assert inv == number_series([1, -2, 4])


@given(st.lists(small, min_size=1, max_size=4))
def test_series_inverse_is_two_sided(tail):
    a = number_series([1] + tail)
    one = SparseVector({(): ONE})
    inv = hseries_inverse(a, number_mult, one)
    assert hseries_mul(a, inv, number_mult) == HSeries.constant(one, a.order)


def test_series_inverse_needs_unit_leading_term():
    with pytest.raises(NonInvertibleError):
        hseries_inverse(number_series([2, 1]), number_mult, SparseVector({(): ONE}))


def test_series_orders_must_match():
    with pytest.raises(ShapeMismatchError):
        number_series([1, 1]) + number_series([1])


# ─────────────────────────────────────────────
# LINEAR SYSTEMS
# ─────────────────────────────────────────────
def test_lin_solve_unique_solution():
    system = LinSystem([{0: ONE, 1: ONE}, {0: ONE, 1: -ONE}], [QQ(2), ZERO], ["x", "y"])
    solution = lin_solve(system)
    assert solution.consistent
    assert solution.values == (ONE, ONE)


def test_lin_solve_pins_free_variables_to_zero():
    system = LinSystem([{0: ONE, 1: ONE}], [ONE], ["x", "y"])
    solution = lin_solve(system)
    assert solution.values == (ONE, ZERO)
    assert solution.as_dict(["x", "y"]) == {"x": ONE}


def test_lin_solve_certificate_separates_rhs():
    system = LinSystem([{0: ONE}, {0: ONE}], [ONE, QQ(2)], ["x"])
    result = lin_solve(system)
    assert not result.consistent
    weights = dict(result.weights)
    assert weights[0] + weights[1] == 0
    assert result.pairing == weights[0] + 2 * weights[1]
    assert result.pairing != 0
