from fractions import Fraction

import pytest

from strippack.analysis import (
    STATED_OPTIMUM,
    QpFeasibilityError,
    QpPoint,
    coordinate_ascent,
    qp_grid,
    qp_objective,
    qp_search,
    stated_point,
)

F = Fraction


def test_stated_point_value():
    assert qp_objective(QpPoint((F(1, 2), F(1, 2)), (F(1, 3), 0))) == F(7, 12)
    assert STATED_OPTIMUM == F(7, 12)


def test_zero_betas_give_half():
    assert qp_objective(QpPoint((F(1, 2), F(1, 2)), (0, 0))) == F(1, 2)


def test_padding_does_not_change_value():
    assert qp_objective(stated_point(6)) == F(7, 12)


@pytest.mark.parametrize("alphas,betas", [
    ((F(3, 4), F(1, 4)), (0, 0)),           # alpha above 1/2
    ((F(1, 2), F(1, 4)), (0, 0)),           # alphas do not sum to 1
    ((F(1, 2), F(1, 2)), (F(1, 2), 0)),     # beta_1 above 1/3
    ((F(1, 2), F(1, 2)), (0, F(1, 4))),     # beta_2 above 1/5
])
def test_infeasible_points_raise(alphas, betas):
    with pytest.raises(QpFeasibilityError):
        qp_objective(QpPoint(alphas, betas))


def test_length_mismatch():
    with pytest.raises(QpFeasibilityError):
        QpPoint((F(1, 2), F(1, 2)), (0,))


def test_grid_k2():
    point, value, count = qp_grid(2, F(1, 60))
    assert value == F(7, 12)
    assert qp_objective(point) == value
    assert count == 21 * 13  # alphas are forced to (1/2, 1/2)


def test_grid_k3_coarse():
    _, value, _ = qp_grid(3, F(1, 12))
    assert value <= F(7, 12)


def test_grid_rejects_bad_step():
    with pytest.raises(ValueError):
        qp_grid(2, F(2, 7))


def test_ascent_from_zero_betas_reaches_optimum():
    point, value = coordinate_ascent(QpPoint((F(1, 2), F(1, 2), 0), (0, 0, 0)))
    assert value == F(7, 12)
    assert not point.violations()


def test_search_without_samples():
    res = qp_search(2, 0)
    assert res.value == F(7, 12)
    assert res.max_sampled is None and res.exceeded == 0


def test_search_is_seeded():
    a = qp_search(5, 3000, seed=4)
    b = qp_search(5, 3000, seed=4)
    assert a.max_sampled == b.max_sampled
    assert a.exceeded == 0 and a.max_sampled <= F(7, 12)


@pytest.mark.parametrize("k", [0, 1])
def test_k_max_below_two_is_rejected(k):
    with pytest.raises(ValueError):
        qp_search(k, 10)
    with pytest.raises(ValueError):
        stated_point(k)
