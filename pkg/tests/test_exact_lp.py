from fractions import Fraction

from hypothesis import given, settings, strategies as st

from cfharm.exact_lp import feasible_point, maximize

F = Fraction


def test_textbook_optimum():
    # max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
    res = maximize([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert res.status == "optimal"
    assert res.value == 36 and res.x == (F(2), F(6))


def test_negative_rhs_needs_phase_one():
    # x + y >= 2, x <= 1 -> max -x - y = -2
    res = maximize([-1, -1], [[-1, -1], [1, 0]], [-2, 1])
    assert res.status == "optimal" and res.value == -2


def test_infeasible():
    assert maximize([1], [[1], [-1]], [1, -2]).status == "infeasible"
    assert feasible_point([[1], [-1]], [1, -2]) is None


def test_unbounded():
    assert maximize([1, 0], [[-1, 1]], [1]).status == "unbounded"


def test_exact_fractions():
    res = maximize([1], [[3]], [1])
    assert res.x == (F(1, 3),)


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=4),
    st.lists(st.integers(-3, 6), min_size=4, max_size=4),
)
def test_feasible_points_satisfy(A, b):
    b = b[: len(A)]
    x = feasible_point(A, b)
    if x is not None:
        assert all(v >= 0 for v in x)
        assert all(sum(a * v for a, v in zip(row, x)) <= bi for row, bi in zip(A, b))
