from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dyadiclp.adicfeas import LFP_CALLS
from dyadiclp.adiclp import INFEASIBLE, dual_of, epsilon_approximate, llp_solve, lp_via_llp
from dyadiclp.certcheck import verify_outcome
from dyadiclp.exactnum import AdicClass, is_member
from dyadiclp.linalg import dot
from dyadiclp.lpcore import lp_value, solve_lp
from dyadiclp.problems import LlpInstance

from instances import TABLE, table_instance

F = Fraction
D = AdicClass.dyadic()


@pytest.mark.parametrize("name", sorted(TABLE))
def test_table_outcomes(name):
    inst = table_instance(name)
    out = llp_solve(inst)
    assert out.tag == TABLE[name][2]
    assert verify_outcome(inst, out)
    dual = dual_of(inst)
    dout = llp_solve(dual)
    assert dout.tag == TABLE[name][3]
    assert verify_outcome(dual, dout)


def test_attained_optimum_example():
    out = llp_solve(table_instance("3x<=3, max x"))
    assert out.x_d == (1,)


def test_unattained_example():
    out = llp_solve(table_instance("3x<=1, max x"), F(1, 64))
    assert out.x_star == (F(1, 3),)
    assert F(1, 3) - F(1, 64) <= out.x_eps[0] <= F(1, 3) and is_member(out.x_eps[0], D)
    # frozen: the point found by the rounding step
    assert out.x_eps == (F(41, 128),)


def test_epsilon_approximate_examples():
    inst = table_instance("3x<=1, max x")
    x = epsilon_approximate(inst, (F(1, 3),), F(1, 4))
    assert F(1, 12) <= x[0] <= F(1, 3) and is_member(x[0], D)
    x = epsilon_approximate(table_instance("3x<=3, max x"), (F(1),), F(1, 8))
    assert F(7, 8) <= x[0] <= 1
    with pytest.raises(ValueError):
        epsilon_approximate(inst, (F(1, 3),), 0)


def test_unbounded_ray_is_integral():
    inst = LlpInstance.make([[-2, 0], [0, 1]], [0, 1], [1, 0], D)
    out = llp_solve(inst)
    assert out.tag == "o2" and all(v.denominator == 1 for v in out.r)
    assert verify_outcome(inst, out)


def test_real_infeasible():
    inst = LlpInstance.make([[1], [-1]], [0, -1], [1], D)
    out = llp_solve(inst)
    assert out.tag == "o1-real" and verify_outcome(inst, out)


def test_dual_shape():
    dual = dual_of(table_instance("3x<=1, max x"))
    # rows A^T; -A^T; -I over y = (y1, y2) for rows (3x <= 1, -x <= 0)
    assert dual.A == ((3, -1), (-3, 1), (-1, 0), (0, -1))
    assert dual.b == (1, -1, 0, 0) and dual.c == (-1, 0)


instances = st.integers(1, 2).flatmap(lambda n: st.tuples(
    st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=3),
    st.lists(st.integers(-3, 3), min_size=n, max_size=n),
)).flatmap(lambda t: st.tuples(st.just(t[0]), st.lists(st.integers(-3, 4), min_size=len(t[0]), max_size=len(t[0])), st.just(t[1]), st.sampled_from([D, AdicClass.padic(3), AdicClass.bracket(3)])))


@settings(max_examples=150, deadline=None)
@given(instances)
def test_outcomes_verify_and_lfp_budget(data):
    A, b, c, L = data
    inst = LlpInstance.make(A, b, c, L)
    start = LFP_CALLS.count
    out = llp_solve(inst)
    assert LFP_CALLS.count - start <= 3
    assert verify_outcome(inst, out)


@settings(max_examples=60, deadline=None)
@given(instances)
def test_double_dual_has_same_relaxation_value(data):
    A, b, c, L = data
    inst = LlpInstance.make(A, b, c, L)
    dd = dual_of(dual_of(inst))
    v1 = lp_value(inst.A, inst.b, inst.c)
    # the double dual lives in (x+, x-, s) space; compare optimal values
    v2 = lp_value(dd.A, dd.b, dd.c)
    assert v1 == v2


def test_lp_via_llp_examples():
    x = lp_via_llp([[1, 1]], [1])
    assert x != INFEASIBLE and sum(x) == 1 and all(v >= 0 for v in x)
    assert lp_via_llp([[1]], [-1]) == INFEASIBLE
    assert lp_via_llp([[2]], [3]) == (F(3, 2),)
    # the supremum is not attained over dyadic points here
    assert lp_via_llp([[3]], [1]) == (F(1, 3),)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=2),
    st.lists(st.integers(-3, 3), min_size=2, max_size=2))))
def test_lp_via_llp_matches_direct(data):
    A, b = data
    b = b[:len(A)]
    n = len(A[0])
    x = lp_via_llp(A, b)
    rows = [list(r) for r in A] + [[-v for v in r] for r in A] + [[-1 if k == j else 0 for k in range(n)] for j in range(n)]
    direct = solve_lp(rows, list(b) + [-v for v in b] + [0] * n, [0] * n, strict=False)
    if direct.status == "infeasible":
        assert x == INFEASIBLE
    else:
        assert x != INFEASIBLE
        assert [dot(r, x) for r in A] == list(b) and all(v >= 0 for v in x)
