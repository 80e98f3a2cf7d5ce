"""Solving L-linear programs sup{c^T x : A x <= b, x in L^n}.

``llp_solve`` classifies an instance into one of the outcomes
o1 (infeasible, real or over L), o2 (unbounded), o3 (optimum attained) or
o4 (bounded, supremum not attained) and returns matching certificates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional, Union

from .adicfeas import lfp_solve
from .exactnum import AdicClass, as_fraction, lcm_of_denominators, total_size
from .linalg import ZERO, dot, int_matrix, int_vector
from .lpcore import purify_to_vertex, solve_lp
from .problems import LlpInstance, LlpOutcome

DEFAULT_EPS = Fraction(1, 2**20)
INFEASIBLE = "infeasible"


def epsilon_approximate(inst: LlpInstance, x_star, eps) -> tuple:
    """A point of P in L^n with objective at least c^T x* - eps."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    threshold = dot(inst.c, x_star) - eps
    d = threshold.denominator
    # -c^T x <= -threshold, scaled to integers
    A = [list(r) for r in inst.A] + [[-d * v for v in inst.c]]
    b = list(inst.b) + [-threshold.numerator]
    res = lfp_solve(A, b, inst.L, inst.n)
    if res.kind != "point":
        raise AssertionError(f"no L-point near the optimum: {res.kind}")
    return res.x


def llp_solve(inst: LlpInstance, eps=DEFAULT_EPS) -> LlpOutcome:
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    A, b, c, L, n = [list(r) for r in inst.A], list(inst.b), list(inst.c), inst.L, inst.n
    m = len(A)
    # feasibility over L
    res = lfp_solve(A, b, L, n)
    if res.kind == "real-infeasible":
        return LlpOutcome("o1-real", u=res.y)
    if res.kind == "adic-infeasible":
        return LlpOutcome("o1-adic", y_bar=res.y, u_bar=res.u)
    x_f = res.x
    # the LP relaxation
    lp = solve_lp(A, b, c)
    if lp.status == "unbounded":
        q = lcm_of_denominators(lp.r)
        return LlpOutcome("o2", x_f=x_f, r=tuple(Fraction(v * q) for v in lp.r))
    if lp.status != "optimal":
        raise AssertionError("relaxation infeasible although an L-point exists")
    x_star, y_star = lp.x, lp.y
    eq = [i for i in range(m) if y_star[i] > 0]
    # the optimal face: A x <= b, A^= x >= b^=
    FA = A + [[-v for v in A[i]] for i in eq]
    Fb = b + [-b[i] for i in eq]
    res = lfp_solve(FA, Fb, L, n)
    if res.kind == "point":
        return LlpOutcome("o3", x_d=res.x, y_star=y_star)
    if res.kind != "adic-infeasible":
        raise AssertionError("optimal face is empty over the reals")
    u = list(res.u[:m])
    for pos, i in enumerate(eq):
        u[i] -= res.u[m + pos]
    x_eps = epsilon_approximate(inst, x_star, eps)
    return LlpOutcome("o4", x_star=x_star, y_star=y_star, u_bar=tuple(u), x_eps=x_eps, eps=eps)


def dual_of(inst: LlpInstance) -> LlpInstance:
    """inf{b^T y : A^T y = c, y >= 0, y in L^m} as a canonical max instance.

    Rows: A^T y <= c, -A^T y <= -c, -y <= 0; objective -b.
    """
    m, n = inst.m, inst.n
    At = [[inst.A[i][j] for i in range(m)] for j in range(n)]
    rows = At + [[-v for v in r] for r in At] + [[-1 if k == i else 0 for k in range(m)] for i in range(m)]
    rhs = list(inst.c) + [-v for v in inst.c] + [0] * m
    return LlpInstance.make(rows, rhs, [-v for v in inst.b], inst.L)


def blackbox_instance(A, b, L: AdicClass) -> LlpInstance:
    """max -t over A x + b t = b, x >= 0, t >= 0 (variables x then t)."""
    A, b = int_matrix(A), int_vector(b)
    n = len(A[0]) if A else 0
    rows = [(list(A[i]) + [b[i]], "=", b[i]) for i in range(len(A))]
    return LlpInstance.from_constraints([0] * n + [-1], rows, L, nonneg=range(n + 1))


def lp_via_llp(A, b, llp_solver: Callable = llp_solve, L: Optional[AdicClass] = None) -> Union[tuple, str]:
    """Rational point of {x >= 0 : Ax = b} or ``"infeasible"``, via one L-LP solve."""
    A, b = int_matrix(A), int_vector(b)
    L = L or AdicClass.dyadic()
    inst = blackbox_instance(A, b, L)
    n = inst.n - 1
    eps = Fraction(1, 2 ** (2 * total_size([v for row in A for v in row] + list(b))))
    out = llp_solver(inst, eps)
    if out.tag == "o3":
        t = out.x_d[n]
        return tuple(out.x_d[:n]) if t == 0 else INFEASIBLE
    if out.tag != "o4":
        raise AssertionError(f"impossible outcome {out.tag} for the blackbox instance")
    t = out.x_eps[n]
    if t > eps:
        return INFEASIBLE
    obj = [ZERO] * n + [Fraction(1)]
    v = purify_to_vertex(inst.A, inst.b, obj, out.x_eps)
    if v[n] != 0:
        raise AssertionError("vertex below the threshold has t > 0")
    return tuple(v[:n])
