"""Finding a point of a polyhedron with all coordinates in L, or certifying
that none exists.

Two entry points: ``lfp_solve`` for {x : Ax <= b} (Euclidean inner ball)
and ``lfp_solve_std`` for {x >= 0 : Ax = b} (infinity-norm inner ball).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional

from .exactnum import AdicClass, all_members, ceil_sqrt
from .linalg import ZERO, ONE, dot, int_matrix, int_vector, kernel_basis, matvec, solve_in_adic, solve_or_farkas, transpose
from .lpcore import LP_CALLS, CallCounter, solve_lp

LFP_CALLS = CallCounter()
# LP-engine calls made by each LFP invocation, most recent last
LFP_LP_PROFILE: list[int] = []


def _profiled(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        LFP_CALLS.bump()
        start = LP_CALLS.count
        try:
            return fn(*args, **kwargs)
        finally:
            LFP_LP_PROFILE.append(LP_CALLS.count - start)
    return wrapper


@dataclass(frozen=True)
class LfpResult:
    """``kind`` is "point" (x), "real-infeasible" (y) or "adic-infeasible" (y, u).

    Certificates refer to the rows of the inequality system actually solved;
    for the standard form these are the canonical rows (A; -A; -I).
    """

    kind: str
    x: Optional[tuple] = None
    y: Optional[tuple] = None
    u: Optional[tuple] = None


@dataclass(frozen=True)
class InnerBall:
    center: tuple
    radius: Fraction
    norm: str  # "euclidean" or "infinity"


@dataclass(frozen=True)
class AffineDescription:
    anchor: tuple
    directions: tuple


def _require_dense(L: AdicClass) -> None:
    if not L.is_dense:
        raise ValueError("the feasibility algorithm needs a dense number class")


def _zero_vec(n):
    return [ZERO] * n


def implicit_equalities(A, b, n: Optional[int] = None) -> Optional[set[int]]:
    """I^= of {x : Ax <= b}, or None if the polyhedron is empty."""
    n = len(A[0]) if A else (n or 0)
    out = solve_lp(A, b, _zero_vec(n))
    if out.status == "infeasible":
        return None
    return {i for i, yi in enumerate(out.y) if yi > 0}


def _row_norm_ceil(row) -> int:
    return ceil_sqrt(sum(int(a) * int(a) for a in row))


def inscribed_ball(A, b, eq: set[int], n: Optional[int] = None) -> InnerBall:
    """Euclidean ball inside P relative to its affine hull (one LP solve)."""
    n = len(A[0]) if A else (n or 0)
    rows, rhs = [], []
    for i in range(len(A)):
        if i in eq:
            rows.append(list(A[i]) + [ZERO])
            rhs.append(b[i])
            rows.append([-a for a in A[i]] + [ZERO])
            rhs.append(-b[i])
        else:
            rows.append(list(A[i]) + [Fraction(_row_norm_ceil(A[i]))])
            rhs.append(b[i])
    rows.append(_zero_vec(n) + [ONE])
    rhs.append(ONE)
    obj = _zero_vec(n) + [ONE]
    out = solve_lp(rows, rhs, obj, strict=False)
    if out.status != "optimal" or out.x[n] <= 0:
        raise AssertionError("ball LP did not give a positive radius")
    return InnerBall(tuple(out.x[:n]), out.x[n], "euclidean")


def _norm_sq(d) -> int:
    return sum(int(v) * int(v) for v in d)


def _norm_inf(d) -> int:
    return max((abs(int(v)) for v in d), default=0)


def choose_r(p: int, ell: int, dmax, radius: Fraction, norm: str) -> int:
    """Least r >= 0 with p^r * radius >= ell * max ||d||, compared exactly.

    For the Euclidean norm ``dmax`` is the maximal squared norm and both
    sides are squared.
    """
    r, pr = 0, 1
    if norm == "euclidean":
        target = ell * ell * dmax
        while (pr * radius) ** 2 < target:
            r, pr = r + 1, pr * p
    else:
        target = ell * dmax
        while pr * radius < target:
            r, pr = r + 1, pr * p
    return r


def round_to_adic(aff: AffineDescription, ball: InnerBall, p: int) -> tuple:
    """The p-adic offset rho with anchor + rho inside the ball and aff(P)."""
    z, dirs = list(aff.anchor), [list(d) for d in aff.directions]
    n, ell = len(z), len(dirs)
    if ell == 0:
        return tuple(_zero_vec(n))
    if ball.norm == "euclidean":
        dmax = max(_norm_sq(d) for d in dirs)
    else:
        dmax = max(_norm_inf(d) for d in dirs)
    r = choose_r(p, ell, dmax, ball.radius, ball.norm)
    D = transpose(dirs, n)  # n x ell
    target = [ball.center[j] - z[j] for j in range(n)]
    res = solve_or_farkas(D, target, ell)
    if not res.solved:
        raise AssertionError("ball center is not in the affine hull")
    pr = p ** r
    beta = [Fraction(floor(a * pr), pr) for a in res.x]
    return tuple(sum((beta[i] * dirs[i][j] for i in range(ell)), ZERO) for j in range(n))


def _feasible(A, b, x) -> bool:
    return all(dot(A[i], x) <= b[i] for i in range(len(A)))


@_profiled
def lfp_solve(A, b, L: AdicClass, n: Optional[int] = None) -> LfpResult:
    """L-feasibility for {x : Ax <= b} with integral A, b."""
    _require_dense(L)
    A, b = int_matrix(A), int_vector(b)
    n = len(A[0]) if A else (n or 0)
    m = len(A)
    # implicit equalities from a strictly complementary pair
    out = solve_lp(A, b, _zero_vec(n))
    if out.status == "infeasible":
        return LfpResult("real-infeasible", y=out.u)
    y = out.y
    eq = sorted(i for i in range(m) if y[i] > 0)
    # a point of aff(P) in L, or an L-infeasibility certificate
    A_eq = [A[i] for i in eq]
    sol = solve_in_adic(A_eq, [b[i] for i in eq], L, n)
    if sol.kind == "farkas":
        raise AssertionError("implicit equalities are inconsistent on a nonempty polyhedron")
    if sol.kind == "adic":
        u = [ZERO] * m
        for pos, i in enumerate(eq):
            u[i] = sol.u[pos]
        return LfpResult("adic-infeasible", y=tuple(y), u=tuple(u))
    z = sol.x
    dirs = kernel_basis(A_eq, n)
    if not dirs:
        if not _feasible(A, b, z):
            raise AssertionError("unique affine point lies outside P")
        return LfpResult("point", x=tuple(z))
    # inner ball, then round towards its center
    ball = inscribed_ball(A, b, set(eq), n)
    rho = round_to_adic(AffineDescription(tuple(z), tuple(map(tuple, dirs))), ball, L.p)
    x = tuple(zj + rj for zj, rj in zip(z, rho))
    if not _feasible(A, b, x) or not all_members(x, L):
        raise AssertionError("rounded point left P or L")
    return LfpResult("point", x=x)


def canonical_std_rows(A, b, n: Optional[int] = None):
    """(A; -A; -I) x <= (b; -b; 0) for {x >= 0 : Ax = b}."""
    n = len(A[0]) if A else (n or 0)
    rows = [list(r) for r in A] + [[-a for a in r] for r in A]
    rows += [[-1 if k == j else 0 for k in range(n)] for j in range(n)]
    rhs = list(b) + [-v for v in b] + [0] * n
    return rows, rhs


@_profiled
def lfp_solve_std(A, b, L: AdicClass, n: Optional[int] = None) -> LfpResult:
    """L-feasibility for {x >= 0 : Ax = b}; certificates over the canonical rows."""
    _require_dense(L)
    A, b = int_matrix(A), int_vector(b)
    n = len(A[0]) if A else (n or 0)
    m = len(A)
    rows, rhs = canonical_std_rows(A, b, n)
    out = solve_lp(rows, rhs, _zero_vec(n))
    if out.status == "infeasible":
        return LfpResult("real-infeasible", y=out.u)
    y = list(out.y)
    # sign rows in the dual support are the coordinates fixed at zero
    J_eq = [j for j in range(n) if y[2 * m + j] > 0]
    J_lt = [j for j in range(n) if y[2 * m + j] == 0]
    D_full = [list(r) for r in A] + [[1 if k == j else 0 for k in range(n)] for j in J_eq]
    sol = solve_in_adic(D_full, list(b) + [0] * len(J_eq), L, n)
    if sol.kind == "farkas":
        raise AssertionError("implicit equalities are inconsistent on a nonempty polyhedron")
    if sol.kind == "adic":
        u = [ZERO] * (2 * m + n)
        for i in range(m):
            u[i] = sol.u[i]
        for pos, j in enumerate(J_eq):
            u[2 * m + j] = -sol.u[m + pos]
        # pair every equality row with its negation so supp(u) is covered
        ybar = list(y)
        for i in range(m):
            ybar[i] += 1
            ybar[m + i] += 1
        return LfpResult("adic-infeasible", y=tuple(ybar), u=tuple(u))
    z = sol.x
    dirs = kernel_basis(D_full, n)
    if not dirs:
        if not _feasible(rows, rhs, z):
            raise AssertionError("unique affine point lies outside P")
        return LfpResult("point", x=tuple(z))
    ball = inscribed_ball_std(A, b, J_lt, n)
    rho = round_to_adic(AffineDescription(tuple(z), tuple(map(tuple, dirs))), ball, L.p)
    x = tuple(zj + rj for zj, rj in zip(z, rho))
    if not _feasible(rows, rhs, x) or not all_members(x, L):
        raise AssertionError("rounded point left P or L")
    return LfpResult("point", x=x)


def inscribed_ball_std(A, b, J_lt, n: int) -> InnerBall:
    """Infinity-norm ball: max e s.t. D zeta = b, e <= zeta_j (j in J^<), e <= 1."""
    k = len(J_lt)
    rows, rhs = [], []
    for i, row in enumerate(A):
        r = [Fraction(row[j]) for j in J_lt] + [ZERO]
        rows.append(r)
        rhs.append(b[i])
        rows.append([-v for v in r])
        rhs.append(-b[i])
    for pos in range(k):
        rows.append([-ONE if q == pos else ZERO for q in range(k)] + [ONE])
        rhs.append(ZERO)
    rows.append(_zero_vec(k) + [ONE])
    rhs.append(ONE)
    out = solve_lp(rows, rhs, _zero_vec(k) + [ONE], strict=False)
    if out.status != "optimal" or out.x[k] <= 0:
        raise AssertionError("ball LP did not give a positive radius")
    center = [ZERO] * n
    for pos, j in enumerate(J_lt):
        center[j] = out.x[pos]
    return InnerBall(tuple(center), out.x[k], "infinity")
