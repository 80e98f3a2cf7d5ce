"""Exact linear programming: max c^T x subject to A x <= b, x free.

The engine is a dense-tableau two-phase simplex over Fractions with
Bland's rule.  ``solve_lp`` returns an infeasibility certificate, an
unbounded ray, or a strictly complementary optimal primal-dual pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .linalg import ZERO, ONE, dot, rank, rational_kernel_basis, rat_matrix, rat_vector, solve_or_farkas


class CallCounter:
    """Counts public entry-point invocations (used by cost-profile tests)."""

    def __init__(self):
        self.count = 0

    def reset(self) -> None:
        self.count = 0

    def bump(self) -> None:
        self.count += 1


LP_CALLS = CallCounter()


@dataclass(frozen=True)
class LpInstance:
    A: tuple
    b: tuple
    c: tuple
    n: int

    @classmethod
    def make(cls, A, b, c) -> "LpInstance":
        A = rat_matrix(A)
        n = len(c)
        if any(len(row) != n for row in A):
            raise ValueError("row length does not match objective length")
        if len(b) != len(A):
            raise ValueError("rhs length does not match row count")
        return cls(tuple(map(tuple, A)), tuple(rat_vector(b)), tuple(rat_vector(c)), n)

    @property
    def m(self) -> int:
        return len(self.A)


@dataclass(frozen=True)
class LpOutcome:
    """``status`` is "infeasible" (u), "unbounded" (x, r) or "optimal" (x, y)."""

    status: str
    x: Optional[tuple] = None
    y: Optional[tuple] = None
    u: Optional[tuple] = None
    r: Optional[tuple] = None

    def objective(self, c) -> Fraction:
        if self.status != "optimal":
            raise ValueError("no optimal value")
        return dot(rat_vector(c), self.x)


# -- standard form simplex ---------------------------------------------------------

class _Tableau:
    """Rows of B^{-1}[M | I_art] with rhs; columns >= n_orig are artificials."""

    def __init__(self, M, b):
        m = len(M)
        self.n_orig = len(M[0]) if M else 0
        self.T = []
        self.rhs = []
        for i in range(m):
            row = list(M[i]) + [ONE if k == i else ZERO for k in range(m)]
            rhs = b[i]
            if rhs < 0:
                row = [-x for x in row[:self.n_orig]] + row[self.n_orig:]
                rhs = -rhs
            self.T.append(row)
            self.rhs.append(rhs)
        self.basis = [self.n_orig + i for i in range(m)]

    @property
    def width(self) -> int:
        return self.n_orig + len(self.T)

    def pivot(self, r: int, j: int) -> None:
        T, rhs = self.T, self.rhs
        inv = 1 / T[r][j]
        prow = [x * inv for x in T[r]]
        T[r] = prow
        rhs[r] *= inv
        for i in range(len(T)):
            if i != r:
                f = T[i][j]
                if f:
                    Ti = T[i]
                    for k, pk in enumerate(prow):
                        if pk:
                            Ti[k] -= f * pk
                    rhs[i] -= f * rhs[r]
        self.basis[r] = j

    def run(self, cost, allowed) -> Optional[int]:
        """Minimize cost; return the entering column if unbounded, else None.

        The reduced-cost row is computed once and updated with each pivot.
        """
        allowed = sorted(allowed)
        T = self.T
        rc = list(cost) + [ZERO] * (self.width - len(cost))
        for i, j in enumerate(self.basis):
            cb = cost[j] if j < len(cost) else ZERO
            if cb:
                for k, t in enumerate(T[i]):
                    if t:
                        rc[k] -= cb * t
        while True:
            basic = set(self.basis)
            entering = next((j for j in allowed if j not in basic and rc[j] < 0), None)
            if entering is None:
                return None
            best, leave = None, None
            for i, row in enumerate(T):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return entering
            self.pivot(leave, entering)
            f = rc[entering]
            for k, t in enumerate(T[leave]):
                if t:
                    rc[k] -= f * t

    def primal(self) -> list[Fraction]:
        z = [ZERO] * self.width
        for i, j in enumerate(self.basis):
            z[j] = self.rhs[i]
        return z


def _basis_duals(M, basis, cost) -> list[Fraction]:
    """Solve B^T pi = c_B for the basis columns of M (original row signs)."""
    Bt = [[M[i][j] for i in range(len(M))] for j in basis]
    res = solve_or_farkas(Bt, [cost[j] for j in basis], len(M))
    if not res.solved:
        raise AssertionError("singular basis")
    return list(res.x)


def _solve_std_max(M, b, cost):
    """max cost^T z s.t. M z = b, z >= 0, with M of full row rank.

    Returns ("infeasible", u) with M^T u >= 0 and b^T u < 0,
    ("unbounded", z, d) or ("optimal", z, pi).
    """
    m = len(M)
    N = len(cost)
    tab = _Tableau(M, b)
    phase1 = [ZERO] * N + [ONE] * m
    tab.run(phase1, range(N + m))
    if sum((tab.rhs[i] for i, j in enumerate(tab.basis) if j >= N), ZERO) > 0:
        # phase-1 dual with the full artificial-inclusive basis
        Mfull = [list(M[i]) + [ONE if k == i else ZERO for k in range(m)] for i in range(m)]
        # artificials were added on sign-normalized rows; undo by using signed identity
        for i in range(m):
            if b[i] < 0:
                Mfull[i][N + i] = -ONE
        pi = _basis_duals(Mfull, tab.basis, phase1)
        # pi is for min sum(art); the max-form certificate is -pi
        return ("infeasible", [-x for x in pi])
    # drive artificials out of the basis
    for i in range(m):
        if tab.basis[i] >= N:
            j = next((j for j in range(N) if tab.T[i][j] != 0), None)
            if j is None:
                raise AssertionError("redundant row in a full-row-rank system")
            tab.pivot(i, j)
    neg = [-x for x in cost] + [ZERO] * m
    entering = tab.run(neg, range(N))
    z = tab.primal()[:N]
    if entering is not None:
        d = [ZERO] * N
        d[entering] = ONE
        for i, j in enumerate(tab.basis):
            d[j] = -tab.T[i][entering]
        return ("unbounded", z, d)
    pi = _basis_duals(M, tab.basis, cost)
    return ("optimal", z, pi)


# -- inequality form -------------------------------------------------------------------

def _solve_basic(A, b, c) -> LpOutcome:
    """One simplex solve of max c^T x, A x <= b; duals from the final basis."""
    m, n = len(A), len(c)
    if m == 0:
        x = tuple([ZERO] * n)
        if any(c):
            return LpOutcome("unbounded", x=x, r=tuple(c))
        return LpOutcome("optimal", x=x, y=())
    M = [list(A[i]) + [-x for x in A[i]] + [ONE if k == i else ZERO for k in range(m)] for i in range(m)]
    cost = list(c) + [-x for x in c] + [ZERO] * m
    res = _solve_std_max(M, list(b), cost)
    if res[0] == "infeasible":
        # rows of M give: A^T pi = 0 (x columns) and pi <= 0 (slack columns), b^T pi > 0 with pi -> -pi
        return LpOutcome("infeasible", u=tuple(res[1]))
    z = res[1]
    x = tuple(z[j] - z[n + j] for j in range(n))
    if res[0] == "unbounded":
        d = res[2]
        r = tuple(d[j] - d[n + j] for j in range(n))
        return LpOutcome("unbounded", x=x, r=r)
    return LpOutcome("optimal", x=x, y=tuple(res[2]))


def _max_over(A, b, c):
    out = _solve_basic(A, b, c)
    if out.status != "optimal":
        raise AssertionError(f"auxiliary LP unexpectedly {out.status}")
    return out


def _strictly_complementary(A, b, c, base: LpOutcome) -> LpOutcome:
    """Average optimal points so that every row is either strictly slack in x
    or strictly positive in y.

    For each undecided row i we maximize its slack over the optimal face
    (capped at 1).  A positive optimum gives a primal point with slack in
    row i.  Otherwise the auxiliary dual (w, mu) yields a dual optimum with
    y_i > 0: (w + e_i)/mu if mu > 0, else y0 + w + e_i.
    """
    m, n = len(A), len(c)
    x0, y0 = base.x, base.y
    v = dot(c, x0)
    strict = {i for i in range(m) if b[i] - dot(A[i], x0) > 0}
    eq = {i for i in range(m) if y0[i] > 0}
    xs, ys = [list(x0)], [list(y0)]
    face_A = [list(r) for r in A] + [[-x for x in c]]
    face_b = list(b) + [-v]
    for i in range(m):
        if i in strict or i in eq:
            continue
        obj = [-x for x in A[i]]
        out = _max_over(face_A + [obj], face_b + [ONE - b[i]], obj)
        if b[i] + dot(obj, out.x) > 0:
            xs.append(list(out.x))
            strict.update(k for k in range(m) if b[k] - dot(A[k], out.x) > 0)
            continue
        w, mu = list(out.y[:m]), out.y[m]
        w[i] += ONE
        if mu > 0:
            y = [wk / mu for wk in w]
        else:
            y = [a + wk for a, wk in zip(y0, w)]
        ys.append(y)
        eq.update(k for k in range(m) if y[k] > 0)
    x = tuple(sum((p[j] for p in xs), ZERO) / len(xs) for j in range(n))
    y = tuple(sum((q[k] for q in ys), ZERO) / len(ys) for k in range(m))
    return LpOutcome("optimal", x=x, y=y)


def solve_lp(A, b, c, strict: bool = True) -> LpOutcome:
    """Solve max{c^T x : A x <= b} exactly.

    infeasible: u >= 0, A^T u = 0, b^T u < 0.
    unbounded:  A x <= b, A r <= 0, c^T r > 0.
    optimal:    strictly complementary x, y (supp(y) is the set of rows tight
                on the whole optimal face).  With ``strict=False`` the basic
                optimum is returned as is.
    """
    LP_CALLS.bump()
    inst = LpInstance.make(A, b, c)
    A, b, c = [list(r) for r in inst.A], list(inst.b), list(inst.c)
    base = _solve_basic(A, b, c)
    if base.status != "optimal" or not strict:
        return base
    return _strictly_complementary(A, b, c, base)


def lp_value(A, b, c) -> Optional[Fraction]:
    """Optimal value of max{c^T x : A x <= b} or None if not optimal (not counted)."""
    A, b, c = rat_matrix(A), rat_vector(b), rat_vector(c)
    out = _solve_basic(A, b, c)
    return dot(c, out.x) if out.status == "optimal" else None


def optimal_face_indices(inst_or_A, outcome: LpOutcome) -> set[int]:
    """I^= = supp(y) for a strictly complementary optimal outcome."""
    if outcome.status != "optimal":
        raise ValueError("outcome is not optimal")
    return {i for i, yi in enumerate(outcome.y) if yi > 0}


# -- vertices -------------------------------------------------------------------------

def tight_rows(A, b, x) -> list[int]:
    return [i for i in range(len(A)) if dot(A[i], x) == b[i]]


def purify_to_vertex(A, b, c, x0) -> tuple:
    """Move from a feasible x0 to a vertex without increasing c^T x."""
    A, b, c = rat_matrix(A), rat_vector(b), rat_vector(c)
    x = rat_vector(x0)
    n = len(x)
    if any(dot(A[i], x) > b[i] for i in range(len(A))):
        raise ValueError("starting point is infeasible")
    while True:
        T = tight_rows(A, b, x)
        rows = [A[i] for i in T]
        if rank(rows) == n:
            return tuple(x)
        d = rational_kernel_basis(rows, n)[0]
        d = [Fraction(v) for v in d]
        if dot(c, d) > 0:
            d = [-v for v in d]
        step = _ratio(A, b, x, d)
        if step is None:
            if dot(c, d) < 0:
                raise ValueError("objective unbounded along a ray")
            d = [-v for v in d]
            step = _ratio(A, b, x, d)
            if step is None:
                raise ValueError("polyhedron contains a line; no vertex exists")
        x = [xi + step * di for xi, di in zip(x, d)]


def _ratio(A, b, x, d) -> Optional[Fraction]:
    best = None
    for i in range(len(A)):
        ad = dot(A[i], d)
        if ad > 0:
            t = (b[i] - dot(A[i], x)) / ad
            if best is None or t < best:
                best = t
    return best
