"""Fractionality and support-size tooling.

Logarithmic bounds are never decided in floating point: integer ceilings
of logs use exact power comparisons, and the ln-based support bounds are
reported as certified rational upper enclosures computed with interval
arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from mpmath import iv
from mpmath.libmp import to_rational

from .adicfeas import lfp_solve_std
from .exactnum import AdicClass, nth_prime, padic_valuation, prime_factors
from .linalg import (
    bareiss_det, forward_substitute, gcd_minors, gcd_of, hermite_normal_form, int_matrix, int_vector,
    kernel_basis, matmul, solve_in_adic, solve_or_farkas, transpose,
)
from .lpcore import solve_lp

IV_PREC = 96


class _prec:
    def __enter__(self):
        self.saved = iv.prec
        iv.prec = IV_PREC

    def __exit__(self, *exc):
        iv.prec = self.saved


# -- fractionality --------------------------------------------------------------

def kappa_equations(A, b, p: int) -> Optional[int]:
    """Least k such that Ax = b has a 1/p^k-integral solution, via the HNF.

    None if there is no rational solution or no p-adic one.
    """
    A, b = int_matrix(A), int_vector(b)
    n = len(A[0]) if A else 0
    if not solve_or_farkas(A, b, n).solved:
        return None
    hnf = hermite_normal_form(A, n)
    z = forward_substitute(hnf.B, [b[i] for i in hnf.kept])
    kappa = 0
    for zi in z:
        if zi == 0:
            continue
        if any(q != p for q in prime_factors(zi.denominator)):
            return None
        kappa = max(kappa, -padic_valuation(zi, p))
    return kappa


def xi_upper_bound(n: int, a_norm: int, p: int) -> int:
    """ceil(log_p n + (2n+1) log_p(a sqrt(n+1))), as the least k with
    p^(2k) >= n^2 (a^2 (n+1))^(2n+1)."""
    if n < 1 or a_norm < 1:
        raise ValueError("need n >= 1 and a_norm >= 1")
    target = n * n * (a_norm * a_norm * (n + 1)) ** (2 * n + 1)
    k, pk2 = 0, 1
    while pk2 < target:
        k += 1
        pk2 *= p * p
    return k


def _box(A, b, n):
    """Exact per-coordinate bounds of {x : Ax <= b}; None if empty."""
    lo, hi = [], []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        top = solve_lp(A, b, e, strict=False)
        if top.status == "infeasible":
            return None
        if top.status == "unbounded":
            raise ValueError("region is unbounded")
        bot = solve_lp(A, b, [-v for v in e], strict=False)
        if bot.status == "unbounded":
            raise ValueError("region is unbounded")
        hi.append(top.x[j])
        lo.append(bot.x[j])
    return lo, hi


def integer_points(A, rhs, lo: Sequence[int], hi: Sequence[int], first_only: bool = False) -> np.ndarray:
    """All z in Z^n with lo <= z <= hi and A z <= rhs.

    The last coordinate is not enumerated; its feasible interval is computed
    for every grid point of the others.
    """
    A = np.array(int_matrix(A), dtype=object).reshape(len(A), len(lo))
    n = len(lo)
    if n == 0:
        ok = all(r >= 0 for r in rhs)
        return np.zeros((1 if ok else 0, 0), dtype=np.int64)
    rhs = np.array([int(r) for r in rhs], dtype=object)
    ranges = [np.arange(int(lo[j]), int(hi[j]) + 1, dtype=np.int64) for j in range(n - 1)]
    if any(len(r) == 0 for r in ranges) or hi[-1] < lo[-1]:
        return np.zeros((0, n), dtype=np.int64)
    A64 = A.astype(np.int64)
    rhs64 = rhs.astype(np.int64)
    a_last = A64[:, n - 1]
    found = []
    first_vals = ranges[0] if ranges else np.array([0])
    rest = ranges[1:] if ranges else []
    for v0 in first_vals:
        if n - 1 >= 1:
            grids = np.meshgrid(np.array([v0]), *rest, indexing="ij") if rest else [np.array([v0])]
            pts = np.stack([g.ravel() for g in grids], axis=1)
        else:
            pts = np.zeros((1, 0), dtype=np.int64)
        resid = rhs64[None, :] - pts @ A64[:, : n - 1].T if n > 1 else np.tile(rhs64, (1, 1))
        low = np.full(len(pts), int(lo[-1]), dtype=np.int64)
        high = np.full(len(pts), int(hi[-1]), dtype=np.int64)
        ok = np.ones(len(pts), dtype=bool)
        for i in range(len(a_last)):
            a = int(a_last[i])
            if a > 0:
                high = np.minimum(high, np.floor_divide(resid[:, i], a))
            elif a < 0:
                low = np.maximum(low, -np.floor_divide(resid[:, i], -a))
            else:
                ok &= resid[:, i] >= 0
        ok &= low <= high
        if not ok.any():
            continue
        for idx in np.nonzero(ok)[0]:
            for last in range(int(low[idx]), int(high[idx]) + 1):
                found.append(list(pts[idx]) + [last])
                if first_only:
                    return np.array(found, dtype=np.int64)
        if n == 1:
            break
    return np.array(found, dtype=np.int64).reshape(len(found), n)


def xi_exact_bruteforce(A, b, p: int, k_max: int) -> Optional[int]:
    """Least k <= k_max with an integral z satisfying A z <= p^k b.

    The region must be bounded; None if no k <= k_max works.
    """
    A, b = int_matrix(A), int_vector(b)
    n = len(A[0]) if A else 0
    box = _box(A, b, n)
    if box is None:
        return None
    lo, hi = box
    for k in range(k_max + 1):
        s = p**k
        zlo = [math.ceil(v * s) for v in lo]
        zhi = [math.floor(v * s) for v in hi]
        if len(integer_points(A, [s * v for v in b], zlo, zhi, first_only=True)):
            return k
    return None


def plp_k_optimum(A, b, c, p: int, k: int) -> Optional[Fraction]:
    """max{c^T x : Ax <= b, x 1/p^k-integral} by enumeration (bounded region)."""
    A, b, c = int_matrix(A), int_vector(b), int_vector(c)
    n = len(c)
    box = _box(A, b, n)
    if box is None:
        return None
    s = p**k
    pts = integer_points(A, [s * v for v in b], [math.ceil(v * s) for v in box[0]], [math.floor(v * s) for v in box[1]])
    if not len(pts):
        return None
    best = max(sum(int(ci) * int(zi) for ci, zi in zip(c, z)) for z in pts)
    return Fraction(best, s)


@dataclass(frozen=True)
class FractionalityReport:
    kappa: Optional[int]
    xi_bound: int
    xi_exact: Optional[int] = None


def fractionality_report(A, b, p: int, k_max: Optional[int] = None) -> FractionalityReport:
    """kappa of the affine hull, the xi bound and optionally the exact xi(A, b)."""
    A, b = int_matrix(A), int_vector(b)
    n = len(A[0]) if A else 0
    out = solve_lp(A, b, [0] * n)
    kappa = None
    if out.status == "optimal":
        eq = [i for i, yi in enumerate(out.y) if yi > 0]
        kappa = kappa_equations([A[i] for i in eq], [b[i] for i in eq], p) if eq else 0
    a_norm = max((abs(v) for row in A for v in row), default=1) or 1
    bound = xi_upper_bound(max(n, 1), a_norm, p)
    exact = xi_exact_bruteforce(A, b, p, k_max) if k_max is not None else None
    return FractionalityReport(kappa, bound, exact)


# -- support-size bounds ------------------------------------------------------------

def _log2_exact(v: int) -> Optional[int]:
    return v.bit_length() - 1 if v > 0 and v & (v - 1) == 0 else None


def _iv_log2(v: int):
    e = _log2_exact(v)
    return iv.mpf(e) if e is not None else iv.log(iv.mpf(v)) / iv.log(iv.mpf(2))


def _iv_ln(v: int):
    return iv.mpf(0) if v == 1 else iv.log(iv.mpf(v))


def _upper(x) -> Fraction:
    """Rational upper endpoint of an interval (exact if the interval is a point)."""
    return Fraction(*map(int, to_rational(x._mpi_[1])))


@dataclass(frozen=True)
class SupportReport:
    m: int
    n: int
    a_norm: int
    k: int
    bound_ls: Optional[Fraction]
    bound_lp_general: Fraction
    bound_lp_k0: Optional[Fraction]
    bound_dyadic: Optional[Fraction]
    bound_01: Optional[Fraction]
    min_support: Optional[int] = None

    def applicable_bounds(self, nonneg: bool) -> list[Fraction]:
        """Bounds that constrain a minimal-support solution of this kind of instance."""
        if not nonneg:
            return [v for v in (self.bound_ls,) if v is not None]
        vals = [self.bound_lp_general, self.bound_dyadic, self.bound_01]
        return [v for v in vals if v is not None]


def support_bounds(A, k: int, m: Optional[int] = None) -> SupportReport:
    """Evaluate the closed-form support-size bounds for [p_k]-adic programs.

    ``k`` selects p_k (k = 0 is the integers, k = 1 the dyadic rationals).
    """
    A = int_matrix(A)
    m = len(A) if m is None else m
    n = len(A[0]) if A else 0
    a = max((abs(v) for row in A for v in row), default=0)
    if a == 0 or m == 0:
        raise ValueError("A must be nonzero")
    with _prec():
        M = iv.mpf(m)
        p1 = nth_prime(k + 1)
        general = M * (1 + _iv_ln(m * a * a) / (2 * _iv_ln(p1) - 1))
        bound_general = _upper(general)
        bound_k0 = bound_01 = bound_dyadic = None
        if k == 0:
            la = _iv_log2(a)
            k0 = M * (1 + la + _iv_log2(m * a) * (1 + la) / (1 + 2 * la))
            bound_k0 = _upper(k0)
            if a == 1:
                bound_01 = _upper(M * (1 + _iv_log2(m)))
        if k == 1:
            bound_dyadic = _upper(M * (1 + _iv_ln(m * a * a) / (2 * _iv_ln(3) - 1)))
        bound_ls = _linear_system_bound(m, a)
    return SupportReport(m, n, a, k, bound_ls, bound_general, bound_k0, bound_dyadic, bound_01)


def _linear_system_bound(m: int, a: int) -> Optional[Fraction]:
    """Support bound for [p_k]-adic linear systems.

    With y = ln(sqrt(m) a) >= e, r = floor(n'/m) satisfies either r < 1 + 2e
    or r <= 1 + (2(1+e)/e) y / ln y; hence n' <= m (max(6, floor R) + 1) - 1.
    Returns None when y < e (the estimate does not apply).
    """
    y = iv.log(iv.sqrt(iv.mpf(m)) * a)
    e = iv.e
    if not (y >= e):
        # an interval comparison is only True when it holds for every point
        return None
    R = 1 + (2 * (1 + e) / e) * y / iv.log(y)
    r_max = max(6, math.floor(_upper(R)))
    return Fraction(m * (r_max + 1) - 1)


# -- examples --------------------------------------------------------------------

@dataclass(frozen=True)
class ExampleSpec:
    kind: str  # eg-5.1 | eg-5.1-resigned | eg-5.3 | kronecker-extended
    n: int
    k: int = 1
    m: int = 1
    base: str = "eg-5.3"
    primes: Optional[tuple] = None


@dataclass(frozen=True)
class ExampleInstance:
    A: tuple
    b: tuple
    w: Optional[tuple]
    L: AdicClass
    nonneg: bool


def _eg51_row(n: int, k: int, primes=None) -> list[int]:
    qs = list(primes) if primes else [nth_prime(k + i) for i in range(1, n + 1)]
    if len(qs) != n or len(set(qs)) != n or min(qs) < nth_prime(k + 1):
        raise ValueError("need n distinct primes, all at least p_(k+1)")
    Q = math.prod(qs)
    return [Q // q for q in qs]


def gen_example(spec: ExampleSpec) -> ExampleInstance:
    if spec.n < 1 or spec.m < 1 or spec.n * spec.m > 64:
        raise ValueError("parameters outside desk scale")
    if spec.kind == "kronecker-extended":
        base = gen_example(ExampleSpec(spec.base, spec.n, spec.k, 1, primes=spec.primes))
        row = base.A[0]
        m = spec.m
        A = [[0] * (len(row) * m) for _ in range(m)]
        for r in range(m):
            for j, a in enumerate(row):
                A[r][j * m + r] = a
        w = None if base.w is None else tuple(v for v in base.w for _ in range(m))
        return ExampleInstance(tuple(map(tuple, A)), tuple([base.b[0]] * m), w, base.L, base.nonneg)
    if spec.kind == "eg-5.1":
        row = _eg51_row(spec.n, spec.k, spec.primes)
        return ExampleInstance((tuple(row),), (1,), None, AdicClass.bracket_k(spec.k), False)
    if spec.kind == "eg-5.1-resigned":
        row = _eg51_row(spec.n, spec.k, spec.primes)
        sol = solve_in_adic([row], [1], AdicClass.integers())
        x = sol.x
        signed = tuple(-a if xi < 0 else a for a, xi in zip(row, x))
        return ExampleInstance((signed,), (1,), tuple([0] * spec.n), AdicClass.bracket_k(spec.k), True)
    if spec.kind == "eg-5.3":
        row = tuple(2**i for i in range(spec.n))
        return ExampleInstance((row,), (2**spec.n - 1,), tuple([1] * spec.n), AdicClass.integers(), True)
    raise ValueError(f"unknown example kind {spec.kind!r}")


# -- minimal support ------------------------------------------------------------------

def _columns(A, S):
    return [[row[j] for j in S] for row in A]


def _nonneg_integer_solutions(A, b, n):
    """All x in Z^n_{>=0} with A x = b (bounded region required)."""
    rows = [list(r) for r in A] + [[-v for v in r] for r in A] + [[-1 if k == j else 0 for k in range(n)] for j in range(n)]
    rhs = list(b) + [-v for v in b] + [0] * n
    box = _box(rows, rhs, n)
    if box is None:
        return np.zeros((0, n), dtype=np.int64)
    lo = [math.ceil(v) for v in box[0]]
    hi = [math.floor(v) for v in box[1]]
    return integer_points(rows, rhs, lo, hi)


def min_support_bruteforce(A, b, w=None, L: Optional[AdicClass] = None, nonneg: bool = True, n_max: int = 8) -> Optional[int]:
    """Least |supp(x)| over solutions (optimal ones when w is given) in L.

    Sign-free systems are tested with the HNF-based solver; nonnegative ones
    with the standard-form feasibility algorithm (dense L) or enumeration
    (integers).  When w is given the problem is min w^T x.  None if there is
    no (optimal) solution.
    """
    A, b = int_matrix(A), int_vector(b)
    n = len(A[0]) if A else 0
    L = L or AdicClass.dyadic()
    if n > n_max:
        raise ValueError(f"n = {n} exceeds n_max = {n_max}")
    if not nonneg:
        if w is not None:
            raise ValueError("optimality is only supported with x >= 0")
        for size in range(n + 1):
            for S in itertools.combinations(range(n), size):
                if solve_in_adic(_columns(A, S), b, L, len(S)).kind == "solution":
                    return size
        return None
    if not L.is_dense:
        pts = _nonneg_integer_solutions(A, b, n)
        if not len(pts):
            return None
        if w is not None:
            vals = pts @ np.array(int_vector(w), dtype=np.int64)
            pts = pts[vals == vals.min()]
        return int(min(np.count_nonzero(z) for z in pts))
    extra_row, extra_rhs = None, None
    if w is not None:
        w = int_vector(w)
        rows = [list(r) for r in A] + [[-v for v in r] for r in A] + [[-1 if k == j else 0 for k in range(n)] for j in range(n)]
        rhs = list(b) + [-v for v in b] + [0] * n
        out = solve_lp(rows, rhs, [-v for v in w], strict=False)
        if out.status != "optimal":
            return None
        v = sum((wi * xi for wi, xi in zip(w, out.x)), Fraction(0))
        extra_row = [v.denominator * wi for wi in w]
        extra_rhs = v.numerator
    for size in range(n + 1):
        for S in itertools.combinations(range(n), size):
            As = _columns(A, S)
            bs = list(b)
            if extra_row is not None:
                As = As + [[extra_row[j] for j in S]]
                bs = bs + [extra_rhs]
            if lfp_solve_std(As, bs, L, len(S)).kind == "point":
                return size
    return None


# -- inequality checkers --------------------------------------------------------------

def _gram_det(A) -> int:
    return bareiss_det(matmul(A, transpose(A)))


def _adjugate_solve_setup(A, piv):
    """det(B) and adj(B) for the column submatrix B = A[:, piv]."""
    m = len(A)
    B = [[A[i][j] for j in piv] for i in range(m)]
    d = bareiss_det(B)
    adj = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            minor = [[B[r][c] for c in range(m) if c != j] for r in range(m) if r != i]
            adj[j][i] = (-1) ** (i + j) * bareiss_det(minor)
    return d, adj


def min_kernel_inf_norm(A, t_max: int = 64) -> Optional[int]:
    """Least infinity norm of a nonzero integral kernel vector (enumeration)."""
    A = int_matrix(A)
    m, n = len(A), len(A[0])
    if n <= m:
        return None
    hnf = hermite_normal_form(A)
    if hnf.removed:
        raise ValueError("matrix is rank deficient")
    piv = next(S for S in itertools.combinations(range(n), m) if bareiss_det([[A[i][j] for j in S] for i in range(m)]) != 0)
    free = [j for j in range(n) if j not in piv]
    d, adj = _adjugate_solve_setup(A, piv)
    AF = np.array([[A[i][j] for j in free] for i in range(m)], dtype=object)
    adj = np.array(adj, dtype=object)
    for t in range(1, t_max + 1):
        grid = np.array(list(itertools.product(range(-t, t + 1), repeat=len(free))), dtype=object)
        grid = grid[np.any(grid != 0, axis=1)]
        # x_piv = -B^{-1} A_F x_F = -adj (A_F x_F) / d
        num = -(grid @ AF.T) @ adj.T
        ok = np.all(num % d == 0, axis=1)
        xp = num[ok] // d
        if len(xp) and np.any(np.all(np.abs(xp) <= t, axis=1)):
            return t
    return None


@dataclass(frozen=True)
class SiegelResult:
    holds: bool
    det_gram: int
    gcd: int
    ell: int
    rhs_squared: int


def siegel_check(A, ell: Optional[int] = None) -> SiegelResult:
    """det(A A^T) >= (ell^(n-m) gcd(A))^2, the squared form of Siegel's bound."""
    A = int_matrix(A)
    m, n = len(A), len(A[0])
    g = gcd_minors(A)
    if ell is None:
        ell = min_kernel_inf_norm(A) if n > m else 1
    dg = _gram_det(A)
    rhs = (ell ** (n - m) * g) ** 2
    return SiegelResult(dg >= rhs, dg, g, ell, rhs)


def _lemma_bound(n: int, m: int, k: int, shift: int) -> int:
    P = lambda i: nth_prime(k + i + shift)
    if n < 2 * m:
        return P(1) ** (n - m)
    s = n // m
    out = 1
    for i in range(1, s):
        out *= P(i) ** m
    return out * P(s) ** (n - m * s)


@dataclass(frozen=True)
class DetBoundResult:
    holds: bool
    hypothesis: bool
    gcd: int
    bound_all: int
    bound_witness: int
    min_ratio: Optional[Fraction]
    witness: Optional[tuple]


def large_prime_hypothesis(A, k: int) -> bool:
    """Every nonzero entry of every integral kernel vector has a prime factor
    >= p_(k+1); checked through the gcd of each row of a kernel basis."""
    basis = kernel_basis(A)
    n = len(A[0])
    bound = nth_prime(k + 1)
    for i in range(n):
        g = gcd_of(d[i] for d in basis)
        if g == 0:
            continue
        if not any(q >= bound for q in prime_factors(g)):
            return False
    return True


def det_lower_bound_check(A, k: int) -> DetBoundResult:
    """Check both minor lower bounds by exhaustive enumeration.

    ``holds`` is the implication: if the large-prime hypothesis holds then
    every nonzero order-m minor over gcd(A) reaches the first bound and some
    minor reaches the second.
    """
    A = int_matrix(A)
    m, n = len(A), len(A[0])
    g = gcd_minors(A)
    lb1 = _lemma_bound(n, m, k, 0)
    lb2 = _lemma_bound(n, m, k, 1)
    hyp = large_prime_hypothesis(A, k)
    min_ratio, witness, all_ok = None, None, True
    for S in itertools.combinations(range(n), m):
        d = abs(bareiss_det([[A[i][j] for j in S] for i in range(m)]))
        if d == 0:
            continue
        ratio = Fraction(d, g)
        if min_ratio is None or ratio < min_ratio:
            min_ratio = ratio
        if ratio < lb1:
            all_ok = False
        if witness is None and ratio >= lb2:
            witness = S
    ok = all_ok and witness is not None
    return DetBoundResult((not hyp) or ok, hyp, g, lb1, lb2, min_ratio, witness)


def eg53_ratio_check(n: int, m: int = 1) -> tuple[bool, int, int]:
    """For B = (1 2 ... 2^(n-1)) (x) I_m: 4^((n-1)m) <= det(BB^T)/gcd(B)^2 < (4/3)^m 4^((n-1)m).

    Returns (holds, det(BB^T), gcd(B)).
    """
    inst = gen_example(ExampleSpec("kronecker-extended", n, 0, m, base="eg-5.3"))
    B = [list(r) for r in inst.A]
    g = gcd_minors(B)
    dg = _gram_det(B)
    ratio = Fraction(dg, g * g)
    low = Fraction(4) ** ((n - 1) * m)
    return (low <= ratio < Fraction(4, 3) ** m * low, dg, g)
