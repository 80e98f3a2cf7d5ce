"""Exact rational and integer linear algebra.

Matrices are lists of rows.  Functions that may receive a matrix with no
rows take the column count explicitly where it cannot be inferred.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactnum import AdicClass, as_fraction, format_rational, is_member, lcm_of_denominators, parse_rational

ZERO = Fraction(0)
ONE = Fraction(1)


# -- basic helpers ------------------------------------------------------------

def rat_vector(v) -> list[Fraction]:
    return [as_fraction(x) for x in v]


def rat_matrix(A) -> list[list[Fraction]]:
    return [rat_vector(row) for row in A]


def int_matrix(A) -> list[list[int]]:
    out = []
    for row in A:
        r = []
        for x in row:
            q = as_fraction(x)
            if q.denominator != 1:
                raise ValueError(f"non-integral entry {q}")
            r.append(q.numerator)
        out.append(r)
    return out


def int_vector(v) -> list[int]:
    return int_matrix([v])[0] if len(v) else []


def num_cols(A, default: int = 0) -> int:
    return len(A[0]) if A else default


def check_shape(A, n: Optional[int] = None) -> int:
    cols = num_cols(A, n if n is not None else 0)
    for row in A:
        if len(row) != cols:
            raise ValueError("ragged matrix")
    if n is not None and A and cols != n:
        raise ValueError(f"expected {n} columns, got {cols}")
    return cols


def dot(u, v):
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return sum((a * b for a, b in zip(u, v)), ZERO)


def matvec(A, x) -> list:
    return [dot(row, x) for row in A]


def rmatvec(A, y, n: Optional[int] = None) -> list:
    """A^T y."""
    if len(A) != len(y):
        raise ValueError("dimension mismatch")
    n = num_cols(A, n or 0) if n is None or A else n
    out = [ZERO] * n
    for row, yi in zip(A, y):
        if yi:
            for j, a in enumerate(row):
                if a:
                    out[j] += a * yi
    return out


def transpose(A, n: Optional[int] = None) -> list[list]:
    n = num_cols(A, n or 0)
    return [[row[j] for row in A] for j in range(n)]


def matmul(A, B, inner: Optional[int] = None) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def support(v) -> set[int]:
    return {i for i, x in enumerate(v) if x != 0}


def scale_to_integral(v) -> list[int]:
    """Multiply a rational vector by the lcm of its denominators."""
    q = lcm_of_denominators(v)
    return [int(as_fraction(x) * q) for x in v]


# -- fraction-free elimination -----------------------------------------------

def bareiss_det(M) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in M]
    if any(len(row) != n for row in A):
        raise ValueError("matrix is not square")
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rank(M) -> int:
    """Rank of a rational matrix, via fraction-free elimination on a scaled copy."""
    A = [scale_to_integral(row) for row in M]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    r, prev = 0, 1
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                A[i][j] = (A[i][j] * A[r][c] - A[i][c] * A[r][j]) // prev
            A[i][c] = 0
        prev = A[r][c]
        r += 1
        if r == m:
            break
    return r


# -- elimination: solve or certify ---------------------------------------------

@dataclass(frozen=True)
class SolveResult:
    """Either ``x`` with A x = b or ``farkas`` u with A^T u = 0, b^T u != 0."""

    x: Optional[tuple] = None
    farkas: Optional[tuple] = None

    @property
    def solved(self) -> bool:
        return self.x is not None


@dataclass
class _Echelon:
    n: int
    rows: list = field(default_factory=list)    # (coeffs, rhs, combo, pivot col)
    kept: list = field(default_factory=list)
    dependent: list = field(default_factory=list)
    farkas: Optional[list] = None


def _echelon(A, b, n: int) -> _Echelon:
    """Incremental elimination keeping the first maximal independent row set.

    Every stored row carries the combination of original rows producing it,
    so an inconsistent dependent row yields a Farkas vector directly.
    """
    m = len(A)
    E = _Echelon(n)
    for i in range(m):
        r = rat_vector(A[i])
        rhs = as_fraction(b[i])
        combo = [ZERO] * m
        combo[i] = ONE
        for coeffs, prhs, pcombo, pc in E.rows:
            f = r[pc]
            if f:
                for j in range(n):
                    if coeffs[j]:
                        r[j] -= f * coeffs[j]
                rhs -= f * prhs
                for j in range(m):
                    if pcombo[j]:
                        combo[j] -= f * pcombo[j]
        pc = next((j for j in range(n) if r[j] != 0), None)
        if pc is None:
            E.dependent.append(i)
            if rhs != 0 and E.farkas is None:
                E.farkas = combo
            continue
        inv = 1 / r[pc]
        E.rows.append(([x * inv for x in r], rhs * inv, [x * inv for x in combo], pc))
        E.kept.append(i)
    return E


def independent_rows(A, n: Optional[int] = None) -> list[int]:
    """Indices of the first maximal linearly independent set of rows."""
    n = num_cols(A, n or 0)
    return _echelon(A, [0] * len(A), n).kept


def solve_or_farkas(A, b, n: Optional[int] = None) -> SolveResult:
    if len(A) != len(b):
        raise ValueError(f"dimension mismatch: {len(A)} rows, rhs of length {len(b)}")
    n = check_shape(A, n if not A else None) if A else (n or 0)
    E = _echelon(A, b, n)
    if E.farkas is not None:
        return SolveResult(farkas=tuple(E.farkas))
    x = [ZERO] * n
    for coeffs, rhs, _, pc in reversed(E.rows):
        x[pc] = rhs - sum((coeffs[j] * x[j] for j in range(n) if j != pc and coeffs[j]), ZERO)
    return SolveResult(x=tuple(x))


# -- Hermite normal form --------------------------------------------------------

def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


@dataclass(frozen=True)
class HnfResult:
    """A_kept U = (B 0) with U unimodular and B lower triangular.

    ``kept`` lists the rows of the input that form A_kept; ``removed`` the
    linearly dependent rows dropped beforehand.
    """

    B: tuple
    U: tuple
    kept: tuple
    removed: tuple
    n: int

    @property
    def rank(self) -> int:
        return len(self.B)

    @property
    def zero_width(self) -> int:
        return self.n - len(self.B)

    @property
    def H(self) -> list[list[int]]:
        """The full m' x n matrix (B 0)."""
        r = len(self.B)
        return [list(self.B[i]) + [0] * (self.n - r) for i in range(r)]

    def det_B(self) -> int:
        out = 1
        for i in range(len(self.B)):
            out *= self.B[i][i]
        return out


def _col_combine(M, i, j, a, b, c, d):
    """(col_i, col_j) <- (a col_i + c col_j, b col_i + d col_j)."""
    for row in M:
        x, y = row[i], row[j]
        row[i] = a * x + c * y
        row[j] = b * x + d * y


def hermite_normal_form(A, n: Optional[int] = None) -> HnfResult:
    """Column-style HNF with the unimodular transform.

    Each row is cleared to the right of the diagonal by extended-gcd column
    operations, then the entries left of its diagonal are reduced into
    [0, pivot).  Reducing the processed block after every row keeps entries
    bounded in the Kannan-Bachem manner.
    """
    A = int_matrix(A)
    n = check_shape(A, None) if A else (n or 0)
    kept = independent_rows(A, n)
    removed = tuple(i for i in range(len(A)) if i not in set(kept))
    H = [list(A[i]) for i in kept]
    U = identity(n)
    m = len(H)
    for i in range(m):
        for j in range(i + 1, n):
            b = H[i][j]
            if b == 0:
                continue
            a = H[i][i]
            g, s, t = xgcd(a, b)
            # [[s, -b/g], [t, a/g]] has determinant 1
            _col_combine(H, i, j, s, -(b // g), t, a // g)
            _col_combine(U, i, j, s, -(b // g), t, a // g)
        if H[i][i] == 0:
            raise AssertionError("row dependence missed by elimination")
        if H[i][i] < 0:
            for M in (H, U):
                for row in M:
                    row[i] = -row[i]
        piv = H[i][i]
        for k in range(i):
            q = H[i][k] // piv
            if q:
                for M in (H, U):
                    for row in M:
                        row[k] -= q * row[i]
    B = tuple(tuple(H[i][:m]) for i in range(m))
    return HnfResult(B=B, U=tuple(map(tuple, U)), kept=tuple(kept), removed=removed, n=n)


def gcd_minors(A) -> int:
    """gcd of all order-m minors of a full-row-rank integer matrix."""
    A = int_matrix(A)
    res = hermite_normal_form(A)
    if res.removed:
        raise ValueError("matrix is rank deficient")
    return abs(res.det_B())


def kernel_basis(A, n: Optional[int] = None) -> list[list[int]]:
    """Integral lattice basis of ker(A) from the zero block of the HNF transform."""
    res = hermite_normal_form(A, n)
    r = res.rank
    return [[res.U[i][j] for i in range(res.n)] for j in range(r, res.n)]


def rational_kernel_basis(M, n: Optional[int] = None) -> list[list[int]]:
    """Kernel basis of a rational matrix (rows scaled to integers first)."""
    return kernel_basis([scale_to_integral(row) for row in M], n)


def forward_substitute(B, b) -> list[Fraction]:
    """Solve B z = b for lower-triangular nonsingular B."""
    m = len(B)
    z = [ZERO] * m
    for i in range(m):
        s = as_fraction(b[i]) - sum((B[i][k] * z[k] for k in range(i)), ZERO)
        z[i] = s / B[i][i]
    return z


def back_substitute_transpose(B, e) -> list[Fraction]:
    """Solve B^T u = e for lower-triangular nonsingular B."""
    m = len(B)
    u = [ZERO] * m
    for i in reversed(range(m)):
        s = as_fraction(e[i]) - sum((B[k][i] * u[k] for k in range(i + 1, m)), ZERO)
        u[i] = s / B[i][i]
    return u


# -- solving over L --------------------------------------------------------------------

@dataclass(frozen=True)
class AdicSolveResult:
    """One of: ``solution`` x in L^n, ``farkas`` u, or ``adic`` u with
    A^T u integral and b^T u outside L."""

    kind: str
    x: Optional[tuple] = None
    u: Optional[tuple] = None


def solve_in_adic(A, b, L: AdicClass, n: Optional[int] = None) -> AdicSolveResult:
    A = int_matrix(A)
    b = int_vector(b)
    n = check_shape(A, None) if A else (n or 0)
    if len(b) != len(A):
        raise ValueError("dimension mismatch")
    res = solve_or_farkas(A, b, n)
    if not res.solved:
        return AdicSolveResult("farkas", u=res.farkas)
    hnf = hermite_normal_form(A, n)
    bk = [b[i] for i in hnf.kept]
    z = forward_substitute(hnf.B, bk)
    for i, zi in enumerate(z):
        if not is_member(zi, L):
            e = [ZERO] * len(z)
            e[i] = ONE
            uk = back_substitute_transpose(hnf.B, e)
            u = [ZERO] * len(A)
            for pos, row in enumerate(hnf.kept):
                u[row] = uk[pos]
            return AdicSolveResult("adic", u=tuple(u))
    full = z + [ZERO] * (n - len(z))
    x = tuple(sum((hnf.U[i][j] * full[j] for j in range(n) if full[j]), ZERO) for i in range(n))
    return AdicSolveResult("solution", x=x)


# -- text format -------------------------------------------------------------------

def format_matrix(A, n: Optional[int] = None) -> str:
    n = num_cols(A, n or 0)
    lines = [f"{len(A)} {n}"]
    lines += [" ".join(format_rational(x) for x in row) for row in A]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> list[list[Fraction]]:
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("missing 'm n' header")
    m, n = int(tokens[0]), int(tokens[1])
    if m < 0 or n < 0:
        raise ValueError("negative dimension")
    body = tokens[2:]
    if len(body) != m * n:
        raise ValueError(f"expected {m * n} entries, found {len(body)}")
    vals = [parse_rational(t) for t in body]
    return [vals[i * n:(i + 1) * n] for i in range(m)]


def is_unimodular(U) -> bool:
    return abs(bareiss_det(U)) == 1


def gcd_of(values) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, int(v))
    return g
