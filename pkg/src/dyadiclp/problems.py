"""Plain data types shared by the solvers and the verifier.

Kept free of solver imports so that the verifier's trusted base stays small.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import AdicClass, as_fraction


def _int(q) -> int:
    q = as_fraction(q)
    if q.denominator != 1:
        raise ValueError(f"non-integral entry {q}")
    return q.numerator


def int_vector(v) -> list[int]:
    return [_int(q) for q in v]


def int_matrix(A) -> list[list[int]]:
    return [int_vector(row) for row in A]


@dataclass(frozen=True)
class LlpInstance:
    """sup{c^T x : A x <= b, x in L^n} with integral data."""

    A: tuple
    b: tuple
    c: tuple
    L: AdicClass
    n: int

    @classmethod
    def make(cls, A, b, c, L: AdicClass) -> "LlpInstance":
        c = int_vector(c)
        n = len(c)
        A = int_matrix(A)
        if any(len(row) != n for row in A):
            raise ValueError("row length does not match objective length")
        b = int_vector(b)
        if len(b) != len(A):
            raise ValueError("rhs length does not match row count")
        return cls(tuple(map(tuple, A)), tuple(b), tuple(c), L, n)

    @classmethod
    def from_constraints(cls, c, rows, L: AdicClass, nonneg=()) -> "LlpInstance":
        """Compile rows (a, sense, beta) with sense in {"<=", "=", ">="} and
        sign constraints x_j >= 0 into canonical A x <= b.

        Equalities become a <= / >= pair (in that order), then the sign rows
        are appended in the order given.
        """
        n = len(c)
        A, b = [], []
        for a, sense, beta in rows:
            a = list(a)
            if len(a) != n:
                raise ValueError("row length does not match objective length")
            if sense in ("<=", "="):
                A.append(a)
                b.append(beta)
            if sense in (">=", "="):
                A.append([-v for v in a])
                b.append(-beta)
            if sense not in ("<=", "=", ">="):
                raise ValueError(f"unknown sense {sense!r}")
        for j in nonneg:
            if not 0 <= j < n:
                raise ValueError(f"variable index {j} out of range")
            A.append([-1 if k == j else 0 for k in range(n)])
            b.append(0)
        return cls.make(A, b, c, L)

    @property
    def m(self) -> int:
        return len(self.A)


@dataclass(frozen=True)
class LlpOutcome:
    """Outcome of an L-linear program.

    tag      fields
    o1-real  u (real infeasibility)
    o1-adic  y_bar, u_bar (L-infeasibility)
    o2       x_f, r (unboundedness)
    o3       x_d, y_star (optimum attained)
    o4       x_star, y_star, u_bar, x_eps, eps (supremum not attained)
    """

    tag: str
    u: Optional[tuple] = None
    y_bar: Optional[tuple] = None
    u_bar: Optional[tuple] = None
    x_f: Optional[tuple] = None
    r: Optional[tuple] = None
    x_d: Optional[tuple] = None
    y_star: Optional[tuple] = None
    x_star: Optional[tuple] = None
    x_eps: Optional[tuple] = None
    eps: Optional[Fraction] = None


TAGS = ("o1-real", "o1-adic", "o2", "o3", "o4")
