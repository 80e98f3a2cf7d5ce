"""Exact scalars, adic number classes, valuations and encoding sizes.

``Rational`` is :class:`fractions.Fraction`: always in lowest terms with a
positive denominator, and ``0`` is ``0/1``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional

Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``[sign]num[/den]`` in base 10. No whitespace, no decimals."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        # floats would silently lose exactness
        raise TypeError("floats are not accepted; pass an int, Fraction or string")
    return Fraction(value.numerator, value.denominator)


# -- primes -----------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def primes_up_to(limit: int) -> tuple[int, ...]:
    """Sieve of Eratosthenes."""
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def nth_prime(k: int) -> int:
    """The k-th prime, 1-indexed (p_1 = 2). ``nth_prime(0)`` is 1 by convention."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 1
    limit = 16
    while True:
        ps = primes_up_to(limit)
        if len(ps) >= k:
            return ps[k - 1]
        limit *= 2


def prime_index(p: int) -> int:
    """Inverse of :func:`nth_prime`."""
    if p == 1:
        return 0
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return len(primes_up_to(p))


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n| by trial division."""
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# -- adic classes -----------------------------------------------------------

class AdicKind(enum.Enum):
    PADIC = "p-adic"
    BRACKET = "bracket-p-adic"
    INTEGERS = "integers"


@dataclass(frozen=True)
class AdicClass:
    """The number set L: p-adic, [p]-adic or the integers.

    ``oracle`` optionally replaces the built-in membership test (it must
    describe a group containing every p-adic number for the given p).
    """

    kind: AdicKind
    p: int = 1
    oracle: Optional[Callable[[Fraction], bool]] = None

    def __post_init__(self):
        if not isinstance(self.kind, AdicKind):
            object.__setattr__(self, "kind", AdicKind(self.kind))
        if self.kind is AdicKind.INTEGERS:
            if self.p != 1:
                raise ValueError("integers take p=1")
        elif not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def dyadic(cls) -> "AdicClass":
        return cls(AdicKind.PADIC, 2)

    @classmethod
    def padic(cls, p: int) -> "AdicClass":
        return cls(AdicKind.PADIC, p)

    @classmethod
    def bracket(cls, p: int) -> "AdicClass":
        return cls(AdicKind.BRACKET, p)

    @classmethod
    def integers(cls) -> "AdicClass":
        return cls(AdicKind.INTEGERS, 1)

    @classmethod
    def bracket_k(cls, k: int) -> "AdicClass":
        """[p_k]-adic numbers; k = 0 gives the integers."""
        if k == 0:
            return cls.integers()
        return cls.bracket(nth_prime(k))

    @property
    def is_dense(self) -> bool:
        return self.kind is not AdicKind.INTEGERS

    def contains(self, q) -> bool:
        return is_member(q, self)

    def describe(self) -> str:
        if self.kind is AdicKind.INTEGERS:
            return "integer"
        if self.kind is AdicKind.PADIC:
            return "dyadic" if self.p == 2 else f"padic {self.p}"
        return f"bracket {self.p}"

    def __repr__(self) -> str:
        return f"AdicClass({self.describe()})"


def _strip_primes(d: int, primes: Iterable[int]) -> int:
    for q in primes:
        while d % q == 0:
            d //= q
    return d


def is_member(q, L: AdicClass) -> bool:
    q = as_fraction(q)
    if L.oracle is not None:
        return bool(L.oracle(q))
    d = q.denominator
    if L.kind is AdicKind.INTEGERS:
        return d == 1
    if L.kind is AdicKind.PADIC:
        return _strip_primes(d, (L.p,)) == 1
    return _strip_primes(d, primes_up_to(L.p)) == 1


def all_members(xs, L: AdicClass) -> bool:
    return all(is_member(x, L) for x in xs)


def padic_valuation(q, p: int) -> int:
    q = as_fraction(q)
    if q == 0:
        raise ValueError("undefined valuation: q = 0")
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_pk_integral(q, p: int, k: int) -> bool:
    """True iff p^k * q is an integer."""
    q = as_fraction(q)
    return (q * p**k).denominator == 1


# -- sizes ------------------------------------------------------------------

def bitlen(n: int) -> int:
    return max(1, abs(n).bit_length())


def encoding_size(q) -> int:
    q = as_fraction(q)
    return bitlen(q.numerator) + bitlen(q.denominator)


def total_size(values: Iterable) -> int:
    return sum(encoding_size(v) for v in values)


# -- integer helpers ---------------------------------------------------------

def ceil_sqrt(n: int) -> int:
    """Least g >= 0 with g*g >= n."""
    if n < 0:
        raise ValueError("negative argument")
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def least_power_at_least(p: int, target) -> int:
    """Least r >= 0 with p**r >= target (exact, target rational)."""
    target = as_fraction(target)
    r, pr = 0, 1
    while pr < target:
        r += 1
        pr *= p
    return r


def lcm_of_denominators(xs) -> int:
    out = 1
    for x in xs:
        out = math.lcm(out, as_fraction(x).denominator)
    return out
