import itertools
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from dyadiclp.bounds import (
    ExampleSpec, det_lower_bound_check, eg53_ratio_check, fractionality_report, gen_example, kappa_equations,
    min_kernel_inf_norm, min_support_bruteforce, plp_k_optimum, siegel_check, support_bounds,
    xi_exact_bruteforce, xi_upper_bound,
)
from dyadiclp.exactnum import AdicClass, nth_prime, padic_valuation
from dyadiclp.linalg import gcd_minors

from oracles import cramer_solve, leibniz_det, nonneg_integer_solutions

F = Fraction
D = AdicClass.dyadic()
mp = mpmath.mp.clone()
mp.dps = 60


# -- fractionality --------------------------------------------------------------------

def test_kappa_examples():
    assert kappa_equations([[2]], [1], 2) == 1
    assert kappa_equations([[3]], [1], 2) is None
    assert kappa_equations([[6]], [3], 2) == 1 and gcd_minors([[6]]) % 2 == 0
    assert kappa_equations([[1, 1], [1, 1]], [0, 1], 2) is None


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(st.integers(-4, 4), min_size=n, max_size=n))), st.sampled_from([2, 3]))
def test_kappa_matches_cramer(data, p):
    A, b = data
    x = cramer_solve(A, b)
    assume(x is not None)
    if any(set(_primes(v.denominator)) - {p} for v in x):
        assert kappa_equations(A, b, p) is None
    else:
        want = max([0] + [-padic_valuation(v, p) for v in x if v])
        k = kappa_equations(A, b, p)
        assert k == want
        assert abs(leibniz_det(A)) % p**k == 0


def _primes(d):
    out, q = [], 2
    while d > 1:
        while d % q == 0:
            out.append(q)
            d //= q
        q += 1
    return out


@pytest.mark.parametrize("n,a,p,k", [(1, 3, 2, 7), (1, 1, 2, 2), (1, 1, 1031, 1), (2, 1, 2, 5), (3, 3, 3, 13)])
def test_xi_bound_examples(n, a, p, k):
    assert xi_upper_bound(n, a, p) == k


@given(st.integers(1, 6), st.integers(1, 20), st.sampled_from([2, 3, 5, 7, 101]))
def test_xi_bound_matches_high_precision(n, a, p):
    v = (mp.log(n) + (2 * n + 1) * mp.log(a * mp.sqrt(n + 1))) / mp.log(p)
    assume(abs(v - mp.nint(v)) > mp.mpf(10) ** -30)
    assert xi_upper_bound(n, a, p) == int(mp.ceil(v))


def test_xi_exact_examples():
    assert xi_exact_bruteforce([[3], [-3]], [1, -1], 2, 10) is None
    assert xi_exact_bruteforce([[2], [-2]], [1, -1], 2, 6) == 1
    assert xi_exact_bruteforce([[3], [-1]], [1, 0], 2, 6) == 0
    with pytest.raises(ValueError):
        xi_exact_bruteforce([[1]], [1], 2, 3)


def _xi_oracle(A, b, p, k_max, box):
    for k in range(k_max + 1):
        s = p**k
        rng = range(-box * s, box * s + 1)
        for z in itertools.product(rng, repeat=len(A[0])):
            if all(sum(a * v for a, v in zip(row, z)) <= s * bi for row, bi in zip(A, b)):
                return k
    return None


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=1, max_size=2),
       st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.sampled_from([2, 3]))
def test_xi_exact_matches_enumeration(rows, rhs, p):
    A = rows + [[1, 0], [0, 1], [-1, 0], [0, -1]]
    b = rhs[:len(rows)] + [1, 1, 1, 1]
    assert xi_exact_bruteforce(A, b, p, 3) == _xi_oracle(A, b, p, 3, 1)


def test_fractionality_report():
    r = fractionality_report([[3], [-1]], [1, 0], 2, k_max=4)
    assert (r.kappa, r.xi_bound, r.xi_exact) == (0, 7, 0)
    r = fractionality_report([[2], [-2]], [1, -1], 2, k_max=4)
    assert r.kappa == 1 and r.xi_exact == 1


def test_plp_k_optimum():
    # max x over 0 <= x <= 1/3 with x in 2^-k Z
    assert plp_k_optimum([[3], [-1]], [1, 0], [1], 2, 3) == F(1, 4)
    assert plp_k_optimum([[3], [-1]], [1, 0], [1], 2, 0) == 0


# -- support bounds -------------------------------------------------------------------

def test_support_bound_examples():
    r = support_bounds([[1, 1, 1, 1]] * 4, 0)
    assert r.bound_01 == 12 and r.bound_lp_k0 == 12
    assert support_bounds([[1]], 0).bound_01 == 1
    r = support_bounds([[1]] * 4, 1)
    exact = 4 * (1 + mp.log(4) / (2 * mp.log(3) - 1))
    assert abs(float(r.bound_dyadic) - 8.632) < 1e-3
    assert mp.mpf(r.bound_dyadic.numerator) / r.bound_dyadic.denominator >= exact
    assert mp.mpf(r.bound_dyadic.numerator) / r.bound_dyadic.denominator - exact < mp.mpf(10) ** -20


@given(st.integers(1, 6), st.integers(1, 50), st.integers(0, 4))
def test_support_bounds_are_upper_enclosures(m, a, k):
    r = support_bounds([[a]] * m, k)
    p = nth_prime(k + 1)
    exact = m * (1 + mp.log(m * a * a) / (2 * mp.log(p) - 1))
    got = mp.mpf(r.bound_lp_general.numerator) / r.bound_lp_general.denominator
    assert exact <= got < exact + mp.mpf(10) ** -20
    if k == 0:
        la = mp.log(a, 2)
        k0 = m * (1 + la + mp.log(m * a, 2) * (1 + la) / (1 + 2 * la))
        got = mp.mpf(r.bound_lp_k0.numerator) / r.bound_lp_k0.denominator
        assert k0 <= got < k0 + mp.mpf(10) ** -20


def test_linear_system_bound_domain():
    assert support_bounds([[1]], 1).bound_ls is None
    r = support_bounds([[10**6, 1]], 1)
    assert r.bound_ls == 15


# -- examples and minimal support -----------------------------------------------------

def test_gen_examples():
    assert gen_example(ExampleSpec("eg-5.1", 2)).A == ((5, 3),)
    e = gen_example(ExampleSpec("eg-5.3", 3))
    assert e.A == ((1, 2, 4),) and e.b == (7,) and e.w == (1, 1, 1)
    k = gen_example(ExampleSpec("kronecker-extended", 3, m=2))
    assert k.A == ((1, 0, 2, 0, 4, 0), (0, 1, 0, 2, 0, 4)) and k.b == (7, 7)
    assert gen_example(ExampleSpec("eg-5.1", 3, k=2)).A == ((77, 55, 35),)
    r = gen_example(ExampleSpec("eg-5.1-resigned", 3))
    assert r.nonneg and sorted(map(abs, r.A[0])) == [15, 21, 35]
    with pytest.raises(ValueError):
        gen_example(ExampleSpec("eg-5.1", 2, primes=(2, 3)))


def test_min_support_examples():
    e = gen_example(ExampleSpec("eg-5.3", 4))
    assert min_support_bruteforce(e.A, e.b, e.w, e.L) == 4
    assert min_support_bruteforce([[1, 1]], [1], None, D) == 1
    assert min_support_bruteforce([[5, 3]], [1], None, D, nonneg=False) == 2
    assert min_support_bruteforce([[3]], [1], None, D, nonneg=False) is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_eg51_full_support(n):
    e = gen_example(ExampleSpec("eg-5.1", n))
    assert min_support_bruteforce(e.A, e.b, None, e.L, nonneg=False) == n
    r = gen_example(ExampleSpec("eg-5.1-resigned", n))
    assert min_support_bruteforce(r.A, r.b, r.w, r.L, nonneg=True) == n


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_eg53_unique_optimum(n):
    e = gen_example(ExampleSpec("eg-5.3", n))
    sols = nonneg_integer_solutions(e.A[0], e.b[0])
    best = min(sum(x) for x in sols)
    assert [x for x in sols if sum(x) == best] == [tuple([1] * n)]
    assert min_support_bruteforce(e.A, e.b, e.w, e.L) == n


# -- inequality checkers --------------------------------------------------------------

def test_siegel_examples():
    s = siegel_check([[1, 2]])
    assert (s.det_gram, s.gcd, s.ell, s.rhs_squared, s.holds) == (5, 1, 2, 4, True)
    s = siegel_check([[1, 1]])
    assert s.ell == 1 and s.det_gram == 2 and s.holds
    s = siegel_check([[1, 2, 4]])
    assert (s.det_gram, s.ell, s.rhs_squared, s.holds) == (21, 2, 16, True)
    assert siegel_check([[2, 0], [0, 3]]).holds


def test_min_kernel_norm_bruteforce():
    A = [[3, 5, 7]]
    best = min(max(map(abs, z)) for z in itertools.product(range(-4, 5), repeat=3)
               if any(z) and 3 * z[0] + 5 * z[1] + 7 * z[2] == 0)
    assert min_kernel_inf_norm(A) == best


def test_det_bound_examples():
    d = det_lower_bound_check([[5, 3]], 1)
    assert (d.holds, d.hypothesis, d.gcd, d.bound_all, d.bound_witness, d.witness) == (True, True, 1, 3, 5, (0,))
    d = det_lower_bound_check([[35, 21, 15]], 1)
    assert (d.holds, d.bound_all, d.bound_witness, d.witness) == (True, 15, 35, (0,))
    d = det_lower_bound_check([[2, 1], [1, 1]], 1)
    assert d.holds and d.bound_all == 1


@pytest.mark.parametrize("n", range(2, 7))
def test_checkers_on_examples(n):
    for spec in (ExampleSpec("eg-5.1", n), ExampleSpec("eg-5.1-resigned", n), ExampleSpec("eg-5.3", n)):
        e = gen_example(spec)
        k = 0 if spec.kind == "eg-5.3" else spec.k
        assert siegel_check(e.A).holds
        assert det_lower_bound_check(e.A, k).holds


@pytest.mark.parametrize("n,m", [(n, m) for n in range(1, 7) for m in (1, 2)])
def test_eg53_ratio(n, m):
    ok, dg, g = eg53_ratio_check(n, m)
    assert ok and g == 1
    assert dg == ((4**n - 1) // 3) ** m
