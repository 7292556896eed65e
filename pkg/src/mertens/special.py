"""Zeta, prime zeta, Euler's constant, E1, and logarithmic tail sums.

Every evaluation returns an EvaluatedReal: the value plus a rigorous
absolute bound on the truncation error.  Truncation bounds deliberately
exclude floating-point rounding; callers that need a total allowance add
ROUNDING_ALLOWANCE (relative) on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import primes

# Documented global allowance for accumulated binary64 rounding, relative.
ROUNDING_ALLOWANCE = 1e-13


@dataclass(frozen=True)
class EvaluatedReal:
    value: float
    err_bound: float

    def __post_init__(self):
        if self.err_bound < 0:
            raise ValueError("err_bound must be nonnegative")


class DomainError(ValueError):
    """Argument outside the function's domain."""


# Bernoulli numbers B2..B10 for the Euler-Maclaurin corrections.
_BERNOULLI = {2: 1 / 6, 4: -1 / 30, 6: 1 / 42, 8: -1 / 30, 10: 5 / 66}


def _em_correction(s: float, N: int, k: int) -> float:
    """k-th Euler-Maclaurin correction term for zeta: B_2k/(2k)! *
    s(s+1)...(s+2k-2) * N^(1-s-2k)."""
    coeff = _BERNOULLI[2 * k] / math.factorial(2 * k)
    rising = 1.0
    for j in range(2 * k - 1):
        rising *= s + j
    # N^(1-s-2k) via exp/log to dodge overflow in intermediate powers
    return coeff * rising * math.exp((1 - s - 2 * k) * math.log(N))


def zeta(s: float, N: int = 64) -> EvaluatedReal:
    """Riemann zeta for real s > 1 by Euler-Maclaurin.

    N direct terms, trapezoid tail, Bernoulli corrections through B8;
    err_bound is the magnitude of the first omitted correction.
    """
    if s <= 1:
        raise DomainError(f"zeta requires s > 1, got {s}")
    direct = math.fsum(n ** -s for n in range(1, N))
    tail = math.exp((1 - s) * math.log(N)) / (s - 1) + 0.5 * N ** -s
    corr = math.fsum(_em_correction(s, N, k) for k in range(1, 5))
    err = abs(_em_correction(s, N, 5))
    return EvaluatedReal(direct + tail + corr, err)


def log_zeta(s: float, N: int = 64) -> EvaluatedReal:
    """ln zeta(s) for s > 1, with the propagated truncation bound."""
    z = zeta(s, N)
    return EvaluatedReal(math.log(z.value), z.err_bound / (z.value - z.err_bound))


@lru_cache(maxsize=1)
def _small_moebius():
    return primes.moebius_up_to(256)


def prime_zeta(s: float, tol: float = 1e-15) -> EvaluatedReal:
    """P(s) = sum over primes of p^-s, via Moebius inversion of ln zeta.

    P(s) = sum_{k>=1} mu(k)/k * ln zeta(k s); truncated once
    ln zeta(k s) < tol/2 and the geometric tail (ratio ~ 2^-s) is folded
    into err_bound.
    """
    if s <= 1:
        raise DomainError(f"prime_zeta requires s > 1, got {s}")
    mu = _small_moebius()
    terms = []
    err = 0.0
    k = 0
    while True:
        k += 1
        m = mu[k]
        lz = log_zeta(k * s)
        if m != 0:
            terms.append(m * lz.value / k)
            err += lz.err_bound / k
        if lz.value < tol / 2 and k >= 2:
            # remaining terms: |ln zeta(js)| <= 2^(-js+1); geometric sum
            ratio = 2.0 ** -s
            tail = 2.0 * 2.0 ** (-(k + 1) * s) / (1 - ratio)
            err += tail
            break
    return EvaluatedReal(math.fsum(terms), err)


@lru_cache(maxsize=1)
def euler_gamma(n: int = 10**6) -> EvaluatedReal:
    """Euler's constant from H_n - ln n with Euler-Maclaurin corrections.

    Truncation after the n^-6 term; for n = 10^6 the omitted term is far
    below binary64 resolution.
    """
    harmonic = math.fsum((1.0 / np.arange(1, n + 1)).tolist())
    value = (
        harmonic
        - math.log(n)
        - 1 / (2 * n)
        + 1 / (12 * n**2)
        - 1 / (120 * n**4)
        + 1 / (252 * n**6)
    )
    return EvaluatedReal(value, 1 / (240 * n**8))


def exp_integral_e1(x: float) -> EvaluatedReal:
    """E1(x) = integral of exp(-t)/t from x to infinity, x > 0.

    Convergent series for x <= 1, modified-Lentz continued fraction for
    x > 1; both standard two-regime evaluations.
    """
    if x <= 0:
        raise DomainError(f"E1 requires x > 0, got {x}")
    if x <= 1.0:
        return _e1_series(x)
    return _e1_continued_fraction(x)


def _e1_series(x: float) -> EvaluatedReal:
    # E1(x) = -gamma - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k * k!)
    gamma = euler_gamma()
    acc = -gamma.value - math.log(x)
    term = 1.0
    k = 0
    while True:
        k += 1
        term *= -x / k
        contrib = -term / k
        acc += contrib
        if abs(contrib) < 1e-18 * max(abs(acc), 1e-300):
            break
        if k > 200:
            break
    return EvaluatedReal(acc, abs(term / (k + 1)) + gamma.err_bound)


def _e1_continued_fraction(x: float, eps: float = 1e-16) -> EvaluatedReal:
    # Modified Lentz on E1(x) = exp(-x) / (x + 1 - 1/(x + 3 - 4/(...)))
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 200):
        a = -i * i
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    value = math.exp(-x) * h
    return EvaluatedReal(value, 4 * eps * abs(value))


def _tail_f(n, rho):
    """f(n) = 1 / (n^(1+rho) * ln n), the remainder-series summand."""
    return n ** -(1.0 + rho) / np.log(n)


def _tail_fprime(n: float, rho: float) -> float:
    ln = math.log(n)
    return -(n ** -(2.0 + rho)) * (1.0 + rho + 1.0 / ln) / ln


def log_weighted_tail_direct(G: int, rho: float, cutoff=None) -> EvaluatedReal:
    """sum_{n>G} 1/(n^(1+rho) ln n): direct summation plus an E1 tail.

    Direct terms to ``cutoff`` (default max(10^6, 100 G)); the rest is
    the exact integral after substitution, E1(rho * ln cutoff), with the
    sum-vs-integral bracket width as the truncation bound.
    """
    _check_tail_domain(G, rho)
    N = int(cutoff) if cutoff else max(10**6, 100 * G)
    n = np.arange(G + 1, N + 1, dtype=np.float64)
    direct = math.fsum(_tail_f(n, rho).tolist())
    tail = exp_integral_e1(rho * math.log(N))
    # f decreasing: sum_{n>N} f(n) lies in [integral from N+1, integral from N]
    bracket = float(_tail_f(np.float64(N), rho))
    return EvaluatedReal(direct + tail.value, bracket + tail.err_bound)


def log_weighted_tail_boas(G: int, rho: float) -> EvaluatedReal:
    """Same tail by the half-offset Euler-Maclaurin form.

    tail = integral from G+1/2 of f, plus theta/8 * f'(G+1) for some
    theta in (0,1); we take theta = 1/2 and report half the theta-range
    width as the bound.
    """
    _check_tail_domain(G, rho)
    integral = exp_integral_e1(rho * math.log(G + 0.5))
    fp = _tail_fprime(G + 1.0, rho)
    return EvaluatedReal(
        integral.value + fp / 16.0, abs(fp) / 16.0 + integral.err_bound
    )


def log_weighted_tail(G: int, rho: float):
    """Both routes for the tail sum; they must agree within combined bounds."""
    return log_weighted_tail_direct(G, rho), log_weighted_tail_boas(G, rho)


def _check_tail_domain(G, rho):
    if G < 3:
        raise DomainError(f"tail requires G >= 3, got {G}")
    if not 0 < rho < 1:
        raise DomainError(f"tail requires 0 < rho < 1, got {rho}")


def sum_log_over_n_squared(N: int = 10**4) -> EvaluatedReal:
    """sum_{n>=2} ln n / n^2 by direct terms plus Euler-Maclaurin tail.

    This is the series whose value 0.93754825... feeds the 3/2-weighted
    prime-power bound in the first fundamental lemma.
    """
    n = np.arange(2, N, dtype=np.float64)
    direct = math.fsum((np.log(n) / n**2).tolist())
    lnN = math.log(N)
    integral = (lnN + 1.0) / N
    f_N = lnN / N**2
    fp_N = (1.0 - 2.0 * lnN) / N**3
    fppp_N = (26.0 - 24.0 * lnN) / N**5
    value = direct + integral + f_N / 2.0 - fp_N / 12.0
    return EvaluatedReal(value, abs(fppp_N) / 720.0)
