"""The constants gamma, H, and B = gamma - H.

H is computed by the rapidly convergent Moebius-weighted series over
ln zeta(n)/n, with a per-term ledger and a rigorous geometric tail
bound.  H_direct is the independent oracle: the double sum over prime
powers, whose only error is the rigorously bounded omitted-prime tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import primes, special
from .special import EvaluatedReal

TOL_MIN = 1e-15
TOL_MAX = 1e-3


@dataclass(frozen=True)
class ConstantsBundle:
    gamma: EvaluatedReal
    H: EvaluatedReal
    B: EvaluatedReal
    # ordered (n, mu(n), contribution of -mu(n) ln zeta(n)/n to H)
    term_ledger: list[tuple[int, int, float]]
    tail_bound: float

    def to_json_dict(self) -> dict:
        return {
            "schema": "mertens-constants v1",
            "gamma": {"value": self.gamma.value, "err_bound": self.gamma.err_bound},
            "H": {"value": self.H.value, "err_bound": self.H.err_bound},
            "B": {"value": self.B.value, "err_bound": self.B.err_bound},
            "term_ledger": [list(t) for t in self.term_ledger],
            "tail_bound": self.tail_bound,
        }


def _check_tol(tol: float) -> None:
    if not TOL_MIN <= tol <= TOL_MAX:
        raise ValueError(f"tol must be in [{TOL_MIN}, {TOL_MAX}], got {tol}")


def _series_cutoff(tol: float) -> int:
    # ln zeta(n) < zeta(n) - 1 < 2^(1-n); the tail past n_max is below
    # sum_{n>n_max} 2^(1-n)/n < 2^(2-n_max)/(n_max+1).
    n = 2
    while 2.0 ** (2 - n) / (n + 1) >= tol / 2:
        n += 1
    return n


def compute_H(tol: float):
    """H = -sum_{n>=2} mu(n) ln zeta(n)/n with ledger and tail bound.

    Returns (EvaluatedReal, ledger, tail_bound); the sign convention
    keeps H positive, so the n=2 ledger entry is +ln(zeta(2))/2.
    """
    _check_tol(tol)
    n_max = _series_cutoff(tol)
    mu = primes.moebius_up_to(n_max)
    ledger = []
    zeta_err = 0.0
    for n in range(2, n_max + 1):
        m = mu[n]
        if m == 0:
            continue
        lz = special.log_zeta(n)
        ledger.append((n, m, -m * lz.value / n))
        zeta_err += lz.err_bound / n
    tail_bound = 2.0 ** (2 - n_max) / (n_max + 1)
    value = math.fsum(t for _, _, t in ledger)
    return EvaluatedReal(value, tail_bound + zeta_err), ledger, tail_bound


def compute_B(tol: float) -> ConstantsBundle:
    """B = gamma - H, bundled with the H ledger and combined error bound."""
    _check_tol(tol)
    H, ledger, tail_bound = compute_H(tol)
    gamma = special.euler_gamma()
    B = EvaluatedReal(gamma.value - H.value, gamma.err_bound + H.err_bound)
    return ConstantsBundle(
        gamma=gamma, H=H, B=B, term_ledger=ledger, tail_bound=tail_bound
    )


def H_direct(prime_limit: int) -> EvaluatedReal:
    """Oracle for H: (1/k) sum over primes p <= prime_limit of p^-k, k >= 2.

    Powers stop once p^-k < 10^-18; the omitted-prime tail is bounded by
    sum_{n>prime_limit} 1/n^2 <= 1/prime_limit.
    """
    if prime_limit < 10**3:
        raise ValueError(f"prime_limit must be >= 1000, got {prime_limit}")
    p = np.concatenate([s.primes() for s in primes.iter_segments(prime_limit)])
    p = p.astype(np.float64)
    parts = []
    k = 2
    while True:
        cutoff = 10.0 ** (18.0 / k)
        sub = p if cutoff >= p[-1] else p[: int(np.searchsorted(p, cutoff, side="right"))]
        if len(sub) == 0:
            break
        parts.append(math.fsum((sub**-float(k)).tolist()) / k)
        if cutoff < 2.0:
            break
        k += 1
    return EvaluatedReal(math.fsum(parts), 1.0 / prime_limit)
