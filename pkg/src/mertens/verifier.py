"""Explicit inequality, identity, and table checks over computed prime data.

Each check returns BoundReports: claimed bound, observed value, margin,
pass/fail.  A report's verdict is always recomputable from (observed,
bound) alone, up to the documented rounding allowance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import accumulators, constants, primes, special
from .accumulators import CheckpointSeries
from .constants import ConstantsBundle
from .special import ROUNDING_ALLOWANCE

TWO_PI_LOG_ROOT = math.log(math.sqrt(2 * math.pi))


@dataclass(frozen=True)
class BoundReport:
    name: str
    params: dict
    observed: float
    bound: float
    margin: float
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class ErrorTableRow:
    x: int
    true_error: float
    schoenfeld_bound: float
    ratio: float
    signed_error: float


def _report(name, params, observed, bound, note="") -> BoundReport:
    margin = bound - abs(observed)
    allowance = ROUNDING_ALLOWANCE * max(1.0, abs(bound))
    return BoundReport(
        name=name, params=params, observed=observed, bound=bound,
        margin=margin, passed=margin >= -allowance, note=note,
    )


# --- Grossehilfsatz 1: |sum ln p / p - ln x| < 2 ------------------------

def check_grossehilfsatz1(series: CheckpointSeries) -> list[BoundReport]:
    reports = []
    for cp in series:
        if cp.x < 2:
            reports.append(BoundReport(
                "grossehilfsatz1", {"x": cp.x}, 0.0, 2.0, 2.0, True,
                note="skipped: x < 2",
            ))
            continue
        R = cp.logp - math.log(cp.x)
        reports.append(_report("grossehilfsatz1", {"x": cp.x}, R, 2.0))
    return reports


# --- Chebyshev theta bounds ---------------------------------------------

CHEBYSHEV_BAND_MIN_X = 38750
CHEBYSHEV_LOWER = 0.904
CHEBYSHEV_UPPER = 1.113


def check_theta(series: CheckpointSeries) -> list[BoundReport]:
    reports = []
    for cp in series:
        if cp.x < 2:
            continue
        th = cp.theta_value
        reports.append(_report("theta_lt_2x", {"x": cp.x}, th, 2.0 * cp.x))
        if cp.x >= CHEBYSHEV_BAND_MIN_X:
            # two-sided band, reported as the distance into the band
            lo, hi = CHEBYSHEV_LOWER * cp.x, CHEBYSHEV_UPPER * cp.x
            margin = min(th - lo, hi - th)
            ok = margin >= -ROUNDING_ALLOWANCE * hi
            reports.append(BoundReport(
                "chebyshev_band", {"x": cp.x}, th, hi, margin, ok,
                note=f"band [{lo:.6g}, {hi:.6g}]",
            ))
    return reports


# --- chi(x) - chi(x/2) < x ----------------------------------------------

def _theta_table(limit: int):
    """Primes <= limit and the compensated prefix sums of ln p."""
    p = np.concatenate([s.primes() for s in primes.iter_segments(limit)]) \
        if limit >= 2 else np.array([], dtype=np.int64)
    logs = np.log(p.astype(np.float64)) if len(p) else np.array([])
    return p, logs


def _theta_at(p, logs, y: float) -> float:
    k = int(np.searchsorted(p, math.floor(y), side="right"))
    return math.fsum(logs[:k].tolist())


def _chi(p, logs, x: float) -> float:
    total = 0.0
    k = 1
    while True:
        root = x ** (1.0 / k)
        if root < 2.0:
            break
        total += _theta_at(p, logs, root + 1e-12)
        k += 1
    return total


def check_chi_inequality(x: int) -> BoundReport:
    if x <= 1:
        raise ValueError(f"x must be > 1, got {x}")
    p, logs = _theta_table(x)
    observed = _chi(p, logs, float(x)) - _chi(p, logs, x / 2.0)
    return _report("chi_difference", {"x": x}, observed, float(x))


# --- Stirling bounds -----------------------------------------------------

def _log_factorial(n: int) -> float:
    return math.fsum(np.log(np.arange(1, n + 1, dtype=np.float64)).tolist())


def _binet_term(m: int) -> float:
    """(m + 1/2) ln(1 + 1/m) - 1 via its power series in 1/m.

    Direct evaluation cancels ~1 against ~1 and loses everything below
    1e-16; the series keeps full relative accuracy on a term of size
    ~1/(12 m^2).  Coefficient of (1/m)^j is (-1)^j (j-1)/(2 j (j+1)).
    """
    if m == 1:
        # t_1 ~ 0.04: large enough that direct evaluation keeps precision
        return 1.5 * math.log(2.0) - 1.0
    u = 1.0 / m
    total = 0.0
    power = u * u
    j = 2
    while True:
        term = power * (j - 1) / (2.0 * j * (j + 1))
        total += term if j % 2 == 0 else -term
        if term < 1e-18 * total:
            return total
        power *= u
        j += 1


def stirling_lambda(n: int) -> float:
    """lambda in ln n! = n ln n - n + ln(n)/2 + ln sqrt(2 pi) + lambda/(12n).

    lambda/(12n) equals the tail sum of (m + 1/2) ln(1 + 1/m) - 1 over
    m >= n (the telescoped Stirling remainder).  The head is summed
    term by term; the remainder past N is bracketed by the enveloping
    partial sums 1/(12N) - 1/(360 N^3) < tail < same + 1/(1260 N^5),
    so the absolute error in lambda is below 12n/(2520 N^5) ~ 1e-15.
    Naive subtraction of the two ~n ln n quantities would drown lambda's
    distance from 1 in rounding noise already around n = 10^4.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    N = max(n, 2000)
    head = math.fsum(_binet_term(m) for m in range(n, N))
    tail = 1.0 / (12 * N) - 1.0 / (360 * N**3) + 0.5 / (1260 * N**5)
    return 12 * n * (head + tail)


def check_stirling(x: float) -> list[BoundReport]:
    """Both one-sided factorial bounds at real x >= 4, and the lambda form."""
    if x < 4:
        raise ValueError(f"x must be >= 4, got {x}")
    reports = []
    lf = _log_factorial(math.floor(x))
    upper = x * math.log(x) + 0.5 * math.log(x) - x + TWO_PI_LOG_ROOT + 1 / (12 * x)
    reports.append(_report("stirling_upper", {"x": x}, lf, upper))
    lf_half = _log_factorial(math.floor(x / 2))
    lower = (
        x * math.log(x) - x * math.log(2) - math.log(x) - x
        + TWO_PI_LOG_ROOT + math.log(2) - 2 / (x - 2)
    )
    # lower bound: 2 ln([x/2]!) > lower, report the (positive) gap
    gap = 2 * lf_half - lower
    reports.append(BoundReport(
        "stirling_lower", {"x": x}, 2 * lf_half, lower, gap,
        gap >= -ROUNDING_ALLOWANCE * max(1.0, abs(lower)),
    ))
    n = math.floor(x)
    if n >= 5:
        lam = stirling_lambda(n)
        reports.append(_report("stirling_lambda", {"n": n}, lam, 1.0))
    return reports


# --- Legendre factorial identity ----------------------------------------

def check_legendre_factorial(n: int) -> BoundReport:
    if not 2 <= n <= 10**6:
        raise ValueError(f"n must be in [2, 10^6], got {n}")
    lhs_terms = []
    for p in primes.primes_up_to(n):
        lhs_terms.append(primes.legendre_valuation(n, p) * math.log(p))
    lhs = math.fsum(lhs_terms)
    rhs = _log_factorial(n)
    rel = abs(lhs - rhs) / rhs
    return _report(
        "legendre_factorial", {"n": n}, rel, 1e-8,
        note=f"lhs={lhs!r} rhs={rhs!r}",
    )


# --- Abel summation identity with pi(x) ---------------------------------

def check_abel_pi_identity(series: CheckpointSeries) -> list[BoundReport]:
    reports = []
    for cp in series:
        if cp.x < 2:
            continue
        p = np.concatenate(
            [s.primes() for s in primes.iter_segments(cp.x)]
        ).astype(np.float64)
        # pi is a step function: the integral of pi(t)/t^2 over [2, x] is
        # an exact finite sum of pi * (1/a - 1/b) pieces.
        counts = np.arange(1, len(p), dtype=np.float64)
        pieces = (counts * (1.0 / p[:-1] - 1.0 / p[1:])).tolist()
        pieces.append(len(p) * (1.0 / p[-1] - 1.0 / cp.x))
        rhs = len(p) / cp.x + math.fsum(pieces)
        lhs = cp.recip
        rel = abs(lhs - rhs) / lhs
        reports.append(_report("abel_pi_identity", {"x": cp.x}, rel, 1e-10))
    return reports


# --- Remainder identity and its bound -----------------------------------

def check_remainder_identity(G: int, rho: float) -> BoundReport:
    if G < 3:
        raise ValueError(f"G must be >= 3, got {G}")
    if not 0 < rho <= 1:
        raise ValueError(f"rho must be in (0, 1], got {rho}")
    s = 1.0 + rho
    full = special.prime_zeta(s)
    head = math.fsum(p ** -s for p in primes.primes_up_to(G))
    prime_tail = full.value - head
    if rho < 1:
        n_tail = special.log_weighted_tail_direct(G, rho)
    else:
        # rho = 1 sits outside the tail helper's open interval; sum the
        # absolutely convergent series directly with an integral bound.
        n = np.arange(G + 1, 10**6 + 1, dtype=np.float64)
        direct = math.fsum((n ** -2.0 / np.log(n)).tolist())
        cut = 1e6
        n_tail = special.EvaluatedReal(
            direct + 1.0 / (cut * math.log(cut)), 1.0 / (cut * math.log(cut)),
        )
    remainder = prime_tail - n_tail.value
    bound = 4.0 / math.log(G + 1) + 1.0 / (G * math.log(G + 1))
    return _report(
        "remainder_bound", {"G": G, "rho": rho}, remainder, bound,
        note=f"prime_tail={prime_tail!r} integer_tail={n_tail.value!r}",
    )


# --- Grossehilfsatz 2 ----------------------------------------------------

def grossehilfsatz2_residual(G: int, rho: float, route: str = "boas") -> float:
    """tail(G, rho) - [ln(1/rho) - ln ln G - gamma]."""
    if route == "boas":
        tail = special.log_weighted_tail_boas(G, rho)
    elif route == "direct":
        tail = special.log_weighted_tail_direct(G, rho)
    else:
        raise ValueError(f"unknown route {route!r}")
    gamma = special.euler_gamma()
    return tail.value - (math.log(1.0 / rho) - math.log(math.log(G)) - gamma.value)


def check_grossehilfsatz2(G: int, rhos: list[float]) -> list[BoundReport]:
    if G < 10:
        raise ValueError(f"G must be >= 10, got {G}")
    limit = 1.0 / math.log(G)
    if any(not 0 < r < limit for r in rhos):
        raise ValueError(f"each rho must lie in (0, {limit:.4g})")
    if any(b >= a for a, b in zip(rhos, rhos[1:])):
        raise ValueError("rhos must be strictly decreasing")
    residuals = [grossehilfsatz2_residual(G, r) for r in rhos]
    reports = []
    mags = [abs(r) for r in residuals]
    decreasing = all(b < a for a, b in zip(mags, mags[1:]))
    reports.append(BoundReport(
        "grossehilfsatz2_monotone", {"G": G, "rhos": list(rhos)},
        mags[-1], mags[0], mags[0] - mags[-1], decreasing,
        note=f"residual magnitudes {mags}",
    ))
    rho_min = rhos[-1]
    # 10 * rho * ln G is the engineering allowance for the o(rho) slack
    bound = 1.0 / (G * math.log(G)) + 10.0 * rho_min * math.log(G)
    reports.append(_report(
        "grossehilfsatz2_final", {"G": G, "rho": rho_min}, residuals[-1], bound,
    ))
    return reports


# --- Mertens product theorem --------------------------------------------

def check_mertens_product(G: int) -> BoundReport:
    if G < 3:
        raise ValueError(f"G must be >= 3, got {G}")
    log_product = -math.fsum(
        math.log1p(-1.0 / p) for p in primes.primes_up_to(G)
    )
    gamma = special.euler_gamma().value
    delta = log_product - gamma - math.log(math.log(G))
    bound = (
        4.0 / math.log(G + 1) + 2.0 / (G * math.log(G)) + 1.0 / (2.0 * G)
    )
    return _report("mertens_product", {"G": G}, delta, bound)


# --- Mertens error table and delta bounds --------------------------------

DUSART_UPPER_MIN_X = 10372
SCHOENFELD_MIN_X = 13.5


def _dusart_width(x: float) -> float:
    lx = math.log(x)
    return 1.0 / (10 * lx**2) + 4.0 / (15 * lx**3)


def mertens_error_table(series: CheckpointSeries, bundle: ConstantsBundle):
    """Per-checkpoint true error vs the RH-conditional bound, plus the
    Mertens, modern, and Dusart delta checks.

    The Schoenfeld comparison is an empirical observation (the bound is
    conditional on RH), never a proof.
    """
    B = bundle.B.value
    rows = []
    reports = []
    for cp in series:
        if cp.x < 16:
            continue
        x = float(cp.x)
        lx = math.log(x)
        signed = cp.recip - math.log(lx) - B
        true_err = abs(signed)
        schoenfeld = (3 * lx + 4) / (8 * math.pi * math.sqrt(x))
        if x >= 2**16:
            rows.append(ErrorTableRow(
                x=cp.x, true_error=true_err, schoenfeld_bound=schoenfeld,
                ratio=true_err / schoenfeld, signed_error=signed,
            ))
        # Mertens (1.2), stated with ln ln [x]
        G = cp.x
        delta_mertens = cp.recip - math.log(math.log(G)) - B
        bound_mertens = 4.0 / math.log(G + 1) + 2.0 / (G * math.log(G))
        reports.append(_report(
            "mertens_delta", {"x": cp.x}, delta_mertens, bound_mertens,
        ))
        reports.append(_report("modern_delta", {"x": cp.x}, signed, 4.0 / lx))
        width = _dusart_width(x)
        reports.append(BoundReport(
            "dusart_lower", {"x": cp.x}, signed, -width, signed + width,
            signed >= -width - ROUNDING_ALLOWANCE,
        ))
        if x >= DUSART_UPPER_MIN_X:
            reports.append(BoundReport(
                "dusart_upper", {"x": cp.x}, signed, width, width - signed,
                signed <= width + ROUNDING_ALLOWANCE,
            ))
        if x >= SCHOENFELD_MIN_X:
            reports.append(_report(
                "schoenfeld_rh", {"x": cp.x}, signed, schoenfeld,
                note="RH-conditional; empirical observation only",
            ))
    return rows, reports


# --- Suite driver --------------------------------------------------------

CHECK_NAMES = (
    "grossehilfsatz1", "theta", "chi", "stirling", "legendre",
    "abel", "remainder", "grossehilfsatz2", "product", "table",
)


def run_suite(series: CheckpointSeries, bundle: ConstantsBundle,
              only=None):
    """Run the full verification suite over a checkpoint series.

    Returns (reports, table_rows).  ``only`` restricts to a subset of
    CHECK_NAMES.
    """
    want = set(only) if only else set(CHECK_NAMES)
    unknown = want - set(CHECK_NAMES)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    reports: list[BoundReport] = []
    rows: list[ErrorTableRow] = []
    xs = [cp.x for cp in series]
    x_max = max(xs) if xs else 0
    if "grossehilfsatz1" in want:
        reports += check_grossehilfsatz1(series)
    if "theta" in want:
        reports += check_theta(series)
    if "chi" in want:
        for x in (4, 100, 10**4, min(10**6, max(4, x_max))):
            reports.append(check_chi_inequality(x))
    if "stirling" in want:
        for x in (4.0, 5.0, 100.0, 10**4):
            reports += check_stirling(x)
    if "legendre" in want:
        for n in (10, 100, 10**4):
            reports.append(check_legendre_factorial(n))
    if "abel" in want:
        small = CheckpointSeries(
            schedule=series.schedule,
            checkpoints=[cp for cp in series if cp.x <= 2**20],
        )
        reports += check_abel_pi_identity(small)
    if "remainder" in want:
        for G in (3, 10, 100, 10**4):
            for rho in (1.0, 0.5, 0.1):
                reports.append(check_remainder_identity(G, rho))
    if "grossehilfsatz2" in want:
        reports += check_grossehilfsatz2(10**4, [1e-2, 1e-3, 1e-4])
    if "product" in want:
        for G in (3, 10, min(2**20, max(3, x_max))):
            reports.append(check_mertens_product(G))
    if "table" in want:
        rows, table_reports = mertens_error_table(series, bundle)
        reports += table_reports
    return reports, rows
