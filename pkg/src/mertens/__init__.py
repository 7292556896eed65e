"""Prime reciprocal sums, the Mertens constant, and explicit-bound checks."""

from .accumulators import (
    CheckpointSeries,
    SumCheckpoint,
    accumulate,
    load_checkpoints,
    save_checkpoints,
)
from .constants import ConstantsBundle, H_direct, compute_B, compute_H
from .primes import legendre_valuation, moebius_up_to, primes_up_to
from .special import (
    EvaluatedReal,
    euler_gamma,
    exp_integral_e1,
    log_weighted_tail,
    prime_zeta,
    zeta,
)
from .verifier import BoundReport, ErrorTableRow, mertens_error_table, run_suite

__all__ = [
    "BoundReport",
    "CheckpointSeries",
    "ConstantsBundle",
    "ErrorTableRow",
    "EvaluatedReal",
    "H_direct",
    "SumCheckpoint",
    "accumulate",
    "compute_B",
    "compute_H",
    "euler_gamma",
    "exp_integral_e1",
    "legendre_valuation",
    "load_checkpoints",
    "log_weighted_tail",
    "mertens_error_table",
    "moebius_up_to",
    "prime_zeta",
    "primes_up_to",
    "run_suite",
    "save_checkpoints",
    "zeta",
]
