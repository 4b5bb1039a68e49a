"""Frobenius traces of elliptic curves, Chebotarev counts and the finite-group
and quadratic-field machinery behind Lang-Trotter style bounds.

Convention: a_p = p + 1 - #E(F_p), so the Frobenius char poly is x^2 - a_p x + p.
"""

from ._errors import ContractError, DomainError, FitUnavailable, InvariantViolation
from .elliptic import ApRecord, ApTable, EllipticCurve, ap, ap_table

__version__ = "0.1.0"

__all__ = [
    "ApRecord",
    "ApTable",
    "ContractError",
    "DomainError",
    "EllipticCurve",
    "FitUnavailable",
    "InvariantViolation",
    "ap",
    "ap_table",
]
