"""Modular equations for Jacobi theta constants.

Exact construction of the polynomials ``Q_n`` relating
``theta_3^4(n tau)/theta_3^4(tau)`` and ``theta_2^4(tau)/theta_3^4(tau)``, and
arbitrary-precision numerical certification of the theta identities behind
them.
"""

from .modular import build_qn, double_step, rescale_seed
from .numtheory import constant_term, enumerate_triplets, omega, psi
from .polyring import MINUS_INFINITY, SparsePoly, resultant_in
from .thetaeval import QPoint, ThetaValues, nome_from_tau, theta_eval, theta_quotients
from .verify import ResidualReport, SuiteConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "MINUS_INFINITY",
    "QPoint",
    "ResidualReport",
    "SparsePoly",
    "SuiteConfig",
    "ThetaValues",
    "build_qn",
    "constant_term",
    "double_step",
    "enumerate_triplets",
    "nome_from_tau",
    "omega",
    "psi",
    "rescale_seed",
    "resultant_in",
    "run_suite",
    "theta_eval",
    "theta_quotients",
]
