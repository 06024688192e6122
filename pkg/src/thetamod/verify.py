"""Numerical certification of the theta-constant identities.

Each check evaluates both sides of an identity at a sample point and returns a
:class:`ResidualReport`.  The pass threshold is
``scale * 2**-(precision_bits - GUARD_BITS - SLACK_BITS)``, where ``scale``
bounds the size of the quantities that cancel.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import mpmath

from . import modular
from .numtheory import b_seq, enumerate_triplets, is_prime, psi
from .polyring import SparsePoly
from .thetaeval import (
    GUARD_BITS,
    TAU_GRID,
    as_complex,
    euler_product,
    nome_from_tau,
    theta3,
    theta_eval,
    theta_quotients,
    transformed_nome,
)

__all__ = [
    "ResidualReport",
    "SLACK_BITS",
    "SuiteConfig",
    "check_duplication",
    "check_homogeneous_relation",
    "check_jacobi_identity",
    "check_product_formula",
    "check_qn_vanishing",
    "check_root_of_unity_product",
    "check_theoremC_fixture",
    "check_triple_product",
    "polynomial_for",
    "reports_to_jsonl",
    "run_suite",
    "suite_exit_status",
]

SLACK_BITS = 16
MAX_ROOT_ORDER = 27


@dataclass(frozen=True)
class ResidualReport:
    identity: str
    sample: str
    residual: float
    scale: float
    tolerance: float
    verdict: str
    precision_bits: int

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> str:
        # field order is part of the report format
        return json.dumps({
            "identity": self.identity,
            "sample": self.sample,
            "residual": self.residual,
            "scale": self.scale,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "precision_bits": self.precision_bits,
        })


def _tolerance(scale, precision_bits: int):
    return scale * mpmath.mpf(2) ** -(precision_bits - GUARD_BITS - SLACK_BITS)


def _report(identity, sample, residual, scale, precision_bits) -> ResidualReport:
    residual = float(residual)
    scale = float(scale)
    tol = float(_tolerance(mpmath.mpf(scale), precision_bits))
    # an infinite tolerance would pass anything
    if not all(map(math.isfinite, (residual, scale, tol))):
        raise OverflowError(f"{identity} at {sample}: residual or scale exceeds float range")
    return ResidualReport(identity, sample, residual, scale, tol,
                          "pass" if residual <= tol else "fail", precision_bits)


def _sample(tau) -> str:
    return nome_from_tau(tau, 64).describe()


def _check_precision(precision_bits: int) -> None:
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")


def polynomial_for(n: int) -> SparsePoly:
    """``Q_n`` for ``n = 1`` (``X - 1``), odd ``n`` (rescaled seed) or built."""
    if n == 1:
        return SparsePoly.parse("X - 1", modular.VARS)
    if n < 1 or n & (n - 1) == 0:
        raise LookupError(f"no Q_n polynomial for n={n}")
    return modular.build_qn(n).Q


def check_qn_vanishing(n: int, tau, precision_bits: int = 256,
                       poly: SparsePoly | None = None) -> ResidualReport:
    """Residual of ``Q_n(theta_3^4(n tau)/theta_3^4, theta_2^4/theta_3^4)``."""
    _check_precision(precision_bits)
    Q = poly if poly is not None else polynomial_for(n)
    tau = as_complex(tau, precision_bits)
    x, y = theta_quotients(tau, n, precision_bits)
    value, scale = Q.eval_complex((x, y), precision_bits + GUARD_BITS)
    return _report(f"Q_{n}", _sample(tau), abs(value), scale, precision_bits)


def check_theoremC_fixture(n: int, tau, precision_bits: int = 256) -> ResidualReport:
    """Residual of ``P_n(theta_3^2(n tau)/theta_3^2, theta_4/theta_3)``, n a power of two."""
    _check_precision(precision_bits)
    P = modular.theorem_c_fixture(n)
    tau = as_complex(tau, precision_bits)
    base = theta_eval(nome_from_tau(tau, precision_bits))
    top = theta3(transformed_nome(tau, n, 0, 1, precision_bits))
    with mpmath.workprec(precision_bits + GUARD_BITS):
        x = (top / base.theta3) ** 2
        y = base.theta4 / base.theta3
    value, scale = P.eval_complex((x, y), precision_bits + GUARD_BITS)
    return _report(f"P_{n}[power of two]", _sample(tau), abs(value), scale, precision_bits)


def check_product_formula(n: int, tau, precision_bits: int = 256) -> ResidualReport:
    """``prod theta_3((u tau + 2v)/w)`` over the triplets of odd ``n`` against
    ``theta_3(tau)^psi(n)``; scale is ``|theta_3(tau)|^psi(n)``."""
    _check_precision(precision_bits)
    if n < 1 or n % 2 == 0:
        raise ValueError(f"product formula holds for odd n only, got {n}")
    tau = as_complex(tau, precision_bits)
    factors = [theta3(transformed_nome(tau, t.u, t.v, t.w, precision_bits))
               for t in enumerate_triplets(n)]
    rhs_base = theta3(nome_from_tau(tau, precision_bits))
    with mpmath.workprec(precision_bits + GUARD_BITS):
        lhs = mpmath.fprod(factors)
        rhs = rhs_base ** psi(n)
        residual = abs(lhs - rhs)
        scale = abs(rhs)
    return _report(f"product[n={n}]", _sample(tau), residual, scale, precision_bits)


def check_root_of_unity_product(p: int, j: int, tau, precision_bits: int = 256) -> ResidualReport:
    """``prod_{k<p^j} theta_3(zeta^k q)`` against
    ``theta_3(q^{p^j})^{b_{j+1}} / theta_3(q^{p^{j+1}})^{b_j}``."""
    _check_precision(precision_bits)
    if not (p % 2 and is_prime(p)):
        raise ValueError(f"p must be an odd prime, got {p}")
    if j < 1 or p ** j > MAX_ROOT_ORDER:
        raise ValueError(f"need j >= 1 and p^j <= {MAX_ROOT_ORDER}, got p={p}, j={j}")
    w = p ** j
    tau = as_complex(tau, precision_bits)
    # zeta_w^k q is the nome of (w tau + 2k)/w
    factors = [theta3(transformed_nome(tau, w, k, w, precision_bits)) for k in range(w)]
    num = theta3(transformed_nome(tau, w, 0, 1, precision_bits))
    den = theta3(transformed_nome(tau, w * p, 0, 1, precision_bits))
    with mpmath.workprec(precision_bits + GUARD_BITS):
        lhs = mpmath.fprod(factors)
        rhs = num ** b_seq(p, j + 1) / den ** b_seq(p, j)
        residual = abs(lhs - rhs)
        scale = abs(rhs)
    return _report(f"roots[p={p},j={j}]", _sample(tau), residual, scale, precision_bits)


def check_homogeneous_relation(tau, precision_bits: int = 256,
                               corrected: bool = False) -> ResidualReport:
    """The degree-8 relation at ``(theta_3(3 tau), theta_3(2 tau), theta_3(tau))``.

    ``corrected`` selects the eliminant factor instead of the printed polynomial.
    """
    _check_precision(precision_bits)
    P = modular.homogeneous_relation(corrected)
    tau = as_complex(tau, precision_bits)
    point = [theta3(transformed_nome(tau, k, 0, 1, precision_bits)) for k in (3, 2, 1)]
    value, scale = P.eval_complex(point, precision_bits + GUARD_BITS)
    name = "homogeneous[corrected]" if corrected else "homogeneous[printed]"
    return _report(name, _sample(tau), abs(value), scale, precision_bits)


def check_jacobi_identity(tau, precision_bits: int = 256) -> ResidualReport:
    """``theta_3^4 = theta_2^4 + theta_4^4``."""
    _check_precision(precision_bits)
    tau = as_complex(tau, precision_bits)
    t = theta_eval(nome_from_tau(tau, precision_bits))
    with mpmath.workprec(precision_bits + GUARD_BITS):
        a, b, c = t.theta3 ** 4, t.theta2 ** 4, t.theta4 ** 4
        residual = abs(a - b - c)
        scale = abs(a) + abs(b) + abs(c)
    return _report("jacobi", _sample(tau), residual, scale, precision_bits)


def check_duplication(tau, precision_bits: int = 256) -> ResidualReport:
    """``2 theta_2^2(2 tau) = theta_3^2 - theta_4^2`` and
    ``2 theta_3^2(2 tau) = theta_3^2 + theta_4^2``; reports the larger residual."""
    _check_precision(precision_bits)
    tau = as_complex(tau, precision_bits)
    t1 = theta_eval(nome_from_tau(tau, precision_bits))
    t2 = theta_eval(transformed_nome(tau, 2, 0, 1, precision_bits))
    with mpmath.workprec(precision_bits + GUARD_BITS):
        s3, s4 = t1.theta3 ** 2, t1.theta4 ** 2
        r1 = abs(2 * t2.theta2 ** 2 - (s3 - s4))
        r2 = abs(2 * t2.theta3 ** 2 - (s3 + s4))
        scale = abs(s3) + abs(s4)
    return _report("duplication", _sample(tau), max(r1, r2), scale, precision_bits)


def check_triple_product(tau, precision_bits: int = 256) -> ResidualReport:
    """``theta_3(q) F(q)^2 F(q^4)^2 = F(q^2)^5`` with ``F(q) = prod (1 - q^l)``."""
    _check_precision(precision_bits)
    tau = as_complex(tau, precision_bits)
    f1, f2, f4 = (euler_product(transformed_nome(tau, k, 0, 1, precision_bits)) for k in (1, 2, 4))
    t = theta3(nome_from_tau(tau, precision_bits))
    with mpmath.workprec(precision_bits + GUARD_BITS):
        lhs = t * f1 ** 2 * f4 ** 2
        rhs = f2 ** 5
        residual = abs(lhs - rhs)
        scale = max(abs(lhs), abs(rhs))
    return _report("triple_product", _sample(tau), residual, scale, precision_bits)


@dataclass
class SuiteConfig:
    """What :func:`run_suite` checks; the defaults are the full certification run."""

    precision_bits: int = 256
    taus: Sequence = TAU_GRID
    qn: Sequence[int] = (3, 5, 6, 10, 12, 20, 24)
    theorem_c: Sequence[int] = (2, 4, 8, 16)
    product: Sequence[int] = (3, 5, 9, 15)
    roots: Sequence[tuple[int, int]] = ((3, 1), (5, 1), (3, 2))
    # "printed" and/or "corrected" degree-8 relation
    homogeneous: Sequence[str] = ("corrected",)
    series: bool = True
    extra_polys: dict = field(default_factory=dict)

    @classmethod
    def empty(cls, precision_bits: int = 256) -> "SuiteConfig":
        return cls(precision_bits, (), (), (), (), (), (), False)


def run_suite(config: SuiteConfig) -> list[ResidualReport]:
    """Run every configured check at every configured tau, in a fixed order."""
    prec = config.precision_bits
    out: list[ResidualReport] = []
    for tau in config.taus:
        for n in config.qn:
            out.append(check_qn_vanishing(n, tau, prec, poly=config.extra_polys.get(n)))
        for n in config.theorem_c:
            out.append(check_theoremC_fixture(n, tau, prec))
        for n in config.product:
            out.append(check_product_formula(n, tau, prec))
        for p, j in config.roots:
            out.append(check_root_of_unity_product(p, j, tau, prec))
        for variant in config.homogeneous:
            if variant not in ("printed", "corrected"):
                raise ValueError(f"unknown homogeneous variant {variant!r}")
            out.append(check_homogeneous_relation(tau, prec, corrected=variant == "corrected"))
        if config.series:
            out.append(check_jacobi_identity(tau, prec))
            out.append(check_duplication(tau, prec))
            out.append(check_triple_product(tau, prec))
    return out


def suite_exit_status(reports: Iterable[ResidualReport]) -> int:
    return 0 if all(r.passed for r in reports) else 1


def reports_to_jsonl(reports: Sequence[ResidualReport]) -> str:
    """One JSON object per report, then a summary line."""
    lines = [r.to_json() for r in reports]
    failed = sum(not r.passed for r in reports)
    lines.append(json.dumps({"summary": {"total": len(reports),
                                         "passed": len(reports) - failed,
                                         "failed": failed}}))
    return "\n".join(lines) + "\n"
