"""Arbitrary-precision theta constants and the Euler product.

All series are summed with mpmath at ``precision_bits + GUARD_BITS`` and
truncated by an explicit tail bound.  Nomes of transformed arguments are always
computed from ``tau`` (never as fractional powers of ``q``) so there is no
branch ambiguity in ``q**(u/w)`` or ``q**(1/4)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

__all__ = [
    "GUARD_BITS",
    "QPoint",
    "ThetaValues",
    "TAU_GRID",
    "as_complex",
    "euler_product",
    "nome_from_tau",
    "theta3",
    "theta_eval",
    "theta_quotients",
    "transformed_nome",
]

GUARD_BITS = 32

# fixed sample points for every numerical property check
TAU_GRID = ("0,1", "0,2", "0,0.3", "0.1,0.7", "-0.4,1.2", "0.5,0.5")


def as_complex(value, precision_bits: int = 256):
    """Convert a number or an ``"re,im"`` string to an mpc."""
    with mpmath.workprec(precision_bits + GUARD_BITS):
        if isinstance(value, str):
            parts = value.split(",")
            if len(parts) != 2:
                raise ValueError(f"expected 're,im', got {value!r}")
            re_, im_ = (mpmath.mpf(p.strip()) for p in parts)
            return mpmath.mpc(re_, im_)
        if isinstance(value, (tuple, list)) and len(value) == 2:
            return mpmath.mpc(value[0], value[1])
        return mpmath.mpc(value)


@dataclass(frozen=True)
class QPoint:
    """A nome ``q`` with its working precision and, when known, ``tau``."""

    q: mpmath.mpc
    precision_bits: int
    tau: mpmath.mpc | None = None

    def __post_init__(self):
        if self.precision_bits < 1:
            raise ValueError("precision_bits must be positive")
        if abs(self.q) >= 1:
            raise ValueError(f"|q| must be < 1, got {mpmath.nstr(abs(self.q), 10)}")

    @classmethod
    def from_q(cls, q, precision_bits: int) -> "QPoint":
        return cls(as_complex(q, precision_bits), precision_bits)

    def describe(self) -> str:
        if self.tau is not None:
            return "tau=" + _fmt(self.tau)
        return "q=" + _fmt(self.q)


def _fmt(z) -> str:
    return f"{mpmath.nstr(z.real, 12)}{'+' if z.imag >= 0 else '-'}{mpmath.nstr(abs(z.imag), 12)}i"


@dataclass(frozen=True)
class ThetaValues:
    theta2: mpmath.mpc
    theta3: mpmath.mpc
    theta4: mpmath.mpc
    trunc_error_bound: mpmath.mpf
    terms: int


def _check_tau(tau) -> None:
    if tau.imag <= 0:
        raise ValueError(f"tau must lie in the upper half-plane, got {_fmt(tau)}")


def nome_from_tau(tau, precision_bits: int) -> QPoint:
    """``q = exp(i*pi*tau)``."""
    return transformed_nome(tau, 1, 0, 1, precision_bits)


def transformed_nome(tau, u: int, v: int, w: int, precision_bits: int) -> QPoint:
    """Nome of ``(u*tau + 2v) / w``, computed from ``tau`` directly."""
    if w <= 0:
        raise ValueError(f"w must be positive, got {w}")
    if u <= 0:
        raise ValueError(f"u must be positive, got {u}")
    tau = as_complex(tau, precision_bits)
    _check_tau(tau)
    with mpmath.workprec(precision_bits + GUARD_BITS):
        t = (u * tau + 2 * v) / w
        q = mpmath.exp(mpmath.mpc(0, 1) * mpmath.pi * t)
    return QPoint(q, precision_bits, t)


def _series_terms(absq, bits: int) -> tuple[int, mpmath.mpf]:
    """Smallest N with ``2|q|**((N+1)**2) / (1 - |q|) < 2**-bits``, and that bound."""
    if absq == 0:
        return 0, mpmath.mpf(0)
    target = -bits * mpmath.log(2)
    logq = mpmath.log(absq)
    head = mpmath.log(2) - mpmath.log(1 - absq)
    n = 0
    while (n + 1) ** 2 * logq + head >= target:
        n += 1
    return n, 2 * absq ** ((n + 1) ** 2) / (1 - absq)


def theta_eval(point: QPoint) -> ThetaValues:
    """theta_2, theta_3, theta_4 at ``point``.

    ``theta_3 = 1 + 2 sum q^(k^2)``, ``theta_4`` the same with signs
    ``(-1)^k``, ``theta_2 = 2 q^(1/4) sum_{k>=0} q^(k(k+1))``.  One cutoff N
    serves all three series since ``k(k+1) >= k^2``.
    """
    bits = point.precision_bits + GUARD_BITS
    with mpmath.workprec(bits):
        q = mpmath.mpc(point.q)
        absq = abs(q)
        if absq == 0:
            zero = mpmath.mpc(0)
            one = mpmath.mpc(1)
            return ThetaValues(zero, one, one, mpmath.mpf(0), 0)
        n, bound = _series_terms(absq, bits)
        if point.tau is not None:
            q4 = mpmath.exp(mpmath.mpc(0, 1) * mpmath.pi * point.tau / 4)
        else:
            q4 = mpmath.root(q, 4)
        q2 = q * q
        # q^(k^2) and q^(k(k+1)) updated by q^(2k+1) and q^(2k+2)
        sq = mpmath.mpc(1)
        step_sq = q
        tri = mpmath.mpc(1)
        step_tri = q2
        s3 = mpmath.mpc(0)
        s4 = mpmath.mpc(0)
        s2 = mpmath.mpc(1)
        for k in range(1, n + 1):
            sq *= step_sq
            step_sq *= q2
            s3 += sq
            s4 += -sq if k & 1 else sq
            tri *= step_tri
            step_tri *= q2
            s2 += tri
        return ThetaValues(2 * q4 * s2, 1 + 2 * s3, 1 + 2 * s4, bound, n)


def theta3(point: QPoint):
    return theta_eval(point).theta3


def euler_product(point: QPoint):
    """``F(q) = prod_{l>=1} (1 - q^l)``, truncated once ``|q|^(L+1)/(1-|q|)``
    drops below the working precision."""
    bits = point.precision_bits + GUARD_BITS
    with mpmath.workprec(bits):
        q = mpmath.mpc(point.q)
        absq = abs(q)
        if absq == 0:
            return mpmath.mpc(1)
        target = -bits * mpmath.log(2)
        logq = mpmath.log(absq)
        tail = -mpmath.log(1 - absq)
        n = 0
        while (n + 1) * logq + tail >= target:
            n += 1
        out = mpmath.mpc(1)
        qk = mpmath.mpc(1)
        for _ in range(n):
            qk *= q
            out *= 1 - qk
        return out


def theta_quotients(tau, n: int, precision_bits: int, with_h: bool = False):
    """``X = theta_3^4(n tau)/theta_3^4(tau)`` and ``Y = theta_2^4/theta_3^4``.

    With ``with_h`` the scaled value ``n^2 X`` is appended as a third entry.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    tau = as_complex(tau, precision_bits)
    base = theta_eval(nome_from_tau(tau, precision_bits))
    with mpmath.workprec(precision_bits + GUARD_BITS):
        if abs(base.theta3) <= mpmath.eps:
            raise ValueError(f"theta_3 vanishes at tau={_fmt(tau)}; degenerate sample point")
        if n == 1:
            x = mpmath.mpc(1)
        else:
            top = theta3(transformed_nome(tau, n, 0, 1, precision_bits))
            x = (top / base.theta3) ** 4
        y = (base.theta2 / base.theta3) ** 4
        if with_h:
            return x, y, n * n * x
        return x, y
