"""Integer functions attached to the theta modular equations.

Dedekind's psi, Euler's totient, the counting function ``omega(a, b)``, the
index triplets ``(u, v, w)`` and the constant term ``P_m(0, Y)`` of the odd
seed polynomials.  Everything is exact integer arithmetic with trial-division
factorization, which is plenty for 64-bit inputs.
"""

from __future__ import annotations

from math import gcd, prod
from typing import NamedTuple

__all__ = [
    "Triplet",
    "b_seq",
    "constant_term",
    "constant_term_divisor_form",
    "constant_term_triplet_form",
    "divisors",
    "enumerate_triplets",
    "euler_phi",
    "factorize",
    "is_prime",
    "omega",
    "omega_bruteforce",
    "omega_divisor_form",
    "psi",
    "split_two_power",
]

_MAX = 2 ** 64


class Triplet(NamedTuple):
    u: int
    v: int
    w: int


def _check_positive(n: int, name: str = "n") -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"{name} must be an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n}")
    if n >= _MAX:
        raise ValueError(f"{name}={n} exceeds the 64-bit range")


def factorize(n: int) -> dict[int, int]:
    """Prime factorization ``{p: exponent}`` by trial division."""
    _check_positive(n)
    out: dict[int, int] = {}
    while n % 2 == 0:
        out[2] = out.get(2, 0) + 1
        n //= 2
    p = 3
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def divisors(n: int) -> list[int]:
    """All positive divisors of ``n`` in ascending order."""
    divs = [1]
    for p, k in factorize(n).items():
        divs = [d * p ** i for d in divs for i in range(k + 1)]
    return sorted(divs)


def split_two_power(n: int) -> tuple[int, int]:
    """Write ``n = 2**alpha * m`` with ``m`` odd; returns ``(alpha, m)``."""
    _check_positive(n)
    alpha = 0
    while n % 2 == 0:
        n //= 2
        alpha += 1
    return alpha, n


def psi(n: int) -> int:
    """Dedekind psi: ``n * prod_{p | n} (1 + 1/p)``; ``psi(1) == 1``."""
    _check_positive(n)
    out = n
    for p in factorize(n):
        out = out // p * (p + 1)
    return out


def euler_phi(n: int) -> int:
    _check_positive(n)
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def omega(a: int, b: int) -> int:
    """Number of ``0 <= k < b`` with ``gcd(a, b, k) == 1``.

    Uses the closed form ``(b / g) * phi(g)`` with ``g = gcd(a, b)``.
    """
    _check_positive(a, "a")
    _check_positive(b, "b")
    g = gcd(a, b)
    return b // g * euler_phi(g)


def omega_bruteforce(a: int, b: int) -> int:
    _check_positive(a, "a")
    _check_positive(b, "b")
    return sum(1 for k in range(b) if gcd(gcd(a, b), k) == 1)


def omega_divisor_form(m: int, d: int) -> int:
    """``omega(d, m/d)`` from the prime exponents of ``m`` and ``d``.

    For ``m = prod p**a_p`` and ``d = prod p**b_p`` the value is
    ``prod p**(a_p - b_p)`` times ``(1 - 1/p)`` for every prime with
    ``min(b_p, a_p - b_p) > 0``.
    """
    _check_positive(m, "m")
    _check_positive(d, "d")
    if m % d:
        raise ValueError(f"{d} does not divide {m}")
    fd = factorize(d)
    num, den = 1, 1
    for p, a in factorize(m).items():
        b = fd.get(p, 0)
        num *= p ** (a - b)
        if min(b, a - b) > 0:
            num *= p - 1
            den *= p
    return num // den


def b_seq(p: int, j: int) -> int:
    """``(p**j - 1) / (p - 1)`` for an odd prime ``p``."""
    if not isinstance(p, int) or p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if not isinstance(j, int) or j < 0:
        raise ValueError(f"j must be a nonnegative integer, got {j}")
    return (p ** j - 1) // (p - 1)


def enumerate_triplets(n: int) -> list[Triplet]:
    """All ``(u, v, w)`` with ``gcd(u, v, w) = 1``, ``u*w = n``, ``0 <= v < w``.

    Sorted by ascending ``w``, then ``v``; the list has ``psi(n)`` entries.
    """
    _check_positive(n)
    out = []
    for w in divisors(n):
        u = n // w
        g = gcd(u, w)
        out.extend(Triplet(u, v, w) for v in range(w) if gcd(g, v) == 1)
    return out


def _check_odd_seed(m: int) -> None:
    _check_positive(m, "m")
    if m < 3 or m % 2 == 0:
        raise ValueError(f"m must be an odd integer >= 3, got {m}")


def constant_term_triplet_form(m: int) -> int:
    return prod(t.u for t in enumerate_triplets(m)) ** 2


def constant_term_divisor_form(m: int) -> int:
    return prod(d ** omega(d, m // d) for d in divisors(m)) ** 2


def constant_term(m: int) -> int:
    """The constant ``P_m(0, Y)`` for odd ``m >= 3``.

    Computed both as the product of ``u**2`` over the triplets of ``m`` and as
    the squared divisor product ``prod d**omega(d, m/d)``; the two must agree.
    """
    _check_odd_seed(m)
    by_triplets = constant_term_triplet_form(m)
    by_divisors = constant_term_divisor_form(m)
    if by_triplets != by_divisors:
        raise ArithmeticError(
            f"constant term forms disagree for m={m}: {by_triplets} != {by_divisors}")
    return by_triplets
