"""Seed polynomials and the doubling construction of ``Q_n``.

``Q_n(X, Y)`` vanishes at ``X = theta_3^4(n tau)/theta_3^4(tau)``,
``Y = theta_2^4(tau)/theta_3^4(tau)``.  For odd ``m`` it is obtained from
Nesterenko's ``P_m`` by rescaling; each doubling step carries ``Q_n`` to
``Q_2n`` through the duplication formulas for theta_2 and theta_3.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Mapping

from .numtheory import constant_term, psi, split_two_power
from .polyring import NotDivisibleError, SparsePoly, resultant_in

__all__ = [
    "ConstructionResult",
    "DoubleStep",
    "NoSeedError",
    "SeedRecord",
    "VARS",
    "audit_step",
    "build_qn",
    "builtin_seeds",
    "check_structure",
    "double_step",
    "Elimination",
    "HOMOGENEOUS_VARS",
    "homogeneous_eliminant",
    "homogeneous_relation",
    "load_seed",
    "rescale_seed",
    "save_seed",
    "seed_polynomial",
    "theorem_c_fixture",
    "theorem_c_fixtures",
    "validate_seed",
]

VARS = ("X", "Y")

_SEED_TEXT = {
    3: "9 - (28 - 16Y + Y^2)X + 30X^2 - 12X^3 + X^4",
    5: "25 - (126 - 832Y + 308Y^2 - 32Y^3 + Y^4)X + (255 + 1920Y - 120Y^2)X^2"
       " + (-260 + 320Y - 20Y^2)X^3 + 135X^4 - 30X^5 + X^6",
}

# X = theta_3^2(n tau)/theta_3^2(tau), Y = theta_4(tau)/theta_3(tau)
_THEOREM_C_TEXT = {
    2: "2X - Y^2 - 1",
    4: "4X - (1+Y)^2",
    8: "64X^2 - 16(1+Y)^2X + (1-Y)^4",
    16: "65536X^4 - 16384(1+Y)^2X^3 + 512(3Y^4+4Y^3+18Y^2+4Y+3)X^2"
        " - 64(1+Y)^2(Y^4+28Y^3+6Y^2+28Y+1)X + (1-Y)^8",
}

# degree-8 relation claimed for (theta_3(3 tau), theta_3(2 tau), theta_3(tau)),
# exactly as printed; it does not vanish there (see the corrected text below)
_HOMOGENEOUS_TEXT = "27X^8 - 18X^4Y^4 - 64X^2Y^4Z^2 + 64X^2Y^2Z^4 - 8X^2Z^6 - Z^8"
# the factor of the P_2/P_3 eliminant that does vanish: X^4Y^4 -> X^4Z^4
_HOMOGENEOUS_CORRECTED_TEXT = "27X^8 - 18X^4Z^4 - 64X^2Y^4Z^2 + 64X^2Y^2Z^4 - 8X^2Z^6 - Z^8"
HOMOGENEOUS_VARS = ("X", "Y", "Z")


class NoSeedError(LookupError):
    """No seed polynomial is available for the odd part of ``n``."""


@dataclass(frozen=True)
class SeedRecord:
    """Nesterenko's ``P_m`` in its own normalization ``(m^2 X', 16 lambda)``."""

    m: int
    P: SparsePoly
    provenance: str = ""


@dataclass(frozen=True)
class DoubleStep:
    B: SparsePoly
    D: SparsePoly
    E: SparsePoly
    Qtilde: SparsePoly
    Q: SparsePoly
    budget: int
    c: int


@dataclass(frozen=True)
class ConstructionResult:
    n: int
    Q: SparsePoly
    alpha: int
    m: int
    c: int
    intermediates: tuple[DoubleStep, ...] = field(default=(), repr=False)

    @property
    def degree(self) -> int:
        return (2 ** self.alpha) * psi(self.m)


def seed_polynomial(m: int) -> SparsePoly:
    return SparsePoly.parse(_SEED_TEXT[m], VARS)


def builtin_seeds() -> list[SeedRecord]:
    return [SeedRecord(m, seed_polynomial(m), "builtin: Nesterenko P_%d" % m)
            for m in sorted(_SEED_TEXT)]


def theorem_c_fixtures() -> dict[int, SparsePoly]:
    return {n: SparsePoly.parse(t, VARS) for n, t in _THEOREM_C_TEXT.items()}


def theorem_c_fixture(n: int) -> SparsePoly:
    if n not in _THEOREM_C_TEXT:
        raise ValueError(f"no power-of-two fixture for n={n} (have {sorted(_THEOREM_C_TEXT)})")
    return SparsePoly.parse(_THEOREM_C_TEXT[n], VARS)


def homogeneous_relation(corrected: bool = False) -> SparsePoly:
    """The degree-8 relation between theta_3(3 tau), theta_3(2 tau), theta_3(tau).

    By default the polynomial as printed; ``corrected=True`` gives the
    eliminant factor that actually vanishes (see :func:`homogeneous_eliminant`).
    """
    text = _HOMOGENEOUS_CORRECTED_TEXT if corrected else _HOMOGENEOUS_TEXT
    return SparsePoly.parse(text, HOMOGENEOUS_VARS)


@dataclass(frozen=True)
class Elimination:
    """Eliminant of P_2 and a seed P_m, and how candidate relations divide it."""

    m: int
    eliminant: SparsePoly
    divisors: dict[str, SparsePoly | None]


def homogeneous_eliminant(m: int = 3, seeds: Mapping[int, SeedRecord] | None = None) -> Elimination:
    """Eliminate ``U = (theta_4/theta_3)^2`` between P_2 and the seed ``P_m``.

    With ``X = theta_3(m tau)``, ``Y = theta_3(2 tau)``, ``Z = theta_3(tau)``,
    P_2 becomes ``2Y^2 - (U + 1) Z^2`` and ``P_m(m^2 X^4/Z^4, 16(1 - U^2))``
    is cleared of denominators; their resultant in ``U`` is a homogeneous
    polynomial in ``X, Y, Z`` vanishing at the theta values.  For ``m = 3`` the
    printed and corrected degree-8 relations are tried as exact divisors.
    """
    V = HOMOGENEOUS_VARS + ("U",)
    X, Y, Z, U = SparsePoly.gens(*V)
    p2 = theorem_c_fixture(2)
    d2 = p2.degree("X")
    a = SparsePoly.zero(V)
    for (i, j), c in p2:
        if j % 2:
            raise ValueError("P_2 fixture must be even in Y")
        a = a + c * Y ** (2 * i) * Z ** (2 * (d2 - i)) * U ** (j // 2)
    seed = _seed_for(m, seeds).P.with_variables(VARS)
    dh = seed.degree("X")
    lam = 16 - 16 * U ** 2
    b = SparsePoly.zero(V)
    for (k, l), c in seed:
        b = b + c * (m * m) ** k * X ** (4 * k) * Z ** (4 * (dh - k)) * lam ** l
    res = resultant_in(a, b, "U").with_variables(HOMOGENEOUS_VARS)
    divisors: dict[str, SparsePoly | None] = {}
    if m == 3:
        for name, corrected in (("printed", False), ("corrected", True)):
            try:
                divisors[name] = res.exact_div(homogeneous_relation(corrected))
            except NotDivisibleError:
                divisors[name] = None
    return Elimination(m, res, divisors)


def rescale_seed(seed: SeedRecord) -> SparsePoly:
    """``Q_m(X, Y) = P_m(m^2 X, 16 Y)``."""
    return seed.P.with_variables(VARS).scale_variables({"X": seed.m ** 2, "Y": 16})


def validate_seed(seed: SeedRecord, numeric: bool = True, precision_bits: int = 128) -> None:
    """Raise ValueError unless ``seed`` has the expected shape and vanishes at tau = i."""
    m = seed.m
    if m < 3 or m % 2 == 0:
        raise ValueError(f"seed m must be odd and >= 3, got {m}")
    P = seed.P.with_variables(VARS)
    if P.is_zero() or P.degree("X") != psi(m):
        raise ValueError(f"seed for m={m}: deg_X P must be psi(m)={psi(m)}")
    at_zero = P.subs("X", 0)
    if not at_zero.is_constant() or at_zero.constant_value() != constant_term(m):
        raise ValueError(f"seed for m={m}: P(0, Y) must be the constant {constant_term(m)}")
    if numeric:
        # local import: verify depends on this module
        from .verify import check_qn_vanishing
        report = check_qn_vanishing(m, "0,1", precision_bits, poly=rescale_seed(seed))
        if not report.passed:
            raise ValueError(f"seed for m={m} does not vanish numerically "
                             f"(residual {report.residual:.3e}, tolerance {report.tolerance:.3e})")


def _binomial_row(k: int, sign: int) -> list[int]:
    # coefficients of (1 + sign*s)^k in s
    return [comb(k, i) * sign ** i for i in range(k + 1)]


def _convolve(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def double_step(Q: SparsePoly, budget: int, c: int) -> DoubleStep:
    """One doubling step ``Q_n -> Q_2n``.

    ``B(X, Y) = sum 4^v a_{v,u} X^{4v} (1-Y^2)^{2u} (1+Y^2)^{2(budget-v-u)}``
    is split by the parity of the power of ``Y^2`` as
    ``B = D(X^4, Y^4) + Y^2 E(X^4, Y^4)``; then ``Qtilde = D^2 - Y E^2`` and
    the new polynomial is ``Qtilde(X, 1 - Y)`` with budget ``2*budget`` and
    constant ``c^2``.
    """
    Q = Q.with_variables(VARS)
    for (nu, mu), _ in Q:
        if nu + mu > budget:
            raise ValueError(f"monomial X^{nu} Y^{mu} exceeds the degree budget {budget}")
    minus = {}
    plus = {}
    # coefficient lists in s = Y^2, grouped by the power of X
    rows: dict[int, list[int]] = {}
    for (nu, mu), a in Q:
        if mu not in minus:
            minus[mu] = _binomial_row(2 * mu, -1)
        k = 2 * (budget - nu - mu)
        if k not in plus:
            plus[k] = _binomial_row(k, 1)
        poly = _convolve(minus[mu], plus[k])
        row = rows.setdefault(nu, [0] * (2 * budget + 1))
        scale = a * 4 ** nu
        for i, x in enumerate(poly):
            row[i] += scale * x
    b_terms, d_terms, e_terms = {}, {}, {}
    for nu, row in rows.items():
        for k, coef in enumerate(row):
            if not coef:
                continue
            b_terms[(4 * nu, 2 * k)] = coef
            if k % 2 == 0:
                d_terms[(nu, k // 2)] = coef
            else:
                e_terms[(nu, (k - 1) // 2)] = coef
    B = SparsePoly(VARS, b_terms)
    D = SparsePoly(VARS, d_terms)
    E = SparsePoly(VARS, e_terms)
    Y = SparsePoly.var("Y", VARS)
    Qtilde = D * D - Y * E * E
    Qnew = Qtilde.subs("Y", 1 - Y)
    return DoubleStep(B, D, E, Qtilde, Qnew, 2 * budget, c * c)


def audit_step(step: DoubleStep) -> bool:
    """Exact identities every step must satisfy.

    ``B(X, Y) = D(X^4, Y^4) + Y^2 E(X^4, Y^4)`` and
    ``Qtilde(X^4, Y^4) = (D + Y^2 E)(D - Y^2 E)`` at ``(X^4, Y^4)``.
    """
    Y = SparsePoly.var("Y", VARS)
    D4 = step.D.inflate({"X": 4, "Y": 4})
    E4 = step.E.inflate({"X": 4, "Y": 4})
    plus = D4 + Y ** 2 * E4
    minus = D4 - Y ** 2 * E4
    return plus == step.B and step.Qtilde.inflate({"X": 4, "Y": 4}) == plus * minus


def _seed_for(m: int, seeds: Mapping[int, SeedRecord] | None) -> SeedRecord:
    if seeds and m in seeds:
        return seeds[m]
    for s in builtin_seeds():
        if s.m == m:
            return s
    raise NoSeedError(f"no seed polynomial for m={m}; supply one with --seed")


def build_qn(n: int, seeds: Mapping[int, SeedRecord] | None = None,
             audit: bool = False) -> ConstructionResult:
    """Construct ``Q_n`` for ``n = 2^alpha m`` with odd ``m >= 3``.

    ``seeds`` maps odd ``m`` to user-supplied :class:`SeedRecord` objects,
    overriding the built-in ``P_3`` and ``P_5``.  With ``audit`` every
    intermediate :class:`DoubleStep` is kept on the result.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    alpha, m = split_two_power(n)
    if m == 1:
        raise ValueError(f"n={n} is a power of two; only the fixed polynomials P_2..P_16 cover it")
    if not seeds and not audit:
        return _build_cached(n)
    return _build(n, alpha, m, _seed_for(m, seeds), audit)


@lru_cache(maxsize=None)
def _build_cached(n: int) -> ConstructionResult:
    alpha, m = split_two_power(n)
    return _build(n, alpha, m, _seed_for(m, None), False)


def _build(n, alpha, m, seed, audit):
    c = constant_term(m)
    if seed is not None and seed.m != m:
        raise ValueError(f"seed is for m={seed.m}, need m={m}")
    Q = rescale_seed(seed)
    budget = psi(m)
    cc = c
    steps = []
    for _ in range(alpha):
        step = double_step(Q, budget, cc)
        if audit:
            steps.append(step)
        Q, budget, cc = step.Q, step.budget, step.c
    return ConstructionResult(n, Q, alpha, m, c, tuple(steps))


def check_structure(result: ConstructionResult) -> list[str]:
    """Structural laws of a constructed ``Q_n``; returns the violated ones."""
    problems = []
    Q = result.Q
    N = result.degree
    lead = result.c ** (2 ** result.alpha)
    expected = SparsePoly(VARS, {(0, N): lead}) if result.alpha else SparsePoly.constant(lead, VARS)
    if Q.subs("X", 0) != expected:
        problems.append("Q(0, Y) != c^(2^alpha) Y^(2^alpha psi(m))")
    if Q.is_zero() or Q.total_degree() != N:
        problems.append(f"total degree is not {N}")
    if any(nu + j > N for (nu, j), _ in Q):
        problems.append("deg R_{n,j} exceeds 2^alpha psi(m) - j")
    if Q.eval_exact((1, 0)) != 0:
        problems.append("Q(1, 0) != 0")
    return problems


# -- seed files ---------------------------------------------------------------

def load_seed(path: str | Path) -> SeedRecord:
    """Read a seed in polynomial JSON.

    Metadata ``{"m", "normalization", "provenance"}`` is taken from a ``"meta"``
    key in the same document or from a sidecar ``<stem>.meta.json``.
    """
    path = Path(path)
    obj = json.loads(path.read_text())
    meta = obj.get("meta")
    if meta is None:
        sidecar = path.with_name(path.stem + ".meta.json")
        if not sidecar.exists():
            raise ValueError(f"seed {path} has no metadata (expected 'meta' key or {sidecar.name})")
        meta = json.loads(sidecar.read_text())
    if meta.get("normalization", "theoremD") != "theoremD":
        raise ValueError(f"unsupported seed normalization {meta.get('normalization')!r}")
    P = SparsePoly.from_json_obj(obj).with_variables(VARS)
    return SeedRecord(int(meta["m"]), P, str(meta.get("provenance", str(path))))


def save_seed(seed: SeedRecord, path: str | Path) -> None:
    """Write ``seed`` as polynomial JSON plus a sidecar metadata file."""
    path = Path(path)
    path.write_text(seed.P.to_json())
    meta = {"m": seed.m, "normalization": "theoremD", "provenance": seed.provenance}
    path.with_name(path.stem + ".meta.json").write_text(json.dumps(meta) + "\n")
