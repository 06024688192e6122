"""Exact sparse multivariate polynomials over the integers.

A :class:`SparsePoly` is an immutable map from exponent vectors to Python
``int`` coefficients over an ordered list of variable names.  Terms are
iterated in descending lexicographic order of their exponent vectors, which
is also the order used by the JSON serialization, so equal polynomials always
serialize to identical bytes.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import mpmath

__all__ = [
    "MINUS_INFINITY",
    "NotDivisibleError",
    "SparsePoly",
    "VariableMismatchError",
    "poly_add",
    "poly_eval_complex",
    "poly_eval_exact",
    "poly_mul",
    "poly_pow",
    "poly_substitute",
    "resultant_in",
    "sylvester_matrix",
]

MAX_VARIABLES = 4


class VariableMismatchError(ValueError):
    """Raised when two polynomials live over different variable lists."""


class NotDivisibleError(ArithmeticError):
    """Raised by :meth:`SparsePoly.exact_div` when the quotient is not exact."""


class _MinusInfinity:
    """Degree of the zero polynomial.

    Deliberately refuses ordering and arithmetic so that it can never leak
    into a degree computation unnoticed.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MINUS_INFINITY"

    def __str__(self):
        return "-inf"

    def _refuse(self, *args):
        raise TypeError("the degree of the zero polynomial is -infinity; "
                        "check is_zero() before using degrees arithmetically")

    __lt__ = __le__ = __gt__ = __ge__ = _refuse
    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = _refuse
    __int__ = __index__ = _refuse


MINUS_INFINITY = _MinusInfinity()


def _check_variables(variables: Sequence[str]) -> tuple[str, ...]:
    variables = tuple(variables)
    if not 1 <= len(variables) <= MAX_VARIABLES:
        raise ValueError(f"need 1 to {MAX_VARIABLES} variables, got {len(variables)}")
    if len(set(variables)) != len(variables):
        raise ValueError(f"duplicate variable names in {variables}")
    for v in variables:
        if not isinstance(v, str) or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
            raise ValueError(f"invalid variable name {v!r}")
    return variables


class SparsePoly:
    """Immutable polynomial with integer coefficients.

    >>> X, Y = SparsePoly.gens("X", "Y")
    >>> (X + Y) * (X - Y)
    SparsePoly('X^2 - Y^2', variables=('X', 'Y'))
    """

    __slots__ = ("_vars", "_terms", "_sorted", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, int] | None = None):
        self._vars = _check_variables(variables)
        nv = len(self._vars)
        clean: dict[tuple, int] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nv:
                raise ValueError(f"exponent {exp} does not match {nv} variables")
            if any((not isinstance(e, int)) or e < 0 for e in exp):
                raise ValueError(f"exponents must be nonnegative integers, got {exp}")
            if not isinstance(coef, int):
                raise TypeError(f"coefficients must be int, got {type(coef).__name__}")
            if coef:
                clean[exp] = clean.get(exp, 0) + coef
        self._terms = {e: c for e, c in clean.items() if c}
        self._sorted = None
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[tuple, int]) -> "SparsePoly":
        # trusted constructor: terms already validated and free of zeros
        obj = cls.__new__(cls)
        obj._vars = variables
        obj._terms = terms
        obj._sorted = None
        obj._hash = None
        return obj

    # -- construction ---------------------------------------------------

    @classmethod
    def constant(cls, value: int, variables: Sequence[str]) -> "SparsePoly":
        variables = _check_variables(variables)
        return cls._raw(variables, {(0,) * len(variables): value} if value else {})

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "SparsePoly":
        return cls.constant(0, variables)

    @classmethod
    def one(cls, variables: Sequence[str]) -> "SparsePoly":
        return cls.constant(1, variables)

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "SparsePoly":
        variables = _check_variables(variables)
        if name not in variables:
            raise KeyError(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {exp: 1})

    @classmethod
    def gens(cls, *variables: str) -> tuple["SparsePoly", ...]:
        return tuple(cls.var(v, variables) for v in variables)

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "SparsePoly":
        """Parse an integer polynomial expression.

        Accepts ``+ - * ^ **``, parentheses, integer literals and juxtaposition
        as multiplication (``18144XY^7``).
        """
        return _Parser(text, _check_variables(variables)).parse()

    # -- basic accessors --------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    def terms(self) -> list[tuple[tuple, int]]:
        """Terms in canonical (descending lexicographic) order."""
        if self._sorted is None:
            self._sorted = sorted(self._terms.items(), reverse=True)
        return self._sorted

    def __iter__(self) -> Iterator[tuple[tuple, int]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, exp: Sequence[int]) -> int:
        return self._terms.get(tuple(exp), 0)

    def as_dict(self) -> dict[tuple, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        zero = (0,) * len(self._vars)
        return all(e == zero for e in self._terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((0,) * len(self._vars), 0)

    def _index(self, var: str) -> int:
        try:
            return self._vars.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r} (have {self._vars})") from None

    def total_degree(self):
        """Total degree, or :data:`MINUS_INFINITY` for the zero polynomial."""
        if not self._terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self._terms)

    def degree(self, var: str):
        """Degree in one variable, :data:`MINUS_INFINITY` for zero."""
        if not self._terms:
            return MINUS_INFINITY
        i = self._index(var)
        return max(e[i] for e in self._terms)

    def leading_term(self) -> tuple[tuple, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms()[0]

    # -- variable bookkeeping ---------------------------------------------

    def with_variables(self, variables: Sequence[str]) -> "SparsePoly":
        """Re-express over another variable list containing every used variable."""
        variables = _check_variables(variables)
        if variables == self._vars:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        used = self.used_variables()
        missing = [v for v in used if v not in pos]
        if missing:
            raise VariableMismatchError(f"variables {missing} not in {variables}")
        n = len(variables)
        out = {}
        for exp, c in self._terms.items():
            new = [0] * n
            for v, e in zip(self._vars, exp):
                if e:
                    new[pos[v]] = e
            out[tuple(new)] = c
        return SparsePoly._raw(variables, out)

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self._vars)
                     if any(e[i] for e in self._terms))

    def rename(self, mapping: Mapping[str, str]) -> "SparsePoly":
        variables = tuple(mapping.get(v, v) for v in self._vars)
        return SparsePoly._raw(_check_variables(variables), self._terms)

    def inflate(self, factors: Mapping[str, int]) -> "SparsePoly":
        """Replace each ``v`` by ``v**factors[v]`` (exponent scaling)."""
        scale = [factors.get(v, 1) for v in self._vars]
        out = {tuple(e * s for e, s in zip(exp, scale)): c for exp, c in self._terms.items()}
        return SparsePoly._raw(self._vars, out)

    def scale_variables(self, factors: Mapping[str, int]) -> "SparsePoly":
        """Substitute ``v -> factors[v] * v`` for integer factors."""
        idx = [(self._index(v), k) for v, k in factors.items()]
        out = {}
        for exp, c in self._terms.items():
            for i, k in idx:
                c *= k ** exp[i]
            if c:
                out[exp] = c
        return SparsePoly._raw(self._vars, out)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other._vars != self._vars:
                raise VariableMismatchError(
                    f"variable lists differ: {self._vars} vs {other._vars}")
            return other
        if isinstance(other, int):
            return SparsePoly.constant(other, self._vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return SparsePoly._raw(self._vars, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[tuple, int] = {}
        get = out.get
        if len(self._vars) == 2:
            # the construction lives in Z[X, Y]; avoid the generic zip
            for (i1, j1), c1 in b.items():
                for (i2, j2), c2 in a.items():
                    k = (i1 + i2, j1 + j2)
                    out[k] = get(k, 0) + c1 * c2
        else:
            for e1, c1 in b.items():
                for e2, c2 in a.items():
                    k = tuple(x + y for x, y in zip(e1, e2))
                    out[k] = get(k, 0) + c1 * c2
        return SparsePoly._raw(self._vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"exponent must be a nonnegative int, got {k!r}")
        result = SparsePoly.one(self._vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self._vars == other._vars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def exact_div(self, other: "SparsePoly") -> "SparsePoly":
        """Quotient ``self / other``; raises :class:`NotDivisibleError` unless exact."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lexp, lc = other.leading_term()
        if len(other) == 1:
            out = {}
            for exp, c in self._terms.items():
                q, r = divmod(c, lc)
                e = tuple(x - y for x, y in zip(exp, lexp))
                if r or min(e) < 0:
                    raise NotDivisibleError("monomial quotient is not exact")
                out[e] = q
            return SparsePoly._raw(self._vars, out)
        rem = dict(self._terms)
        quot: dict[tuple, int] = {}
        div_terms = list(other._terms.items())
        while rem:
            exp = max(rem)
            c = rem[exp]
            q, r = divmod(c, lc)
            e = tuple(x - y for x, y in zip(exp, lexp))
            if r or min(e) < 0:
                raise NotDivisibleError(f"leading term {c}*{exp} not divisible")
            quot[e] = q
            for dexp, dc in div_terms:
                k = tuple(x + y for x, y in zip(e, dexp))
                v = rem.get(k, 0) - q * dc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return SparsePoly._raw(self._vars, quot)

    # -- structure --------------------------------------------------------

    def coefficients_in(self, var: str) -> dict[int, "SparsePoly"]:
        """Split as ``sum_k C_k * var**k``; each ``C_k`` keeps all variables."""
        i = self._index(var)
        parts: dict[int, dict] = {}
        for exp, c in self._terms.items():
            k = exp[i]
            rest = exp[:i] + (0,) + exp[i + 1:]
            parts.setdefault(k, {})[rest] = c
        return {k: SparsePoly._raw(self._vars, t) for k, t in sorted(parts.items())}

    def subs(self, var: str, replacement: "SparsePoly | int") -> "SparsePoly":
        """Compose: replace ``var`` by ``replacement``."""
        self._index(var)  # rejects unknown names
        if isinstance(replacement, int):
            replacement = SparsePoly.constant(replacement, self._vars)
        replacement = replacement.with_variables(self._vars)
        parts = self.coefficients_in(var)
        if not parts:
            return self
        # Horner in var
        top = max(parts)
        result = SparsePoly.zero(self._vars)
        for k in range(top, -1, -1):
            result = result * replacement
            if k in parts:
                result = result + parts[k]
        return result

    # -- evaluation -------------------------------------------------------

    def eval_exact(self, point: Sequence) -> Fraction:
        """Exact value at an integer/rational point."""
        if len(point) != len(self._vars):
            raise ValueError(f"point has {len(point)} entries, need {len(self._vars)}")
        pt = [Fraction(x) for x in point]
        # Horner over the canonical order, one variable at a time
        return _horner_exact(self.terms(), pt)

    def eval_complex(self, point: Sequence, precision_bits: int):
        """Return ``(value, scale)`` as mpmath numbers.

        ``scale`` is ``sum |c| * prod max(1, |x_i|)**e_i``, a bound on the
        magnitude of the individual terms used to normalize residuals.
        """
        if precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        if len(point) != len(self._vars):
            raise ValueError(f"point has {len(point)} entries, need {len(self._vars)}")
        with mpmath.workprec(precision_bits):
            xs = [mpmath.mpmathify(x) for x in point]
            mags = [max(mpmath.mpf(1), abs(x)) for x in xs]
            degs = [0] * len(xs)
            for exp in self._terms:
                for i, e in enumerate(exp):
                    if e > degs[i]:
                        degs[i] = e
            pows = [_powers(x, d) for x, d in zip(xs, degs)]
            mpows = [_powers(m, d) for m, d in zip(mags, degs)]
            value = mpmath.mpf(0)
            scale = mpmath.mpf(0)
            for exp, c in self.terms():
                t = mpmath.mpf(c)
                s = mpmath.mpf(abs(c))
                for i, e in enumerate(exp):
                    if e:
                        t *= pows[i][e]
                        s *= mpows[i][e]
                value += t
                scale += s
            return +value, +scale

    # -- serialization ----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "variables": list(self._vars),
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in self.terms()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":")) + "\n"

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "SparsePoly":
        variables = _check_variables(obj["variables"])
        terms: dict[tuple, int] = {}
        for t in obj["terms"]:
            exp = tuple(int(e) for e in t["exp"])
            coef = t["coef"]
            if not isinstance(coef, str) or not re.fullmatch(r"-?\d+", coef.strip()):
                raise ValueError(f"coefficient must be a decimal integer string, got {coef!r}")
            if exp in terms:
                raise ValueError(f"duplicate exponent {exp}")
            terms[exp] = int(coef)
        return cls(variables, terms)

    @classmethod
    def from_json(cls, text: str) -> "SparsePoly":
        return cls.from_json_obj(json.loads(text))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, c in self.terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self._vars, exp) if e)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"SparsePoly({str(self)!r}, variables={self._vars!r})"


def _powers(x, d):
    out = [mpmath.mpf(1)]
    for _ in range(d):
        out.append(out[-1] * x)
    return out


def _horner_exact(terms, pt):
    if not terms:
        return Fraction(0)
    total = Fraction(0)
    # group on the first variable, recurse on the rest
    if len(pt) == 1:
        result = Fraction(0)
        prev = None
        for exp, c in terms:
            e = exp[0]
            if prev is not None:
                result *= pt[0] ** (prev - e)
            result += c
            prev = e
        return result * pt[0] ** prev
    groups: dict[int, list] = {}
    for exp, c in terms:
        groups.setdefault(exp[0], []).append((exp[1:], c))
    prev = None
    for e in sorted(groups, reverse=True):
        if prev is not None:
            total *= pt[0] ** (prev - e)
        total += _horner_exact(groups[e], pt[1:])
        prev = e
    return total * pt[0] ** prev


# -- functional surface -------------------------------------------------------

def poly_add(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    return a + b


def poly_mul(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    return a * b


def poly_pow(a: SparsePoly, k: int) -> SparsePoly:
    return a ** k


def poly_substitute(p: SparsePoly, var: str, replacement: SparsePoly) -> SparsePoly:
    return p.subs(var, replacement)


def poly_eval_exact(p: SparsePoly, point: Sequence) -> Fraction:
    return p.eval_exact(point)


def poly_eval_complex(p: SparsePoly, point: Sequence, precision_bits: int):
    return p.eval_complex(point, precision_bits)


def sylvester_matrix(p: SparsePoly, q: SparsePoly, var: str) -> list[list[SparsePoly]]:
    """Sylvester matrix in ``var``: ``deg q`` rows of p's coefficients, then
    ``deg p`` rows of q's, highest power first."""
    q = p._coerce(q)
    dp, dq = p.degree(var), q.degree(var)
    if p.is_zero() or q.is_zero() or dp < 1 or dq < 1:
        raise ValueError(f"both polynomials need positive degree in {var!r}")
    zero = SparsePoly.zero(p.variables)
    pc, qc = p.coefficients_in(var), q.coefficients_in(var)
    prow = [pc.get(k, zero) for k in range(dp, -1, -1)]
    qrow = [qc.get(k, zero) for k in range(dq, -1, -1)]
    size = dp + dq
    rows = []
    for i in range(dq):
        rows.append([zero] * i + prow + [zero] * (size - dp - 1 - i))
    for i in range(dp):
        rows.append([zero] * i + qrow + [zero] * (size - dq - 1 - i))
    return rows


def _bareiss_det(m: list[list[SparsePoly]]) -> SparsePoly:
    n = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = None
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return SparsePoly.zero(m[0][0].variables)
        piv = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                num = m[i][j] * piv - mik * m[k][j]
                m[i][j] = num if prev is None else num.exact_div(prev)
            m[i][k] = SparsePoly.zero(piv.variables)
        prev = piv
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def resultant_in(p: SparsePoly, q: SparsePoly, var: str) -> SparsePoly:
    """Resultant of ``p`` and ``q`` with respect to ``var``.

    Determinant of :func:`sylvester_matrix` by fraction-free Bareiss
    elimination, so ``res(Y - A, Y - B) = A - B``.  The result still carries
    ``var`` in its variable list, with degree zero in it.
    """
    return _bareiss_det(sylvester_matrix(p, q, var))


# -- expression parser ----------------------------------------------------

class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.vars = variables
        names = sorted(variables, key=len, reverse=True)
        token_re = r"\s*(?:(\d+)|(\*\*|[-+*^()])|(" + "|".join(map(re.escape, names)) + r"))"
        self.tokens = []
        pos = 0
        text = text.strip()
        matcher = re.compile(token_re)
        while pos < len(text):
            mt = matcher.match(text, pos)
            if not mt or mt.end() == pos:
                raise ValueError(f"cannot parse polynomial at {text[pos:pos + 20]!r}")
            num, op, name = mt.groups()
            if num is not None:
                self.tokens.append(("num", int(num)))
            elif op is not None:
                self.tokens.append(("op", "^" if op == "**" else op))
            else:
                self.tokens.append(("var", name))
            pos = mt.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> SparsePoly:
        if not self.tokens:
            raise ValueError("empty polynomial expression")
        out = self.expr()
        if self.i != len(self.tokens):
            raise ValueError(f"trailing tokens in polynomial expression: {self.tokens[self.i:]}")
        return out

    def expr(self):
        out = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        out = self.unary()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                out = out * self.unary()
            elif kind in ("num", "var") or (kind, val) == ("op", "("):
                out = out * self.power()
            else:
                return out

    def unary(self):
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be a nonnegative integer literal")
            base = base ** val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return SparsePoly.constant(val, self.vars)
        if kind == "var":
            return SparsePoly.var(val, self.vars)
        if (kind, val) == ("op", "("):
            out = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return out
        raise ValueError(f"unexpected token {val!r}")

