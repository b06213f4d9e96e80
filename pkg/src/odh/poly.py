"""Sparse multivariate polynomials and rational functions over exact rationals.

The variable set is fixed and ordered: ``x > y > k``.  A polynomial is stored
as a finite map from exponent triples ``(ex, ey, ek)`` to nonzero rational
coefficients (:class:`fractions.Fraction`).  Degree accessors return the
distinguished value ``NEG_INF`` (``float('-inf')``) for the zero polynomial so
that ``deg(f*g) = deg(f) + deg(g)`` holds uniformly over an integral domain.

Monomials are compared in graded lexicographic order with ``x > y > k``; this
fixes leading terms, content signs, and therefore all canonical forms used by
golden-file tests.

:class:`MPoly` values are immutable and hashable.  :class:`RatFun` is a reduced
fraction of polynomials whose denominator is primitive (integer content and
sign stripped) with a positive leading coefficient; the rational content of the
fraction lives in the numerator.  Constructing ``p/q`` and ``(c*p)/(c*q)``
yields structurally identical values for any nonzero ``c``.

JSON wire format (used by every module)::

    polynomial:        {"terms": [{"c": "<n or n/d>", "e": [ex, ey, ek]}]}
    rational function: {"num": <polynomial>, "den": <polynomial>}

The parser is strict: coefficient strings must be reduced, nonzero, and have a
positive denominator; exponents must be nonnegative integers; duplicate
exponent triples are rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd as _int_gcd
from typing import Iterator, Mapping, Optional, Union

__all__ = [
    "NEG_INF",
    "Rat",
    "MPoly",
    "RatFun",
    "NonDivisibleError",
    "PolyParseError",
    "poly_gcd",
    "exact_div",
    "rising_factorial",
]

#: Distinguished degree of the zero polynomial.
NEG_INF = float("-inf")

#: Exact rational scalars.  ``fractions.Fraction`` already maintains the
#: required invariants (reduced, positive denominator).
Rat = Fraction

Exponent = tuple[int, int, int]
Scalar = Union[int, Fraction]

_COEFF_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


class NonDivisibleError(ArithmeticError):
    """Raised by :func:`exact_div` when the divisor does not divide exactly."""


class PolyParseError(ValueError):
    """Raised when JSON data violates the polynomial wire format."""


def _grlex_key(e: Exponent) -> tuple[int, int, int, int]:
    """Sort key realizing graded lexicographic order with x > y > k."""
    return (e[0] + e[1] + e[2], e[0], e[1], e[2])


class MPoly:
    """Immutable sparse polynomial in ``x, y, k`` over exact rationals.

    Invariant: no stored coefficient is zero.

    Example::

        >>> x, y = MPoly.var("x"), MPoly.var("y")
        >>> (x + y) * (x - y) == x**2 - y**2
        True
        >>> MPoly.zero().deg_x
        -inf
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Fraction] | None = None):
        data: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    data[(int(e[0]), int(e[1]), int(e[2]))] = Fraction(c)
        self._terms = data
        self._hash: Optional[int] = None

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @staticmethod
    def zero() -> "MPoly":
        return _ZERO

    @staticmethod
    def one() -> "MPoly":
        return _ONE

    @staticmethod
    def const(c: Scalar) -> "MPoly":
        """The constant polynomial ``c``."""
        c = Fraction(c)
        return MPoly({(0, 0, 0): c}) if c else _ZERO

    @staticmethod
    def var(name: str) -> "MPoly":
        """The variable ``x``, ``y``, or ``k`` as a polynomial."""
        try:
            i = ("x", "y", "k").index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r}") from None
        e = [0, 0, 0]
        e[i] = 1
        return MPoly({tuple(e): Fraction(1)})

    @staticmethod
    def monomial(c: Scalar, e: Exponent) -> "MPoly":
        return MPoly({e: Fraction(c)})

    # ------------------------------------------------------------------
    # container-ish access
    # ------------------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        """Read-only view of the exponent-to-coefficient map."""
        return self._terms

    def __iter__(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, e: Exponent) -> Fraction:
        return self._terms.get(e, Fraction(0))

    # ------------------------------------------------------------------
    # equality / hashing
    # ------------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # pickling support: the cached hash is transient state
    def __getstate__(self):
        return self._terms

    def __setstate__(self, state):
        self._terms = state
        self._hash = None

    # ------------------------------------------------------------------
    # degrees and leading data
    # ------------------------------------------------------------------

    def _deg(self, i: int):
        if not self._terms:
            return NEG_INF
        return max(e[i] for e in self._terms)

    @property
    def deg_x(self):
        return self._deg(0)

    @property
    def deg_y(self):
        return self._deg(1)

    @property
    def deg_k(self):
        return self._deg(2)

    @property
    def total_deg(self):
        if not self._terms:
            return NEG_INF
        return max(e[0] + e[1] + e[2] for e in self._terms)

    def leading_term(self) -> tuple[Exponent, Fraction]:
        """Leading ``(exponent, coefficient)`` under graded lex with x > y > k.

        Raises ``ValueError`` on the zero polynomial.
        """
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=_grlex_key)
        return e, self._terms[e]

    def leading_coeff(self) -> Fraction:
        return self.leading_term()[1]

    def is_constant(self) -> bool:
        return all(e == (0, 0, 0) for e in self._terms)

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (0 for the zero polynomial)."""
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((0, 0, 0), Fraction(0))

    # ------------------------------------------------------------------
    # ring arithmetic
    # ------------------------------------------------------------------

    def __add__(self, other: Union["MPoly", Scalar]) -> "MPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        big, small = (self._terms, other._terms)
        if len(big) < len(small):
            big, small = small, big
        out = dict(big)
        for e, c in small.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return _raw(out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return _raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Union["MPoly", Scalar]) -> "MPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "MPoly":
        return (-self) + other

    def __mul__(self, other: Union["MPoly", Scalar]) -> "MPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return _ZERO
        if len(a) > len(b):
            a, b = b, a
        out: dict[Exponent, Fraction] = {}
        for (e0, e1, e2), c in a.items():
            for (f0, f1, f2), d in b.items():
                e = (e0 + f0, e1 + f1, e2 + f2)
                s = out.get(e)
                if s is None:
                    out[e] = c * d
                else:
                    s = s + c * d
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return _raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "MPoly":
        c = Fraction(c)
        if not c:
            return _ZERO
        return _raw({e: v * c for e, v in self._terms.items()})

    # ------------------------------------------------------------------
    # substitution actions
    # ------------------------------------------------------------------

    def shift(self, var: str) -> "MPoly":
        """Substitute ``var + 1`` for ``var`` (``var`` is ``"x"`` or ``"k"``).

        A degree-preserving ring automorphism.

        Example::

            >>> MPoly.var("x").shift("x") == MPoly.var("x") + 1
            True
        """
        if var == "x":
            idx = 0
        elif var == "k":
            idx = 2
        else:
            raise ValueError("shift variable must be 'x' or 'k'")
        out: dict[Exponent, Fraction] = {}
        binom_cache: dict[int, list[int]] = {}
        for e, c in self._terms.items():
            n = e[idx]
            row = binom_cache.get(n)
            if row is None:
                row = [1]
                for j in range(n):
                    row.append(row[-1] * (n - j) // (j + 1))
                binom_cache[n] = row
            for j in range(n + 1):
                f = list(e)
                f[idx] = j
                fe = tuple(f)
                add = c * row[j]
                s = out.get(fe)
                if s is None:
                    out[fe] = add
                else:
                    s = s + add
                    if s:
                        out[fe] = s
                    else:
                        del out[fe]
        return _raw(out)

    def shift_x(self) -> "MPoly":
        return self.shift("x")

    def shift_k(self) -> "MPoly":
        return self.shift("k")

    def derivative_x(self) -> "MPoly":
        """Formal partial derivative with respect to ``x``."""
        out: dict[Exponent, Fraction] = {}
        for (e0, e1, e2), c in self._terms.items():
            if e0:
                out[(e0 - 1, e1, e2)] = c * e0
        return _raw(out)

    def eval_at(self, qx: Fraction, qy: Fraction, qk: Fraction) -> Fraction:
        """Evaluate at an exact rational point (testing oracle)."""
        total = Fraction(0)
        for (e0, e1, e2), c in self._terms.items():
            total += c * qx**e0 * qy**e1 * qk**e2
        return total

    # ------------------------------------------------------------------
    # content and normalization
    # ------------------------------------------------------------------

    def content(self) -> Fraction:
        """Rational content: the positive generator of the coefficients'
        fractional ideal, carrying the sign of the leading coefficient.

        ``self.scale(1 / content)`` has coprime integer coefficients and a
        positive leading coefficient.  Content of the zero polynomial is 0.
        """
        if not self._terms:
            return Fraction(0)
        num_gcd = 0
        den_lcm = 1
        for c in self._terms.values():
            num_gcd = _int_gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // _int_gcd(den_lcm, c.denominator)
        cont = Fraction(num_gcd, den_lcm)
        if self.leading_coeff() < 0:
            cont = -cont
        return cont

    def primitive(self) -> "MPoly":
        """``self`` divided by its content (the zero polynomial maps to itself)."""
        if not self._terms:
            return self
        return self.scale(1 / self.content())

    # ------------------------------------------------------------------
    # rendering / JSON
    # ------------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms sorted descending under graded lex (canonical order)."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (e0, e1, e2), c in self.sorted_terms():
            mono = "".join(
                f"{v}^{e}" if e > 1 else (v if e == 1 else "")
                for v, e in (("x", e0), ("y", e1), ("k", e2))
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts).replace("+ -", "- ")
        return s

    def to_json(self) -> dict:
        return {
            "terms": [
                {"c": _coeff_str(c), "e": [e[0], e[1], e[2]]}
                for e, c in self.sorted_terms()
            ]
        }

    @staticmethod
    def from_json(obj: object) -> "MPoly":
        """Parse the polynomial wire format, strictly.

        Rejects: non-object payloads, missing/extra structure, coefficient
        strings that are zero, unreduced, or have a non-positive denominator,
        negative or non-integer exponents, and duplicate exponent triples.
        """
        if not isinstance(obj, dict) or "terms" not in obj:
            raise PolyParseError("polynomial JSON must be an object with a 'terms' list")
        terms = obj["terms"]
        if not isinstance(terms, list):
            raise PolyParseError("'terms' must be a list")
        data: dict[Exponent, Fraction] = {}
        for t in terms:
            if not isinstance(t, dict) or set(t) != {"c", "e"}:
                raise PolyParseError("each term must be an object with keys 'c' and 'e'")
            c = _parse_coeff(t["c"])
            e = t["e"]
            if (
                not isinstance(e, list)
                or len(e) != 3
                or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in e)
            ):
                raise PolyParseError(f"exponent triple must be three nonnegative integers, got {e!r}")
            key = (e[0], e[1], e[2])
            if key in data:
                raise PolyParseError(f"duplicate exponent triple {key}")
            data[key] = c
        return MPoly(data)


def _raw(terms: dict[Exponent, Fraction]) -> MPoly:
    """Wrap an already-normalized term dict without copying."""
    p = MPoly.__new__(MPoly)
    p._terms = terms
    p._hash = None
    return p


def _coerce(v: object):
    if isinstance(v, MPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return MPoly.const(v)
    return NotImplemented


def _coeff_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _parse_coeff(s: object) -> Fraction:
    if not isinstance(s, str):
        raise PolyParseError(f"coefficient must be a string, got {type(s).__name__}")
    m = _COEFF_RE.match(s)
    if not m:
        raise PolyParseError(f"malformed coefficient {s!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise PolyParseError(f"coefficient {s!r} has denominator 0")
    if num == 0:
        raise PolyParseError("zero coefficients may not be stored")
    if _int_gcd(abs(num), den) != 1:
        raise PolyParseError(f"coefficient {s!r} is not reduced")
    return Fraction(num, den)


_ZERO = MPoly()
_ONE = MPoly({(0, 0, 0): Fraction(1)})


# ----------------------------------------------------------------------
# gcd, exact division, rising factorial
# ----------------------------------------------------------------------


def exact_div(f: MPoly, g: MPoly) -> MPoly:
    """Exact polynomial division ``f / g``.

    Raises :class:`NonDivisibleError` unless ``g`` divides ``f`` exactly.

    Example::

        >>> x, y = MPoly.var("x"), MPoly.var("y")
        >>> exact_div(x**2 - y**2, x - y) == x + y
        True
    """
    if not g:
        raise ZeroDivisionError("exact division by the zero polynomial")
    if not f:
        return _ZERO
    quotient: dict[Exponent, Fraction] = {}
    rem = dict(f._terms)
    ge, gc = g.leading_term()
    while rem:
        re_ = max(rem, key=_grlex_key)
        rc = rem[re_]
        qe = (re_[0] - ge[0], re_[1] - ge[1], re_[2] - ge[2])
        if min(qe) < 0:
            raise NonDivisibleError("polynomials do not divide exactly")
        qc = rc / gc
        quotient[qe] = qc
        for (e0, e1, e2), c in g._terms.items():
            e = (qe[0] + e0, qe[1] + e1, qe[2] + e2)
            s = rem.get(e, Fraction(0)) - qc * c
            if s:
                rem[e] = s
            else:
                rem.pop(e, None)
    return _raw(quotient)


def _divides(g: MPoly, f: MPoly) -> bool:
    try:
        exact_div(f, g)
        return True
    except NonDivisibleError:
        return False


class _GcdEngine:
    """Lazy bridge to sympy's sparse polynomial ring over the rationals.

    The heavy lifting (multivariate gcd) is delegated to sympy, which uses
    fast heuristic/modular algorithms; results are re-normalized here to the
    package's canonical form (primitive, positive graded-lex leading
    coefficient), so callers never see sympy's own normalization.
    """

    def __init__(self):
        self._ring = None
        self._QQ = None

    def _setup(self):
        if self._ring is None:
            from sympy import QQ
            from sympy.polys.rings import ring

            self._ring = ring("x,y,k", QQ)[0]
            self._QQ = QQ
        return self._ring, self._QQ

    def to_ring(self, p: MPoly):
        R, QQ = self._setup()
        return R({e: QQ(c.numerator, c.denominator) for e, c in p._terms.items()})

    def from_ring(self, q) -> MPoly:
        return _raw(
            {
                tuple(e): Fraction(int(c.numerator), int(c.denominator))
                for e, c in q.terms()
            }
        )

    def gcd(self, f: MPoly, g: MPoly) -> MPoly:
        return self.from_ring(self.to_ring(f).gcd(self.to_ring(g)))


_ENGINE = _GcdEngine()


def poly_gcd(f: MPoly, g: MPoly) -> MPoly:
    """Greatest common divisor, returned primitive with positive leading
    coefficient (graded lex).  ``poly_gcd(0, 0) = 0``.

    Example::

        >>> x, y = MPoly.var("x"), MPoly.var("y")
        >>> poly_gcd(x**2 - y**2, x + y) == x + y
        True
    """
    if not f:
        return g.primitive()
    if not g:
        return f.primitive()
    if f.is_constant() or g.is_constant():
        return _ONE
    return _ENGINE.gcd(f, g).primitive()


def poly_lcm(f: MPoly, g: MPoly) -> MPoly:
    """Least common multiple, primitive with positive leading coefficient."""
    if not f or not g:
        return _ZERO
    return exact_div(f.primitive() * g.primitive(), poly_gcd(f, g)).primitive()


def rising_factorial(p: MPoly, m: int) -> MPoly:
    """The product ``p (p+1) ... (p+m-1)``; empty product = 1, single = p.

    Example::

        >>> k = MPoly.var("k")
        >>> rising_factorial(k, 3) == k**3 + 3*k**2 + 2*k
        True
    """
    if m < 0:
        raise ValueError("rising factorial needs a nonnegative length")
    result = _ONE
    for i in range(m):
        result = result * (p + i)
    return result


# ----------------------------------------------------------------------
# rational functions
# ----------------------------------------------------------------------


class RatFun:
    """Reduced fraction of :class:`MPoly` values in canonical form.

    Invariants: the denominator is nonzero, primitive (coprime integer
    coefficients) with positive leading coefficient, and coprime to the
    numerator.  The zero function is ``0/1``.

    Example::

        >>> x, y = MPoly.var("x"), MPoly.var("y")
        >>> RatFun(x**2 - y**2, x + y) == RatFun(x - y)
        True
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Union[MPoly, Scalar], den: Union[MPoly, Scalar] = 1):
        num = _coerce(num)
        den = _coerce(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RatFun components must be polynomials or scalars")
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = _ZERO, _ONE
        else:
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = exact_div(num, g)
                den = exact_div(den, g)
            dc = den.content()
            if dc != 1:
                num = num.scale(1 / dc)
                den = den.scale(1 / dc)
            self.num, self.den = num, den
        self._hash: Optional[int] = None

    @staticmethod
    def zero() -> "RatFun":
        return _RF_ZERO

    @staticmethod
    def one() -> "RatFun":
        return _RF_ONE

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (MPoly, int, Fraction)):
            return self == RatFun(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __getstate__(self):
        return (self.num, self.den)

    def __setstate__(self, state):
        self.num, self.den = state
        self._hash = None

    def __repr__(self) -> str:
        if self.den == _ONE:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: object) -> "RatFun":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        out = RatFun.__new__(RatFun)
        out.num, out.den, out._hash = -self.num, self.den, None
        return out

    def __sub__(self, other: object) -> "RatFun":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> "RatFun":
        return (-self) + other

    def __mul__(self, other: object) -> "RatFun":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "RatFun":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if not other:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other: object) -> "RatFun":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def inverse(self) -> "RatFun":
        return _RF_ONE / self

    # -- actions ---------------------------------------------------—---

    def shift(self, var: str) -> "RatFun":
        """Substitute ``var + 1`` for ``var``; canonical form is preserved
        because shifting is a degree- and leading-term-preserving automorphism."""
        out = RatFun.__new__(RatFun)
        out.num, out.den, out._hash = self.num.shift(var), self.den.shift(var), None
        return out

    def shift_x(self) -> "RatFun":
        return self.shift("x")

    def shift_k(self) -> "RatFun":
        return self.shift("k")

    def derivative_x(self) -> "RatFun":
        """Quotient-rule derivative with respect to ``x``."""
        return RatFun(
            self.num.derivative_x() * self.den - self.num * self.den.derivative_x(),
            self.den * self.den,
        )

    def is_polynomial(self) -> bool:
        return self.den == _ONE

    def as_poly(self) -> MPoly:
        if not self.is_polynomial():
            raise ValueError("rational function is not a polynomial")
        return self.num

    @property
    def deg_x(self):
        """Degree in x of a fraction: deg(num) − deg(den); −inf for zero."""
        if not self.num:
            return NEG_INF
        return self.num.deg_x - self.den.deg_x

    @property
    def deg_y(self):
        if not self.num:
            return NEG_INF
        return self.num.deg_y - self.den.deg_y

    # -- JSON ------------------------------------------------------—---

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @staticmethod
    def from_json(obj: object) -> "RatFun":
        if not isinstance(obj, dict) or set(obj) != {"num", "den"}:
            raise PolyParseError("rational-function JSON must have keys 'num' and 'den'")
        num = MPoly.from_json(obj["num"])
        den = MPoly.from_json(obj["den"])
        if not den:
            raise PolyParseError("rational-function denominator is zero")
        return RatFun(num, den)


def _coerce_rf(v: object):
    if isinstance(v, RatFun):
        return v
    if isinstance(v, (MPoly, int, Fraction)):
        return RatFun(v)
    return NotImplemented


_RF_ZERO = RatFun(0)
_RF_ONE = RatFun(1)
