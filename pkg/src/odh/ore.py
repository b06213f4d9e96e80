"""Noncommutative operator arithmetic for shift and differential actions.

Operators are polynomials in a symbol ``∂`` acting on the left of
coefficient rings ``C[x,y]`` / ``C(x,y)`` (the variable ``k`` never appears
in operator coefficients).  Multiplication follows the commutation rule
``∂·a = σ(a)·∂ + δ(a)`` with two instantiations:

* ``ShiftX``: σ substitutes x+1 for x, δ = 0 (written ``S_x``);
* ``DiffX``:  σ = identity, δ = d/dx (written ``D_x``).

Coefficients are stored densely by ∂-power, lowest first; the trailing
coefficient of a nonzero operator is nonzero, and the zero operator has an
empty coefficient tuple.  Coefficients may be :class:`~odh.poly.MPoly`
(polynomial operators) or :class:`~odh.poly.RatFun`; arithmetic mixes them
transparently (results fall into the rational-function ring when needed).
Operators never normalize their leading coefficient implicitly — callers ask
for :meth:`OrePoly.monic` or :func:`clear_denominators` explicitly, so
polynomial witnesses survive untouched.

JSON wire format::

    {"kind": "ShiftX" | "DiffX", "coeffs": [<polynomial or ratfun JSON>, …]}

with list index = ∂-power and a nonzero trailing coefficient required.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from .linalg import field_nullspace
from .poly import NEG_INF, MPoly, PolyParseError, RatFun

__all__ = [
    "AlgebraKind",
    "OrePoly",
    "Shape",
    "OreError",
    "ore_mul",
    "right_divrem",
    "shape_of",
    "lclm",
    "clear_denominators",
    "remainder_table",
]

Coefficient = Union[MPoly, RatFun]


class OreError(ValueError):
    """Raised on contract violations: mixed algebra kinds, zero divisors,
    shape queries on unsuitable operators, empty least-common-multiple input."""


class AlgebraKind(Enum):
    """The two operator actions: shift in x or derivation in x."""

    SHIFT_X = "ShiftX"
    DIFF_X = "DiffX"

    def sigma(self, c: Coefficient) -> Coefficient:
        """The endomorphism σ applied to a coefficient."""
        if self is AlgebraKind.SHIFT_X:
            return c.shift("x") if isinstance(c, MPoly) else c.shift_x()
        return c

    def sigma_pow(self, c: Coefficient, t: int) -> Coefficient:
        for _ in range(t):
            c = self.sigma(c)
        return c

    def delta(self, c: Coefficient) -> Coefficient:
        """The σ-derivation δ applied to a coefficient."""
        if self is AlgebraKind.SHIFT_X:
            return (MPoly.zero() if isinstance(c, MPoly) else RatFun.zero())
        return c.derivative_x()


@dataclass(frozen=True)
class Shape:
    """Order / x-degree / y-degree triple of a polynomial operator."""

    r: int
    d: int
    h: int

    def fits_within(self, other: "Shape") -> bool:
        return self.r <= other.r and self.d <= other.d and self.h <= other.h


def _is_zero_coeff(c: Coefficient) -> bool:
    return not c


def _trim(coeffs: list[Coefficient]) -> tuple[Coefficient, ...]:
    while coeffs and _is_zero_coeff(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


class OrePoly:
    """Immutable Ore operator: coefficients by ascending ∂-power.

    Example::

        >>> x = MPoly.var("x")
        >>> Sx = OrePoly.partial(AlgebraKind.SHIFT_X)
        >>> ore_mul(Sx, OrePoly.scalar(AlgebraKind.SHIFT_X, x)).coeffs
        (0, x + 1)
    """

    __slots__ = ("kind", "coeffs")

    def __init__(self, kind: AlgebraKind, coeffs: Sequence[Coefficient]):
        self.kind = kind
        self.coeffs = _trim(list(coeffs))

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(kind: AlgebraKind) -> "OrePoly":
        return OrePoly(kind, [])

    @staticmethod
    def one(kind: AlgebraKind) -> "OrePoly":
        return OrePoly(kind, [MPoly.one()])

    @staticmethod
    def scalar(kind: AlgebraKind, c: Coefficient) -> "OrePoly":
        return OrePoly(kind, [c])

    @staticmethod
    def partial(kind: AlgebraKind, power: int = 1) -> "OrePoly":
        """The operator ∂**power."""
        return OrePoly(kind, [MPoly.zero()] * power + [MPoly.one()])

    # -- basic queries ----------------------------------------------------

    @property
    def order(self):
        """deg_∂; NEG_INF for the zero operator."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrePoly):
            return NotImplemented
        if self.kind is not other.kind:
            return False
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(
            _coeff_eq(a, b) for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.kind, self.coeffs))

    def coeff(self, i: int) -> Coefficient:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return MPoly.zero()

    def leading_coeff(self) -> Coefficient:
        if not self.coeffs:
            raise OreError("zero operator has no leading coefficient")
        return self.coeffs[-1]

    def is_polynomial(self) -> bool:
        """True when every coefficient lies in the polynomial ring."""
        return all(
            isinstance(c, MPoly) or c.is_polynomial() for c in self.coeffs
        )

    def poly_coeffs(self) -> list[MPoly]:
        if not self.is_polynomial():
            raise OreError("operator has non-polynomial coefficients")
        return [
            c if isinstance(c, MPoly) else c.as_poly() for c in self.coeffs
        ]

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        sym = "S_x" if self.kind is AlgebraKind.SHIFT_X else "D_x"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if _is_zero_coeff(c):
                continue
            head = f"({c!r})" if (isinstance(c, (MPoly, RatFun))) else repr(c)
            if i == 0:
                parts.append(head)
            elif i == 1:
                parts.append(f"{head}*{sym}")
            else:
                parts.append(f"{head}*{sym}^{i}")
        return " + ".join(parts)

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "OrePoly") -> None:
        if self.kind is not other.kind:
            raise OreError("operators belong to different algebras")

    def __add__(self, other: "OrePoly") -> "OrePoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return OrePoly(
            self.kind, [self.coeff(i) + other.coeff(i) for i in range(n)]
        )

    def __neg__(self) -> "OrePoly":
        return OrePoly(self.kind, [-c for c in self.coeffs])

    def __sub__(self, other: "OrePoly") -> "OrePoly":
        self._check(other)
        return self + (-other)

    def left_mul_coeff(self, a: Coefficient) -> "OrePoly":
        """Multiply by an order-0 element on the left: a·Σc_i∂^i = Σ(a·c_i)∂^i."""
        return OrePoly(self.kind, [a * c for c in self.coeffs])

    def shift_order(self, t: int) -> "OrePoly":
        """Multiply by ∂**t on the LEFT (the product ∂^t·self)."""
        if not self.coeffs or t == 0:
            return self
        if self.kind is AlgebraKind.SHIFT_X:  # δ = 0: pure σ^t lift
            lifted = [MPoly.zero()] * t + [
                self.kind.sigma_pow(c, t) for c in self.coeffs
            ]
            return OrePoly(self.kind, lifted)
        out = self
        for _ in range(t):
            out = out.apply_partial()
        return out

    def apply_partial(self) -> "OrePoly":
        """Left-multiply by ∂ once: ∂·Σc_i∂^i = Σσ(c_i)∂^{i+1} + Σδ(c_i)∂^i."""
        if not self.coeffs:
            return self
        out: list[Coefficient] = [MPoly.zero()] * (len(self.coeffs) + 1)
        for i, c in enumerate(self.coeffs):
            out[i + 1] = out[i + 1] + self.kind.sigma(c)
            d = self.kind.delta(c)
            if not _is_zero_coeff(d):
                out[i] = out[i] + d
        return OrePoly(self.kind, out)

    def monic(self) -> "OrePoly":
        """Leading coefficient scaled to 1 (coefficients become RatFun)."""
        if not self.coeffs:
            raise OreError("zero operator cannot be made monic")
        lead = self.coeffs[-1]
        inv = RatFun.one() / (lead if isinstance(lead, RatFun) else RatFun(lead))
        return self.left_mul_coeff(inv)

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        out = []
        for c in self.coeffs:
            out.append(c.to_json())
        return {"kind": self.kind.value, "coeffs": out}

    @staticmethod
    def from_json(obj: object) -> "OrePoly":
        if not isinstance(obj, dict) or set(obj) != {"kind", "coeffs"}:
            raise PolyParseError("operator JSON must have keys 'kind' and 'coeffs'")
        kind_tag = obj["kind"]
        try:
            kind = AlgebraKind(kind_tag)
        except ValueError:
            raise PolyParseError(f"unknown algebra kind {kind_tag!r}") from None
        raw = obj["coeffs"]
        if not isinstance(raw, list):
            raise PolyParseError("'coeffs' must be a list")
        coeffs: list[Coefficient] = []
        for c in raw:
            if isinstance(c, dict) and set(c) == {"num", "den"}:
                coeffs.append(RatFun.from_json(c))
            else:
                coeffs.append(MPoly.from_json(c))
        if coeffs and _is_zero_coeff(coeffs[-1]):
            raise PolyParseError("trailing operator coefficient is zero")
        return OrePoly(kind, coeffs)


def _coeff_eq(a: Coefficient, b: Coefficient) -> bool:
    if isinstance(a, MPoly) and isinstance(b, MPoly):
        return a == b
    ra = a if isinstance(a, RatFun) else RatFun(a)
    rb = b if isinstance(b, RatFun) else RatFun(b)
    return ra == rb


# ----------------------------------------------------------------------
# products, division, shapes
# ----------------------------------------------------------------------


def ore_mul(A: OrePoly, B: OrePoly) -> OrePoly:
    """Noncommutative product A·B under ``∂a = σ(a)∂ + δ(a)``.

    Example::

        >>> k = AlgebraKind.DIFF_X
        >>> x = MPoly.var("x")
        >>> Dx = OrePoly.partial(k)
        >>> ore_mul(Dx, OrePoly.scalar(k, x)) == OrePoly(k, [MPoly.one(), x])
        True
    """
    A._check(B)
    kind = A.kind
    if not A.coeffs or not B.coeffs:
        return OrePoly.zero(kind)
    result = OrePoly.zero(kind)
    power = B  # ∂^i · B
    for i, a in enumerate(A.coeffs):
        if i > 0:
            power = power.apply_partial()
        if not _is_zero_coeff(a):
            result = result + power.left_mul_coeff(a)
    return result


def right_divrem(A: OrePoly, B: OrePoly) -> tuple[OrePoly, OrePoly]:
    """Left-Euclidean division: A = Q·B + R with deg_∂R < deg_∂B.

    Coefficients are handled in the rational-function field; B must be
    nonzero and of the same kind.

    Example::

        >>> kd = AlgebraKind.SHIFT_X
        >>> Sx = OrePoly.partial(kd)
        >>> A = ore_mul(Sx, Sx)
        >>> B = Sx - OrePoly.one(kd)
        >>> Q, R = right_divrem(A, B)
        >>> R == OrePoly.one(kd)
        True
    """
    A._check(B)
    if not B:
        raise OreError("right division by the zero operator")
    kind = A.kind
    rem = A
    q_coeffs: dict[int, RatFun] = {}
    rb = B.order
    lb = B.leading_coeff()
    lb = lb if isinstance(lb, RatFun) else RatFun(lb)
    while rem and rem.order >= rb:
        t = rem.order - rb
        la = rem.leading_coeff()
        la = la if isinstance(la, RatFun) else RatFun(la)
        q = la / kind.sigma_pow(lb, t)
        q_coeffs[t] = q
        # rem -= (q ∂^t) · B
        qB = B.shift_order(t).left_mul_coeff(q)
        rem = rem - qB
    n = max(q_coeffs) + 1 if q_coeffs else 0
    Q = OrePoly(kind, [q_coeffs.get(i, RatFun.zero()) for i in range(n)])
    return Q, rem


def shape_of(A: OrePoly) -> Shape:
    """Order, x-degree, and y-degree of a nonzero polynomial operator."""
    if not A:
        raise OreError("zero operator has no shape")
    cs = A.poly_coeffs()
    if any(c.deg_k > 0 for c in cs):
        raise OreError("operator coefficients must not involve k")
    d = max(c.deg_x for c in cs)
    h = max(c.deg_y for c in cs)
    return Shape(int(A.order), int(d), int(h))


def clear_denominators(A: OrePoly) -> OrePoly:
    """Scale by one rational function on the left so that all coefficients are
    polynomials, jointly primitive (integer content 1), with a positive
    graded-lex leading coefficient on the leading ∂-term."""
    if not A:
        return A
    from .poly import poly_lcm

    den = MPoly.one()
    for c in A.coeffs:
        if isinstance(c, RatFun):
            den = poly_lcm(den, c.den)
    cleared: list[MPoly] = []
    for c in A.coeffs:
        if isinstance(c, RatFun):
            cleared.append((c * RatFun(den)).as_poly())
        else:
            cleared.append(c * den)
    # joint rational content: make all-integer, coprime across coefficients
    content = Fraction(0)
    for c in cleared:
        if c:
            content = _frac_gcd(content, c.content())
    if content and content != 1:
        cleared = [c.scale(1 / content) for c in cleared]
    lead = cleared[-1]
    if lead and lead.leading_coeff() < 0:
        cleared = [-c for c in cleared]
    return OrePoly(A.kind, cleared)


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    """Positive generator of the fractional ideal (a, b)."""
    from math import gcd, lcm

    if not a:
        return abs(b)
    if not b:
        return abs(a)
    return Fraction(
        gcd(a.numerator, b.numerator), lcm(a.denominator, b.denominator)
    )


# ----------------------------------------------------------------------
# least common left multiple
# ----------------------------------------------------------------------


def remainder_table(L: OrePoly, max_power: int) -> list[list[RatFun]]:
    """Remainders of ∂^i modulo L for i = 0..max_power, as coefficient lists
    of length deg_∂L over the rational-function field."""
    kind = L.kind
    r = int(L.order)
    monic = L.monic()
    # reduction uses ∂^r ≡ -(c_0 + c_1∂ + ... + c_{r-1}∂^{r-1})  (mod L)
    tail = [RatFun.zero() - _as_ratfun(monic.coeff(i)) for i in range(r)]
    table: list[list[RatFun]] = []
    current = [RatFun.one() if i == 0 else RatFun.zero() for i in range(r)]
    table.append(list(current))
    for _ in range(max_power):
        # multiply by ∂ on the left: σ on coefficients, raise powers, δ term
        lifted = [RatFun.zero()] * (r + 1)
        for i, c in enumerate(current):
            if c:
                lifted[i + 1] = lifted[i + 1] + _as_ratfun(kind.sigma(c))
                d = kind.delta(c)
                if d:
                    lifted[i] = lifted[i] + d
        overflow = lifted[r]
        current = lifted[:r]
        if overflow:
            current = [c + overflow * t for c, t in zip(current, tail)]
        table.append(list(current))
    return table


def _as_ratfun(c: Coefficient) -> RatFun:
    return c if isinstance(c, RatFun) else RatFun(c)


def lclm(ops: Sequence[OrePoly]) -> OrePoly:
    """A least common left multiple: nonzero L of minimal order with
    ``right_divrem(L, op).R = 0`` for every input, returned with cleared
    denominators (primitive polynomial coefficients).

    Example::

        >>> kd = AlgebraKind.SHIFT_X
        >>> Sx = OrePoly.partial(kd)
        >>> lclm([Sx, Sx]) == Sx
        True
    """
    if not ops:
        raise OreError("least common left multiple of an empty list")
    if any(not op for op in ops):
        raise OreError("least common left multiple of a zero operator")
    kind = ops[0].kind
    for op in ops:
        if op.kind is not kind:
            raise OreError("operators belong to different algebras")
    orders = [int(op.order) for op in ops]
    lo = max(orders)
    hi = sum(orders)
    tables = [remainder_table(op, hi) for op in ops]
    for n in range(lo, hi + 1):
        # unknowns q_0..q_n; equations: Σ_i q_i · rem_j[i][t] = 0
        rows: list[list[RatFun]] = []
        for j, op in enumerate(ops):
            r_j = int(op.order)
            for t in range(r_j):
                rows.append([tables[j][i][t] for i in range(n + 1)])
        if rows:
            basis = field_nullspace(rows, RatFun.zero(), RatFun.one())
        else:  # all inputs have order 0: no constraints, 1 is the lclm
            basis = [[RatFun.one()] + [RatFun.zero()] * n]
        if basis:
            return clear_denominators(OrePoly(kind, basis[0]))
    raise OreError("no common left multiple found up to the order sum")
