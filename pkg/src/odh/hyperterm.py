"""Certified telescoper searches for Γ-quotient terms and shifted-pole sums.

A *gamma term* ``H(x, y, k)`` is a product of a polynomial front factor, two
exponential factors with y-polynomial bases, and a quotient of Γ factors
whose arguments are linear in the shift variable x and the summation
variable k::

    H = front · base_x**x · base_k**k
          · Π_m  Γ(n⁺_m) Γ(n⁻_m) / ( Γ(d⁺_m) Γ(d⁻_m) )

where each argument reads ``step_x·x ± step_k·k + offset(y)`` (``+`` for the
"rise" slots, ``-`` for the "fall" slots).  Both shift quotients
``S_x(H)/H`` and ``S_k(H)/H`` are rational functions, computable from the
Γ-ratio identity ``Γ(z+n)/Γ(z) = z·(z+1)···(z+n−1)``.

A *telescoper* for ``H`` is a nonzero operator ``L = Σ c_i(x,y)·S_x^i``
such that ``L(H)`` is a difference ``S_k(G) − G``.  Applying ``L`` and
clearing a common Γ-quotient turns that requirement into one polynomial
equation

    P  =  Q·S_k(Y) − R·Y

for an unknown polynomial ``Y(x, y, k)``: ``P`` collects the coefficients
``c_i`` linearly (:func:`build_PQR` returns its per-order basis), while
``Q`` and ``R`` depend only on the term.  Solving the equation by
coefficient comparison is exact linear algebra; every reported telescoper
carries its ``Y`` and the instantiated ``P, Q, R`` as a machine-checkable
certificate, and every reported absence is certified by full column rank
of the comparison system.

The *shifted-pole* (rational) variant replaces the Γ data by a reduced sum
of operators applied to reciprocal powers of linear poles
``x_coeff·x + k_step·k + offset(y)``; :func:`rat_telescoper_search` finds
telescopers for such sums through per-pole division identities, again
returned only after exact re-verification.

Both searches assume the input is *reduced*: no Γ-argument (or pole
family) in a numerator cancels against one in a denominator, and the term
does not split into a rational function times a simpler term.  That
hypothesis is asserted, not decided — construction rejects the directly
visible cancellations, but feeding a disguised splittable input yields
solutions of the displayed polynomial equation whose telescoping meaning
for the original term is undefined.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Optional, Sequence

from .linalg import kernel_basis, kernel_decide, rows_to_int_system
from .ore import (
    AlgebraKind,
    OreError,
    OrePoly,
    clear_denominators,
    ore_mul,
    shape_of,
)
from .poly import MPoly, PolyParseError, RatFun, rising_factorial
from .surfaces import (
    DEFAULT_HEIGHT_CAP,
    HyperParams,
    HypothesisError,
    RatBlock,
    RatParams,
)

__all__ = [
    "GammaFactor",
    "LinearArg",
    "ProperTerm",
    "TelescoperCertificate",
    "RatSummand",
    "LeDecomposition",
    "ResourceLimitError",
    "extract_params",
    "build_PQR",
    "shift_quotient",
    "telescoper_search",
    "minimal_telescoper",
    "rat_params",
    "rat_telescoper_search",
    "rat_actual_min_height",
]


class ResourceLimitError(RuntimeError):
    """A search exhausted its configured order/degree/height budget."""


# ----------------------------------------------------------------------
# term description
# ----------------------------------------------------------------------

#: One Γ-argument slot: (step_x, step_k, offset) builds step_x·x ± step_k·k
#: + offset, the sign depending on the slot's rise/fall role.
Slot = tuple[int, int, MPoly]

#: The neutral filler slot, building the constant argument 1 (a Γ(1) = 1
#: factor), used for unneeded numerator/denominator positions.
TRIVIAL_SLOT: Slot = (0, 0, MPoly.one())


def _checked_slot(name: str, slot: object) -> Slot:
    if not isinstance(slot, tuple) or len(slot) != 3:
        raise HypothesisError(f"{name} slot must be a (step_x, step_k, offset) triple")
    sx, sk, off = slot
    for label, v in (("step_x", sx), ("step_k", sk)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise HypothesisError(f"{name} {label} must be a nonnegative integer, got {v!r}")
    if not isinstance(off, MPoly):
        raise HypothesisError(f"{name} offset must be a polynomial")
    if off and (off.deg_x > 0 or off.deg_k > 0):
        raise HypothesisError(f"{name} offset must involve y only")
    if sx == 0 and sk == 0 and not off:
        raise HypothesisError(f"{name} argument is the zero polynomial")
    return (sx, sk, off)


_X = MPoly.var("x")
_K = MPoly.var("k")


def _build_arg(slot: Slot, k_sign: int) -> MPoly:
    sx, sk, off = slot
    return _X * sx + _K * (k_sign * sk) + off


@dataclass(frozen=True)
class GammaFactor:
    """One Γ-quotient block ``Γ(n⁺)Γ(n⁻) / (Γ(d⁺)Γ(d⁻))``.

    Slots are ``(step_x, step_k, offset)`` triples with natural step sizes
    and a y-polynomial offset.  The ``*_rise`` arguments ascend in the
    summation variable k (``step_x·x + step_k·k + offset``), the ``*_fall``
    arguments descend (``step_x·x − step_k·k + offset``); ``num_*`` sit in
    the numerator, ``den_*`` in the denominator.  Unused positions take
    :data:`TRIVIAL_SLOT`.
    """

    num_rise: Slot
    num_fall: Slot
    den_rise: Slot
    den_fall: Slot

    def __init__(self, num_rise: Slot, num_fall: Slot = TRIVIAL_SLOT,
                 den_rise: Slot = TRIVIAL_SLOT, den_fall: Slot = TRIVIAL_SLOT):
        object.__setattr__(self, "num_rise", _checked_slot("num_rise", num_rise))
        object.__setattr__(self, "num_fall", _checked_slot("num_fall", num_fall))
        object.__setattr__(self, "den_rise", _checked_slot("den_rise", den_rise))
        object.__setattr__(self, "den_fall", _checked_slot("den_fall", den_fall))

    def args(self) -> "LinearArg":
        return LinearArg(
            num_rise=_build_arg(self.num_rise, +1),
            num_fall=_build_arg(self.num_fall, -1),
            den_rise=_build_arg(self.den_rise, +1),
            den_fall=_build_arg(self.den_fall, -1),
        )


@dataclass(frozen=True)
class LinearArg:
    """The four built Γ arguments of one factor block, as polynomials."""

    num_rise: MPoly
    num_fall: MPoly
    den_rise: MPoly
    den_fall: MPoly


def _check_y_only(name: str, p: MPoly, allow_zero: bool = False) -> None:
    if not isinstance(p, MPoly):
        raise HypothesisError(f"{name} must be a polynomial")
    if not p:
        if allow_zero:
            return
        raise HypothesisError(f"{name} must be nonzero")
    if p.deg_x > 0 or p.deg_k > 0:
        raise HypothesisError(f"{name} must involve y only")


@dataclass(frozen=True)
class ProperTerm:
    """A gamma term, as described in the module docstring.

    ``front`` is a polynomial in x, y, k; ``base_x`` and ``base_k`` are
    nonzero y-polynomials (the bases of the exponential parts).  The
    constructor rejects directly visible degeneracies: zero Γ arguments and
    a nonconstant numerator argument coinciding with a denominator argument
    (such a pair cancels to a rational function, so the term should be fed
    in reduced form instead).  Reducedness beyond that — no hidden
    splitting into a rational multiple of a simpler term — is the caller's
    responsibility; see the module docstring for the consequences.
    """

    front: MPoly
    base_x: MPoly
    base_k: MPoly
    factors: tuple[GammaFactor, ...]

    def __init__(self, front: MPoly, base_x: MPoly, base_k: MPoly,
                 factors: Sequence[GammaFactor] = ()):
        if not isinstance(front, MPoly) or not front:
            raise HypothesisError("front factor must be a nonzero polynomial")
        _check_y_only("base_x", base_x)
        _check_y_only("base_k", base_k)
        factors = tuple(factors)
        if any(not isinstance(f, GammaFactor) for f in factors):
            raise HypothesisError("factors must be GammaFactor values")
        numerators: list[MPoly] = []
        denominators: list[MPoly] = []
        for f in factors:
            a = f.args()
            numerators += [a.num_rise, a.num_fall]
            denominators += [a.den_rise, a.den_fall]
        for n in numerators:
            if not n.is_constant() and any(n == d for d in denominators):
                raise HypothesisError(
                    f"numerator and denominator Γ arguments coincide ({n!r}); "
                    "cancel them and supply the reduced term"
                )
        object.__setattr__(self, "front", front)
        object.__setattr__(self, "base_x", base_x)
        object.__setattr__(self, "base_k", base_k)
        object.__setattr__(self, "factors", factors)

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        def slot(s: Slot) -> list:
            return [s[0], s[1], s[2].to_json()]

        return {
            "p": self.front.to_json(),
            "alpha": self.base_x.to_json(),
            "beta": self.base_k.to_json(),
            "factors": [
                {
                    "a": slot(f.num_rise),
                    "b": slot(f.num_fall),
                    "u": slot(f.den_rise),
                    "v": slot(f.den_fall),
                }
                for f in self.factors
            ],
        }

    @staticmethod
    def from_json(obj: object) -> "ProperTerm":
        if not isinstance(obj, dict) or set(obj) != {"p", "alpha", "beta", "factors"}:
            raise PolyParseError(
                "term JSON must have exactly the keys 'p', 'alpha', 'beta', 'factors'"
            )
        raw = obj["factors"]
        if not isinstance(raw, list):
            raise PolyParseError("'factors' must be a list")

        def slot(entry: object, key: str) -> Slot:
            if (
                not isinstance(entry, list)
                or len(entry) != 3
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in entry[:2])
            ):
                raise PolyParseError(
                    f"factor slot {key!r} must be [step_x, step_k, offset-polynomial]"
                )
            return (entry[0], entry[1], MPoly.from_json(entry[2]))

        factors = []
        for fobj in raw:
            if not isinstance(fobj, dict) or set(fobj) != {"a", "b", "u", "v"}:
                raise PolyParseError("each factor must have exactly the keys 'a', 'b', 'u', 'v'")
            factors.append(
                GammaFactor(
                    num_rise=slot(fobj["a"], "a"),
                    num_fall=slot(fobj["b"], "b"),
                    den_rise=slot(fobj["u"], "u"),
                    den_fall=slot(fobj["v"], "v"),
                )
            )
        return ProperTerm(
            front=MPoly.from_json(obj["p"]),
            base_x=MPoly.from_json(obj["alpha"]),
            base_k=MPoly.from_json(obj["beta"]),
            factors=factors,
        )


# ----------------------------------------------------------------------
# size parameters
# ----------------------------------------------------------------------


def extract_params(t: ProperTerm) -> HyperParams:
    """Read the seven size parameters off the factored form of the term.

    The front degrees are those of the front polynomial.  Per extra order
    of an applied operator the certificate numerator picks up one more
    product block, growing its x/k-degree by at most the larger of the
    numerator and denominator x-step sums and its y-degree by at most the
    weighted y-degrees of the arguments (``growth_xk``, ``growth_y``).  The
    k-shift quotient is a ratio of two polynomials whose x/k-degree is the
    larger k-step sum and whose y-degree is the matching weighted sum
    (``pair_deg_xk``, ``pair_deg_y``).
    """
    args = [f.args() for f in t.factors]
    sum_x_num = sum(f.num_rise[0] + f.num_fall[0] for f in t.factors)
    sum_x_den = sum(f.den_rise[0] + f.den_fall[0] for f in t.factors)
    sum_k_up = sum(f.num_rise[1] + f.den_fall[1] for f in t.factors)
    sum_k_down = sum(f.den_rise[1] + f.num_fall[1] for f in t.factors)

    def dy(p: MPoly) -> int:
        return p.deg_y if p else 0

    y_x_num = dy(t.base_x) + sum(
        f.num_rise[0] * dy(a.num_rise) + f.num_fall[0] * dy(a.num_fall)
        for f, a in zip(t.factors, args)
    )
    y_x_den = sum(
        f.den_rise[0] * dy(a.den_rise) + f.den_fall[0] * dy(a.den_fall)
        for f, a in zip(t.factors, args)
    )
    y_k_up = dy(t.base_k) + sum(
        f.num_rise[1] * dy(a.num_rise) + f.den_fall[1] * dy(a.den_fall)
        for f, a in zip(t.factors, args)
    )
    y_k_down = sum(
        f.den_rise[1] * dy(a.den_rise) + f.num_fall[1] * dy(a.num_fall)
        for f, a in zip(t.factors, args)
    )
    return HyperParams(
        front_deg_x=t.front.deg_x,
        front_deg_y=t.front.deg_y,
        front_deg_k=t.front.deg_k,
        growth_xk=max(sum_x_num, sum_x_den),
        pair_deg_xk=max(sum_k_up, sum_k_down),
        growth_y=max(y_x_num, y_x_den),
        pair_deg_y=max(y_k_up, y_k_down),
    )


# ----------------------------------------------------------------------
# the polynomial telescoper equation P = Q·S_k(Y) − R·Y
# ----------------------------------------------------------------------


def _shift_x_by(p: MPoly, n: int) -> MPoly:
    for _ in range(n):
        p = p.shift("x")
    return p


def build_PQR(t: ProperTerm, r: int) -> tuple[list[MPoly], MPoly, MPoly]:
    """Polynomial data of the telescoper equation at order ``r``.

    Returns ``(p_basis, q, rr)`` where for an operator ``L = Σ c_i·S_x^i``
    the equation's left side is ``P = Σ c_i·p_basis[i]`` (the c-dependence
    is linear and confined to ``P``), while ``q`` and ``rr`` are the fixed
    multipliers of ``S_k(Y)`` and ``Y``.  Shifting the term by ``S_x^i``
    advances each rise/fall argument by ``i`` x-steps; the ``p_basis[i]``
    entry collects the resulting Γ-ratio numerators together with enough
    denominator cofactors to clear all ``i ≤ r`` at once, which is what
    makes a single polynomial equation possible.
    """
    if not isinstance(r, int) or isinstance(r, bool) or r < 0:
        raise OreError(f"order must be a nonnegative integer, got {r!r}")
    args = [f.args() for f in t.factors]
    p_basis: list[MPoly] = []
    for i in range(r + 1):
        poly = (t.base_x ** i) * _shift_x_by(t.front, i)
        for f, a in zip(t.factors, args):
            poly = poly * rising_factorial(a.num_rise, i * f.num_rise[0])
            poly = poly * rising_factorial(a.num_fall, i * f.num_fall[0])
            poly = poly * rising_factorial(
                a.den_rise + i * f.den_rise[0], (r - i) * f.den_rise[0]
            )
            poly = poly * rising_factorial(
                a.den_fall + i * f.den_fall[0], (r - i) * f.den_fall[0]
            )
        p_basis.append(poly)
    q = t.base_k
    rr = MPoly.one()
    for f, a in zip(t.factors, args):
        q = q * rising_factorial(a.num_rise, f.num_rise[1])
        q = q * rising_factorial(
            a.den_fall + r * f.den_fall[0] - f.den_fall[1], f.den_fall[1]
        )
        rr = rr * rising_factorial(
            a.den_rise + r * f.den_rise[0] - f.den_rise[1], f.den_rise[1]
        )
        rr = rr * rising_factorial(a.num_fall, f.num_fall[1])
    return p_basis, q, rr


def shift_quotient(t: ProperTerm, var: str) -> RatFun:
    """The rational function ``S_var(H)/H`` for ``var`` in {"x", "k"}.

    Computed from the Γ-ratio identity: an argument advancing by ``n``
    under the shift contributes the rising factorial of length ``n``
    (numerator side) or its reciprocal (denominator side); an argument
    receding by ``n`` contributes the reciprocal pattern anchored at the
    receded argument.
    """
    if var == "x":
        out = RatFun(t.front.shift("x"), t.front) * RatFun(t.base_x)
        for f in t.factors:
            a = f.args()
            num = rising_factorial(a.num_rise, f.num_rise[0]) * rising_factorial(
                a.num_fall, f.num_fall[0]
            )
            den = rising_factorial(a.den_rise, f.den_rise[0]) * rising_factorial(
                a.den_fall, f.den_fall[0]
            )
            out = out * RatFun(num, den)
        return out
    if var == "k":
        out = RatFun(t.front.shift("k"), t.front) * RatFun(t.base_k)
        for f in t.factors:
            a = f.args()
            num = rising_factorial(a.num_rise, f.num_rise[1]) * rising_factorial(
                a.den_fall - f.den_fall[1], f.den_fall[1]
            )
            den = rising_factorial(a.den_rise, f.den_rise[1]) * rising_factorial(
                a.num_fall - f.num_fall[1], f.num_fall[1]
            )
            out = out * RatFun(num, den)
        return out
    raise ValueError("shift variable must be 'x' or 'k'")


# ----------------------------------------------------------------------
# certificates and the cell solver
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TelescoperCertificate:
    """A telescoper together with its machine-checkable witness data.

    ``operator`` is the nonzero telescoper (a shift operator in x with
    x,y-polynomial coefficients).  ``applied_poly`` is the polynomial front
    of the operator applied to the term, and ``witness`` solves

        applied_poly = shifted_mult · shift_k(witness) − plain_mult · witness

    exactly; construction re-checks the identity and raises otherwise.
    """

    operator: OrePoly
    witness: MPoly
    applied_poly: MPoly
    shifted_mult: MPoly
    plain_mult: MPoly

    def __post_init__(self):
        if not self.operator:
            raise OreError("certificate operator must be nonzero")
        rhs = self.shifted_mult * self.witness.shift("k") - self.plain_mult * self.witness
        if self.applied_poly != rhs:
            raise OreError("certificate identity fails to verify")


def _solve_cell(
    p_basis: list[MPoly],
    q: MPoly,
    rr: MPoly,
    params: HyperParams,
    r: int,
    d: int,
    h: int,
    slack: int,
) -> Optional[TelescoperCertificate]:
    """Exact decision of one (r, d, h) cell of the telescoper equation.

    Unknowns are laid out witness-block first, operator-coefficient block
    last: the witness columns are generically all pivots (the map
    ``Y ↦ Q·S_k(Y) − R·Y`` is injective whenever Q and R have different
    k-degrees), which steers the extracted kernel vector toward a nonzero
    operator block.  When the first vector still has a zero operator
    block, the certified full kernel basis decides whether any solution
    with a nonzero operator exists.
    """
    bx = max(0, d + params.front_deg_x + r * params.growth_xk - params.pair_deg_xk + slack)
    by = max(0, h + params.front_deg_y + r * params.growth_y - params.pair_deg_y + slack)
    bk = max(0, params.front_deg_k + r * params.growth_xk - params.pair_deg_xk + slack)
    wit_cols = (bx + 1) * (by + 1) * (bk + 1)
    op_cols = (r + 1) * (d + 1) * (h + 1)
    ncols = wit_cols + op_cols

    rows: dict[tuple[int, int, int], dict[int, Fraction]] = {}

    def add(key: tuple[int, int, int], col: int, val: Fraction) -> None:
        row = rows.get(key)
        if row is None:
            row = rows[key] = {}
        s = row.get(col, 0) + val
        if s:
            row[col] = s
        else:
            row.pop(col, None)

    q_terms = list(q)
    r_terms = list(rr)
    col = 0
    for ax in range(bx + 1):
        for ay in range(by + 1):
            for ak in range(bk + 1):
                for (ex, ey, ek), c in r_terms:
                    add((ex + ax, ey + ay, ek + ak), col, c)
                for t_exp in range(ak + 1):
                    w = comb(ak, t_exp)
                    for (ex, ey, ek), c in q_terms:
                        add((ex + ax, ey + ay, ek + t_exp), col, -c * w)
                col += 1
    for i in range(r + 1):
        basis_terms = list(p_basis[i])
        for jx in range(d + 1):
            for jy in range(h + 1):
                for (ex, ey, ek), c in basis_terms:
                    add((ex + jx, ey + jy, ek), col, c)
                col += 1

    system = rows_to_int_system(list(rows.values()), ncols)
    report = kernel_decide(system)
    if not report.has_kernel:
        return None
    vec: Optional[Sequence[int]] = report.vector
    if vec is None or not any(vec[wit_cols:]):
        vec = None
        for cand in kernel_basis(system):
            if any(cand[wit_cols:]):
                vec = cand
                break
        if vec is None:
            # the certified kernel basis spans the kernel, so every
            # solution has a zero operator block: no telescoper here
            return None

    wit_terms: dict[tuple[int, int, int], Fraction] = {}
    col = 0
    for ax in range(bx + 1):
        for ay in range(by + 1):
            for ak in range(bk + 1):
                if vec[col]:
                    wit_terms[(ax, ay, ak)] = Fraction(vec[col])
                col += 1
    witness = MPoly(wit_terms)
    coeffs: list[MPoly] = []
    for i in range(r + 1):
        terms: dict[tuple[int, int, int], Fraction] = {}
        for jx in range(d + 1):
            for jy in range(h + 1):
                if vec[col]:
                    terms[(jx, jy, 0)] = Fraction(vec[col])
                col += 1
        coeffs.append(MPoly(terms))
    operator = OrePoly(AlgebraKind.SHIFT_X, coeffs)
    applied = MPoly.zero()
    for i, c in enumerate(coeffs):
        if c:
            applied = applied + c * p_basis[i]
    return TelescoperCertificate(
        operator=operator,
        witness=witness,
        applied_poly=applied,
        shifted_mult=q,
        plain_mult=rr,
    )


#: Interior height rungs tried before the full cell height: a certificate
#: found inside a lower-height subcell is a certificate for the cell (all
#: ansatz bounds grow with the height), and real telescopers tend to be far
#: below the guaranteed heights, so large cells usually resolve cheaply.
_HEIGHT_LADDER = (2, 5, 9, 15, 25, 40)


def _check_cell_args(**named: int) -> None:
    for name, v in named.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise OreError(f"{name} must be a nonnegative integer, got {v!r}")


def telescoper_search(
    t: ProperTerm, r: int, d: int, h: int, slack: int = 0
) -> Optional[TelescoperCertificate]:
    """Search the (r, d, h) cell for a telescoper of the gamma term.

    The unknown operator has order ≤ r, x-degree ≤ d, y-degree ≤ h; the
    witness polynomial ranges over its size-parameter bounds for the cell,
    each widened by ``slack`` and clamped at zero (the default bounds are
    sufficient on the guaranteed region but can exclude true minimal
    telescopers outside it).  Returns a verified
    :class:`TelescoperCertificate`, or ``None`` accompanied by a full
    column-rank certificate internally when the searched space contains no
    solution with a nonzero operator.

    Lower-height subcells are probed first (see the height ladder); any
    certificate they yield is valid for the requested cell, and absence is
    only ever concluded from the full cell's system.
    """
    _check_cell_args(r=r, d=d, h=h, slack=slack)
    params = extract_params(t)
    p_basis, q, rr = build_PQR(t, r)
    rungs = [v for v in _HEIGHT_LADDER if v < h] + [h]
    for rung in rungs:
        cert = _solve_cell(p_basis, q, rr, params, r, d, rung, slack)
        if cert is not None:
            return cert
    return None


def minimal_telescoper(
    t: ProperTerm,
    slack_schedule: Sequence[int] = (0, 2),
    r_max: int = 8,
    d_cap: int = 12,
    h_cap: int = 15,
) -> TelescoperCertificate:
    """Smallest telescoper of the gamma term under the configured budget.

    Scans orders upward with presence probes at (``d_cap``, ``h_cap``),
    then minimizes the degree at the found order, then the height at the
    found degree — so the result has minimal order, and within the probe
    caps the lexicographically smallest (degree, height).  Each cell is
    tried with every slack value of ``slack_schedule`` in turn.  The
    returned operator is normalized: coefficients jointly primitive with a
    positive leading rational, making repeated runs bit-identical.

    Raises :class:`ResourceLimitError` when no telescoper exists within
    ``r_max`` under the probe caps.
    """
    schedule = tuple(slack_schedule)
    if not schedule:
        raise OreError("slack schedule must be nonempty")
    _check_cell_args(r_max=r_max, d_cap=d_cap, h_cap=h_cap)

    def probe(r: int, d: int, h: int) -> Optional[TelescoperCertificate]:
        for s in schedule:
            cert = telescoper_search(t, r, d, h, slack=s)
            if cert is not None:
                return cert
        return None

    r_star: Optional[int] = None
    for r in range(r_max + 1):
        if probe(r, d_cap, h_cap) is not None:
            r_star = r
            break
    if r_star is None:
        raise ResourceLimitError(
            f"no telescoper of order <= {r_max} within degree {d_cap}, height {h_cap}"
        )
    d_star = next(d for d in range(d_cap + 1) if probe(r_star, d, h_cap) is not None)
    final: Optional[TelescoperCertificate] = None
    for h in range(h_cap + 1):
        final = probe(r_star, d_star, h)
        if final is not None:
            break
    assert final is not None  # presence at h_cap guarantees the loop hits

    normalized = clear_denominators(final.operator)
    lead_exp, lead_new = normalized.coeff(int(normalized.order)).leading_term()
    lead_old = final.operator.coeff(int(normalized.order)).coeff(lead_exp)
    gamma = lead_new / lead_old
    return TelescoperCertificate(
        operator=normalized,
        witness=final.witness.scale(gamma),
        applied_poly=final.applied_poly.scale(gamma),
        shifted_mult=final.shifted_mult,
        plain_mult=final.plain_mult,
    )


# ----------------------------------------------------------------------
# the shifted-pole (rational) case
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class RatSummand:
    """One pole family of a shifted-pole sum: the operator ``op`` applied
    to the reciprocal of ``(x_coeff·x + k_step·k + offset)**power``.

    ``op`` is a nonzero shift operator in x with x,y-polynomial
    coefficients; ``k_step ≥ 1`` and ``gcd(|x_coeff|, k_step) = 1`` keep
    the pole's k-orbit primitive; ``offset`` is a y-polynomial.
    """

    op: OrePoly
    x_coeff: int
    k_step: int
    offset: MPoly
    power: int

    def __post_init__(self):
        if not isinstance(self.op, OrePoly) or self.op.kind is not AlgebraKind.SHIFT_X:
            raise HypothesisError("summand operator must be a shift operator in x")
        try:
            shape_of(self.op)  # nonzero, polynomial coefficients, no k
        except OreError as exc:
            raise HypothesisError(f"summand operator: {exc}") from exc
        for name in ("x_coeff", "k_step", "power"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise HypothesisError(f"{name} must be an integer, got {v!r}")
        if self.k_step < 1:
            raise HypothesisError("k_step must be at least 1")
        if self.power < 1:
            raise HypothesisError("power must be at least 1")
        if gcd(abs(self.x_coeff), self.k_step) != 1:
            raise HypothesisError("x_coeff and k_step must be coprime")
        _check_y_only("offset", self.offset, allow_zero=True)


@dataclass(frozen=True)
class LeDecomposition:
    """A reduced shifted-pole decomposition: a sum of :class:`RatSummand`
    pole families over the common polynomial denominator ``denom``.

    Two families with the same power must not have integer-shift-related
    poles; the constructor rejects the decidable case (equal
    ``x_coeff/k_step`` slopes with offsets differing by an integer
    constant), the rest is the caller's responsibility.
    """

    denom: MPoly
    summands: tuple[RatSummand, ...]

    def __init__(self, denom: MPoly, summands: Sequence[RatSummand] = ()):
        if not isinstance(denom, MPoly) or not denom:
            raise HypothesisError("denominator must be a nonzero polynomial")
        if denom.deg_k > 0:
            raise HypothesisError("denominator must not involve k")
        summands = tuple(summands)
        if any(not isinstance(s, RatSummand) for s in summands):
            raise HypothesisError("summands must be RatSummand values")
        for i in range(len(summands)):
            for j in range(i + 1, len(summands)):
                si, sj = summands[i], summands[j]
                if si.power != sj.power:
                    continue
                if si.x_coeff * sj.k_step != sj.x_coeff * si.k_step:
                    continue
                diff = si.offset.scale(Fraction(1, si.k_step)) - sj.offset.scale(
                    Fraction(1, sj.k_step)
                )
                if not diff or (
                    diff.is_constant() and diff.constant_value().denominator == 1
                ):
                    raise HypothesisError(
                        f"summands {i} and {j} have integer-shift-related poles; "
                        "merge them and supply the reduced decomposition"
                    )
        object.__setattr__(self, "denom", denom)
        object.__setattr__(self, "summands", summands)

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "u": self.denom.to_json(),
            "summands": [
                {
                    "op": s.op.to_json(),
                    "x_coeff": s.x_coeff,
                    "k_step": s.k_step,
                    "offset": s.offset.to_json(),
                    "power": s.power,
                }
                for s in self.summands
            ],
        }

    @staticmethod
    def from_json(obj: object) -> "LeDecomposition":
        if not isinstance(obj, dict) or set(obj) != {"u", "summands"}:
            raise PolyParseError(
                "decomposition JSON must have exactly the keys 'u' and 'summands'"
            )
        raw = obj["summands"]
        if not isinstance(raw, list):
            raise PolyParseError("'summands' must be a list")
        keys = {"op", "x_coeff", "k_step", "offset", "power"}
        summands = []
        for sobj in raw:
            if not isinstance(sobj, dict) or set(sobj) != keys:
                raise PolyParseError(
                    "each summand must have exactly the keys "
                    "'op', 'x_coeff', 'k_step', 'offset', 'power'"
                )
            for name in ("x_coeff", "k_step", "power"):
                if not isinstance(sobj[name], int) or isinstance(sobj[name], bool):
                    raise PolyParseError(f"summand {name!r} must be an integer")
            summands.append(
                RatSummand(
                    op=OrePoly.from_json(sobj["op"]),
                    x_coeff=sobj["x_coeff"],
                    k_step=sobj["k_step"],
                    offset=MPoly.from_json(sobj["offset"]),
                    power=sobj["power"],
                )
            )
        return LeDecomposition(denom=MPoly.from_json(obj["u"]), summands=summands)


def rat_params(dec: LeDecomposition) -> RatParams:
    """Size parameters of a shifted-pole decomposition for the region test:
    the denominator degrees plus one block per pole family holding its
    operator's order/degree/height and the family's k-step."""
    blocks = []
    for s in dec.summands:
        sh = shape_of(s.op)
        blocks.append(RatBlock(shift_step=s.k_step, deg=sh.d, height=sh.h, order=sh.r))
    return RatParams(
        denom_deg_x=dec.denom.deg_x, denom_deg_y=dec.denom.deg_y, blocks=blocks
    )


def rat_telescoper_search(
    dec: LeDecomposition, r: int, d: int, h: int
) -> Optional[tuple[OrePoly, list[OrePoly]]]:
    """Search the (r, d, h) cell for a telescoper of a shifted-pole sum.

    The ansatz is ``L = L̃·denom`` with ``L̃`` of complementary shape, and
    one cofactor operator per pole family subject to the division identity

        L̃·op_i  =  cof_i · (S_x**k_step_i − 1)

    compared coefficient-wise in x, y and the shift.  Any nonzero solution
    of that homogeneous system automatically has ``L̃ ≠ 0`` (a zero ``L̃``
    forces every cofactor to vanish because shift operators over a field
    have no zero divisors), so presence needs no extra filtering; absence
    is certified by full column rank.  On success returns ``(L, cofactors)``
    with every identity re-verified by exact operator multiplication; the
    cofactor list holds one operator per summand (zero operators where the
    identity degenerates).

    Raises an error when ``d`` or ``h`` lies below the denominator's
    degrees (no operator of the ansatz form fits such a cell).
    """
    _check_cell_args(r=r, d=d, h=h)
    u = dec.denom
    dxu, dyu = u.deg_x, u.deg_y
    if d < dxu or h < dyu:
        raise OreError(
            f"cell degree/height ({d}, {h}) lies below the denominator degrees ({dxu}, {dyu})"
        )
    lt_d = d - dxu
    lt_h = h - dyu
    lt_cols = (r + 1) * (lt_d + 1) * (lt_h + 1)

    # per-summand data: polynomial coefficients of op shifted by every
    # possible power of the ansatz, and the cofactor block layout
    shifted: list[list[list[MPoly]]] = []
    blocks: list[Optional[tuple[int, int, int, int]]] = []  # (offset, ord, dx, dy)
    offset = lt_cols
    for s in dec.summands:
        cs = s.op.poly_coeffs()
        table = [cs]
        for _ in range(r):
            table.append([c.shift("x") for c in table[-1]])
        shifted.append(table)
        sh = shape_of(s.op)
        cof_ord = r + sh.r - s.k_step
        if cof_ord < 0:
            blocks.append(None)
            continue
        blocks.append((offset, cof_ord, lt_d + sh.d, lt_h + sh.h))
        offset += (cof_ord + 1) * (lt_d + sh.d + 1) * (lt_h + sh.h + 1)
    ncols = offset

    rows: dict[tuple[int, int, int, int], dict[int, Fraction]] = {}

    def add(key: tuple[int, int, int, int], col: int, val: Fraction) -> None:
        row = rows.get(key)
        if row is None:
            row = rows[key] = {}
        s = row.get(col, 0) + val
        if s:
            row[col] = s
        else:
            row.pop(col, None)

    col = 0
    for sp in range(r + 1):
        for jx in range(lt_d + 1):
            for jy in range(lt_h + 1):
                for idx in range(len(dec.summands)):
                    for t_ord, cpoly in enumerate(shifted[idx][sp]):
                        for (ex, ey, _ek), c in cpoly:
                            add((idx, sp + t_ord, ex + jx, ey + jy), col, c)
                col += 1
    for idx, s in enumerate(dec.summands):
        if blocks[idx] is None:
            continue
        _off, cof_ord, cdx, cdy = blocks[idx]
        for sp in range(cof_ord + 1):
            for jx in range(cdx + 1):
                for jy in range(cdy + 1):
                    add((idx, sp + s.k_step, jx, jy), col, Fraction(-1))
                    add((idx, sp, jx, jy), col, Fraction(1))
                    col += 1
    assert col == ncols

    system = rows_to_int_system(list(rows.values()), ncols)
    report = kernel_decide(system)
    if not report.has_kernel:
        return None
    vec = report.vector
    assert vec is not None

    col = 0
    lt_coeffs: list[MPoly] = []
    for sp in range(r + 1):
        terms: dict[tuple[int, int, int], Fraction] = {}
        for jx in range(lt_d + 1):
            for jy in range(lt_h + 1):
                if vec[col]:
                    terms[(jx, jy, 0)] = Fraction(vec[col])
                col += 1
        lt_coeffs.append(MPoly(terms))
    lt = OrePoly(AlgebraKind.SHIFT_X, lt_coeffs)
    assert lt, "nonzero kernel vectors always carry a nonzero reduced operator"

    cofactors: list[OrePoly] = []
    for idx, s in enumerate(dec.summands):
        if blocks[idx] is None:
            cofactors.append(OrePoly.zero(AlgebraKind.SHIFT_X))
            continue
        _off, cof_ord, cdx, cdy = blocks[idx]
        coeffs = []
        for sp in range(cof_ord + 1):
            terms = {}
            for jx in range(cdx + 1):
                for jy in range(cdy + 1):
                    if vec[col]:
                        terms[(jx, jy, 0)] = Fraction(vec[col])
                    col += 1
            coeffs.append(MPoly(terms))
        cofactors.append(OrePoly(AlgebraKind.SHIFT_X, coeffs))
    assert col == ncols

    for s, cof in zip(dec.summands, cofactors):
        step_op = OrePoly.partial(AlgebraKind.SHIFT_X, s.k_step) - OrePoly.one(
            AlgebraKind.SHIFT_X
        )
        if ore_mul(lt, s.op) != ore_mul(cof, step_op):
            raise OreError("division identity failed exact re-verification")

    out = ore_mul(lt, OrePoly.scalar(AlgebraKind.SHIFT_X, u))
    sh = shape_of(out)
    assert sh.r <= r and sh.d <= d and sh.h <= h
    return out, cofactors


def rat_actual_min_height(
    dec: LeDecomposition, r: int, d: int, h_cap: int = DEFAULT_HEIGHT_CAP
) -> Optional[int]:
    """Smallest ``h ≤ h_cap`` whose (r, d, h) cell contains a telescoper of
    the shifted-pole sum, or ``None``.

    Cells with ``d`` below the denominator's x-degree hold no operator of
    the ansatz form at any height, so they report ``None`` directly; the
    height scan starts at the denominator's y-degree for the same reason.
    """
    _check_cell_args(r=r, d=d, h_cap=h_cap)
    if d < dec.denom.deg_x:
        return None
    for h in range(dec.denom.deg_y, h_cap + 1):
        if rat_telescoper_search(dec, r, d, h) is not None:
            return h
    return None
