"""Squeezing small ideal elements out of witnessed multiples.

Over the rational-function field every operator left-divisible by a base
operator ``L`` lies in the ideal ``⟨L⟩``; the interesting subset is the
operators in the ideal whose coefficients are *polynomials*.  Their
possible (order, x-degree, y-degree) shapes are the subject of the region
test :func:`odh.surfaces.contraction_region`, whose inputs this module
assembles and whose claims it can check against certified ground truth:

* :func:`shape_search` / :func:`actual_min_height` — exact searches of the
  polynomial part of ``⟨L⟩``, every hit re-verified by exact right
  division (delegating to the membership engine in :mod:`odh.clm`);
* :func:`cofactor` — for a known polynomial multiple ``L₁`` of ``L``, the
  canonical pair ``(p, P)`` with ``p·L₁ = P·L``, ``p`` the normalized
  least common denominator of the rational quotient ``L₁/L``;
* :class:`ContractionData` — a base operator plus witnessed multiples
  whose scalars ``p_ℓ`` out-degree their cofactors' leading coefficients
  in both x and y (the degree *drops* that make squeezing possible),
  validated exactly at construction;
* :func:`syzygy_dims` — dimensions of the bounded-degree relation spaces
  among the witness cofactors' shifted leading-coefficient quotients, the
  correction terms the region test charges against its unknown count;
* :func:`contraction_params` — the full size-parameter readout feeding
  the region test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .clm import actual_min_height as _ideal_actual_min_height
from .clm import multiples_shape_search
from .linalg import RatMatrix, rank
from .ore import AlgebraKind, OreError, OrePoly, ore_mul, right_divrem, shape_of
from .poly import MPoly, PolyParseError, RatFun, poly_gcd, poly_lcm
from .surfaces import (
    ContractionParams,
    DEFAULT_HEIGHT_CAP,
    HypothesisError,
    Witness,
)

__all__ = [
    "NotInIdealError",
    "CofactorWitness",
    "ContractionData",
    "cofactor",
    "shape_search",
    "actual_min_height",
    "syzygy_dims",
    "contraction_params",
]


class NotInIdealError(OreError):
    """Right division by the base operator left a nonzero remainder."""


def _sigma_pow(kind: AlgebraKind, p: MPoly, t: int) -> MPoly:
    """The coefficient automorphism of the algebra, applied ``t`` times."""
    if kind is AlgebraKind.SHIFT_X:
        for _ in range(t):
            p = p.shift("x")
    return p  # the differential algebra's automorphism is the identity


@dataclass(frozen=True)
class CofactorWitness:
    """One witnessed multiple of the base operator.

    ``scalar · multiple = cofactor · base`` (checked by
    :class:`ContractionData`); the scalar's x- and y-degrees exceed those
    of the cofactor's leading coefficient by :attr:`drop_x` / :attr:`drop_y`.
    """

    multiple: OrePoly
    scalar: MPoly
    cofactor: OrePoly

    @property
    def cofactor_order(self) -> int:
        return int(self.cofactor.order)

    def _lead(self) -> MPoly:
        lead = self.cofactor.leading_coeff()
        return lead if isinstance(lead, MPoly) else lead.as_poly()

    @property
    def drop_x(self) -> int:
        return self.scalar.deg_x - self._lead().deg_x

    @property
    def drop_y(self) -> int:
        return self.scalar.deg_y - self._lead().deg_y

    def to_json(self) -> dict:
        return {
            "multiple": self.multiple.to_json(),
            "scalar": self.scalar.to_json(),
            "cofactor": self.cofactor.to_json(),
        }

    @staticmethod
    def from_json(obj: object) -> "CofactorWitness":
        if not isinstance(obj, dict) or set(obj) != {"multiple", "scalar", "cofactor"}:
            raise PolyParseError(
                "witness JSON must have exactly the keys "
                "'multiple', 'scalar', 'cofactor'"
            )
        return CofactorWitness(
            multiple=OrePoly.from_json(obj["multiple"]),
            scalar=MPoly.from_json(obj["scalar"]),
            cofactor=OrePoly.from_json(obj["cofactor"]),
        )


@dataclass(frozen=True)
class ContractionData:
    """A base operator with witnessed multiples, validated exactly.

    Construction checks, per witness ℓ (reported by index on failure):
    the identity ``scalar_ℓ·multiple_ℓ = cofactor_ℓ·base`` via exact
    operator multiplication, degree drops of at least 1 in both x and y,
    and pairwise coprimality of the scalars.  Witnesses are stored sorted
    by cofactor order (ties keep input order).
    """

    base: OrePoly
    witnesses: tuple[CofactorWitness, ...]

    def __init__(self, base: OrePoly, witnesses: Sequence[CofactorWitness] = ()):
        if not isinstance(base, OrePoly):
            raise HypothesisError("base must be an operator")
        shape_of(base)  # nonzero, polynomial coefficients in x and y only
        witnesses = tuple(witnesses)
        for idx, w in enumerate(witnesses):
            if not isinstance(w, CofactorWitness):
                raise HypothesisError(f"witness {idx}: not a CofactorWitness")
            if w.multiple.kind is not base.kind or w.cofactor.kind is not base.kind:
                raise HypothesisError(f"witness {idx}: algebra kind mismatch")
            shape_of(w.multiple)
            shape_of(w.cofactor)
            if not isinstance(w.scalar, MPoly) or not w.scalar:
                raise HypothesisError(f"witness {idx}: scalar must be nonzero")
            if w.scalar.deg_k > 0:
                raise HypothesisError(f"witness {idx}: scalar must involve x, y only")
            lhs = ore_mul(OrePoly.scalar(base.kind, w.scalar), w.multiple)
            if lhs != ore_mul(w.cofactor, base):
                raise HypothesisError(
                    f"witness {idx}: scalar·multiple ≠ cofactor·base"
                )
            if w.drop_x < 1 or w.drop_y < 1:
                raise HypothesisError(
                    f"witness {idx}: scalar degrees ({w.scalar.deg_x}, "
                    f"{w.scalar.deg_y}) must exceed the cofactor leading "
                    f"coefficient's in both x and y"
                )
        for i in range(len(witnesses)):
            for j in range(i + 1, len(witnesses)):
                g = poly_gcd(witnesses[i].scalar, witnesses[j].scalar)
                if not g.is_constant():
                    raise HypothesisError(
                        f"witnesses {i} and {j}: scalars share the factor {g!r}"
                    )
        ordered = sorted(witnesses, key=lambda w: w.cofactor_order)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "witnesses", tuple(ordered))

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "witnesses": [w.to_json() for w in self.witnesses],
        }

    @staticmethod
    def from_json(obj: object) -> "ContractionData":
        if not isinstance(obj, dict) or set(obj) != {"base", "witnesses"}:
            raise PolyParseError(
                "data JSON must have exactly the keys 'base' and 'witnesses'"
            )
        raw = obj["witnesses"]
        if not isinstance(raw, list):
            raise PolyParseError("'witnesses' must be a list")
        return ContractionData(
            base=OrePoly.from_json(obj["base"]),
            witnesses=[CofactorWitness.from_json(w) for w in raw],
        )


# ----------------------------------------------------------------------
# cofactor extraction
# ----------------------------------------------------------------------


def cofactor(multiple: OrePoly, base: OrePoly) -> tuple[MPoly, OrePoly]:
    """The canonical pair ``(p, P)`` with ``p·multiple = P·base``.

    The quotient ``multiple/base`` is computed by exact right division
    (:class:`NotInIdealError` on a nonzero remainder) and ``p`` is the
    least common denominator of its reduced coefficients, normalized to
    coprime integer coefficients with a positive leading coefficient —
    making the pair deterministic.  The identity is re-verified by exact
    operator multiplication before returning.
    """
    quo, rem = right_divrem(multiple, base)
    if rem:
        raise NotInIdealError(
            "the multiple is not left-divisible by the base operator"
        )
    dens: list[MPoly] = []
    for c in quo.coeffs:
        if isinstance(c, RatFun):
            dens.append(c.den)
    p = MPoly.one()
    for den in dens:
        p = poly_lcm(p, den)
    p = p.primitive()
    coeffs = []
    for c in quo.coeffs:
        cleared = c * RatFun(p) if isinstance(c, RatFun) else RatFun(c * p)
        coeffs.append(cleared.as_poly())
    cof = OrePoly(base.kind, coeffs)
    if ore_mul(OrePoly.scalar(base.kind, p), multiple) != ore_mul(cof, base):
        raise OreError("cofactor identity failed exact re-verification")
    return p, cof


# ----------------------------------------------------------------------
# exact searches in the polynomial part of the ideal
# ----------------------------------------------------------------------


def shape_search(G: OrePoly, r: int, d: int, h: int) -> Optional[OrePoly]:
    """A nonzero polynomial-coefficient operator of shape ≤ (r, d, h) in
    the left ideal of ``G``, or ``None``; every hit is re-verified by
    exact right division."""
    return multiples_shape_search(G, r, d, h)


def actual_min_height(
    G: OrePoly, r: int, d: int, h_cap: int = DEFAULT_HEIGHT_CAP
) -> Optional[int]:
    """Smallest ``h ≤ h_cap`` whose (r, d, h) cell contains a polynomial-
    coefficient element of the left ideal of ``G``, or ``None``."""
    return _ideal_actual_min_height([G], r, d, h_cap)


# ----------------------------------------------------------------------
# syzygy dimensions and parameter assembly
# ----------------------------------------------------------------------


def _syzygy_dim_at(data: ContractionData, n: int) -> int:
    """Dimension of the bounded-degree relation space at ansatz step n."""
    active = [w for w in data.witnesses if w.cofactor_order <= n]
    if not active:
        return 0
    kind = data.base.kind
    shifted_leads = [
        _sigma_pow(kind, w._lead(), n - w.cofactor_order) for w in active
    ]
    shifted_scalars = [
        _sigma_pow(kind, w.scalar, n - w.cofactor_order) for w in active
    ]
    # relations Σ q_ℓ·(lead_ℓ/scalar_ℓ) = 0, cleared by the scalar product:
    # Σ q_ℓ·lead_ℓ·Π_{j≠ℓ} scalar_j = 0 with deg q_ℓ capped by the drops
    cleared: list[MPoly] = []
    for i, lead in enumerate(shifted_leads):
        w = lead
        for j, s in enumerate(shifted_scalars):
            if j != i:
                w = w * s
        cleared.append(w)
    cols: list[MPoly] = []
    for w, poly in zip(active, cleared):
        for jx in range(w.drop_x + 1):
            for jy in range(w.drop_y + 1):
                cols.append(poly * MPoly.monomial(Fraction(1), (jx, jy, 0)))
    monomials = sorted({e for col in cols for e, _ in col})
    index = {e: i for i, e in enumerate(monomials)}
    rows = [[Fraction(0)] * len(cols) for _ in monomials]
    for c, col in enumerate(cols):
        for e, v in col:
            rows[index[e]][c] = v
    if not rows:
        return len(cols)
    return len(cols) - rank(RatMatrix.from_rows(rows))


def syzygy_dims(data: ContractionData, r: int) -> tuple[int, ...]:
    """Relation-space dimensions for every ansatz step up to order ``r``:
    entry ``n`` counts the bounded-degree relations available when the
    ansatz reaches ``n`` orders above the base operator.  Empty when ``r``
    lies below the base order."""
    steps = r - int(data.base.order)
    return tuple(_syzygy_dim_at(data, n) for n in range(steps + 1))


def contraction_params(data: ContractionData) -> ContractionParams:
    """Size parameters of the witnessed data for the region test.

    Growth terms sum the scalar degrees; offsets additionally weight them
    by each multiple's order less one; caps take the worst spread between
    a cofactor's total degree and its leading coefficient's.  The relation
    dimensions are computed up to their stabilization point (one step per
    distinct cofactor order suffices) and stored with the constant tail
    trimmed, as the region test reuses the last entry beyond the prefix.
    """
    base_shape = shape_of(data.base)
    witnesses = tuple(
        Witness(cofactor_order=w.cofactor_order, drop_x=w.drop_x, drop_y=w.drop_y)
        for w in data.witnesses
    )
    growth_x = sum(w.scalar.deg_x for w in data.witnesses)
    growth_y = sum(w.scalar.deg_y for w in data.witnesses)
    offset_x = sum(
        (int(w.multiple.order) - 1) * w.scalar.deg_x for w in data.witnesses
    )
    offset_y = sum(
        (int(w.multiple.order) - 1) * w.scalar.deg_y for w in data.witnesses
    )
    cap_x = max(
        (shape_of(w.cofactor).d - w._lead().deg_x for w in data.witnesses),
        default=0,
    )
    cap_y = max(
        (shape_of(w.cofactor).h - w._lead().deg_y for w in data.witnesses),
        default=0,
    )
    stable = max((w.cofactor_order for w in data.witnesses), default=0)
    dims = list(syzygy_dims(data, base_shape.r + stable))
    while len(dims) > 1 and dims[-1] == dims[-2]:
        dims.pop()
    return ContractionParams(
        base_order=base_shape.r,
        base_deg_x=base_shape.d,
        base_deg_y=base_shape.h,
        witnesses=witnesses,
        growth_x=growth_x,
        growth_y=growth_y,
        offset_x=offset_x,
        offset_y=offset_y,
        cap_x=cap_x,
        cap_y=cap_y,
        syzygy_dims=tuple(dims),
    )
