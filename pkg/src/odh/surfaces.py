"""Exact feasibility regions in (order, degree, height) space.

For several constructions on operators with coefficients in ``C[y][x]`` —
common left multiples of a family, creative telescoping of proper
hypergeometric terms, telescoping of rational sums, and contraction of an
operator ideal through known multiples — a counting argument produces an
inequality in the target order ``r``, x-degree ``d``, and y-height ``h``:
whenever the inequality holds, an object of that size exists.  This module
evaluates those inequalities exactly (arbitrary-precision integers, no
floating point) and sweeps them into predicted-size tables.

Each region family has a small parameter record extracted from the concrete
input elsewhere (:mod:`odh.clm`, :mod:`odh.hyperterm`,
:mod:`odh.contraction`); the evaluators here are pure functions of those
numbers.  Regions are **not** assumed upward-closed in ``h``; minimal heights
are found by upward scan, never bisection.

Grid JSON wire format::

    {"rows": [{"d": 8, "cells": [{"r": 0, "pred": 158, "actual": 9}, …]}, …]}

with rows in descending ``d``, cells in ascending ``r``, and ``null`` for an
absent value.  The text rendering mirrors the same layout with `pred|actual`
cells and ``·`` for absence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .ore import Shape

__all__ = [
    "HypothesisError",
    "LclmShapes",
    "HyperParams",
    "RatBlock",
    "RatParams",
    "Witness",
    "ContractionParams",
    "SurfaceGrid",
    "lclm_region",
    "hyper_region",
    "rat_region",
    "contraction_region",
    "min_height",
    "sweep",
    "DEFAULT_HEIGHT_CAP",
]

DEFAULT_HEIGHT_CAP = 1000


class HypothesisError(ValueError):
    """A parameter record violates the hypotheses its region requires."""


def _check_nat(name: str, value: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise HypothesisError(f"{name} must be a nonnegative integer, got {value!r}")


def _check_int(name: str, value: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise HypothesisError(f"{name} must be an integer, got {value!r}")


# ----------------------------------------------------------------------
# parameter records
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class LclmShapes:
    """Shapes (order, x-degree, y-degree) of the operators whose common left
    multiple is being sized."""

    shapes: tuple[Shape, ...]

    def __init__(self, shapes: Sequence[Shape]):
        shapes = tuple(shapes)
        if not shapes:
            raise HypothesisError("at least one input shape is required")
        for s in shapes:
            _check_nat("order", s.r)
            _check_nat("x-degree", s.d)
            _check_nat("y-degree", s.h)
        object.__setattr__(self, "shapes", shapes)


@dataclass(frozen=True)
class HyperParams:
    """Size data of a proper hypergeometric term, read off its factored form.

    ``front_deg_x/y/k`` are the degrees of the polynomial front factor of the
    term.  One extra order of the output operator multiplies the certificate
    numerator by one more product block: ``growth_xk`` bounds the x- and
    k-degree added per order step and ``growth_y`` the y-degree added.  The
    shift quotient of the term is a ratio of two polynomials of x/k-degree at
    most ``pair_deg_xk`` and y-degree at most ``pair_deg_y``.
    """

    front_deg_x: int
    front_deg_y: int
    front_deg_k: int
    growth_xk: int
    pair_deg_xk: int
    growth_y: int
    pair_deg_y: int

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            _check_nat(name, getattr(self, name))


@dataclass(frozen=True)
class RatBlock:
    """One pole orbit of a rational summand: the annihilating operator of its
    residue series has the given order, x-degree and y-height, and the orbit
    advances by ``shift_step`` per shift of the summation variable."""

    shift_step: int
    deg: int
    height: int
    order: int

    def __post_init__(self):
        _check_nat("shift_step", self.shift_step)
        if self.shift_step < 1:
            raise HypothesisError("shift_step must be at least 1")
        _check_nat("deg", self.deg)
        _check_nat("height", self.height)
        _check_nat("order", self.order)


@dataclass(frozen=True)
class RatParams:
    """Size data of a rational summand: degrees of the universal denominator
    plus one :class:`RatBlock` per pole orbit."""

    denom_deg_x: int
    denom_deg_y: int
    blocks: tuple[RatBlock, ...]

    def __init__(self, denom_deg_x: int, denom_deg_y: int, blocks: Sequence[RatBlock]):
        _check_nat("denom_deg_x", denom_deg_x)
        _check_nat("denom_deg_y", denom_deg_y)
        object.__setattr__(self, "denom_deg_x", denom_deg_x)
        object.__setattr__(self, "denom_deg_y", denom_deg_y)
        object.__setattr__(self, "blocks", tuple(blocks))


@dataclass(frozen=True)
class Witness:
    """One known multiple of the base operator: the left cofactor has order
    ``cofactor_order``, and the designated coprime factor of the multiple's
    leading coefficient exceeds the cofactor's leading coefficient by
    ``drop_x``/``drop_y`` in x-/y-degree."""

    cofactor_order: int
    drop_x: int
    drop_y: int

    def __post_init__(self):
        _check_nat("cofactor_order", self.cofactor_order)
        _check_int("drop_x", self.drop_x)
        _check_int("drop_y", self.drop_y)
        if self.drop_x < 1 or self.drop_y < 1:
            raise HypothesisError(
                "witness degree drops must be at least 1 in both x and y"
            )


@dataclass(frozen=True)
class ContractionParams:
    """Size data for recovering a base operator from known multiples.

    ``base_order/base_deg_x/base_deg_y`` is the shape of the operator being
    squeezed.  Per extra order of the ansatz, shifted leading-coefficient
    products grow by ``growth_x``/``growth_y``; ``offset_x``/``offset_y`` and
    ``cap_x``/``cap_y`` are the constant parts of the same degree bookkeeping
    (they may be negative).  ``syzygy_dims`` lists the dimensions of the
    relation spaces among the witness cofactors by ansatz order, starting at
    the base order; the sequence is eventually constant and the last entry is
    reused beyond the stored prefix.
    """

    base_order: int
    base_deg_x: int
    base_deg_y: int
    witnesses: tuple[Witness, ...]
    growth_x: int
    growth_y: int
    offset_x: int
    offset_y: int
    cap_x: int
    cap_y: int
    syzygy_dims: tuple[int, ...]

    def __post_init__(self):
        _check_nat("base_order", self.base_order)
        _check_nat("base_deg_x", self.base_deg_x)
        _check_nat("base_deg_y", self.base_deg_y)
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        for w in self.witnesses:
            if not isinstance(w, Witness):
                raise HypothesisError("witnesses must be Witness records")
        for name in ("growth_x", "growth_y", "offset_x", "offset_y", "cap_x", "cap_y"):
            _check_int(name, getattr(self, name))
        object.__setattr__(self, "syzygy_dims", tuple(self.syzygy_dims))
        if not self.syzygy_dims:
            raise HypothesisError("syzygy_dims must hold at least one entry")
        for c in self.syzygy_dims:
            _check_nat("syzygy dimension", c)


# ----------------------------------------------------------------------
# region evaluators
# ----------------------------------------------------------------------


def lclm_region(s: LclmShapes, r: int, d: int, h: int) -> bool:
    """True when a common left multiple of shape (r, d, h) is guaranteed.

    The guarantee counts ansatz unknowns against the equations forced by
    reducing a generic operator of shape (r, d, h) modulo every input.
    """
    sum_r = sum(t.r for t in s.shapes)
    sum_d = sum(t.d for t in s.shapes)
    sum_h = sum(t.h for t in s.shapes)
    sum_rd = sum(t.r * t.d for t in s.shapes)
    sum_rh = sum(t.r * t.h for t in s.shapes)
    sum_dh = sum(t.d * t.h for t in s.shapes)
    sum_rdh = sum(t.r * t.d * t.h for t in s.shapes)
    excess = (
        (r + 1) * (d + 1) * (h + 1)
        - (r + 1) * (d + 1) * sum_h
        + (h + 1) * sum_rd
        - (r + 1) * (h + 1) * sum_d
        + (d + 1) * sum_rh
        - (d + 1) * (h + 1) * sum_r
        + (r + 1) * sum_dh
        - sum_rdh
    )
    return excess > 0


def hyper_region(p: HyperParams, r: int, d: int, h: int) -> bool:
    """True when a telescoping operator of shape (r, d, h) is guaranteed for
    a term with these size parameters.

    Three side conditions keep the certificate's degree budget nonnegative;
    the main inequality counts certificate unknowns against the linear
    conditions produced by the telescoping identity.
    """
    slack_x = d + p.front_deg_x + r * p.growth_xk - p.pair_deg_xk
    slack_y = h + p.front_deg_y + r * p.growth_y - p.pair_deg_y
    slack_k = p.front_deg_k + r * p.growth_xk - p.pair_deg_xk
    if slack_x < 0 or slack_y < 0 or slack_k < 0:
        return False
    excess = (
        (r + 1) * (d + 1) * (h + 1)
        - (d + 1 + p.front_deg_x + r * p.growth_xk)
        * (p.front_deg_k + r * p.growth_xk + 1)
        * p.pair_deg_y
        - (d + 2 + p.front_deg_x + p.front_deg_k + 2 * r * p.growth_xk - p.pair_deg_xk)
        * (h + 1 + p.front_deg_y + r * p.growth_y - p.pair_deg_y)
        * p.pair_deg_xk
    )
    return excess > 0


def rat_region(p: RatParams, r: int, d: int, h: int) -> bool:
    """True when a telescoping operator of shape (r, d, h) is guaranteed for
    a rational summand with these size parameters.

    Requires the output to absorb the universal denominator (side
    conditions), then counts unknowns of the quotient ansatz against the
    conditions from clearing each pole orbit.
    """
    if d < p.denom_deg_x or h < p.denom_deg_y:
        return False
    cols = d + 1 - p.denom_deg_x
    rows = h + 1 - p.denom_deg_y
    excess = (
        (r + 1) * cols * rows
        - sum(b.shift_step * b.deg * b.height for b in p.blocks)
        - cols * sum(b.shift_step * b.height for b in p.blocks)
        - rows * sum(b.shift_step * b.deg for b in p.blocks)
        - cols * rows * sum(b.shift_step for b in p.blocks)
    )
    return excess > 0


def contraction_region(p: ContractionParams, r: int, d: int, h: int) -> bool:
    """True when the base operator's multiple of shape (r, d, h) inside the
    span of the witnesses is guaranteed to reveal a shape-(r, d, h) certified
    bound — i.e. the squeezing argument applies at this cell.

    Side conditions require the ansatz order to reach the base operator and
    every witness; the main inequality counts coefficient unknowns against
    membership conditions plus the worst relation-space dimension.
    """
    if r < p.base_order:
        return False
    for w in p.witnesses:
        if r < w.cofactor_order + p.base_order:
            return False
    steps = r - p.base_order
    amb_x = max(p.cap_x, d - p.base_deg_x + 1)
    amb_y = max(p.cap_y, h - p.base_deg_y + 1)
    grow_x = r * p.growth_x - p.offset_x
    grow_y = r * p.growth_y - p.offset_y
    # both factors below are monomial counts: for target degrees so small
    # that no numerator monomial may stay, the count is zero, not negative
    # (a negative product would silently credit unknowns that do not exist)
    stay_x = max(0, d - p.base_deg_x + 1 + grow_x)
    stay_y = max(0, h - p.base_deg_y + 1 + grow_y)
    lhs = (steps + 1) * (
        amb_x * amb_y
        + sum(w.drop_x * w.drop_y for w in p.witnesses)
        - (amb_x + grow_x) * (amb_y + grow_y)
        + stay_x * stay_y
    )
    dims = p.syzygy_dims
    worst_dim = max(dims[: min(steps, len(dims) - 1) + 1])
    rhs = (
        sum(w.cofactor_order * w.drop_x * w.drop_y for w in p.witnesses)
        + worst_dim
    )
    return lhs > rhs


# ----------------------------------------------------------------------
# scanning and sweeping
# ----------------------------------------------------------------------


def min_height(
    region: Callable[..., bool],
    params,
    r: int,
    d: int,
    h_cap: int = DEFAULT_HEIGHT_CAP,
) -> Optional[int]:
    """Smallest h ≤ h_cap with ``region(params, r, d, h)``, else ``None``.

    Scans upward: the regions are not proven upward-closed in h, so
    bisection could skip the true minimum.
    """
    if h_cap < 0:
        raise HypothesisError("h_cap must be nonnegative")
    for h in range(h_cap + 1):
        if region(params, r, d, h):
            return h
    return None


@dataclass(frozen=True)
class SurfaceGrid:
    """Minimal-height table over a rectangle of (r, d) cells.

    ``pred`` maps (r, d) to the predicted minimal height or ``None``;
    ``actual`` is an optional second layer of measured values with the same
    keys.  Rendering puts d on rows (descending) and r on columns
    (ascending).
    """

    r_values: tuple[int, ...]
    d_values: tuple[int, ...]
    pred: dict
    actual: Optional[dict] = None

    def to_json(self) -> dict:
        rows = []
        for d in sorted(self.d_values, reverse=True):
            cells = []
            for r in sorted(self.r_values):
                cell = {"r": r, "pred": self.pred.get((r, d))}
                cell["actual"] = (
                    self.actual.get((r, d)) if self.actual is not None else None
                )
                cells.append(cell)
            rows.append({"d": d, "cells": cells})
        return {"rows": rows}

    @staticmethod
    def from_json(obj: dict) -> "SurfaceGrid":
        rows = obj["rows"]
        r_values: set = set()
        d_values: set = set()
        pred: dict = {}
        actual: dict = {}
        has_actual = False
        for row in rows:
            d = row["d"]
            d_values.add(d)
            for cell in row["cells"]:
                r = cell["r"]
                r_values.add(r)
                pred[(r, d)] = cell.get("pred")
                if cell.get("actual") is not None:
                    has_actual = True
                actual[(r, d)] = cell.get("actual")
        return SurfaceGrid(
            r_values=tuple(sorted(r_values)),
            d_values=tuple(sorted(d_values)),
            pred=pred,
            actual=actual if has_actual else None,
        )

    def render_text(self) -> str:
        def fmt(value) -> str:
            return "·" if value is None else str(value)

        rs = sorted(self.r_values)
        lines = []
        body = []
        for d in sorted(self.d_values, reverse=True):
            row = [f"d={d}"]
            for r in rs:
                cell = fmt(self.pred.get((r, d)))
                if self.actual is not None:
                    cell += "|" + fmt(self.actual.get((r, d)))
                row.append(cell)
            body.append(row)
        header = [""] + [f"r={r}" for r in rs]
        widths = [
            max(len(line[i]) for line in [header] + body)
            for i in range(len(header))
        ]
        for line in [header] + body:
            lines.append("  ".join(c.rjust(w) for c, w in zip(line, widths)))
        return "\n".join(lines)


def sweep(
    region: Callable[..., bool],
    params,
    r_range: Sequence[int],
    d_range: Sequence[int],
    h_cap: int = DEFAULT_HEIGHT_CAP,
) -> SurfaceGrid:
    """Predicted minimal-height grid over the cartesian cell rectangle.

    Cells are independent; evaluation order never affects values.
    """
    r_values = tuple(r_range)
    d_values = tuple(d_range)
    if not r_values or not d_values:
        raise HypothesisError("sweep ranges must be nonempty")
    pred = {
        (r, d): min_height(region, params, r, d, h_cap)
        for r in r_values
        for d in d_values
    }
    return SurfaceGrid(r_values=r_values, d_values=d_values, pred=pred)
