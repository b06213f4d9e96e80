"""Deterministic random-instance builders shared across test modules."""

from fractions import Fraction
from random import Random

from odh.ore import AlgebraKind, OrePoly, Shape, shape_of
from odh.poly import MPoly
from odh.surfaces import LclmShapes, lclm_region


def random_operator(rng: Random, kind: AlgebraKind, r: int, d: int, h: int) -> OrePoly:
    """Dense random operator of exactly the requested shape, entries in
    −9..9 with the shape-defining corner monomials forced nonzero."""
    coeffs = []
    for i in range(r + 1):
        terms = {}
        for jx in range(d + 1):
            for jy in range(h + 1):
                v = rng.randint(-9, 9)
                if v:
                    terms[(jx, jy, 0)] = Fraction(v)
        coeffs.append(dict(terms))
    if (d, h, 0) not in coeffs[r] :
        coeffs[r][(d, h, 0)] = Fraction(rng.choice([1, -1]) * rng.randint(1, 9))
    op = OrePoly(kind, [MPoly(t) for t in coeffs])
    assert shape_of(op) == Shape(r, d, h)
    return op


def random_pair(rng: Random, kind: AlgebraKind) -> list[OrePoly]:
    """Two random operators with shapes bounded by (2, 2, 2)."""
    ops = []
    for _ in range(2):
        r = rng.randint(1, 2)
        d = rng.randint(0, 2)
        h = rng.randint(0, 2)
        ops.append(random_operator(rng, kind, r, d, h))
    return ops


def boundary_cells(
    ops, rng: Random, count: int, r_max: int = 8, d_max: int = 8, h_limit: int = 10
) -> list[tuple[int, int, int]]:
    """Sampled (r, d, h*) cells on the constructive boundary of the
    common-multiple region: h* is the least height at which the counting
    argument guarantees existence.  Only cells dominating every input shape
    are eligible — elsewhere the multiplier ansatz is empty and the plain
    inequality carries no guarantee.  Cells with h* beyond ``h_limit`` are
    skipped to bound runtime."""
    shapes = [shape_of(op) for op in ops]
    params = LclmShapes(shapes)
    lo_r = max(s.r for s in shapes)
    lo_d = max(s.d for s in shapes)
    lo_h = max(s.h for s in shapes)
    eligible = []
    for r in range(lo_r, r_max + 1):
        for d in range(lo_d, d_max + 1):
            h_star = next(
                (
                    h
                    for h in range(lo_h, h_limit + 1)
                    if lclm_region(params, r, d, h)
                ),
                None,
            )
            if h_star is not None:
                eligible.append((r, d, h_star))
    assert eligible, "region is empty below the sampling caps"
    rng.shuffle(eligible)
    return eligible[:count]
