"""Tests for constructive common-multiple searches."""

import json
from fractions import Fraction
from pathlib import Path
from random import Random

import pytest

from odh.clm import (
    ClmProblem,
    actual_min_height,
    clm_by_ansatz,
    multiples_shape_search,
)
from odh.ore import (
    AlgebraKind,
    OreError,
    OrePoly,
    Shape,
    lclm,
    right_divrem,
    shape_of,
)
from odh.poly import MPoly
from odh.surfaces import LclmShapes, min_height, lclm_region, sweep

from .helpers import boundary_cells, random_pair

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

D = AlgebraKind.DIFF_X
S = AlgebraKind.SHIFT_X

x = MPoly.var("x")
y = MPoly.var("y")


@pytest.fixture(scope="module")
def fixture_ops():
    data = json.loads((FIXTURES / "diff_pair_operators.json").read_text())
    return [OrePoly.from_json(obj) for obj in data["operators"]]


@pytest.fixture(scope="module")
def compare_golden():
    return json.loads((GOLDEN / "lclm_pair_compare.json").read_text())


def divides(candidate: OrePoly, op: OrePoly) -> bool:
    _, rem = right_divrem(candidate, op)
    return not rem


# ----------------------------------------------------------------------
# shape-constrained ideal membership engine
# ----------------------------------------------------------------------


class TestShapeSearch:
    def test_partial_generator_found_at_its_own_shape(self):
        G = OrePoly.partial(D)
        found = multiples_shape_search(G, 1, 0, 0)
        assert found == OrePoly.partial(D)

    def test_order_below_generator_is_absent(self):
        G = OrePoly.partial(D)
        assert multiples_shape_search(G, 0, 5, 5) is None

    def test_order_zero_generator_spans_everything(self):
        G = OrePoly(D, [x])
        assert multiples_shape_search(G, 2, 1, 1) == OrePoly.one(D)

    def test_zero_generator_rejected(self):
        with pytest.raises(OreError):
            multiples_shape_search(OrePoly.zero(D), 1, 1, 1)

    def test_negative_bounds_rejected(self):
        with pytest.raises(OreError):
            multiples_shape_search(OrePoly.partial(D), 1, -1, 0)

    def test_shift_generator_admits_higher_order_multiple(self):
        G = OrePoly(S, [MPoly.const(-1), MPoly.one()])  # shift minus one
        found = multiples_shape_search(G, 2, 0, 0)
        assert found is not None
        assert divides(found, G)

    def test_degree_constraint_certified_absent(self):
        # multiples of (shift − x) of order 1 are c·(shift − x); a nonzero c
        # forces x-degree at least 1, so (1, 0, h) has none for any h
        G = OrePoly(S, [-x, MPoly.one()])
        assert multiples_shape_search(G, 1, 0, 5) is None
        assert actual_min_height([G], 1, 0, h_cap=6) is None
        assert actual_min_height([G], 1, 1, h_cap=6) == 0

    def test_result_has_requested_shape_and_divisibility(self, fixture_ops):
        G = lclm(fixture_ops)
        found = multiples_shape_search(G, 3, 9, 6)
        assert found is not None
        assert shape_of(found).fits_within(Shape(3, 9, 6))
        assert all(divides(found, op) for op in fixture_ops)


# ----------------------------------------------------------------------
# the multiplier ansatz
# ----------------------------------------------------------------------


class TestClmByAnsatz:
    def test_single_operator_returns_itself(self, fixture_ops):
        L = fixture_ops[0]
        result = clm_by_ansatz(ClmProblem([L], Shape(3, 10, 15)))
        assert result is not None
        multiple, mults = result
        assert multiple == L
        assert mults == [OrePoly.one(D)]

    def test_fixture_pair_boundary_cell(self, fixture_ops):
        result = clm_by_ansatz(ClmProblem(fixture_ops, Shape(3, 10, 15)))
        assert result is not None
        multiple, mults = result
        assert shape_of(multiple).fits_within(Shape(3, 10, 15))
        assert len(mults) == len(fixture_ops)
        for m, op in zip(mults, fixture_ops):
            assert m
            assert divides(multiple, op)

    def test_target_below_input_order_is_absent(self, fixture_ops):
        assert clm_by_ansatz(ClmProblem(fixture_ops, Shape(1, 10, 15))) is None

    def test_infeasible_small_target_is_absent(self, fixture_ops):
        assert clm_by_ansatz(ClmProblem(fixture_ops, Shape(2, 2, 2))) is None

    def test_duplicate_operator_needs_no_growth(self):
        L = OrePoly(D, [x * y, x + y, MPoly.one()])
        result = clm_by_ansatz(ClmProblem([L, L], shape_of(L)))
        assert result is not None
        multiple, _ = result
        assert divides(multiple, L)

    def test_rejects_empty_and_zero_and_mixed(self):
        with pytest.raises(OreError):
            ClmProblem([], Shape(1, 1, 1))
        with pytest.raises(OreError):
            ClmProblem([OrePoly.zero(D)], Shape(1, 1, 1))
        with pytest.raises(OreError):
            ClmProblem([OrePoly.partial(D), OrePoly.partial(S)], Shape(1, 1, 1))

    def test_rejects_rational_coefficients(self):
        bad = OrePoly.partial(D).monic().left_mul_coeff(
            __import__("odh.poly", fromlist=["RatFun"]).RatFun(MPoly.one(), x)
        )
        with pytest.raises(OreError):
            ClmProblem([bad], Shape(1, 1, 1))


# ----------------------------------------------------------------------
# measured minimal heights
# ----------------------------------------------------------------------


class TestActualMinHeight:
    def test_partial_alone(self):
        assert actual_min_height([OrePoly.partial(D)], 1, 0, h_cap=3) == 0

    def test_fixture_regression_cell(self, fixture_ops):
        assert actual_min_height(fixture_ops, 3, 10, h_cap=12) == 5

    def test_fixture_low_degree_certified_absent(self, fixture_ops):
        assert actual_min_height(fixture_ops, 3, 7, h_cap=12) is None

    def test_order_below_lclm_is_absent(self, fixture_ops):
        assert actual_min_height(fixture_ops, 2, 10, h_cap=12) is None

    def test_shift_pair(self):
        ops = [
            OrePoly(S, [MPoly.const(-1), MPoly.one()]),
            OrePoly(S, [-x, MPoly.one()]),
        ]
        G = lclm(ops)
        assert int(G.order) == 2
        h = actual_min_height(ops, 2, int(shape_of(G).d), h_cap=6)
        assert h == shape_of(G).h

    def test_negative_cap_rejected(self, fixture_ops):
        with pytest.raises(OreError):
            actual_min_height(fixture_ops, 3, 10, h_cap=-1)


class TestCompareGolden:
    """The frozen predicted/measured table for the fixture pair."""

    def test_predicted_layer_matches_region_formula(self, fixture_ops, compare_golden):
        params = LclmShapes([shape_of(op) for op in fixture_ops])
        grid = sweep(lclm_region, params, range(3, 7), range(3, 11), h_cap=40)
        for row_g, row_c in zip(compare_golden["rows"], grid.to_json()["rows"]):
            assert row_g["d"] == row_c["d"]
            for cell_g, cell_c in zip(row_g["cells"], row_c["cells"]):
                assert (cell_g["r"], cell_g["pred"]) == (cell_c["r"], cell_c["pred"])

    def test_measured_spot_checks(self, fixture_ops, compare_golden):
        stored = {
            (cell["r"], row["d"]): cell["actual"]
            for row in compare_golden["rows"]
            for cell in row["cells"]
        }
        for r, d in [(3, 8), (3, 9), (3, 10), (3, 5), (4, 6), (4, 10)]:
            assert actual_min_height(fixture_ops, r, d, h_cap=12) == stored[(r, d)]

    def test_measured_never_exceeds_predicted(self, compare_golden):
        for row in compare_golden["rows"]:
            for cell in row["cells"]:
                if cell["pred"] is not None:
                    assert cell["actual"] is not None
                    assert cell["actual"] <= cell["pred"]

    def test_measured_monotone_in_order_and_degree(self, compare_golden):
        vals = {
            (cell["r"], row["d"]): cell["actual"]
            for row in compare_golden["rows"]
            for cell in row["cells"]
        }
        for (r, d), h in vals.items():
            if h is None:
                continue
            for r2, d2 in [(r + 1, d), (r, d + 1)]:
                if (r2, d2) in vals:
                    assert vals[(r2, d2)] is not None
                    assert vals[(r2, d2)] <= h


class TestRegionArtifactCells:
    """The plain region inequality can fire at cells that do not dominate
    every input shape (two negative slack factors multiply to a positive
    contribution).  Such cells carry no constructive guarantee: the ansatz
    is empty there, and nothing may exist at all.  The searches stay honest.
    """

    def pair(self):
        L1 = OrePoly(D, [x**2 * y**2 + MPoly.one(), x**2 * y**2])  # (1,2,2)
        L2 = OrePoly(D, [MPoly.one(), MPoly.zero(), MPoly.one()])  # (2,0,0)
        return L1, L2

    def test_region_fires_outside_its_constructive_domain(self):
        L1, L2 = self.pair()
        params = LclmShapes([shape_of(L1), shape_of(L2)])
        assert lclm_region(params, 8, 0, 0) is True

    def test_ansatz_returns_absent_on_empty_multiplier_space(self):
        L1, L2 = self.pair()
        assert clm_by_ansatz(ClmProblem([L1, L2], Shape(8, 0, 0))) is None

    def test_real_search_certifies_nothing_exists(self):
        L1, L2 = self.pair()
        assert actual_min_height([L1, L2], 8, 0, h_cap=6) is None


# ----------------------------------------------------------------------
# randomized soundness: predicted boundary cells are constructive
# ----------------------------------------------------------------------


class TestRandomizedBoundary:
    @pytest.mark.parametrize("kind", [D, S], ids=["diff", "shift"])
    def test_random_pairs_admit_verified_multiples_on_boundary(self, kind):
        rng = Random(0xC1A0 + (0 if kind is D else 1))
        for _ in range(3):
            ops = random_pair(rng, kind)
            for r, d, h_star in boundary_cells(ops, rng, count=2):
                result = clm_by_ansatz(ClmProblem(ops, Shape(r, d, h_star)))
                assert result is not None, (ops, r, d, h_star)
                multiple, _ = result
                assert all(divides(multiple, op) for op in ops)
