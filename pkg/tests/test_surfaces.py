"""Region evaluators: thresholds, golden tables, scanning, rendering."""

import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odh.ore import Shape
from odh.surfaces import (
    ContractionParams,
    HyperParams,
    HypothesisError,
    LclmShapes,
    RatBlock,
    RatParams,
    SurfaceGrid,
    Witness,
    contraction_region,
    hyper_region,
    lclm_region,
    min_height,
    rat_region,
    sweep,
)

GOLDEN = Path(__file__).parent / "golden"

PAIR_SHAPES = LclmShapes([Shape(2, 1, 1), Shape(1, 2, 1)])
GAMMA_TERM = HyperParams(0, 0, 1, 1, 2, 2, 3)
SHIFT_POLE = RatParams(1, 1, [RatBlock(3, 1, 3, 1)])
CONTRACTION = ContractionParams(
    base_order=2,
    base_deg_x=5,
    base_deg_y=9,
    witnesses=(Witness(cofactor_order=1, drop_x=1, drop_y=1),),
    growth_x=3,
    growth_y=5,
    offset_x=6,
    offset_y=10,
    cap_x=4,
    cap_y=0,
    syzygy_dims=(0,),
)


def load_golden(name):
    return json.loads((GOLDEN / f"{name}.json").read_text())


class TestValidation:
    def test_empty_shape_list_rejected(self):
        with pytest.raises(HypothesisError):
            LclmShapes([])

    def test_negative_shape_rejected(self):
        with pytest.raises(HypothesisError):
            LclmShapes([Shape(-1, 0, 0)])

    def test_negative_hyper_field_rejected(self):
        with pytest.raises(HypothesisError):
            HyperParams(0, 0, -1, 1, 2, 2, 3)

    def test_bool_is_not_a_natural(self):
        with pytest.raises(HypothesisError):
            HyperParams(True, 0, 1, 1, 2, 2, 3)

    def test_zero_shift_step_rejected(self):
        with pytest.raises(HypothesisError):
            RatBlock(0, 1, 3, 1)

    def test_zero_degree_drop_rejected(self):
        with pytest.raises(HypothesisError):
            Witness(cofactor_order=1, drop_x=0, drop_y=1)
        with pytest.raises(HypothesisError):
            Witness(cofactor_order=1, drop_x=1, drop_y=-2)

    def test_empty_syzygy_dims_rejected(self):
        with pytest.raises(HypothesisError):
            ContractionParams(2, 5, 9, (), 0, 0, 0, 0, 0, 0, ())

    def test_negative_offsets_allowed(self):
        ContractionParams(0, 0, 0, (), 0, 0, -3, -7, 0, 0, (0,))


class TestLclmRegion:
    @pytest.mark.parametrize(
        "r,d,h,expected",
        [
            (3, 10, 15, True),
            (3, 10, 14, False),
            (10, 4, 6, True),
            (10, 4, 5, False),
        ],
    )
    def test_thresholds(self, r, d, h, expected):
        assert lclm_region(PAIR_SHAPES, r, d, h) is expected

    def test_trivial_shapes(self):
        assert lclm_region(LclmShapes([Shape(0, 0, 0)]), 0, 0, 0) is True

    def test_symmetry_under_order_degree_swap(self):
        for r in range(21):
            for d in range(r, 21):
                for h in range(21):
                    assert lclm_region(PAIR_SHAPES, r, d, h) == lclm_region(
                        PAIR_SHAPES, d, r, h
                    )

    def test_golden_grid(self):
        grid = sweep(lclm_region, PAIR_SHAPES, range(11), range(11))
        assert grid.to_json() == load_golden("lclm_pair_predicted")


class TestHyperRegion:
    @pytest.mark.parametrize(
        "r,d,h,expected",
        [
            (2, 8, 158, True),
            (2, 8, 157, False),
            (3, 9, 36, True),
            (3, 9, 35, False),
            (9, 12, 24, True),
            (9, 12, 23, False),
        ],
    )
    def test_thresholds(self, r, d, h, expected):
        assert hyper_region(GAMMA_TERM, r, d, h) is expected

    def test_side_condition_blocks_small_heights(self):
        # h + r·growth_y < pair_deg_y makes the certificate budget negative
        assert hyper_region(GAMMA_TERM, 0, 100, 2) is False

    def test_golden_grid(self):
        grid = sweep(hyper_region, GAMMA_TERM, range(10), range(13))
        assert grid.to_json() == load_golden("gamma_term_predicted")


class TestRatRegion:
    @pytest.mark.parametrize(
        "r,d,h,expected",
        [
            (6, 1, 19, True),
            (6, 1, 18, False),
            (3, 5, 28, True),
            (3, 5, 27, False),
            (12, 7, 2, True),
            (12, 7, 1, False),
        ],
    )
    def test_thresholds(self, r, d, h, expected):
        assert rat_region(SHIFT_POLE, r, d, h) is expected

    def test_denominator_degrees_are_floors(self):
        assert rat_region(SHIFT_POLE, 12, 0, 50) is False
        assert rat_region(SHIFT_POLE, 12, 50, 0) is False

    def test_golden_grid(self):
        grid = sweep(rat_region, SHIFT_POLE, range(13), range(8))
        assert grid.to_json() == load_golden("shift_pole_predicted")


class TestContractionRegion:
    def test_no_witness_degenerate_cell(self):
        p = ContractionParams(0, 0, 0, (), 0, 0, 0, 0, 0, 0, (0,))
        assert contraction_region(p, 0, 0, 0) is True

    @pytest.mark.parametrize(
        "r,d,expected_h",
        [(3, 5, 23), (3, 8, 8), (4, 5, 38), (7, 5, 83), (3, 7, 10), (6, 6, 28)],
    )
    def test_minimal_heights(self, r, d, expected_h):
        assert min_height(contraction_region, CONTRACTION, r, d) == expected_h

    def test_monotone_spot(self):
        assert contraction_region(CONTRACTION, 3, 9, 8) is True

    def test_order_side_conditions(self):
        # ansatz must reach the base operator and every witness
        assert contraction_region(CONTRACTION, 1, 50, 50) is False
        assert contraction_region(CONTRACTION, 2, 50, 50) is False

    def test_syzygy_tail_reuse(self):
        # a stored prefix shorter than the scan reuses its last entry
        small = ContractionParams(0, 0, 0, (), 0, 0, 0, 0, 0, 0, (0, 7))
        big = ContractionParams(0, 0, 0, (), 0, 0, 0, 0, 0, 0, (0, 7, 7, 7))
        for r in range(6):
            for d in range(3):
                for h in range(12):
                    assert contraction_region(small, r, d, h) == contraction_region(
                        big, r, d, h
                    )

    def test_golden_grid(self):
        grid = sweep(contraction_region, CONTRACTION, range(8), range(11))
        assert grid.to_json() == load_golden("contraction_predicted")


class TestMinHeight:
    def test_not_upward_closed_scan(self):
        # adversarial region: true exactly on one height
        spiky = lambda params, r, d, h: h == 3
        assert min_height(spiky, None, 0, 0) == 3

    def test_absent_at_zero_cap(self):
        assert min_height(lclm_region, PAIR_SHAPES, 0, 0, h_cap=0) is None

    def test_cap_invariance_once_found(self):
        a = min_height(lclm_region, PAIR_SHAPES, 3, 10, h_cap=15)
        b = min_height(lclm_region, PAIR_SHAPES, 3, 10, h_cap=500)
        assert a == b == 15

    def test_negative_cap_rejected(self):
        with pytest.raises(HypothesisError):
            min_height(lclm_region, PAIR_SHAPES, 3, 10, h_cap=-1)


class TestGrid:
    def test_empty_range_rejected(self):
        with pytest.raises(HypothesisError):
            sweep(lclm_region, PAIR_SHAPES, range(0), range(3))

    def test_rows_descend_cells_ascend(self):
        grid = sweep(lclm_region, PAIR_SHAPES, range(3, 5), range(9, 11))
        doc = grid.to_json()
        assert [row["d"] for row in doc["rows"]] == [10, 9]
        assert [c["r"] for c in doc["rows"][0]["cells"]] == [3, 4]

    def test_json_round_trip(self):
        grid = sweep(lclm_region, PAIR_SHAPES, range(3, 6), range(8, 11))
        again = SurfaceGrid.from_json(json.loads(json.dumps(grid.to_json())))
        assert again.to_json() == grid.to_json()

    def test_singleton_render(self):
        grid = SurfaceGrid(
            r_values=(3,), d_values=(10,), pred={(3, 10): 15}, actual={(3, 10): 5}
        )
        assert "15|5" in grid.render_text()

    def test_absent_render(self):
        grid = SurfaceGrid(
            r_values=(0,), d_values=(0,), pred={(0, 0): None}, actual={(0, 0): None}
        )
        assert "·|·" in grid.render_text()

    def test_predicted_only_render_has_no_bar(self):
        grid = SurfaceGrid(r_values=(3,), d_values=(10,), pred={(3, 10): 15})
        text = grid.render_text()
        assert "15" in text and "|" not in text

    @given(
        st.integers(0, 6), st.integers(0, 6), st.integers(0, 25),
        st.integers(0, 25), st.integers(0, 25),
    )
    @settings(max_examples=60, deadline=None)
    def test_region_matches_raw_inequality(self, rr, dd, r, d, h):
        # oracle: independent reimplementation of the counting inequality
        shapes = LclmShapes([Shape(rr, dd, 1), Shape(1, 1, 2)])
        # oracle grouping: ansatz cells minus the cells each reduction removes
        expected = (r + 1) * (d + 1) * (h + 1)
        for t in shapes.shapes:
            expected -= (
                (r + 1) * (d + 1) * t.h
                + (r + 1) * (h + 1) * t.d
                + (d + 1) * (h + 1) * t.r
                - (h + 1) * t.r * t.d
                - (d + 1) * t.r * t.h
                - (r + 1) * t.d * t.h
                + t.r * t.d * t.h
            )
        assert lclm_region(shapes, r, d, h) == (expected > 0)
