"""Witnessed-multiple machinery: cofactors, syzygy dimensions, size-parameter
assembly, and certified searches in a base operator's polynomial ideal."""

import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from odh.clm import multiples_shape_basis
from odh.contraction import (
    CofactorWitness,
    ContractionData,
    NotInIdealError,
    actual_min_height,
    cofactor,
    contraction_params,
    shape_search,
    syzygy_dims,
)
from odh.ore import AlgebraKind, OreError, OrePoly, clear_denominators, ore_mul, shape_of
from odh.poly import MPoly, PolyParseError, RatFun, exact_div
from odh.surfaces import (
    ContractionParams,
    HypothesisError,
    Witness,
    contraction_region,
    min_height,
)

SHIFT = AlgebraKind.SHIFT_X
DIFF = AlgebraKind.DIFF_X
X, Y = MPoly.var("x"), MPoly.var("y")

# What the deterministic pipeline (fixture generator) produces for the
# committed witness bundle.  The witness scalar clears a single shifted
# factor of the base's leading coefficient, so the growth/offset sums are
# smaller than those of a witness clearing the whole leading coefficient.
PIPELINE_PARAMS = ContractionParams(
    base_order=2,
    base_deg_x=5,
    base_deg_y=9,
    witnesses=(Witness(cofactor_order=1, drop_x=1, drop_y=1),),
    growth_x=1,
    growth_y=2,
    offset_x=2,
    offset_y=4,
    cap_x=0,
    cap_y=0,
    syzygy_dims=(0,),
)


def two_witness_data() -> ContractionData:
    """Shift-algebra bundle with two coprime-scalar witnesses.

    Built so that p·L1 = (2 + S)·L and p'·L2 = (1/2 + S)·L hold exactly
    for p = x + y², p' = p + 3: the base's trailing coefficient is p·p'
    and its leading coefficient is the backward shift of that product,
    which makes both shifted-factor singularities removable at order 1.
    """
    q = Y * Y
    p1 = X + q
    p2 = X + q + 3
    lead = (X - 1 + q) * (X + q + 2)  # backward shift of p1·p2
    base = OrePoly(SHIFT, [p1 * p2, lead])
    cof1 = OrePoly(SHIFT, [MPoly.const(2), MPoly.one()])
    cof2 = OrePoly(SHIFT, [MPoly.const(Fraction(1, 2)), MPoly.one()])
    mult1 = OrePoly(SHIFT, [exact_div(c, p1) for c in ore_mul(cof1, base).coeffs])
    mult2 = OrePoly(SHIFT, [exact_div(c, p2) for c in ore_mul(cof2, base).coeffs])
    return ContractionData(
        base,
        [CofactorWitness(mult1, p1, cof1), CofactorWitness(mult2, p2, cof2)],
    )


def derivative_witness_data() -> ContractionData:
    """Differential-algebra bundle: x·y²·(x∂ + 2) = ∂·(x²y²) exactly."""
    base = OrePoly.scalar(DIFF, X * X * Y * Y)
    mult = OrePoly(DIFF, [MPoly.const(2), X])
    return ContractionData(
        base, [CofactorWitness(mult, X * Y * Y, OrePoly(DIFF, [MPoly.zero(), MPoly.one()]))]
    )


class TestDataValidation:
    def test_two_witness_bundle_constructs(self):
        data = two_witness_data()
        assert len(data.witnesses) == 2
        assert all(w.drop_x == 1 and w.drop_y == 2 for w in data.witnesses)
        assert [w.cofactor_order for w in data.witnesses] == [1, 1]

    def test_witnesses_sorted_by_cofactor_order(self):
        data = two_witness_data()
        w_low, w_high = data.witnesses
        # left-multiplying the identity p·M = P·L by the shift keeps it
        # valid with scalar σ(p), multiple S·M, cofactor S·P — and bumps
        # the cofactor order, so the constructor must reorder
        shift_op = OrePoly(SHIFT, [MPoly.zero(), MPoly.one()])
        higher = CofactorWitness(
            ore_mul(shift_op, w_high.multiple),
            w_high.scalar.shift("x"),
            ore_mul(shift_op, w_high.cofactor),
        )
        reordered = ContractionData(data.base, [higher, w_low])
        assert [w.cofactor_order for w in reordered.witnesses] == [1, 2]

    def test_broken_identity_names_witness(self):
        data = two_witness_data()
        w0, w1 = data.witnesses
        bad = CofactorWitness(w1.multiple, w1.scalar, w0.cofactor)
        with pytest.raises(HypothesisError, match="witness 1"):
            ContractionData(data.base, [w0, bad])

    def test_missing_degree_drop_names_witness(self):
        base = two_witness_data().base
        trivial = CofactorWitness(base, MPoly.one(), OrePoly.one(SHIFT))
        with pytest.raises(HypothesisError, match="witness 0"):
            ContractionData(base, [trivial])

    def test_shared_scalar_factor_names_both_witnesses(self):
        data = two_witness_data()
        w = data.witnesses[0]
        with pytest.raises(HypothesisError, match="witnesses 0 and 1"):
            ContractionData(data.base, [w, w])

    def test_scalar_with_third_variable_rejected(self):
        data = two_witness_data()
        w = data.witnesses[0]
        bad = CofactorWitness(w.multiple, w.scalar * MPoly.var("k"), w.cofactor)
        with pytest.raises(HypothesisError, match="witness 0"):
            ContractionData(data.base, [bad, data.witnesses[1]])

    def test_algebra_kind_mismatch_rejected(self):
        data = two_witness_data()
        w = derivative_witness_data().witnesses[0]
        with pytest.raises(HypothesisError, match="witness 0"):
            ContractionData(data.base, [w])

    def test_json_round_trip(self):
        data = two_witness_data()
        assert ContractionData.from_json(data.to_json()) == data

    def test_json_missing_key_rejected(self):
        blob = two_witness_data().to_json()
        del blob["witnesses"]
        with pytest.raises(PolyParseError):
            ContractionData.from_json(blob)

    def test_json_extra_witness_key_rejected(self):
        blob = two_witness_data().to_json()
        blob["witnesses"][0]["note"] = "x"
        with pytest.raises(PolyParseError):
            ContractionData.from_json(blob)

    def test_json_witnesses_must_be_list(self):
        blob = two_witness_data().to_json()
        blob["witnesses"] = "none"
        with pytest.raises(PolyParseError):
            ContractionData.from_json(blob)


class TestCofactor:
    def test_identity_multiple(self):
        base = two_witness_data().base
        p, cof = cofactor(base, base)
        assert p == MPoly.one()
        assert cof == OrePoly.one(SHIFT)

    def test_polynomial_multiplier(self):
        base = two_witness_data().base
        p, cof = cofactor(ore_mul(OrePoly.scalar(SHIFT, X), base), base)
        assert p == MPoly.one()
        assert cof == OrePoly.scalar(SHIFT, X)

    def test_not_in_ideal(self):
        base = two_witness_data().base
        with pytest.raises(NotInIdealError):
            cofactor(OrePoly.one(SHIFT), base)

    def test_recovers_constructed_witnesses(self):
        data = two_witness_data()
        for w in data.witnesses:
            p, cof = cofactor(w.multiple, data.base)
            assert p == w.scalar
            assert cof == w.cofactor

    @pytest.mark.parametrize("kind", [SHIFT, DIFF])
    def test_round_trip_on_random_rational_multiples(self, kind):
        rng = random.Random(20240816 if kind is SHIFT else 20240817)
        base = (
            two_witness_data().base
            if kind is SHIFT
            else OrePoly(DIFF, [X * Y + 1, X + Y, MPoly.one()])
        )

        def small_poly():
            terms = {}
            for _ in range(3):
                e = (rng.randrange(2), rng.randrange(2), 0)
                terms[e] = terms.get(e, Fraction(0)) + Fraction(rng.randrange(-3, 4))
            p = MPoly({e: v for e, v in terms.items() if v})
            return p if p else MPoly.one()

        for _ in range(8):
            coeffs = [
                RatFun(small_poly(), small_poly()) for _ in range(rng.randrange(1, 3))
            ]
            left = OrePoly(kind, coeffs)
            if not left:
                left = OrePoly.one(kind)
            multiple = clear_denominators(ore_mul(left, base))
            p, cof = cofactor(multiple, base)
            assert ore_mul(OrePoly.scalar(kind, p), multiple) == ore_mul(cof, base)
            assert p == p.primitive()  # canonical: coprime ints, positive lead


class TestShapeSearch:
    def test_derivative_generator_found_at_own_shape(self):
        d_op = OrePoly(DIFF, [MPoly.zero(), MPoly.one()])
        assert shape_search(d_op, 1, 0, 0) == d_op

    def test_below_generator_order_absent(self):
        d_op = OrePoly(DIFF, [MPoly.zero(), MPoly.one()])
        assert shape_search(d_op, 0, 5, 5) is None

    def test_derivative_ideal_has_no_order_zero_heights(self):
        d_op = OrePoly(DIFF, [MPoly.zero(), MPoly.one()])
        assert actual_min_height(d_op, 0, 5, h_cap=30) is None

    def test_negative_bounds_rejected(self):
        with pytest.raises(OreError):
            shape_search(two_witness_data().base, 2, -1, 0)


class TestGammaIdealHeights:
    """Ground-truth searches over the telescoper's polynomial ideal."""

    @pytest.fixture(scope="class")
    def base(self, minimal_gamma_certificate):
        return minimal_gamma_certificate.operator

    def test_witness_cell_inhabited(self, base):
        found = shape_search(base, 3, 8, 8)
        assert found is not None
        s = shape_of(found)
        assert s.r <= 3 and s.d <= 8 and s.h <= 8

    @pytest.mark.parametrize(
        "r,d,expected",
        [(2, 5, 9), (3, 5, 7), (5, 5, 6), (7, 5, 5), (3, 8, 7)],
    )
    def test_minimal_heights(self, base, r, d, expected):
        assert actual_min_height(base, r, d, h_cap=20) == expected


class TestSyzygyDims:
    def test_two_witness_sequence_with_shifted_relation(self):
        # one bounded relation exists from step 1 on: q1·u1 + q2·u2 = 0 with
        # q1, q2 the (shifted) opposite scalars, whose degrees hit the
        # inclusive caps exactly — a strict cap would lose the relation
        data = two_witness_data()
        assert syzygy_dims(data, 4) == (0, 1, 1, 1)

    def test_stabilizes_past_largest_cofactor_order(self):
        # both cofactors have order 1, so the sequence is constant from
        # step 1 on; computing two steps further must not change it
        dims = syzygy_dims(two_witness_data(), 4)
        assert dims[1] == dims[2] == dims[3]

    def test_step_zero_has_no_participants(self):
        assert syzygy_dims(two_witness_data(), 1) == (0,)

    def test_below_base_order_empty(self):
        assert syzygy_dims(two_witness_data(), 0) == ()

    def test_single_witness_trivial(self):
        data = derivative_witness_data()
        assert syzygy_dims(data, 4) == (0, 0, 0, 0, 0)

    def test_no_witnesses_all_zero(self):
        base = two_witness_data().base
        assert syzygy_dims(ContractionData(base, []), 3) == (0, 0, 0)


class TestContractionParams:
    def test_derivative_witness_readout(self):
        params = contraction_params(derivative_witness_data())
        assert params == ContractionParams(
            base_order=0,
            base_deg_x=2,
            base_deg_y=2,
            witnesses=(Witness(cofactor_order=1, drop_x=1, drop_y=2),),
            growth_x=1,
            growth_y=2,
            offset_x=0,
            offset_y=0,
            cap_x=0,
            cap_y=0,
            syzygy_dims=(0,),
        )

    def test_no_witnesses_all_sums_empty(self):
        base = two_witness_data().base
        params = contraction_params(ContractionData(base, []))
        assert params == ContractionParams(
            base_order=1,
            base_deg_x=2,
            base_deg_y=4,
            witnesses=(),
            growth_x=0,
            growth_y=0,
            offset_x=0,
            offset_y=0,
            cap_x=0,
            cap_y=0,
            syzygy_dims=(0,),
        )

    def test_two_witness_readout_keeps_distinct_tail(self):
        params = contraction_params(two_witness_data())
        assert params.syzygy_dims == (0, 1)
        assert params.growth_x == 2 and params.growth_y == 4
        assert params.offset_x == 2 and params.offset_y == 4


class TestGammaIdealPipeline:
    """The committed fixture is exactly what the deterministic derivation
    yields, and its size parameters drive a sound prediction region."""

    def test_fixture_matches_fresh_derivation(
        self, gamma_ideal_data, minimal_gamma_certificate
    ):
        base = minimal_gamma_certificate.operator
        assert gamma_ideal_data.base == base
        basis = multiples_shape_basis(base, 3, 8, 8)
        chosen = min(basis, key=lambda op: (shape_of(op).d, shape_of(op).h))
        p, cof = cofactor(chosen, base)
        assert gamma_ideal_data == ContractionData(
            base, [CofactorWitness(chosen, p, cof)]
        )

    def test_witness_degrees_drop_strictly(self, gamma_ideal_data):
        (w,) = gamma_ideal_data.witnesses
        assert w.drop_x >= 1 and w.drop_y >= 1

    def test_parameter_readout(self, gamma_ideal_data):
        assert contraction_params(gamma_ideal_data) == PIPELINE_PARAMS


class TestRegionSoundness:
    """Region claims for the fixture's parameters are honoured by verified
    ideal elements, and cells outside the region's reach stay silent."""

    @pytest.mark.parametrize("r,d", [(3, 4), (3, 10), (4, 7), (5, 5), (5, 10)])
    def test_sampled_region_points_inhabited(
        self, minimal_gamma_certificate, r, d
    ):
        base = minimal_gamma_certificate.operator
        h = min_height(contraction_region, PIPELINE_PARAMS, r, d, 40)
        assert h is not None
        found = shape_search(base, r, d, h)
        assert found is not None
        s = shape_of(found)
        assert s.r <= r and s.d <= d and s.h <= h

    def test_side_condition_blocks_low_orders(self):
        assert min_height(contraction_region, PIPELINE_PARAMS, 2, 8, 60) is None

    def test_tiny_degrees_not_claimed(self):
        # the unknown count credits no monomials when the target degree
        # cannot even accommodate the base operator
        for d in range(4):
            assert min_height(contraction_region, PIPELINE_PARAMS, 3, d, 60) is None


class TestUnivariateCurveContainment:
    def test_curve_cells_lie_in_region_at_height_zero(self):
        # y-free instances: the witness drop in y is the type's minimum and
        # every y-sum is zeroed, so the surface formula degenerates to the
        # classical order/degree trade-off; scoped to ansatz orders that
        # reach the witnessed multiple
        cases = [(1, 3, 1, 2), (2, 5, 2, 3), (0, 4, 1, 1), (3, 2, 3, 2)]
        for base_order, base_deg, cof_order, lam in cases:
            params = ContractionParams(
                base_order=base_order,
                base_deg_x=base_deg,
                base_deg_y=0,
                witnesses=(Witness(cof_order, lam, 1),),
                growth_x=lam,
                growth_y=0,
                offset_x=(cof_order + base_order - 1) * lam,
                offset_y=0,
                cap_x=0,
                cap_y=0,
                syzygy_dims=(0,),
            )
            for r in range(base_order + cof_order, 16):
                for d in range(16):
                    on_curve = (r - base_order + 1) * (
                        d - base_deg + lam
                    ) >= cof_order * lam
                    if on_curve:
                        assert contraction_region(params, r, d, 0), (
                            base_order,
                            base_deg,
                            cof_order,
                            lam,
                            r,
                            d,
                        )
