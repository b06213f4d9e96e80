"""Shared hypothesis strategies for randomized algebra-law tests."""

from fractions import Fraction

from hypothesis import strategies as st

from odh.poly import MPoly, RatFun

coeffs = st.fractions(
    min_value=-50, max_value=50, max_denominator=12
).filter(lambda c: c != 0)


def exponents(max_exp: int = 4):
    return st.tuples(
        st.integers(0, max_exp), st.integers(0, max_exp), st.integers(0, max_exp)
    )


@st.composite
def mpolys(draw, max_terms: int = 6, allow_zero: bool = True, max_exp: int = 4) -> MPoly:
    n = draw(st.integers(0 if allow_zero else 1, max_terms))
    terms: dict = {}
    for _ in range(n):
        terms[draw(exponents(max_exp))] = draw(coeffs)
    p = MPoly(terms)
    if not allow_zero and not p:
        p = p + MPoly.const(draw(coeffs))
    return p


def nonzero_mpolys(max_terms: int = 6, max_exp: int = 4):
    return mpolys(max_terms=max_terms, allow_zero=False, max_exp=max_exp)


@st.composite
def ratfuns(draw, max_terms: int = 3) -> RatFun:
    num = draw(mpolys(max_terms=max_terms, max_exp=2))
    den = draw(nonzero_mpolys(max_terms=max_terms, max_exp=2))
    return RatFun(num, den)


def nonzero_ratfuns(max_terms: int = 3):
    return ratfuns(max_terms=max_terms).filter(bool)


rationals = st.fractions(min_value=-30, max_value=30, max_denominator=10)
