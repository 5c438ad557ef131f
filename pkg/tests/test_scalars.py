"""Exact Laurent-polynomial and cyclotomic-quotient arithmetic."""

from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

import pytest

from qannular.scalars import Cyclotomic, Laurent

laurents = st.builds(
    Laurent,
    st.dictionaries(st.integers(min_value=-6, max_value=6), st.integers(min_value=-9, max_value=9), max_size=5),
)


class TestLaurent:
    def test_basics(self):
        q = Laurent.q(1)
        assert q * Laurent.q(-1) == Laurent.one()
        assert (q + Laurent.one()) * (q - Laurent.one()) == Laurent.q(2) - Laurent.one()
        assert Laurent.zero().is_zero()
        assert Laurent.const(3).at_one() == 3

    def test_normalization_drops_zeros(self):
        assert Laurent({2: 0, 0: 1}) == Laurent.one()
        assert Laurent({5: 0}).is_zero()

    def test_monomial_queries(self):
        m = Laurent.q(3).scale(-2)
        assert m.is_monomial() and m.monomial() == (3, -2)
        assert not (Laurent.q(1) + Laurent.one()).is_monomial()
        with pytest.raises(ValueError):
            Laurent.zero().monomial()

    def test_reduce_mod_r(self):
        # q^3 = 1 in k_3, and q^-1 = q^2
        assert Laurent.q(3).reduce(3) == Laurent.one()
        assert Laurent.q(-1).reduce(3) == Laurent.q(2)
        assert Laurent.q(5).reduce(3) == Laurent.q(2)
        assert Laurent.q(7).reduce(0) == Laurent.q(7)
        # r = 1 collapses q entirely
        assert (Laurent.q(2) + Laurent.q(-1)).reduce(1) == Laurent.const(2)

    @given(laurents, laurents, laurents)
    def test_ring_axioms(self, a, b, c):
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + Laurent.zero() == a
        assert a * Laurent.one() == a
        assert (a - a).is_zero()

    @given(laurents, laurents, st.sampled_from([1, 2, 3, 5]))
    def test_reduce_is_ring_map(self, a, b, r):
        assert (a + b).reduce(r) == (a.reduce(r) + b.reduce(r)).reduce(r)
        assert (a * b).reduce(r) == (a.reduce(r) * b.reduce(r)).reduce(r)

    @given(laurents, st.sampled_from([1, 2, 3, 5]))
    def test_reduce_exponent_window(self, a, r):
        assert all(0 <= e < r for e in a.reduce(r).support())

    @given(laurents, laurents)
    def test_at_one_is_ring_map(self, a, b):
        assert (a * b).at_one() == a.at_one() * b.at_one()
        assert (a + b).at_one() == a.at_one() + b.at_one()

    def test_shift(self):
        assert Laurent.one().shift(4) == Laurent.q(4)
        assert (Laurent.q(1) + Laurent.q(-1)).shift(1) == Laurent.q(2) + Laurent.one()


class TestCyclotomic:
    def test_modulus_mismatch(self):
        a = Cyclotomic.from_laurent(Laurent.q(1), 3)
        b = Cyclotomic.from_laurent(Laurent.q(1), 5)
        with pytest.raises(ValueError):
            a + b

    def test_q_is_unit(self):
        for r in (1, 2, 3, 5):
            q = Cyclotomic.from_laurent(Laurent.q(1), r)
            qinv = Cyclotomic.from_laurent(Laurent.q(-1), r)
            assert (q * qinv).rep == Laurent.one()

    @given(laurents, laurents, st.sampled_from([1, 2, 3, 5]))
    def test_mirrors_laurent_arithmetic(self, a, b, r):
        ca = Cyclotomic.from_laurent(a, r)
        cb = Cyclotomic.from_laurent(b, r)
        assert (ca + cb).rep == (a + b).reduce(r)
        assert (ca * cb).rep == (a * b).reduce(r)
        assert (-ca).rep == (-a).reduce(r)
