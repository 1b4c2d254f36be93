from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shatiyah.dual import DualScalar, H, combine, split

duals = st.builds(DualScalar, st.fractions(max_denominator=9), st.fractions(max_denominator=9))


def test_h_squares_to_zero():
    assert H * H == 0
    assert not (H * H)


@given(duals, duals, duals)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == 0


@given(duals)
def test_units_invert(x):
    if x.body == 0:
        with pytest.raises(ZeroDivisionError):
            x.inverse()
    else:
        assert x * x.inverse() == 1


def test_split_and_combine():
    d = {"p": DualScalar(2, 3), "q": Fraction(5), "r": H}
    body, soul = split(d)
    assert body == {"p": 2, "q": 5} and soul == {"p": 3, "r": 1}
    assert combine(body, soul) == {"p": DualScalar(2, 3), "q": DualScalar(5), "r": H}
