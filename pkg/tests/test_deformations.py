import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shatiyah.atiyah import atiyah_operator_oracle
from shatiyah.deformations import (Deformation, GaugeCheckFailed, GaugeMap, check_compatible, check_gauge,
                                   deformed_atiyah, delta_extraction_check, dual_cohomology_dims, dual_pair,
                                   gauge_transform, inner_deformation, verify_gauge_invariance)
from shatiyah.atiyah import coefficient_module
from shatiyah.complex import build, cohomology
from shatiyah.fixtures import delta_pair, k_pair
from shatiyah.generators import random_deformation, random_gauge_map
from shatiyah.shlie import quotient_module

seeds = st.integers(0, 10 ** 6)


def _fixture(which):
    if which == "k":
        return k_pair()
    pair = delta_pair()
    return pair, quotient_module(pair)


def test_zero_deformation_has_zero_soul(kpair):
    pair, E = kpair
    d = deformed_atiyah(pair, E, Deformation.zero(pair))
    assert d.soul.is_zero()
    assert d.body == atiyah_operator_oracle(pair, E)


def test_k_pair_named_deformation(kpair):
    pair, E = kpair
    # delta_+(a1^) = a1^ a2^ b^
    d = Deformation.from_images(pair, {0: {(0, 1, 2): Fraction(1)}})
    assert check_compatible(pair, d).ok
    alpha = deformed_atiyah(pair, E, d)
    assert alpha.is_cocycle()
    assert alpha.soul == deformed_atiyah(pair, E, d, route="brackets").soul


def test_incompatible_deformation_is_located(kpair):
    pair, _ = kpair
    # b^ -> a1^ b^ puts a single B^ factor in the image of a B^ generator
    d = Deformation.from_images(pair, {2: {(0, 2): Fraction(1)}})
    rep = check_compatible(pair, d)
    assert not rep.ok
    assert any("b" in str(w) for w, _ in rep.failures)


@pytest.mark.parametrize("which", ["k", "delta"])
@settings(max_examples=6, deadline=None)
@given(seed=seeds)
def test_inner_deformations_are_compatible_and_gauge_trivial(which, seed):
    rng = random.Random(seed)
    pair, E = _fixture(which)
    g = random_gauge_map(rng, pair)
    assert g.validate(pair).ok
    inner = inner_deformation(pair, g)
    assert check_compatible(pair, inner).ok
    assert check_gauge(pair, inner, Deformation.zero(pair), g).ok
    w = verify_gauge_invariance(pair, E, inner, Deformation.zero(pair), g)
    assert w.holds


@pytest.mark.parametrize("which", ["k", "delta"])
@settings(max_examples=6, deadline=None)
@given(seed=seeds)
def test_gauge_invariance(which, seed):
    rng = random.Random(seed)
    pair, E = _fixture(which)
    d1 = random_deformation(rng, pair)
    g = random_gauge_map(rng, pair)
    d2 = gauge_transform(pair, d1, g)
    assert check_compatible(pair, d2).ok
    assert delta_extraction_check(pair, d1).ok
    w = verify_gauge_invariance(pair, E, d1, d2, g)
    assert w.holds
    # the operator and bracket routes give the same deformed cocycle
    assert deformed_atiyah(pair, E, d1).soul == deformed_atiyah(pair, E, d1, route="brackets").soul


def test_wrong_gauge_map_is_rejected(dpair):
    pair, B = dpair
    g = GaugeMap.from_images(pair, {0: {(2, 3): Fraction(1)}})
    other = GaugeMap.from_images(pair, {0: {(2, 3): Fraction(2)}})
    d1 = Deformation.zero(pair)
    d2 = gauge_transform(pair, d1, g)
    assert not check_gauge(pair, d1, d2, other).ok
    with pytest.raises(GaugeCheckFailed):
        verify_gauge_invariance(pair, B, d1, d2, other)


def test_square_zero_over_dual_numbers(kpair):
    pair, _ = kpair
    d = Deformation.from_images(pair, {0: {(0, 1, 2): Fraction(1)}})
    ph = dual_pair(pair, d)
    assert ph.L.square().is_zero()


@pytest.mark.parametrize("which", ["k", "delta"])
def test_cohomology_over_dual_numbers_doubles(which):
    pair, E = _fixture(which)
    mod = coefficient_module(pair, E)
    cx = build(mod, 3)
    for n in (0, 1, 2):
        dims = dual_cohomology_dims(mod, n, 3)
        assert dims.body_soul_split
        assert dims.dual == 2 * dims.rational == 2 * cohomology(cx, n).dimension
