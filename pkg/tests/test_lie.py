import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from shatiyah.generators import random_twisted_extension
from shatiyah.graded import GradedSpace
from shatiyah.lie import (AtiyahOperators, basis_elements, bracket_table, chain_map_check, functor_check,
                          jacobi_witness, leibniz_checks, lie_checks, skew_witness, action_table)
from shatiyah.shlie import adjoint_module, dual_module, hom_module, quotient_module, trivial_module

seeds = st.integers(0, 10 ** 6)


def test_delta_pair_bracket_of_the_weight_zero_generator(dpair):
    pair, B = dpair
    ops = AtiyahOperators(pair)
    b = {((), 0): Fraction(1)}
    # [b, b] = alpha^B(b) b = a1^ (x) b
    assert ops.bracket(b, b) == {((1,), 0): Fraction(1)}


def test_delta_pair_bracket_table(dpair):
    pair, _ = dpair
    t = bracket_table(pair, 1, 1)
    assert t.report.ok
    assert len(t.left) == 1 and len(t.target) == 1
    # b[-2] is not a cocycle here; its class representative brackets to a coboundary
    assert t.entries == {(0, 0): {}}


def test_witnesses_on_fixtures(kpair, dpair, lpair):
    for pair, E in (kpair, dpair, (lpair, adjoint_module(lpair.A))):
        assert skew_witness(pair).report.ok
        assert jacobi_witness(pair, E).report.ok


@settings(max_examples=6, deadline=None)
@given(seeds)
def test_witnesses_on_twisted_extensions(seed):
    rng = random.Random(seed)
    pair = random_twisted_extension(rng, dim_max=4)
    assert skew_witness(pair).report.ok
    assert jacobi_witness(pair, quotient_module(pair), max_weight=1).report.ok


def test_lie_identities_up_to_coboundaries(kpair, dpair):
    for pair, E in (kpair, dpair):
        rep = lie_checks(pair, E=E)
        assert rep.ok and rep.checked > 0
    rep = lie_checks(kpair[0], degrees=(2, 3))
    assert rep.ok and rep.checked > 0


def test_action_table_k_pair(kpair):
    pair, E = kpair
    t = action_table(pair, E, 2, 2, max_weight=4)
    assert t.report.ok


def test_leibniz_rules(kpair):
    pair, E = kpair
    F = trivial_module(pair.A, GradedSpace.from_pairs("F", [("f", -1)]))
    assert leibniz_checks(pair, E, F, max_weight=2).ok
    assert leibniz_checks(pair, E, dual_module(E), max_weight=2).ok


@settings(max_examples=5, deadline=None)
@given(seeds)
def test_alpha_of_a_cocycle_is_a_chain_map(seed):
    rng = random.Random(seed)
    pair = random_twisted_extension(rng, dim_max=4)
    ops = AtiyahOperators(pair)
    B = ops.B
    for x in basis_elements(pair.a_degs, pair.B_space, 2):
        if not B.nabla(x):
            assert not chain_map_check(ops.alpha_B, x)


def test_morphisms_of_modules_are_natural_up_to_homotopy(kpair):
    pair, E = kpair
    # identity of E is a cocycle of Hom(E, E)
    H = hom_module(E, E)
    phi = {((), 0): Fraction(1)}
    assert not H.nabla(phi)
    assert functor_check(pair, E, E, phi).ok
