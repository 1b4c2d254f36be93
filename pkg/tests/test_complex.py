import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shatiyah.atiyah import coefficient_module
from shatiyah.complex import (Cochain, NonzeroCurvature, NoSolutionUpToWeight, NotACocycle, TruncatedComplex,
                              build, cohomology, default_weight, solve_coboundary)
from shatiyah.generators import random_abelian_extension, random_twisted_extension
from shatiyah.graded import GradedSpace
from shatiyah.multilinear import Derivation
from shatiyah.shlie import LInftyAlgebra, quotient_module, trivial_module


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_square_zero_on_random_coefficient_complexes(seed):
    rng = random.Random(seed)
    pair = random_twisted_extension(rng, dim_max=5)
    mod = coefficient_module(pair, quotient_module(pair))
    cx = TruncatedComplex(mod, 3)
    assert cx.check_square_zero()


def test_curved_algebras_have_no_complex():
    V = GradedSpace.from_pairs("V", [("t", 1)])
    alg = LInftyAlgebra(V, Derivation((-1,), 1, {0: {(): Fraction(1)}}))
    assert alg.is_curved
    with pytest.raises(NonzeroCurvature):
        build(trivial_module(alg, GradedSpace.from_pairs("E", [("e", 0)])), 2)


def test_cohomology_of_an_abelian_odd_generator():
    # O(A) = Q[x^]/(x^2) with zero differential: H^0 = H^1 = Q
    V = GradedSpace.from_pairs("A", [("x", -1)])
    mod = trivial_module(LInftyAlgebra.zero(V), GradedSpace.from_pairs("E", [("e", 0)]))
    cx = build(mod, 3)
    assert [cohomology(cx, n).dimension for n in (0, 1, 2)] == [1, 1, 0]
    assert cx.exact_mode and cx.is_exact_at(1)


def test_primitive_or_certificate(rng):
    pair, mod = random_abelian_extension(rng, (-1, -1), (-1,))
    cx = build(mod, 3)
    for n in (0, 1, 2):
        for rep in cohomology(cx, n).representatives:
            res = solve_coboundary(cx, rep)
            assert isinstance(res, NoSolutionUpToWeight)
            u = res.certificate
            for col in cx.columns(n - 1) if cx.dim(n - 1) else []:
                assert sum(u.get(i, 0) * v for i, v in col.items()) == 0
        # every coboundary has a primitive that reproduces it
        for x in cx.basis(n)[:4]:
            z = Cochain(mod, cx.apply({x: Fraction(1)}), n + 1)
            if z.is_zero():
                continue
            y = solve_coboundary(cx, z)
            assert cx.apply(y.terms) == z.terms


def test_non_cocycles_are_rejected(rng):
    pair, mod = random_abelian_extension(rng, (-1, -1), (-1,))
    cx = build(mod, 3)
    for n in cx.degrees():
        for x in cx.basis(n):
            if cx.apply({x: Fraction(1)}):
                with pytest.raises(NotACocycle):
                    solve_coboundary(cx, Cochain(mod, {x: Fraction(1)}, n))
                return
    pytest.skip("no non-cocycle in this sample")


def test_default_weight():
    assert default_weight(2) == 4
    assert default_weight(-5) == 0
