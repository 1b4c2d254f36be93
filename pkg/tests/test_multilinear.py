import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from shatiyah.generators import random_algebra, random_derivation
from shatiyah.graded import GradedSpace, Vector
from shatiyah.multilinear import (Derivation, SymMap, brackets_from_derivation, commutator,
                                  derivation_from_brackets, pmul)


def test_symmap_value_is_order_insensitive_with_sign():
    V = GradedSpace.from_pairs("V", [("x", 1), ("y", 1), ("z", 0)])
    f = SymMap(2, V, V, 1)
    f.add_value((1, 0), {2: 3})
    assert f.value((0, 1)) == {2: -3}
    assert f.value((1, 0)) == {2: 3}
    assert f.value((0, 0)) == {}


def test_eval_map_is_bilinear():
    V = GradedSpace.from_pairs("V", [("x", 0), ("y", 0)])
    f = SymMap(2, V, V, 0)
    f.add_value((0, 1), {0: 1})
    x = Vector(V, {0: 2, 1: 1})
    y = Vector(V, {1: 3})
    assert f(x, y).coeffs == {0: Fraction(6)}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_brackets_and_derivations_roundtrip(seed):
    rng = random.Random(seed)
    degs = tuple(rng.choice((-1, 0, 1, -2)) for _ in range(3))
    D = random_derivation(rng, degs, 1, 3, density=0.5)
    V = GradedSpace.from_pairs("V", [("v%d" % i, -d) for i, d in enumerate(degs)])
    lams = brackets_from_derivation(D, V, 3)
    assert derivation_from_brackets(lams, V) == D


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_derivations_obey_leibniz(seed):
    rng = random.Random(seed)
    degs = (1, 1, 2, 0)
    D = random_derivation(rng, degs, 1, 2, density=0.6)
    p = {(0, 2): Fraction(rng.randint(-2, 2) or 1)}
    q = {(1,): Fraction(1), (3,): Fraction(2)}
    # |p| odd
    lhs = D(pmul(p, q, degs))
    rhs = pmul(D(p), q, degs)
    for m, c in pmul(p, D(q), degs).items():
        rhs[m] = rhs.get(m, 0) - c
    assert {m: c for m, c in lhs.items() if c} == {m: c for m, c in rhs.items() if c}


def test_commutator_of_odd_derivation_with_itself_is_twice_the_square():
    rng = random.Random(5)
    alg = random_algebra(rng, (-1, -1, 0))
    Q = alg.Q
    sq = commutator(Q, Q)
    for g in range(3):
        assert sq.image(g) == {m: 2 * c for m, c in Q(Q.image(g)).items()}
    assert sq.is_zero()


def test_derivation_arithmetic():
    D = Derivation((1, 1), 1, {0: {(0, 1): Fraction(1)}})
    assert (D - D).is_zero()
    assert (D + D).image(0) == {(0, 1): Fraction(2)}
    assert D.max_weight() == 2
