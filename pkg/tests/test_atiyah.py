import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shatiyah.atiyah import (ExtensionMismatch, atiyah_cocycle, atiyah_from_curvature, atiyah_operator_oracle,
                             bianchi_residual, class_vanishes, cocycle_residual, compare_connections,
                             connecting_check, ij_residual, j1_residual, j_derivation_residual,
                             trivial_connection)
from shatiyah.fixtures import k_pair
from shatiyah.generators import random_connection, random_twisted_extension
from shatiyah.graded import GradedSpace, monomials
from shatiyah.multilinear import mono_degree
from shatiyah.shlie import adjoint_module, quotient_module, trivial_module

from conftest import example
from shatiyah.definitions import parse

seeds = st.integers(0, 10 ** 6)


def test_k_pair_golden_component(kpair):
    pair, E = kpair
    alpha = atiyah_cocycle(pair, E)
    assert alpha.components == {2: {((0, 1), 0, 0): {0: Fraction(-13)}}}
    assert alpha.render_components() == ["alpha_2(a1,a2,b,e) = -13*e"]


@settings(max_examples=15, deadline=None)
@given(st.tuples(*[st.fractions(min_value=-20, max_value=20, max_denominator=7)] * 4))
def test_k_pair_coefficient_formula(ks):
    k1, k2, k3, k4 = ks
    pair, E = k_pair(*ks)
    alpha = atiyah_operator_oracle(pair, E)
    expected = -(k1 * k3 + k2 * k4)
    assert alpha.value((1, 0), 0, 0) == ({0: -expected} if expected else {})
    assert alpha.value((0, 1), 0, 0) == ({0: expected} if expected else {})


def test_delta_pair_dual_tensor(dpair):
    pair, B = dpair
    alpha = atiyah_operator_oracle(pair, B)
    # a1 is index 1 of A, b is the only B generator
    assert alpha.as_dual_tensor() == {((1,), (0, 0, 0)): Fraction(-1)}
    assert alpha.render_dual_tensor() == "-a1^ (x) b^ (x) b^ (x) b"


def test_routes_agree_on_fixtures(kpair, dpair, lpair):
    for pair, E in (kpair, dpair, (lpair, adjoint_module(lpair.A)), (lpair, quotient_module(lpair))):
        a = atiyah_cocycle(pair, E)
        b = atiyah_operator_oracle(pair, E)
        c = atiyah_from_curvature(trivial_connection(pair, E))
        assert a == b == c
        assert not cocycle_residual(a)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_routes_agree_on_twisted_extensions(seed):
    rng = random.Random(seed)
    pair = random_twisted_extension(rng)
    for E in (quotient_module(pair), trivial_module(pair.A, GradedSpace.from_pairs("E", [("e", 0)]))):
        a = atiyah_cocycle(pair, E)
        assert a == atiyah_operator_oracle(pair, E)
        assert a == atiyah_from_curvature(trivial_connection(pair, E))


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_connections_change_alpha_by_a_coboundary(seed):
    rng = random.Random(seed)
    pair, E = k_pair(*(rng.randint(-4, 4) for _ in range(4)))
    conn = random_connection(rng, pair, E)
    assert not any(bianchi_residual(conn).values())
    assert atiyah_cocycle(pair, E, conn) == atiyah_from_curvature(conn)
    assert compare_connections(pair, E, trivial_connection(pair, E), conn).holds


def test_connection_must_extend_the_module(kpair):
    pair, E = kpair
    conn = trivial_connection(pair, E)
    conn.D[0][((0,), 0)] = Fraction(1)
    with pytest.raises(ExtensionMismatch):
        atiyah_cocycle(pair, E, conn)


def test_vanishing_verdicts(kpair, dpair):
    v = class_vanishes(*kpair, max_weight=3)
    assert not v.vanishes and v.exact
    assert v.label == "NONVANISHING (exact)"
    zero = class_vanishes(*k_pair(1, 1, 1, -1))
    assert zero.zero_cocycle
    d = class_vanishes(*dpair, max_weight=2)
    assert d.label == "NONVANISHING (no primitive up to weight 2)"


def test_abelian_extension_example_vanishes():
    df = parse(example("abext.shl"))
    v = class_vanishes(df.pair, df.modules["E"])
    assert v.vanishes and v.primitive is not None and not v.zero_cocycle


@settings(max_examples=8, deadline=None)
@given(seeds)
def test_connecting_map_description(seed):
    rng = random.Random(seed)
    pair = random_twisted_extension(rng, dim_max=5)
    rep = connecting_check(pair, quotient_module(pair))
    assert rep.ok, rep.summary()


def _poly(rng, pair, weight):
    ms = list(monomials(pair.dd, weight))
    if not ms:
        return {}
    d = mono_degree(rng.choice(ms), pair.dd)
    return {m: Fraction(rng.randint(1, 4)) for m in ms if mono_degree(m, pair.dd) == d and rng.random() < 0.5}


def _operator(rng, pair, E, degree):
    X = {}
    for e in range(E.dim):
        X[e] = {(m, e2): Fraction(rng.randint(-2, 2) or 1)
                for w in range(3) for m in monomials(pair.dd, w) for e2 in range(E.dim)
                if mono_degree(m, pair.dd) + E.degree(e2) - E.degree(e) == degree and rng.random() < 0.4}
    return X


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_j_identities(seed):
    rng = random.Random(seed)
    pair = random_twisted_extension(rng)
    w1, w2 = _poly(rng, pair, rng.randint(0, 3)), _poly(rng, pair, rng.randint(0, 3))
    assert not ij_residual(pair, w1)
    assert not j_derivation_residual(pair, w1, w2)
    E = GradedSpace.from_pairs("E", [("e0", 0), ("e1", -1)])
    d1 = rng.randint(-1, 2)
    phi, psi = _operator(rng, pair, E, d1), _operator(rng, pair, E, rng.randint(-1, 2))
    assert not j1_residual(pair, phi, d1, psi, range(E.dim))
