import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shatiyah.graded import (GradedSpace, Q, brute_force_unshuffles, compose, koszul_sign,
                             normalize_monomial, sort_sign, unshuffles)

degree_lists = st.lists(st.integers(-3, 3), min_size=1, max_size=6)


def test_q_rejects_floats():
    with pytest.raises(TypeError):
        Q(0.5)
    assert Q("3/4") == Fraction(3, 4)


def test_swap_of_two_odd_elements_is_negative():
    assert koszul_sign((1, 0), (1, 1)) == -1
    assert koszul_sign((1, 0), (1, 2)) == 1
    assert koszul_sign((1, 0), (0, 0)) == 1


@given(degree_lists, st.randoms())
def test_koszul_sign_is_multiplicative(degs, r):
    n = len(degs)
    p = list(range(n))
    q = list(range(n))
    r.shuffle(p)
    r.shuffle(q)
    # v -> v[q] then -> (v[q])[p]
    moved = [degs[i] for i in q]
    assert koszul_sign(compose(p, q), degs) == koszul_sign(q, degs) * koszul_sign(p, moved)


@settings(deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=3))
def test_unshuffles_match_brute_force(blocks):
    assert sorted(unshuffles(blocks)) == sorted(brute_force_unshuffles(blocks))


def test_unshuffle_count_is_multinomial():
    assert len(unshuffles([2, 1, 1])) == 12


@given(st.lists(st.integers(0, 4), max_size=6))
def test_sort_sign_agrees_with_koszul(idx):
    degs = [1, 0, 1, 2, -1]
    s, srt = sort_sign(idx, degs)
    odd_repeat = any(idx.count(g) > 1 and degs[g] & 1 for g in set(idx))
    if odd_repeat:
        assert s == 0
        return
    assert srt == tuple(sorted(idx))
    perm = sorted(range(len(idx)), key=lambda i: (idx[i], i))
    assert s == koszul_sign(perm, [degs[g] for g in idx])


def test_normalize_monomial_by_name():
    V = GradedSpace.from_pairs("V", [("x", 1), ("y", 1), ("z", 0)])
    mono, sign = normalize_monomial(V, ["y", "z", "x"])
    assert mono.generators == (0, 1, 2) and sign == -1
    assert normalize_monomial(V, ["x", "z", "x"]) is None
    mono, sign = normalize_monomial(V, ["z", "z"])
    assert mono.weight == 2 and mono.degree == 0 and sign == 1


def test_all_orders_of_three_odds_fold_to_the_sign_of_the_permutation():
    degs = (1, 1, 1)
    for perm in itertools.permutations(range(3)):
        s, _ = sort_sign(perm, degs)
        inv = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
        assert s == (-1) ** inv
