"""Small worked structures used by the tests, the benchmark and the CLI."""
from __future__ import annotations

from fractions import Fraction

from .graded import GradedSpace, Q
from .multilinear import Derivation, SymMap
from .shlie import AModule, LInftyAlgebra, SHLiePair


def k_pair(k1=1, k2=2, k3=3, k4=5):
    """Odd generators a1, a2 and an even b with only lambda_3 nonzero, plus a
    one-dimensional module e acted on by m_2.

    Returns ``(pair, module)``.
    """
    k1, k2, k3, k4 = map(Q, (k1, k2, k3, k4))
    L = GradedSpace.from_pairs("L", [("a1", -1), ("a2", -1), ("b", 0)])
    lam3 = SymMap(3, L, L, 1)
    lam3.add_value((0, 1, 2), {0: -k1, 1: -k2})
    alg = LInftyAlgebra.from_brackets(L, [lam3])
    pair = SHLiePair(alg, ["a1", "a2"])
    E = GradedSpace.from_pairs("E", [("e", 0)])
    m2 = SymMap(2, pair.A_space, E, 1, slot=E)
    m2.add_value((0,), {0: -k3}, 0)
    m2.add_value((1,), {0: -k4}, 0)
    return pair, AModule.from_actions(pair.A, E, [m2])


def delta_pair():
    """Generators a0, a1, c, b; A = span(a0, a1, c), B = span(b).

    The vector field is ``Q(a0^) = -a1^ b^``, ``Q(a1^) = -a0^ a1^ - a0^ c^ b^``,
    ``Q(c^) = 0``, ``Q(b^) = a0^ b^``.
    """
    L = GradedSpace.from_pairs("L", [("a0", -1), ("a1", -1), ("c", 0), ("b", -1)])
    dd = tuple(-d for d in L.degrees)
    Qd = Derivation(dd, 1, {
        0: {(1, 3): Fraction(-1)},
        1: {(0, 1): Fraction(-1), (0, 2, 3): Fraction(-1)},
        3: {(0, 3): Fraction(1)},
    })
    return SHLiePair(LInftyAlgebra(L, Qd), ["a0", "a1", "c"])


def lie_pair():
    """The two-dimensional Lie algebra ``[x, y] = y`` shifted to degree -1, A = span(x)."""
    L = GradedSpace.from_pairs("L", [("x", -1), ("y", -1)])
    lam2 = SymMap(2, L, L, 1)
    lam2.add_value((0, 1), {1: 1})
    return SHLiePair(LInftyAlgebra.from_brackets(L, [lam2]), ["x"])
