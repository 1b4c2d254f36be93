"""Seeded random structures for property tests.

Valid structures come from three sources: rejection sampling at small size,
abelian extensions of random modules, and conjugation by ``exp(theta)`` for
a locally nilpotent degree-0 derivation ``theta``.  Conjugation preserves
``Q^2 = 0``; when ``theta`` maps the ideal generated by ``B^`` into itself it
also preserves the pair.
"""
from __future__ import annotations

import copy
import random
from fractions import Fraction

from .graded import GradedSpace, monomials
from .multilinear import Derivation, SymMap, mono_degree, padd
from .operators import apply_connection, apply_linear, eadd
from .shlie import AModule, LInftyAlgebra, SHLiePair, abelian_extension

ZERO = Fraction(0)
_EXP_CAP = 64


def rand_coeff(rng: random.Random, lo=-3, hi=3, zero_prob=0.4) -> Fraction:
    if rng.random() < zero_prob:
        return ZERO
    c = 0
    while c == 0:
        c = rng.randint(lo, hi)
    return Fraction(c)


def random_derivation(rng, degs, degree, max_weight, density=0.5, allowed_terms=None) -> Derivation:
    """Random derivation of ``O`` with generators of degrees ``degs``."""
    imgs = {}
    for g in range(len(degs)):
        p = {}
        for w in range(0, max_weight + 1):
            for m in monomials(degs, w):
                if mono_degree(m, degs) != degs[g] + degree:
                    continue
                if allowed_terms is not None and not allowed_terms(g, m):
                    continue
                if rng.random() < density:
                    c = rand_coeff(rng)
                    if c:
                        p[m] = c
        if p:
            imgs[g] = p
    return Derivation(tuple(degs), degree, imgs)


def random_algebra(rng, degrees, max_weight=3, density=0.4, tries=300, name="A") -> LInftyAlgebra:
    """A random uncurved algebra on the given degrees (rejection sampling).

    Falls back to the abelian structure when nothing is found.
    """
    space = GradedSpace.from_pairs(name, [("%s%d" % (name.lower(), i), d) for i, d in enumerate(degrees)])
    dd = tuple(-d for d in degrees)
    for _ in range(tries):
        Qd = random_derivation(rng, dd, 1, max_weight, density, allowed_terms=lambda g, m: len(m) >= 1)
        if Qd.is_zero():
            continue
        alg = LInftyAlgebra(space, Qd, name)
        if alg.square().is_zero():
            return alg
    return LInftyAlgebra.zero(space, name)


def random_module(rng, base: LInftyAlgebra, E: GradedSpace, max_weight=2, density=0.3, tries=200) -> AModule:
    """A random flat module: rejection sampling with a fallback to the zero module."""
    dd = base.dd
    for _ in range(tries):
        D = {}
        for e in range(E.dim):
            img = {}
            for w in range(0, max_weight + 1):
                for m in monomials(dd, w):
                    for e2 in range(E.dim):
                        if mono_degree(m, dd) + E.degree(e2) == E.degree(e) + 1 and rng.random() < density:
                            img[(m, e2)] = rand_coeff(rng, zero_prob=0.0)
            D[e] = img
        mod = AModule(base, E, D)
        if not any(mod.curvature().values()):
            return mod
    return AModule(base, E, {})


# --- conjugation ---------------------------------------------------------------

def exp_apply(theta: Derivation, poly: dict, sign: int = 1) -> dict:
    """``exp(sign * theta)(poly)`` for a locally nilpotent ``theta``."""
    out = dict(poly)
    term = dict(poly)
    for n in range(1, _EXP_CAP):
        term = {m: c * sign / n for m, c in theta(term).items()}
        if not term:
            return out
        padd(out, term)
    raise ValueError("derivation is not nilpotent on this element")


def conjugate(alg: LInftyAlgebra, theta: Derivation, name=None) -> LInftyAlgebra:
    """``exp(theta) Q exp(-theta)``; ``theta`` must be locally nilpotent of degree 0."""
    imgs = {}
    for g in range(alg.space.dim):
        p = exp_apply(theta, alg.Q(exp_apply(theta, {(g,): Fraction(1)}, -1)))
        if p:
            imgs[g] = p
    return LInftyAlgebra(alg.space, Derivation(alg.dd, 1, imgs), name or alg.name)


def triangular_derivation(rng, dd, order, max_weight=2, density=0.5, allowed=None) -> Derivation:
    """Degree-0 derivation sending each generator into polynomials of strictly
    earlier generators (in ``order``); such a derivation is locally nilpotent.
    """
    rank = {g: i for i, g in enumerate(order)}

    def ok(g, m):
        if any(rank[h] >= rank[g] for h in m):
            return False
        return allowed is None or allowed(g, m)
    return random_derivation(rng, dd, 0, max_weight, density, ok)


def twist_pair(rng, pair: SHLiePair, max_weight=2, density=0.5, k_max=None, tries=50) -> SHLiePair:
    """Conjugate a pair by ``exp(theta)`` with ``theta`` preserving the ideal of ``B^``.

    B-generators come first in the nilpotency order so that A-generators can
    pick up B-terms: this moves the complement of ``A``.
    """
    nA = pair.nA
    dd = pair.dd
    order = list(range(nA, len(dd))) + list(range(nA))

    def ideal(g, m):
        return g < nA or any(h >= nA for h in m)
    for _ in range(tries):
        theta = triangular_derivation(rng, dd, order, max_weight, density, ideal)
        alg = conjugate(pair.L, theta)
        if k_max is None or alg.k_max <= k_max:
            return SHLiePair(alg, list(range(nA)))
    return pair


def random_abelian_extension(rng, a_degrees=(-1, -1), e_degrees=(-1,), max_weight=3):
    """``(pair, module)`` with ``pair = A (+) E`` the abelian extension of a random module."""
    A = random_algebra(rng, a_degrees, max_weight)
    E = GradedSpace.from_pairs("E", [("e%d" % i, d) for i, d in enumerate(e_degrees)])
    mod = random_module(rng, A, E)
    return abelian_extension(mod), mod


def random_twisted_extension(rng, dim_max=6, k_max=3, twist=True):
    """Random abelian extension of total dimension <= ``dim_max``, optionally twisted."""
    while True:
        nA = rng.randint(1, 3)
        nE = rng.randint(1, min(3, dim_max - nA))
        a_deg = tuple(rng.choice((-1, -1, -1, -2, 0)) for _ in range(nA))
        e_deg = tuple(rng.choice((-1, -1, 0, -2)) for _ in range(nE))
        pair, _ = random_abelian_extension(rng, a_deg, e_deg)
        if pair.L.k_max <= k_max:
            break
    if twist:
        pair = twist_pair(rng, pair, k_max=k_max)
    return pair


# --- gauge transformations of modules ----------------------------------------------

def exp_operator(N: dict, x: dict, degs, sign: int = 1) -> dict:
    """``exp(sign * N)`` applied to ``x`` in ``O (x) E``; ``N`` O-linear of degree 0, nilpotent."""
    out = dict(x)
    term = dict(x)
    for n in range(1, _EXP_CAP):
        term = {k: c * sign / n for k, c in apply_linear(N, 0, term, degs).items()}
        if not term:
            return out
        eadd(out, term)
    raise ValueError("gauge operator is not nilpotent")


def gauge_module(mod: AModule, N: dict, name=None) -> AModule:
    """The module with differential ``exp(N) o d o exp(-N)``; isomorphic to ``mod``."""
    dd = mod.dd
    D = {}
    for e in range(mod.space.dim):
        x = exp_operator(N, {((), e): Fraction(1)}, dd, -1)
        y = apply_connection(mod.base.Q, mod.D, x, dd)
        D[e] = exp_operator(N, y, dd)
    return AModule(mod.base, mod.space, D, name or mod.name)


def random_gauge(rng, mod: AModule, max_weight=2, density=0.4) -> dict:
    """Degree-0 ``N`` in ``O(A) (x) End(E)`` sending ``e`` to strictly earlier basis vectors."""
    dd = mod.dd
    E = mod.space
    N = {}
    for e in range(E.dim):
        img = {}
        for e2 in range(e):
            for w in range(0, max_weight + 1):
                for m in monomials(dd, w):
                    if mono_degree(m, dd) + E.degree(e2) == E.degree(e) and rng.random() < density:
                        c = rand_coeff(rng)
                        if c:
                            img[(m, e2)] = c
        if img:
            N[e] = img
    return N


# --- deformations ------------------------------------------------------------------------

def random_gauge_map(rng, pair: SHLiePair, max_weight=2, density=0.5):
    """Random ``lambda``: ``A^ -> O(A) (x) S^{>=1}(B^)`` of degree 0, zero on ``B^``."""
    from .deformations import GaugeMap
    nA = pair.nA
    D = random_derivation(rng, pair.dd, 0, max_weight, density,
                          allowed_terms=lambda g, m: g < nA and any(h >= nA for h in m))
    return GaugeMap(D)


def random_deformation(rng, pair: SHLiePair, max_weight=3, density=0.3, tries=100):
    """A random compatible ``Q_+`` by rejection; falls back to an inner one."""
    from .deformations import Deformation, check_compatible
    nA = pair.nA

    def shape(g, m):
        nb = sum(1 for h in m if h >= nA)
        return nb >= (1 if g < nA else 2)
    for _ in range(tries):
        D = random_derivation(rng, pair.dd, 1, max_weight, density, allowed_terms=shape)
        if D.is_zero():
            continue
        d = Deformation(D)
        if check_compatible(pair, d):
            return d
    from .deformations import inner_deformation
    return inner_deformation(pair, random_gauge_map(rng, pair))


# --- morphisms ---------------------------------------------------------------------------

def _gen_images(theta: Derivation, n: int, sign: int) -> dict:
    return {w: exp_apply(theta, {(w,): Fraction(1)}, sign) for w in range(n)}


def random_conjugation_morphism(rng, degrees=(-1, -1, 0), max_weight=2, translate=False, density=0.8):
    """``L -> L'`` with ``L' = exp(theta) L exp(-theta)`` and ``phi = exp(-theta)``.

    With ``translate`` a constant shift of a degree-0 coordinate is added, which
    produces an ``f_0`` term and a curved target.
    """
    from .shlie import algebra_map_to_morphism
    src = random_algebra(rng, degrees, max_weight)
    dd = src.dd
    order = list(range(len(dd)))
    rng.shuffle(order)
    theta = triangular_derivation(rng, dd, order, max_weight, density,
                                  allowed=lambda g, m: len(m) != 0)
    if translate:
        zeros = [g for g, d in enumerate(dd) if d == 0]
        if zeros:
            g = rng.choice(zeros)
            imgs = {h: dict(p) for h, p in theta.images.items() if h != g}
            imgs[g] = {(): Fraction(rng.choice((-2, -1, 1, 2)))}
            theta = Derivation(dd, 0, imgs)
    tgt = conjugate(src, theta, "L'")
    return algebra_map_to_morphism(src, tgt, _gen_images(theta, len(dd), -1))


def inclusion_morphism(pair: SHLiePair):
    """``A -> L`` dual to ``j^``."""
    from .shlie import algebra_map_to_morphism
    nA = pair.nA
    phi = {w: ({(w,): Fraction(1)} if w < nA else {}) for w in range(pair.L.space.dim)}
    return algebra_map_to_morphism(pair.A, pair.L, phi)


def projection_morphism(pair: SHLiePair):
    """``L -> A`` for an abelian extension ``L = A (+) E``."""
    from .shlie import algebra_map_to_morphism
    phi = {w: {(w,): Fraction(1)} for w in range(pair.nA)}
    return algebra_map_to_morphism(pair.L, pair.A, phi)


def random_morphism(rng):
    """One of: conjugation isomorphism (with or without ``f_0``), inclusion, projection."""
    kind = rng.choice(("conj", "conj", "translate", "inclusion", "projection"))
    if kind in ("conj", "translate"):
        degs = (0,) + tuple(rng.choice((-1, -1, 0, -2)) for _ in range(rng.randint(1, 2)))
        return kind, random_conjugation_morphism(rng, degs, translate=kind == "translate")
    pair, _ = random_abelian_extension(rng, (-1, -1), (rng.choice((-1, 0)),), max_weight=2)
    if kind == "inclusion":
        pair = twist_pair(rng, pair, k_max=3)
        return kind, inclusion_morphism(pair)
    return kind, projection_morphism(pair)


def mutate_morphism(rng, mor):
    """Copy of ``mor`` with one coefficient of ``f_1`` changed."""
    from .shlie import MorphismData
    maps = {k: copy.deepcopy(f) for k, f in mor.maps.items()}
    f1 = maps.setdefault(1, SymMap(1, mor.source.space, mor.target.space, 0))
    src, tgt = mor.source.space, mor.target.space
    cands = [(u, w) for u in range(src.dim) for w in range(tgt.dim) if src.degree(u) == tgt.degree(w)]
    u, w = rng.choice(cands)
    f1.add_value([u], {w: Fraction(rng.choice((-1, 1, 2)))})
    return MorphismData(mor.source, mor.target, maps, mor.f0)


# --- mutations ------------------------------------------------------------------------------

def _degree_correct_terms(dd, target_deg, max_weight):
    return [m for w in range(0, max_weight + 1) for m in monomials(dd, w) if mono_degree(m, dd) == target_deg]


def mutate_algebra(rng, alg: LInftyAlgebra, max_weight=3) -> LInftyAlgebra:
    """Copy of ``alg`` with one extra term of nonzero weight in ``Q`` (degree-correct, maybe still valid)."""
    dd = alg.dd
    while True:
        g = rng.randrange(len(dd))
        cands = [m for m in _degree_correct_terms(dd, dd[g] + 1, max_weight) if m]
        if cands:
            break
    imgs = {h: dict(p) for h, p in alg.Q.images.items()}
    padd(imgs.setdefault(g, {}), {rng.choice(cands): Fraction(rng.choice((-2, -1, 1, 3)))})
    return LInftyAlgebra(alg.space, Derivation(dd, 1, imgs), alg.name)


def mutate_module(rng, mod: AModule, max_weight=2) -> AModule:
    """Copy of ``mod`` with one extra degree-correct term in ``D``."""
    dd = mod.dd
    E = mod.space
    while True:
        e = rng.randrange(E.dim)
        e2 = rng.randrange(E.dim)
        cands = _degree_correct_terms(dd, E.degree(e) + 1 - E.degree(e2), max_weight)
        if cands:
            break
    D = {i: dict(img) for i, img in mod.D.items()}
    key = (rng.choice(cands), e2)
    c = D[e].get(key, 0) + Fraction(rng.choice((-2, -1, 1, 3)))
    if c:
        D[e][key] = c
    else:
        D[e].pop(key, None)
    return AModule(mod.base, E, D, mod.name)


def random_connection(rng, pair: SHLiePair, module: AModule, max_weight=3, density=0.4):
    """``D^{A,E}`` plus random degree-correct terms with at least one ``B^`` factor."""
    from .atiyah import Connection
    nA, dd, E = pair.nA, pair.dd, module.space
    D = {e: dict(img) for e, img in module.D.items()}
    for e in range(E.dim):
        for w in range(1, max_weight + 1):
            for m in monomials(dd, w):
                if not any(h >= nA for h in m):
                    continue
                for e2 in range(E.dim):
                    if mono_degree(m, dd) + E.degree(e2) == E.degree(e) + 1 and rng.random() < density:
                        c = rand_coeff(rng)
                        if c:
                            D[e][(m, e2)] = c
    return Connection(pair, module, D)


def random_extension_with_cocycle(rng, modules=("B", "E"), tries=1000):
    """A twisted abelian extension and a module (``B`` or a random flat ``E``) whose
    trivial-connection cocycle is nonzero; returns ``(pair, module, tries_used)``."""
    from .atiyah import atiyah_operator_oracle
    from .shlie import quotient_module
    for t in range(1, tries + 1):
        nA, nE = rng.randint(1, 3), rng.randint(1, 3)
        pair, _ = random_abelian_extension(rng, tuple(rng.choice((-1, -1, 0, -2)) for _ in range(nA)),
                                           tuple(rng.choice((-1, 0, -2)) for _ in range(nE)))
        pair = twist_pair(rng, pair, density=0.8, k_max=3)
        cands = []
        if "B" in modules:
            cands.append(quotient_module(pair))
        if "E" in modules:
            cands.append(random_module(rng, pair.A, GradedSpace.from_pairs("E", [("e0", 0), ("e1", -1)])))
        for M in cands:
            if not atiyah_operator_oracle(pair, M).is_zero():
                return pair, M, t
    raise RuntimeError("no extension with a nonzero cocycle in %d tries" % tries)
