"""Polynomial algebras on dual generators, derivations, and symmetric brackets.

A polynomial is a plain ``dict`` from a canonical monomial (sorted tuple of
generator indices) to a nonzero Fraction.  Generator ``i`` of the ring built
over a space ``V`` is the dual basis vector ``v_i^`` of degree ``-|v_i|``.

Pairing conventions (used everywhere a bracket is read off a derivation):

* ``iota_v`` is the degree ``|v|`` derivation with ``iota_v(v^) = (-1)^|v|``;
* ``<u_1...u_k, M> = iota_{u_1} ... iota_{u_k} M``;
* ``<M, U> = (-1)^{|U||M|} <U, M>``;
* ``<w^, lambda_k(U)> = (-1)^{|w^| + k} <Q(w^), U>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Mapping, Sequence

from .graded import GradedSpace, Q, Vector, sort_sign

ZERO = Fraction(0)
ONE = Fraction(1)

Poly = dict  # monomial tuple -> Fraction


# --- polynomial arithmetic ----------------------------------------------------

def mono_degree(m: Sequence[int], degrees: Sequence[int]) -> int:
    return sum(degrees[i] for i in m)


def mul_mono(m1: tuple, m2: tuple, degrees: Sequence[int]) -> tuple[int, tuple]:
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    return _mul_mono(m1, m2, tuple(degrees))


@lru_cache(maxsize=1 << 18)
def _mul_mono(m1, m2, degrees):
    # merge two sorted tuples; sign counts odd(m1 tail) x odd(m2 head) crossings
    sign = 1
    i = j = 0
    out = []
    odd_left = sum(1 for g in m1 if degrees[g] & 1)
    while i < len(m1) and j < len(m2):
        a, b = m1[i], m2[j]
        if a <= b:
            if a == b and degrees[a] & 1:
                return 0, ()
            out.append(a)
            if degrees[a] & 1:
                odd_left -= 1
            i += 1
        else:
            if degrees[b] & 1 and odd_left & 1:
                sign = -sign
            out.append(b)
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return sign, tuple(out)


def padd(target: Poly, p: Poly, c=ONE) -> Poly:
    """``target += c * p`` in place, dropping zeros."""
    if c == 0:
        return target
    for m, v in p.items():
        nv = target.get(m, ZERO) + c * v
        if nv:
            target[m] = nv
        else:
            target.pop(m, None)
    return target


def pscale(p: Poly, c) -> Poly:
    c = Q(c)
    if c == 0:
        return {}
    return {m: c * v for m, v in p.items()}


def pmul(p: Poly, q: Poly, degrees: Sequence[int]) -> Poly:
    out: Poly = {}
    degrees = tuple(degrees)
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            s, m = mul_mono(m1, m2, degrees)
            if s:
                nv = out.get(m, ZERO) + s * c1 * c2
                if nv:
                    out[m] = nv
                else:
                    out.pop(m, None)
    return out


def pdegree(p: Poly, degrees) -> int | None:
    ds = {mono_degree(m, degrees) for m in p}
    if len(ds) > 1:
        raise ValueError("polynomial is not homogeneous: degrees %s" % sorted(ds))
    return ds.pop() if ds else None


def restrict(p: Poly, allowed: frozenset) -> Poly:
    """Set every generator outside ``allowed`` to zero (the map j^)."""
    return {m: c for m, c in p.items() if all(g in allowed for g in m)}


# --- derivations -----------------------------------------------------------------

@dataclass
class Derivation:
    """Derivation of a free graded-commutative algebra given on generators.

    ``images[g]`` is the image polynomial of generator ``g``; missing means 0.
    """
    degrees: tuple[int, ...]
    degree: int
    images: dict = field(default_factory=dict)

    def __post_init__(self):
        self.degrees = tuple(self.degrees)
        self.images = {g: dict(p) for g, p in self.images.items() if p}

    def image(self, g: int) -> Poly:
        return self.images.get(g, {})

    def apply_mono(self, m: tuple) -> Poly:
        out: Poly = {}
        degs = self.degrees
        pre_deg = 0
        for i, g in enumerate(m):
            img = self.images.get(g)
            if img:
                sign = -1 if (self.degree * pre_deg) & 1 else 1
                pre, post = m[:i], m[i + 1:]
                for im, c in img.items():
                    s1, t = mul_mono(pre, im, degs)
                    if not s1:
                        continue
                    s2, t = mul_mono(t, post, degs)
                    if not s2:
                        continue
                    nv = out.get(t, ZERO) + sign * s1 * s2 * c
                    if nv:
                        out[t] = nv
                    else:
                        out.pop(t, None)
            pre_deg += degs[g]
        return out

    def __call__(self, p: Poly) -> Poly:
        out: Poly = {}
        for m, c in p.items():
            padd(out, self.apply_mono(m), c)
        return out

    def __add__(self, other: "Derivation") -> "Derivation":
        if other.degree != self.degree and other.images and self.images:
            raise ValueError("adding derivations of different degrees")
        imgs = {g: dict(p) for g, p in self.images.items()}
        for g, p in other.images.items():
            imgs[g] = padd(imgs.get(g, {}), p)
        deg = self.degree if self.images else other.degree
        return Derivation(self.degrees, deg, imgs)

    def scaled(self, c) -> "Derivation":
        return Derivation(self.degrees, self.degree, {g: pscale(p, c) for g, p in self.images.items()})

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.images.values())

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        a = {g: p for g, p in self.images.items() if p}
        b = {g: p for g, p in other.images.items() if p}
        return a == b

    def restricted_to(self, gens) -> "Derivation":
        gens = set(gens)
        return Derivation(self.degrees, self.degree, {g: p for g, p in self.images.items() if g in gens})

    def max_weight(self) -> int:
        return max((len(m) for p in self.images.values() for m in p), default=0)


def commutator(d1: Derivation, d2: Derivation) -> Derivation:
    """Graded commutator ``D1 D2 - (-1)^{|D1||D2|} D2 D1`` on generators."""
    sign = -1 if (d1.degree * d2.degree) & 1 else 1
    imgs = {}
    for g in range(len(d1.degrees)):
        a = d1(d2.image(g))
        b = d2(d1.image(g))
        imgs[g] = padd(a, b, -sign)
    return Derivation(d1.degrees, d1.degree + d2.degree, imgs)


def contraction(degrees: Sequence[int], v: int) -> Derivation:
    """``iota_v`` on the ring of dual generators; ``degrees`` are dual degrees."""
    vdeg = -degrees[v]
    return Derivation(degrees, vdeg, {v: {(): Fraction(-1 if vdeg & 1 else 1)}})


@lru_cache(maxsize=1 << 16)
def pairing_vec_mono(U: tuple, M: tuple, degrees: tuple) -> Fraction:
    """``<u_1 ... u_k, M>`` for basis tuple ``U`` and dual monomial ``M``."""
    if len(U) != len(M) or sorted(U) != list(M):
        return ZERO
    p: Poly = {M: ONE}
    for u in reversed(U):
        p = contraction(degrees, u)(p)
    return p.get((), ZERO)


def pairing_mono_vec(M: tuple, U: tuple, degrees: tuple) -> Fraction:
    """``<M, u_1 ... u_k>``; ``degrees`` are dual degrees."""
    v = pairing_vec_mono(tuple(U), tuple(M), tuple(degrees))
    if not v:
        return v
    dU = -mono_degree(U, degrees)
    dM = mono_degree(M, degrees)
    return -v if (dU * dM) & 1 else v


# --- symmetric multilinear maps ----------------------------------------------------

@dataclass
class SymMap:
    """Sparse graded-symmetric multilinear map.

    Plain maps ``S^k(source) -> target`` store ``coeffs[inputs] = {j: c}`` with
    ``inputs`` a canonical (sorted) tuple of source indices.  With ``slot``
    set, the map is ``S^{k-1}(source) (x) slot -> target`` and keys are
    ``(inputs, s)`` with ``s`` an index of ``slot``.
    """
    arity: int
    source: GradedSpace
    target: GradedSpace
    map_degree: int
    coeffs: dict = field(default_factory=dict)
    slot: GradedSpace | None = None

    def __post_init__(self):
        self.coeffs = {k: {j: Q(c) for j, c in v.items() if c != 0} for k, v in self.coeffs.items()}
        self.coeffs = {k: v for k, v in self.coeffs.items() if v}

    @property
    def n_sym(self) -> int:
        return self.arity - 1 if self.slot is not None else self.arity

    def is_zero(self) -> bool:
        return not self.coeffs

    def value(self, inputs: Sequence[int], s: int | None = None) -> dict:
        """Value on a basis tuple in any order (Koszul sign applied)."""
        sign, key = sort_sign(inputs, self.source.degrees)
        if sign == 0:
            return {}
        k = key if self.slot is None else (key, s)
        v = self.coeffs.get(k)
        if not v:
            return {}
        return {j: sign * c for j, c in v.items()}

    def add_value(self, inputs: Sequence[int], out: Mapping[int, Fraction], s: int | None = None):
        """Accumulate ``out`` into the stored value for ``inputs`` (any order)."""
        sign, key = sort_sign(inputs, self.source.degrees)
        if sign == 0:
            if any(c != 0 for c in out.values()):
                raise ValueError("nonzero value on a repeated odd input")
            return
        k = key if self.slot is None else (key, s)
        cur = self.coeffs.setdefault(k, {})
        for j, c in out.items():
            nv = cur.get(j, ZERO) + sign * Q(c)
            if nv:
                cur[j] = nv
            else:
                cur.pop(j, None)
        if not cur:
            del self.coeffs[k]

    def __call__(self, *args: Vector) -> Vector:
        return eval_map(self, list(args))

    def equals(self, other: "SymMap") -> bool:
        return self.coeffs == other.coeffs


def eval_map(f: SymMap, args: list[Vector]) -> Vector:
    """Multilinear evaluation with Koszul signs; last argument is the slot if any."""
    if len(args) != f.arity:
        raise ValueError("map of arity %d applied to %d arguments" % (f.arity, len(args)))
    sym_args = args[:f.n_sym]
    for a in sym_args:
        if a.space.degrees != f.source.degrees:
            raise ValueError("argument from the wrong space")
        a.degree()
    if f.slot is not None and args[-1].space.degrees != f.slot.degrees:
        raise ValueError("slot argument from the wrong space")
    out: dict = {}
    supports = [list(a.coeffs.items()) for a in sym_args]
    slot_items = list(args[-1].coeffs.items()) if f.slot is not None else [(None, ONE)]
    for combo in product(*supports):
        idx = [i for i, _ in combo]
        c = ONE
        for _, v in combo:
            c *= v
        for s, cs in slot_items:
            val = f.value(idx, s)
            for j, x in val.items():
                out[j] = out.get(j, ZERO) + c * cs * x
    return Vector(f.target, out)


# --- brackets <-> derivations ------------------------------------------------------------

def brackets_from_derivation(Qd: Derivation, space: GradedSpace, k_max: int) -> list[SymMap]:
    """Read ``lambda_0 .. lambda_kmax`` off a derivation of ``O(space)``."""
    ddeg = Qd.degrees
    lams = [SymMap(k, space, space, Qd.degree) for k in range(k_max + 1)]
    for w, img in Qd.images.items():
        wdeg = ddeg[w]
        for M, c in img.items():
            k = len(M)
            if k > k_max:
                raise ValueError("derivation has a weight-%d term beyond k_max=%d" % (k, k_max))
            pr = pairing_mono_vec(M, M, ddeg)
            sign = -1 if (wdeg + k) & 1 else 1
            lams[k].add_value(M, {w: sign * c * pr})
    return lams


def derivation_from_brackets(lams: Sequence[SymMap], space: GradedSpace, degree: int = 1) -> Derivation:
    """Inverse of :func:`brackets_from_derivation`."""
    ddeg = tuple(-d for d in space.degrees)
    imgs: dict = {}
    for lam in lams:
        k = lam.arity
        if lam.map_degree != degree and not lam.is_zero():
            raise ValueError("bracket of degree %d, expected %d" % (lam.map_degree, degree))
        for U, val in lam.coeffs.items():
            pr = pairing_mono_vec(U, U, ddeg)
            for w, c in val.items():
                sign = -1 if (ddeg[w] + k) & 1 else 1
                p = imgs.setdefault(w, {})
                padd(p, {U: sign * c / pr})
    return Derivation(ddeg, degree, imgs)


def dual_degrees(space: GradedSpace) -> tuple[int, ...]:
    return tuple(-d for d in space.degrees)
