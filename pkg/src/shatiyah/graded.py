"""Finite graded vector spaces over Q and Koszul sign bookkeeping.

Everything here is immutable.  Coefficients are :class:`fractions.Fraction`.
A permutation is a tuple ``perm`` of 0-based indices read as
``output[i] = input[perm[i]]``, i.e. the reordered list is
``v[perm[0]], v[perm[1]], ...``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

Scalar = Fraction


def Q(x) -> Fraction:
    """Coerce ints, fractions or ``"p/q"`` strings to an exact rational.

    Dual numbers are returned unchanged so that generic code runs over ``Q[h]``.
    """
    if isinstance(x, Fraction):
        return x
    if hasattr(x, "soul"):
        return x  # dual numbers pass through unchanged
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not supported")
    return Fraction(x)


# --- permutations and signs -------------------------------------------------

def koszul_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign ``e`` with ``v_1...v_n = e * v_perm[0]...v_perm[n-1]``.

    Only pairs of odd elements whose relative order is inverted contribute.
    """
    n = len(perm)
    if len(degrees) != n:
        raise ValueError("permutation of size %d but %d degrees" % (n, len(degrees)))
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation: %r" % (perm,))
    inv = 0
    for i in range(n):
        di = degrees[perm[i]] & 1
        if not di:
            continue
        pi = perm[i]
        for j in range(i + 1, n):
            if perm[j] < pi and degrees[perm[j]] & 1:
                inv += 1
    return -1 if inv & 1 else 1


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Reorder by ``q`` then by ``p``: ``v -> v[q] -> (v[q])[p]``."""
    return tuple(q[i] for i in p)


def unshuffles(block_sizes: Sequence[int]) -> list[tuple[int, ...]]:
    """All permutations increasing inside each consecutive block.

    ``unshuffles([l, k])`` is the set sh(l, k): the first ``l`` chosen
    inputs (in increasing order) go to the first block, the rest follow.
    Output is sorted lexicographically.
    """
    if any(b < 0 for b in block_sizes):
        raise ValueError("negative block size")
    n = sum(block_sizes)
    out: list[tuple[int, ...]] = []

    def rec(remaining: tuple[int, ...], blocks: Sequence[int], prefix: tuple[int, ...]):
        if not blocks:
            out.append(prefix)
            return
        first = blocks[0]
        for chosen in combinations(remaining, first):
            rest = tuple(x for x in remaining if x not in chosen)
            rec(rest, blocks[1:], prefix + chosen)

    rec(tuple(range(n)), list(block_sizes), ())
    out.sort()
    return out


def brute_force_unshuffles(block_sizes: Sequence[int]) -> list[tuple[int, ...]]:
    n = sum(block_sizes)
    res = []
    for p in permutations(range(n)):
        pos, ok = 0, True
        for b in block_sizes:
            blk = p[pos:pos + b]
            if list(blk) != sorted(blk):
                ok = False
                break
            pos += b
        if ok:
            res.append(p)
    return res


# --- spaces -----------------------------------------------------------------

@dataclass(frozen=True)
class BasisVector:
    name: str
    degree: int


@dataclass(frozen=True)
class GradedSpace:
    name: str
    basis: tuple[BasisVector, ...] = ()
    _index: Mapping[str, int] = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        names = [b.name for b in self.basis]
        if len(set(names)) != len(names):
            raise ValueError("duplicate basis names in space %s" % self.name)
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def from_pairs(cls, name: str, pairs: Iterable[tuple[str, int]]) -> "GradedSpace":
        return cls(name, tuple(BasisVector(n, int(d)) for n, d in pairs))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(b.degree for b in self.basis)

    def names(self) -> tuple[str, ...]:
        return tuple(b.name for b in self.basis)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("unknown basis element %r in space %s" % (name, self.name)) from None

    def degree(self, i: int) -> int:
        return self.basis[i].degree

    def __len__(self):
        return len(self.basis)


def shift(space: GradedSpace, k: int) -> GradedSpace:
    """``V[k]``: a vector of degree d gets degree d - k."""
    suffix = "" if k == 0 else "[%d]" % k
    return GradedSpace(space.name + suffix,
                       tuple(BasisVector(b.name + suffix, b.degree - k) for b in space.basis))


def dual(space: GradedSpace) -> GradedSpace:
    def flip(n: str) -> str:
        return n[:-1] if n.endswith("^") else n + "^"
    return GradedSpace(flip(space.name), tuple(BasisVector(flip(b.name), -b.degree) for b in space.basis))


# --- vectors ------------------------------------------------------------------

@dataclass(frozen=True)
class Vector:
    """Sparse vector; ``coeffs`` maps basis index to a nonzero rational."""
    space: GradedSpace
    coeffs: Mapping[int, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {i: Q(c) for i, c in self.coeffs.items() if c != 0})

    @classmethod
    def basis(cls, space: GradedSpace, i: int | str) -> "Vector":
        if isinstance(i, str):
            i = space.index(i)
        return cls(space, {i: Fraction(1)})

    @classmethod
    def zero(cls, space: GradedSpace) -> "Vector":
        return cls(space, {})

    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> set[int]:
        return {self.space.degree(i) for i in self.coeffs}

    def degree(self) -> int | None:
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("vector is not homogeneous")
        return ds.pop() if ds else None

    def __add__(self, other: "Vector") -> "Vector":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) + c
        return Vector(self.space, out)

    def __neg__(self):
        return Vector(self.space, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        c = Q(c)
        return Vector(self.space, {i: c * v for i, v in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, Vector) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join("%s*%s" % (c, self.space.basis[i].name) for i, c in sorted(self.coeffs.items()))


# --- monomials ------------------------------------------------------------------

def sort_sign(indices: Sequence[int], degrees: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort generator indices; return (sign, sorted) or (0, ()) if an odd one repeats.

    ``degrees`` is indexed by generator index.  The sign relates the input
    product to the sorted product.
    """
    idx = list(indices)
    n = len(idx)
    # insertion sort counting odd-odd transpositions
    sign = 1
    for i in range(1, n):
        x = idx[i]
        j = i - 1
        xodd = degrees[x] & 1
        while j >= 0 and idx[j] > x:
            if xodd and degrees[idx[j]] & 1:
                sign = -sign
            idx[j + 1] = idx[j]
            j -= 1
        idx[j + 1] = x
    for i in range(1, n):
        if idx[i] == idx[i - 1] and degrees[idx[i]] & 1:
            return 0, ()
    return sign, tuple(idx)


@dataclass(frozen=True)
class Monomial:
    space: GradedSpace
    generators: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.space.degree(i) for i in self.generators)

    @property
    def weight(self) -> int:
        return len(self.generators)


def normalize_monomial(space: GradedSpace, seq: Sequence[int | str]):
    """Canonical form of a product of generators of ``space``.

    Returns ``(Monomial, sign)`` or ``None`` when an odd generator repeats.
    """
    idx = [space.index(s) if isinstance(s, str) else int(s) for s in seq]
    for i in idx:
        if not 0 <= i < space.dim:
            raise IndexError("generator index %d out of range" % i)
    sign, srt = sort_sign(idx, space.degrees)
    if sign == 0:
        return None
    return Monomial(space, srt), sign


def monomials(degrees: Sequence[int], weight: int, allowed: Sequence[int] | None = None):
    """Canonical monomials of given weight over generators ``allowed``."""
    gens = list(range(len(degrees))) if allowed is None else sorted(allowed)
    out = []

    def rec(start, left, prefix):
        if left == 0:
            out.append(tuple(prefix))
            return
        for p in range(start, len(gens)):
            g = gens[p]
            if degrees[g] & 1 and prefix and prefix[-1] == g:
                continue
            nxt = p + 1 if degrees[g] & 1 else p
            prefix.append(g)
            rec(nxt, left - 1, prefix)
            prefix.pop()

    rec(0, weight, [])
    return out
