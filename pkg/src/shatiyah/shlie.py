"""L-infinity[1] algebras, SH Lie pairs and their modules.

An algebra is stored as its homological vector field ``Q``: a degree 1
derivation of ``O(L)``.  Brackets, module actions and the various derived
modules are read off or assembled through the pairing conventions of
:mod:`shatiyah.multilinear`.

A module over ``A`` is stored as the operator ``D`` with ``D(e)`` an element
of ``O(A) (x) E``; the connection is ``Q_A + D`` and acts on ``O(A) (x) E`` by
``(Q_A + D)(w (x) e) = Q_A(w) (x) e + (-1)^{|w|} w . D(e)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import factorial
from typing import Mapping, Sequence

from .graded import BasisVector, GradedSpace, Vector, dual, koszul_sign, monomials, sort_sign, unshuffles
from .multilinear import (Derivation, SymMap, brackets_from_derivation, commutator,
                          derivation_from_brackets, mono_degree, padd,
                          pairing_mono_vec, pmul, restrict)
from .operators import apply_connection
from .report import Report

ZERO = Fraction(0)
ONE = Fraction(1)


class StructureError(ValueError):
    """Input data does not have the required shape or degrees."""


def _sgn(e: int) -> int:
    return -1 if e & 1 else 1


# --- algebras -----------------------------------------------------------------------

class LInftyAlgebra:
    """Finite-dimensional curved L-infinity[1] algebra over Q."""

    def __init__(self, space: GradedSpace, Qd: Derivation, name: str = "L"):
        dd = tuple(-d for d in space.degrees)
        if tuple(Qd.degrees) != dd:
            raise StructureError("derivation is not defined on O(%s)" % space.name)
        if Qd.degree != 1 and not Qd.is_zero():
            raise StructureError("homological vector field must have degree 1")
        for g, img in Qd.images.items():
            for m in img:
                if mono_degree(m, dd) != dd[g] + 1:
                    raise StructureError("Q(%s^) has a term of wrong degree" % space.basis[g].name)
        self.space = space
        self.Q = Derivation(dd, 1, Qd.images)
        self.name = name

    @classmethod
    def from_brackets(cls, space: GradedSpace, brackets, name: str = "L") -> "LInftyAlgebra":
        lams = list(brackets.values()) if isinstance(brackets, Mapping) else list(brackets)
        for lam in lams:
            if lam.source.degrees != space.degrees or lam.target.degrees != space.degrees:
                raise StructureError("bracket defined on a different space")
            for U, val in lam.coeffs.items():
                din = sum(space.degree(u) for u in U)
                for w in val:
                    if space.degree(w) != din + 1:
                        raise StructureError("bracket lambda_%d%s has output of degree %d, expected %d"
                                             % (lam.arity, tuple(space.basis[u].name for u in U),
                                                space.degree(w), din + 1))
        return cls(space, derivation_from_brackets(lams, space, 1), name)

    @classmethod
    def zero(cls, space: GradedSpace, name: str = "L") -> "LInftyAlgebra":
        return cls(space, Derivation(tuple(-d for d in space.degrees), 1, {}), name)

    @property
    def dd(self) -> tuple[int, ...]:
        return self.Q.degrees

    @property
    def k_max(self) -> int:
        return self.Q.max_weight()

    @cached_property
    def brackets(self) -> list[SymMap]:
        return brackets_from_derivation(self.Q, self.space, self.k_max)

    def bracket(self, k: int) -> SymMap:
        if k <= self.k_max:
            return self.brackets[k]
        return SymMap(k, self.space, self.space, 1)

    @property
    def lambda0(self) -> Vector:
        return Vector(self.space, self.brackets[0].coeffs.get((), {}))

    @property
    def is_curved(self) -> bool:
        return not self.lambda0.is_zero()

    def __call__(self, k: int, *args: Vector) -> Vector:
        return self.bracket(k)(*args)

    def square(self) -> Derivation:
        """``Q^2 = 1/2 [Q, Q]``."""
        return commutator(self.Q, self.Q).scaled(Fraction(1, 2))


def _apply_sym(f: SymMap, first: Mapping[int, Fraction], rest: Sequence[int], slot=None) -> dict:
    """``f(v, u_1, ..., u_r[, slot])`` with ``v`` a linear combination."""
    out: dict = {}
    for w, c in first.items():
        for t, x in f.value([w, *rest], slot).items():
            nv = out.get(t, ZERO) + c * x
            if nv:
                out[t] = nv
            else:
                out.pop(t, None)
    return out


def _dadd(target: dict, x: Mapping, c=ONE) -> dict:
    for k, v in x.items():
        nv = target.get(k, ZERO) + c * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)
    return target


def jacobiator(alg: LInftyAlgebra, U: Sequence[int]) -> dict:
    """Left side of the generalized Jacobi identity on the basis tuple ``U``."""
    n = len(U)
    degs = [alg.space.degree(u) for u in U]
    out: dict = {}
    for i in range(0, min(n, alg.k_max) + 1):
        inner_map = alg.bracket(i)
        outer_map = alg.bracket(n - i + 1)
        if inner_map.is_zero() or outer_map.is_zero():
            continue
        for sigma in unshuffles([i, n - i]):
            inner = inner_map.value([U[s] for s in sigma[:i]])
            if not inner:
                continue
            eps = koszul_sign(sigma, degs)
            _dadd(out, _apply_sym(outer_map, inner, [U[s] for s in sigma[i:]]), eps)
    return out


def canonical_tuples(degrees: Sequence[int], n: int, allowed=None):
    """Sorted basis tuples of length ``n`` (odd entries not repeated)."""
    return monomials(degrees, n, allowed)


def check_jacobi(alg: LInftyAlgebra, n_max: int | None = None) -> Report:
    rep = Report("jacobi")
    if n_max is None:
        n_max = max(2 * alg.k_max - 1, 0)
    # dual degrees and space degrees have the same parity
    for n in range(0, n_max + 1):
        for U in canonical_tuples(alg.dd, n):
            rep.checked += 1
            r = jacobiator(alg, U)
            if r:
                rep.fail((n, tuple(alg.space.basis[u].name for u in U)), Vector(alg.space, r))
    sq = alg.square()
    rep.notes["Q_squared_zero"] = sq.is_zero()
    if rep.ok != sq.is_zero() and n_max >= 2 * alg.k_max - 1:
        rep.notes["route_disagreement"] = True
        rep.ok = False
    return rep


# --- pairs ----------------------------------------------------------------------------

def _reorder_space(space: GradedSpace, order: Sequence[int]) -> GradedSpace:
    return GradedSpace(space.name, tuple(space.basis[i] for i in order))


def _reindex_derivation(Qd: Derivation, perm_new_of_old: Sequence[int], new_degrees) -> Derivation:
    imgs = {}
    for g, img in Qd.images.items():
        p: dict = {}
        for m, c in img.items():
            sign, mm = _relabel(m, perm_new_of_old, new_degrees)
            if sign:
                padd(p, {mm: sign * c})
        imgs[perm_new_of_old[g]] = p
    return Derivation(tuple(new_degrees), Qd.degree, imgs)


def _relabel(m, mapping, degrees):
    return sort_sign([mapping[g] for g in m], degrees)


class SHLiePair:
    """An algebra ``L`` with a basis split ``L = A (+) B``.

    Internally the basis is reordered so that the A-part comes first; the
    names are preserved.  ``self.L`` is the reordered algebra.
    """

    def __init__(self, alg: LInftyAlgebra, a_part: Sequence[int | str]):
        sp = alg.space
        a_idx = sorted(sp.index(a) if isinstance(a, str) else int(a) for a in a_part)
        if len(set(a_idx)) != len(a_idx):
            raise StructureError("repeated element in the A-part")
        b_idx = [i for i in range(sp.dim) if i not in set(a_idx)]
        order = a_idx + b_idx
        new_of_old = [0] * sp.dim
        for new, old in enumerate(order):
            new_of_old[old] = new
        space = _reorder_space(sp, order)
        dd = tuple(-d for d in space.degrees)
        self.original = alg
        self.L = LInftyAlgebra(space, _reindex_derivation(alg.Q, new_of_old, dd), alg.name)
        self.nA = len(a_idx)
        self.nB = len(b_idx)
        self.A_space = GradedSpace("A", space.basis[:self.nA])
        self.B_space = GradedSpace("B", space.basis[self.nA:])

    @property
    def dd(self):
        return self.L.dd

    @property
    def a_degs(self):
        return self.dd[:self.nA]

    def is_b(self, g: int) -> bool:
        return g >= self.nA

    def n_b(self, m) -> int:
        return sum(1 for g in m if g >= self.nA)

    @cached_property
    def A(self) -> LInftyAlgebra:
        imgs = {g: restrict(self.L.Q.image(g), frozenset(range(self.nA))) for g in range(self.nA)}
        return LInftyAlgebra(self.A_space, Derivation(self.a_degs, 1, imgs), "A")

    def b_vector(self, j: int) -> Vector:
        return Vector.basis(self.L.space, self.nA + j)

    # I^L, J and j^ on polynomial data ------------------------------------------

    def I(self, poly: Mapping, ring_degs=None) -> dict:
        """``I^L``: split off one factor to the right, ``O(L) -> O(L) (x) L^``.

        Result keys are ``(monomial, generator)``; the removed generator is
        moved to the right end with its Koszul sign.  Constants map to 0.
        """
        degs = self.dd if ring_degs is None else ring_degs
        out: dict = {}
        for m, c in poly.items():
            for i, g in enumerate(m):
                if i + 1 < len(m) and m[i + 1] == g:
                    continue  # handle a run of equal generators once
                run_start = i
                while run_start > 0 and m[run_start - 1] == g:
                    run_start -= 1
                mult = i - run_start + 1
                after = sum(degs[h] for h in m[i + 1:])
                rest = m[:i] + m[i + 1:]
                s = _sgn(degs[g] * after)
                k = (rest, g)
                nv = out.get(k, ZERO) + s * mult * c
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out

    def J(self, poly: Mapping) -> dict:
        """``(j^ (x) 1) o I^L``: keys ``(A-monomial, generator of L^)``."""
        return {(m, g): c for (m, g), c in self.I(poly).items() if self.n_b(m) == 0}

    def J_B(self, poly: Mapping) -> dict:
        """B-part of :meth:`J`; keys ``(A-monomial, j)`` with ``j`` indexing B^."""
        out = {}
        for (m, g), c in self.J(poly).items():
            if g >= self.nA:
                out[(m, g - self.nA)] = c
        return out

    def J_elem(self, x: Mapping) -> dict:
        """``(J (x) 1)`` on an element of ``O(L) (x) T``; tags become ``(j, t)``."""
        out: dict = {}
        for (m, t), c in x.items():
            for (mm, g), cc in self.J({m: c}).items():
                if g >= self.nA:
                    _dadd(out, {(mm, (g - self.nA, t)): cc})
                elif cc:
                    _dadd(out, {(mm, ("A", g, t)): cc})
        return out


def check_pair(pair: SHLiePair) -> Report:
    rep = Report("pair")
    L, nA = pair.L, pair.nA
    for lam in L.brackets:
        for U, val in lam.coeffs.items():
            if all(u < nA for u in U):
                rep.checked += 1
                bad = {w: c for w, c in val.items() if w >= nA}
                if bad:
                    rep.fail(("lambda_%d" % lam.arity, tuple(L.space.basis[u].name for u in U)),
                             {L.space.basis[w].name: c for w, c in bad.items()})
    return rep


@dataclass
class QDecomposition:
    """``Q_L = Q_A + delta + R + D_perp + sum_i T_i`` as derivations of ``O(L)``."""
    Q_A: Derivation
    delta: Derivation
    R: Derivation
    D_perp: Derivation
    T: dict = field(default_factory=dict)

    def total(self) -> Derivation:
        d = self.Q_A + self.delta + self.R + self.D_perp
        for t in self.T.values():
            d = d + t
        return d


def decompose_Q(pair: SHLiePair) -> QDecomposition:
    L, nA = pair.L, pair.nA
    dd = L.dd
    parts = {"QA": {}, "delta": {}, "R": {}, "Dp": {}}
    T: dict = {}
    for g, img in L.Q.images.items():
        for m, c in img.items():
            nb = pair.n_b(m)
            if g < nA:
                key = "QA" if nb == 0 else "delta" if nb == 1 else "R"
                parts[key].setdefault(g, {})[m] = c
            else:
                if nb == 0:
                    raise StructureError("A is not a subalgebra: Q(%s^) has a pure A term"
                                         % L.space.basis[g].name)
                if nb == 1:
                    parts["Dp"].setdefault(g, {})[m] = c
                else:
                    T.setdefault(nb, {}).setdefault(g, {})[m] = c
    mk = lambda imgs: Derivation(dd, 1, imgs)
    return QDecomposition(mk(parts["QA"]), mk(parts["delta"]), mk(parts["R"]), mk(parts["Dp"]),
                          {i: mk(v) for i, v in sorted(T.items())})


# --- modules ----------------------------------------------------------------------------

def operator_to_actions(base: GradedSpace, E: GradedSpace, X: Mapping, xdeg: int = 1) -> dict[int, SymMap]:
    """Multilinear components of an O-linear operator on ``O(base) (x) E``.

    ``X_{k+1}(u_1..u_k, e) = (-1)^k sum (-1)^{(|w|+|e'|)(1+d)} c <w, u_1..u_k> e'``
    summed over the terms ``c w (x) e'`` of ``X(e)``.  These are the brackets
    of the dual derivation on ``O(base (+) E)`` with one ``E`` input.
    """
    dd = tuple(-d for d in base.degrees)
    maps: dict[int, SymMap] = {}
    for e, img in X.items():
        for (m, e2), c in img.items():
            k = len(m)
            if k + 1 not in maps:
                maps[k + 1] = SymMap(k + 1, base, E, xdeg, slot=E)
            w = mono_degree(m, dd)
            sign = _sgn(k + (w + E.degree(e2)) * (1 + xdeg))
            pr = pairing_mono_vec(m, m, dd)
            maps[k + 1].add_value(m, {e2: sign * c * pr}, s=e)
    return dict(sorted(maps.items()))


def actions_to_operator(base: GradedSpace, E: GradedSpace, actions, xdeg: int = 1) -> dict:
    """Inverse of :func:`operator_to_actions`."""
    dd = tuple(-d for d in base.degrees)
    acts = list(actions.values()) if isinstance(actions, Mapping) else list(actions)
    X: dict = {e: {} for e in range(E.dim)}
    for f in acts:
        if f.slot is None:
            raise StructureError("module action needs an E slot")
        for (U, e), val in f.coeffs.items():
            k = len(U)
            w = mono_degree(U, dd)
            pr = pairing_mono_vec(U, U, dd)
            for e2, c in val.items():
                sign = _sgn(k + (w + E.degree(e2)) * (1 + xdeg))
                _dadd(X[e], {(tuple(U), e2): sign * c / pr})
    return X


class AModule:
    """A module over the algebra ``base`` with underlying space ``space``."""

    def __init__(self, base: LInftyAlgebra, space: GradedSpace, D: Mapping, name: str = "E"):
        self.base = base
        self.space = space
        self.name = name
        dd = base.dd
        self.D = {e: dict(D.get(e, {})) for e in range(space.dim)}
        for e, img in self.D.items():
            for (m, e2), c in img.items():
                if mono_degree(m, dd) + space.degree(e2) != space.degree(e) + 1:
                    raise StructureError("module operator term of wrong degree on %s" % space.basis[e].name)

    @classmethod
    def from_actions(cls, base: LInftyAlgebra, space: GradedSpace, actions, name: str = "E") -> "AModule":
        acts = list(actions.values()) if isinstance(actions, Mapping) else list(actions)
        for f in acts:
            for (U, e), val in f.coeffs.items():
                din = sum(base.space.degree(u) for u in U) + space.degree(e)
                for e2 in val:
                    if space.degree(e2) != din + 1:
                        raise StructureError("action m_%d has output of wrong degree" % f.arity)
        return cls(base, space, actions_to_operator(base.space, space, acts, 1), name)

    @property
    def dd(self):
        return self.base.dd

    @cached_property
    def actions(self) -> dict[int, SymMap]:
        return operator_to_actions(self.base.space, self.space, self.D, 1)

    def action(self, k: int) -> SymMap:
        return self.actions.get(k) or SymMap(k, self.base.space, self.space, 1, slot=self.space)

    @property
    def m_max(self) -> int:
        return max(self.actions, default=0)

    def nabla(self, x: Mapping) -> dict:
        return apply_connection(self.base.Q, self.D, x, self.dd)

    def basis_elem(self, e: int) -> dict:
        return {((), e): ONE}

    def curvature(self) -> dict:
        """``(Q + D)^2`` on generators (zero iff the module is flat)."""
        return {e: self.nabla(self.nabla(self.basis_elem(e))) for e in range(self.space.dim)}


def module_residual(mod: AModule, U: Sequence[int], e: int) -> dict:
    """Left minus right side of the module relation on ``(u_1..u_n, e)``."""
    alg = mod.base
    n = len(U)
    degs = [alg.space.degree(u) for u in U]
    out: dict = {}
    # inner bracket on A-inputs
    for l in range(0, min(n, alg.k_max) + 1):
        lam = alg.bracket(l)
        outer = mod.action(n - l + 2)
        if lam.is_zero() or outer.is_zero():
            continue
        for sigma in unshuffles([l, n - l]):
            inner = lam.value([U[s] for s in sigma[:l]])
            if not inner:
                continue
            eps = koszul_sign(sigma, degs)
            _dadd(out, _apply_sym(outer, inner, [U[s] for s in sigma[l:]], e), eps)
    # nested actions
    for k in range(0, n + 1):
        outer = mod.action(k + 1)
        inner_map = mod.action(n - k + 1)
        if outer.is_zero() or inner_map.is_zero():
            continue
        for tau in unshuffles([k, n - k]):
            first = [U[s] for s in tau[:k]]
            inner = inner_map.value([U[s] for s in tau[k:]], e)
            if not inner:
                continue
            eps = koszul_sign(tau, degs) * _sgn(sum(degs[s] for s in tau[:k]))
            for e2, c in inner.items():
                _dadd(out, outer.value(first, e2), eps * c)
    return out


def check_module(mod: AModule, n_max: int | None = None) -> Report:
    rep = Report("module")
    if n_max is None:
        n_max = max(mod.base.k_max + mod.m_max - 1, 0)
    for n in range(0, n_max + 1):
        for U in canonical_tuples(mod.dd, n):
            for e in range(mod.space.dim):
                rep.checked += 1
                r = module_residual(mod, U, e)
                if r:
                    rep.fail((tuple(mod.base.space.basis[u].name for u in U), mod.space.basis[e].name),
                             Vector(mod.space, r))
    flat = all(not v for v in mod.curvature().values())
    rep.notes["flat"] = flat
    if flat != rep.ok:
        rep.notes["route_disagreement"] = True
        rep.ok = False
    return rep


def adjoint_module(alg: LInftyAlgebra) -> AModule:
    acts = []
    for lam in alg.brackets[1:]:
        f = SymMap(lam.arity, alg.space, alg.space, 1, slot=alg.space)
        for U, val in lam.coeffs.items():
            for pos in range(len(U)):
                if pos and U[pos] == U[pos - 1]:
                    continue
                rest = U[:pos] + U[pos + 1:]
                sign = _sgn(alg.space.degree(U[pos]) * sum(alg.space.degree(u) for u in U[pos + 1:]))
                key = (rest, U[pos])
                if key in f.coeffs:
                    continue
                f.coeffs[key] = {w: sign * c for w, c in val.items()}
        acts.append(f)
    return AModule.from_actions(alg, alg.space, acts, name=alg.space.name)


def dual_operator(base_dd, E: GradedSpace, D: Mapping, xdeg: int = 1) -> dict:
    """Operator on ``O (x) E^`` dual to ``D``; index ``e`` stands for ``e^``."""
    out: dict = {e: {} for e in range(E.dim)}
    for e, img in D.items():
        for (m, e2), c in img.items():
            w = mono_degree(m, base_dd)
            ed = -E.degree(e2)
            coef = -_sgn(xdeg * ed + ed * w) * c
            _dadd(out[e2], {(m, e): coef})
    return out


def dual_module(mod: AModule) -> AModule:
    return AModule(mod.base, dual(mod.space), dual_operator(mod.dd, mod.space, mod.D), name=mod.name + "^")


@lru_cache(maxsize=512)
def tensor_space(E: GradedSpace, F: GradedSpace) -> GradedSpace:
    return GradedSpace("%s*%s" % (E.name, F.name),
                       tuple(BasisVector("%s*%s" % (a.name, b.name), a.degree + b.degree)
                             for a in E.basis for b in F.basis))


@lru_cache(maxsize=512)
def hom_space(E: GradedSpace, F: GradedSpace) -> GradedSpace:
    """Basis ``(f, e)`` at index ``f * dim E + e``: the map sending ``e`` to ``f``."""
    return GradedSpace("Hom(%s,%s)" % (E.name, F.name),
                       tuple(BasisVector("%s<-%s" % (b.name, a.name), b.degree - a.degree)
                             for b in F.basis for a in E.basis))


def tensor_module(m1: AModule, m2: AModule) -> AModule:
    if m1.base is not m2.base and m1.base.Q != m2.base.Q:
        raise StructureError("modules over different algebras")
    E, F = m1.space, m2.space
    dd = m1.dd
    nF = F.dim
    D: dict = {}
    for i in range(E.dim):
        for j in range(F.dim):
            img: dict = {}
            for (m, i2), c in m1.D[i].items():
                _dadd(img, {(m, i2 * nF + j): c})
            s0 = _sgn(E.degree(i))
            for (m, j2), c in m2.D[j].items():
                s = s0 * _sgn(E.degree(i) * mono_degree(m, dd))
                _dadd(img, {(m, i * nF + j2): s * c})
            D[i * nF + j] = img
    return AModule(m1.base, tensor_space(E, F), D, name="%s*%s" % (m1.name, m2.name))


def hom_module(m1: AModule, m2: AModule) -> AModule:
    E, F = m1.space, m2.space
    dd = m1.dd
    nE = E.dim
    H = hom_space(E, F)
    D: dict = {}
    for f in range(F.dim):
        for e in range(E.dim):
            phi_deg = F.degree(f) - E.degree(e)
            img: dict = {}
            # nabla^F o phi: only on e
            for (m, f2), c in m2.D[f].items():
                _dadd(img, {(m, f2 * nE + e): c})
            # - (-1)^{|phi|} phi o nabla^E
            for e3 in range(E.dim):
                for (m, e4), c in m1.D[e3].items():
                    if e4 != e:
                        continue
                    s = -_sgn(phi_deg) * _sgn(phi_deg * mono_degree(m, dd))
                    _dadd(img, {(m, f * nE + e3): s * c})
            D[f * nE + e] = img
    return AModule(m1.base, H, D, name="Hom(%s,%s)" % (m1.name, m2.name))


def end_module(mod: AModule) -> AModule:
    return hom_module(mod, mod)


def trivial_module(base: LInftyAlgebra, space: GradedSpace, name="E") -> AModule:
    return AModule(base, space, {}, name)


def quotient_module(pair: SHLiePair) -> AModule:
    """``B = L/A`` with ``m_k(a.., b) = pr_B lambda_k(a.., b)``."""
    L, nA = pair.L, pair.nA
    acts = []
    for lam in L.brackets[1:]:
        f = SymMap(lam.arity, pair.A_space, pair.B_space, 1, slot=pair.B_space)
        for U, val in lam.coeffs.items():
            if pair.n_b(U) != 1:
                continue
            bpos = [i for i, u in enumerate(U) if u >= nA][0]
            rest = U[:bpos] + U[bpos + 1:]
            sign = _sgn(L.space.degree(U[bpos]) * sum(L.space.degree(u) for u in U[bpos + 1:]))
            out = {w - nA: sign * c for w, c in val.items() if w >= nA}
            if out:
                f.add_value(rest, out, U[bpos] - nA)
        acts.append(f)
    return AModule.from_actions(pair.A, pair.B_space, acts, name="B")


def abelian_extension(mod: AModule) -> SHLiePair:
    """The pair ``(A (+) E, A)`` with ``E`` an abelian ideal."""
    A = mod.base
    E = mod.space
    nA = A.space.dim
    taken = set(A.space.names())
    ebasis = []
    for bv in E.basis:
        name = bv.name
        while name in taken:
            name += "'"
        taken.add(name)
        ebasis.append(BasisVector(name, bv.degree))
    space = GradedSpace("%s+%s" % (A.space.name, E.name), A.space.basis + tuple(ebasis))
    dd = tuple(-d for d in space.degrees)
    imgs = {g: dict(p) for g, p in A.Q.images.items()}
    dual_D = dual_operator(A.dd, E, mod.D, 1)
    for e2, img in dual_D.items():
        p: dict = {}
        for (m, e), c in img.items():
            padd(p, {m + (nA + e,): c})
        if p:
            imgs[nA + e2] = p
    alg = LInftyAlgebra(space, Derivation(dd, 1, imgs), name=space.name)
    return SHLiePair(alg, list(range(nA)))


# --- morphisms ----------------------------------------------------------------------

@dataclass
class MorphismData:
    """``f_k: S^k(L) -> L'`` of degree 0, plus an optional ``f_0`` in ``L'^0``."""
    source: LInftyAlgebra
    target: LInftyAlgebra
    maps: dict  # k -> SymMap (k >= 1)
    f0: Vector | None = None

    def f(self, k: int) -> SymMap:
        if k == 0:
            s = SymMap(0, self.source.space, self.target.space, 0)
            if self.f0 is not None:
                s.coeffs[()] = dict(self.f0.coeffs)
            return s
        return self.maps.get(k) or SymMap(k, self.source.space, self.target.space, 0)

    @property
    def f_max(self) -> int:
        return max([k for k, v in self.maps.items() if not v.is_zero()], default=0)


def morphism_to_algebra_map(mor: MorphismData) -> dict:
    """Images of the generators of ``O(L')`` under ``phi: O(L') -> O(L)``.

    ``<w^, f_k(U)> = (-1)^{k+1} <phi_k(w^), U>``.
    """
    src, dst = mor.source, mor.target
    dd = src.dd
    ddt = dst.dd
    phi: dict = {w: {} for w in range(dst.space.dim)}
    for k in range(0, mor.f_max + 1):
        f = mor.f(k)
        for U, val in f.coeffs.items():
            pr = pairing_mono_vec(U, U, dd) if U else ONE
            for w, c in val.items():
                # <w^, f(U)> = c * <w^, w> ; <w^, w> = (-1)^{|w^||w|}(-1)^{|w|}
                wd = ddt[w]
                pw = _sgn(wd * wd + wd)
                padd(phi[w], {tuple(U): _sgn(k + 1) * c * pw / pr})
    return phi


def algebra_map_to_morphism(source: LInftyAlgebra, target: LInftyAlgebra, phi: Mapping) -> MorphismData:
    """Inverse of :func:`morphism_to_algebra_map`; constant terms become ``f_0``."""
    dd = source.dd
    ddt = target.dd
    maps: dict = {}
    f0: dict = {}
    for w, poly in phi.items():
        wd = ddt[w]
        pw = _sgn(wd * wd + wd)
        for U, c in poly.items():
            k = len(U)
            if k == 0:
                # <w^, f_0> = -<phi_0(w^), 1>
                f0[w] = f0.get(w, ZERO) - c * pw
                continue
            pr = pairing_mono_vec(U, U, dd)
            f = maps.setdefault(k, SymMap(k, source.space, target.space, 0))
            f.add_value(list(U), {w: _sgn(k + 1) * c * pr * pw})
    f0 = {w: c for w, c in f0.items() if c}
    return MorphismData(source, target, maps, Vector(target.space, f0) if f0 else None)


def apply_algebra_map(phi: Mapping, poly: Mapping, src_dd) -> dict:
    out: dict = {}
    for m, c in poly.items():
        acc: dict = {(): ONE}
        for g in m:
            acc = pmul(acc, phi.get(g, {}), src_dd)
            if not acc:
                break
        padd(out, acc, c)
    return out


def morphism_residual(mor: MorphismData, U: Sequence[int]) -> dict:
    """Multilinear morphism relation on ``U`` (n = len(U)), f_0 included."""
    src, dst = mor.source, mor.target
    n = len(U)
    degs = [src.space.degree(u) for u in U]
    out: dict = {}
    # sum_l sum_sigma eps f_{n-l+1}(lambda_l(u_sigma..), u_..)
    for l in range(0, min(n, src.k_max) + 1):
        lam = src.bracket(l)
        f = mor.f(n - l + 1)
        if lam.is_zero() or f.is_zero():
            continue
        for sigma in unshuffles([l, n - l]):
            inner = lam.value([U[s] for s in sigma[:l]])
            if inner:
                _dadd(out, _apply_sym(f, inner, [U[s] for s in sigma[l:]]), koszul_sign(sigma, degs))
    # - sum_r 1/r! sum over ordered partitions of U into r blocks (possibly with f_0 blocks)
    f0 = dict(mor.f0.coeffs) if mor.f0 is not None else {}
    for r in range(0, dst.k_max + 1):
        lam = dst.bracket(r)
        if lam.is_zero():
            continue
        for res, c in _partition_terms(mor, U, degs, r, f0):
            val = lam.value(list(res)) if res else lam.value([])
            _dadd(out, val, -c)
    return out


def _partition_terms(mor, U, degs, r, f0):
    """Terms ``(1/r!) sum eps f_{k1}(..) ... f_{kr}(..)`` expanded to basis tuples.

    Yields (tuple of target basis indices, coefficient)."""
    n = len(U)
    results: dict = {}

    def rec(remaining: tuple, blocks_left: int, prefix_out: list, coef: Fraction, perm: list):
        if blocks_left == 0:
            if remaining:
                return
            eps = koszul_sign(perm, degs) if perm else 1
            key = tuple(prefix_out)
            results[key] = results.get(key, ZERO) + eps * coef
            return
        # block sizes: any k >= 0 (k=0 means f_0)
        for k in range(0, len(remaining) + 1):
            f = mor.f(k) if k else None
            for chosen in combinations(remaining, k):
                if k == 0:
                    for w, c in f0.items():
                        rec(remaining, blocks_left - 1, prefix_out + [w], coef * c, perm)
                    continue
                val = f.value([U[s] for s in chosen])
                if not val:
                    continue
                rest = tuple(x for x in remaining if x not in chosen)
                for w, c in val.items():
                    rec(rest, blocks_left - 1, prefix_out + [w], coef * c, perm + list(chosen))

    rec(tuple(range(n)), r, [], Fraction(1, factorial(r)), [])
    return [(k, v) for k, v in results.items() if v]


def check_morphism(mor: MorphismData, n_max: int | None = None, weight: int | None = None) -> Report:
    src, dst = mor.source, mor.target
    rep = Report("morphism")
    if n_max is None:
        n_max = max(src.k_max + mor.f_max - 1, dst.k_max * max(mor.f_max, 1), 1)
    lit = Report("multilinear")
    for n in range(0, n_max + 1):
        for U in canonical_tuples(src.dd, n):
            lit.checked += 1
            r = morphism_residual(mor, U)
            if r:
                lit.fail(tuple(src.space.basis[u].name for u in U), Vector(dst.space, r))
    alg = Report("algebra_map")
    phi = morphism_to_algebra_map(mor)
    for w in range(dst.space.dim):
        alg.checked += 1
        lhs = apply_algebra_map(phi, dst.Q.image(w), src.dd)
        rhs = src.Q(phi[w])
        diff = padd(dict(lhs), rhs, -1)
        if weight is not None:
            diff = {m: c for m, c in diff.items() if len(m) <= weight}
        if diff:
            alg.fail(dst.space.basis[w].name + "^", diff)
    rep.merge(lit)
    rep.merge(alg)
    rep.notes["agree"] = lit.ok == alg.ok
    return rep
