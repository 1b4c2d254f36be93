"""Atiyah operators and the Lie structures they induce on cohomology.

Elements of ``O(A) (x) V`` are dicts ``{(monomial, v): c}``.  Products over
``O(A)`` follow the Koszul rule; a map ``kappa = w (x) [e -> f]`` acts by
``kappa(m (x) e) = (-1)^{|kappa_0||m|} w m (x) f`` where ``kappa_0`` is the
constant map.  The same rule defines the evaluation pairing against duals.

The shifted spaces ``BB = B[-2]`` and ``EE = E[-2]`` only relabel degrees, so
parities (and hence every sign below) can be computed on unshifted data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .atiyah import AtiyahCocycle, atiyah_operator_oracle
from .complex import NoSolutionUpToWeight, build, cohomology
from .graded import monomials
from .multilinear import mono_degree, mul_mono, padd
from .operators import eadd, truncate
from .report import Report
from .shlie import (AModule, SHLiePair, _sgn, decompose_Q, dual_module, end_module, hom_module,
                    quotient_module, tensor_module, tensor_space)

SHIFT = 2


# --- bilinear operations over O(A) --------------------------------------------------

def _emul(m1, m2, dd):
    return mul_mono(m1, m2, dd)


def tensor_elements(r: dict, s: dict, E, F, dd) -> dict:
    """``r (x)_{O(A)} s`` in ``O(A) (x) (E (x) F)`` (index ``i * dim F + j``)."""
    nF = F.dim
    out: dict = {}
    for (m1, e), c1 in r.items():
        de = E.degree(e)
        for (m2, f), c2 in s.items():
            sg, mm = _emul(m1, m2, dd)
            if sg:
                eadd(out, {(mm, e * nF + f): sg * _sgn(de * mono_degree(m2, dd)) * c1 * c2})
    return out


def evaluate(kappa: dict, r: dict, E, F, dd) -> dict:
    """``kappa(r)`` for ``kappa`` in ``O(A) (x) Hom(E, F)``."""
    nE = E.dim
    out: dict = {}
    for (m1, h), c1 in kappa.items():
        f, e = divmod(h, nE)
        hdeg = F.degree(f) - E.degree(e)
        for (m2, e2), c2 in r.items():
            if e2 != e:
                continue
            sg, mm = _emul(m1, m2, dd)
            if sg:
                eadd(out, {(mm, f): sg * _sgn(hdeg * mono_degree(m2, dd)) * c1 * c2})
    return out


def pairing(phi: dict, r: dict, E, dd) -> dict:
    """``<phi, r>`` in ``O(A)`` for ``phi`` in ``O(A) (x) E^``, ``r`` in ``O(A) (x) E``."""
    out: dict = {}
    for (m1, e), c1 in phi.items():
        for (m2, e2), c2 in r.items():
            if e2 != e:
                continue
            sg, mm = _emul(m1, m2, dd)
            if sg:
                padd(out, {mm: sg * _sgn(E.degree(e) * mono_degree(m2, dd)) * c1 * c2})
    return out


def operator_as_element(X: dict, nE: int) -> dict:
    """O(A)-linear operator (values on ``1 (x) e``) as an element of ``O(A) (x) End(E)``."""
    out: dict = {}
    for e, img in X.items():
        for (m, f), c in img.items():
            eadd(out, {(m, f * nE + e): c})
    return out


# --- Atiyah operators ---------------------------------------------------------------------

def delta_apply(pair: SHLiePair, r: dict, nE: int) -> dict:
    """``delta (x) 1``: ``O(A) (x) E -> O(A) (x) B^ (x) E`` (index ``j * dim E + e``)."""
    delta = decompose_Q(pair).delta
    out: dict = {}
    for (m, e), c in r.items():
        for (mm, j), cc in pair.J_B(delta.apply_mono(m)).items():
            eadd(out, {(mm, j * nE + e): c * cc})
    return out


def alpha_apply(alpha: AtiyahCocycle, r: dict) -> dict:
    """``alpha(r)`` in ``O(A) (x) B^ (x) E`` (index ``j * dim E + e'``)."""
    dd = alpha.pair.a_degs
    nE = alpha.module.space.dim
    by_in: dict = {}
    for (w, (j, eo, ei)), c in alpha.element.items():
        by_in.setdefault(ei, []).append((w, j * nE + eo, c))
    out: dict = {}
    for (m, e), c in r.items():
        for w, t, cc in by_in.get(e, ()):
            sg, mm = _emul(m, w, dd)
            if sg:
                eadd(out, {(mm, t): sg * c * cc})
    return out


def dual_tensor_to_hom(kappa: dict, Bsp, V, W) -> dict:
    """``B^ (x) Hom(V, W) -> Hom(B (x) V, W)``, ``(beta (x) psi)(b (x) v) = (-1)^{|psi||b|} beta(b) psi(v)``.

    Input index ``j * dim Hom(V,W) + (w * dim V + v)``; output index
    ``w * (dim B * dim V) + (j * dim V + v)``.  This is an isomorphism of modules.
    """
    nV = V.dim
    nH = nV * W.dim
    nBV = Bsp.dim * nV
    out: dict = {}
    for (m, t), c in kappa.items():
        j, h = divmod(t, nH)
        w, v = divmod(h, nV)
        s = _sgn((W.degree(w) - V.degree(v)) * Bsp.degree(j))
        eadd(out, {(m, w * nBV + j * nV + v): s * c})
    return out


def atiyah_hom(alpha: AtiyahCocycle) -> dict:
    """``alpha^E`` as an element of ``O(A) (x) Hom(B (x) E, E)``."""
    return dual_tensor_to_hom(alpha.as_coefficients(), alpha.pair.B_space, alpha.module.space,
                              alpha.module.space)


def atiyah_operator(alpha: AtiyahCocycle, x: dict, r: dict, hom: dict | None = None) -> dict:
    """``alpha(x) r``: O(A)-bilinear in ``x`` (in ``O(A) (x) B``) and ``r`` (in ``O(A) (x) E``).

    Evaluates ``alpha^E``, read in ``Hom(B (x) E, E)``, on ``x (x)_{O(A)} r``.
    """
    _check_shape(x, alpha.pair.nB, "x")
    _check_shape(r, alpha.module.space.dim, "r")
    E = alpha.module.space
    Bsp = alpha.pair.B_space
    dd = alpha.pair.a_degs
    if hom is None:
        hom = atiyah_hom(alpha)
    return evaluate(hom, tensor_elements(x, r, Bsp, E, dd), tensor_space(Bsp, E), E, dd)


def _check_shape(x: dict, n: int, what: str):
    for (_, t) in x:
        if not (isinstance(t, int) and 0 <= t < n):
            raise ValueError("%s has a basis index %r outside 0..%d" % (what, t, n - 1))


def atiyah_operator_matrix(alpha: AtiyahCocycle, x: dict) -> dict:
    """``alpha(x)`` as an element of ``O(A) (x) End(E)``."""
    nE = alpha.module.space.dim
    X = {e: atiyah_operator(alpha, x, {((), e): Fraction(1)}) for e in range(nE)}
    return operator_as_element(X, nE)


class AtiyahOperators:
    """Cached ``alpha^B`` and ``alpha^E`` for a pair and a module."""

    def __init__(self, pair: SHLiePair, module: AModule | None = None):
        self.pair = pair
        self.B = quotient_module(pair)
        self.alpha_B = atiyah_operator_oracle(pair, self.B)
        self.module = module
        self.alpha_E = atiyah_operator_oracle(pair, module) if module is not None else self.alpha_B
        self._hB = atiyah_hom(self.alpha_B)
        self._hE = atiyah_hom(self.alpha_E)

    def bracket(self, x: dict, y: dict) -> dict:
        return atiyah_operator(self.alpha_B, x, y, self._hB)

    def act(self, x: dict, r: dict) -> dict:
        return atiyah_operator(self.alpha_E, x, r, self._hE)


def element_degree(x: dict, dd, V) -> int | None:
    degs = {mono_degree(m, dd) + V.degree(t) for (m, t) in x}
    if len(degs) > 1:
        raise ValueError("inhomogeneous element")
    return degs.pop() if degs else None


def basis_elements(dd, V, max_weight: int):
    """``(monomial, v)`` pairs up to the given weight, as single-term elements."""
    for w in range(max_weight + 1):
        for m in monomials(dd, w):
            for v in range(V.dim):
                yield {(m, v): Fraction(1)}


# --- Leibniz-type identities --------------------------------------------------------------

def leibniz_checks(pair: SHLiePair, E: AModule, F: AModule, max_weight: int = 3,
                   sample_weight: int | None = None) -> Report:
    """Tensor Leibniz rule, dual anti-compatibility and the Hom commutator rule.

    Inputs are basis elements ``w (x) v`` with ``|w| <= max_weight`` for ``x``
    and weight <= ``sample_weight`` (default ``max_weight - 1``) for the rest.
    """
    rep = Report("leibniz")
    dd = pair.a_degs
    sw = max(max_weight - 1, 0) if sample_weight is None else sample_weight
    aE = atiyah_operator_oracle(pair, E)
    aF = atiyah_operator_oracle(pair, F)
    EF = tensor_module(E, F)
    aEF = atiyah_operator_oracle(pair, EF)
    Ed = dual_module(E)
    aEd = atiyah_operator_oracle(pair, Ed)
    H = hom_module(E, F)
    aH = atiyah_operator_oracle(pair, H)
    hE, hF, hEF, hEd, hH = (atiyah_hom(a) for a in (aE, aF, aEF, aEd, aH))
    Bsp = pair.B_space
    xs = list(basis_elements(dd, Bsp, max_weight))
    rs = list(basis_elements(dd, E.space, sw))
    ss = list(basis_elements(dd, F.space, sw))
    phis = list(basis_elements(dd, Ed.space, sw))
    ks = list(basis_elements(dd, H.space, sw))
    for x in xs:
        xd = element_degree(x, dd, Bsp)
        for r in rs:
            rd = element_degree(r, dd, E.space)
            for s in ss:
                lhs = atiyah_operator(aEF, x, tensor_elements(r, s, E.space, F.space, dd), hEF)
                rhs = tensor_elements(atiyah_operator(aE, x, r, hE), s, E.space, F.space, dd)
                eadd(rhs, tensor_elements(r, atiyah_operator(aF, x, s, hF), E.space, F.space, dd), _sgn(xd * rd))
                rep.checked += 1
                if lhs != rhs:
                    rep.fail(("tensor", x, r, s), eadd(dict(lhs), rhs, -1))
            for phi in phis:
                pd = element_degree(phi, dd, Ed.space)
                lhs = pairing(atiyah_operator(aEd, x, phi, hEd), r, E.space, dd)
                rhs = pairing(phi, atiyah_operator(aE, x, r, hE), E.space, dd)
                rep.checked += 1
                if padd(dict(lhs), rhs, _sgn(xd * pd)):
                    rep.fail(("dual", x, phi, r), (lhs, rhs))
            for k in ks:
                kd = element_degree(k, dd, H.space)
                lhs = evaluate(atiyah_operator(aH, x, k, hH), r, E.space, F.space, dd)
                rhs = atiyah_operator(aF, x, evaluate(k, r, E.space, F.space, dd), hF)
                eadd(rhs, evaluate(k, atiyah_operator(aE, x, r, hE), E.space, F.space, dd), -_sgn(xd * kd))
                rep.checked += 1
                if lhs != rhs:
                    rep.fail(("hom", x, k, r), eadd(dict(lhs), rhs, -1))
    return rep


def chain_map_check(alpha: AtiyahCocycle, x: dict) -> dict:
    """``d^{End(E)}(alpha(x))``; zero whenever ``x`` is a cocycle."""
    End = end_module(alpha.module)
    return End.nabla(atiyah_operator_matrix(alpha, x))


# --- homotopy witnesses ----------------------------------------------------------------------

@dataclass
class HomotopyWitness:
    kind: str
    witness: dict             # element of O(A) (x) module.space
    module: AModule           # where the witness lives
    report: Report = field(default_factory=lambda: Report("witness"))


def _skew_module(pair: SHLiePair) -> AModule:
    Bd = dual_module(quotient_module(pair))
    return hom_module(Bd, tensor_module(Bd, Bd))


def skew_witness(pair: SHLiePair) -> HomotopyWitness:
    """``P = -2 (1 (x) s^{-1})(T_2)`` with ``(1 (x) tau) alpha^{B^} + alpha^{B^} = d P``.

    Everything lives in ``O(A) (x) Hom(B^, B^ (x) B^)``; the basis index of
    ``[k -> b_p^ (x) b_q^]`` is ``(p * nB + q) * nB + k``.
    """
    nA, nB = pair.nA, pair.nB
    Bd = dual_module(quotient_module(pair))
    Bdeg = Bd.space.degree
    H = _skew_module(pair)
    alpha = atiyah_operator_oracle(pair, Bd)
    S: dict = {}
    for (w, (j, eo, ei)), c in alpha.element.items():
        eadd(S, {(w, (j * nB + eo) * nB + ei): c})
        eadd(S, {(w, (eo * nB + j) * nB + ei): _sgn(Bdeg(j) * Bdeg(eo)) * c})
    P: dict = {}
    T2 = decompose_Q(pair).T.get(2)
    if T2 is not None:
        for g, img in T2.images.items():
            k = g - nA
            for m, c in img.items():
                a = tuple(h for h in m if h < nA)
                p, q = [h - nA for h in m if h >= nA]
                # s^{-1}(b_p^ b_q^) = 1/2 (b_p^ (x) b_q^ + (-1)^{|p||q|} b_q^ (x) b_p^)
                half = Fraction(-2) * c / 2
                eadd(P, {(a, (p * nB + q) * nB + k): half})
                eadd(P, {(a, (q * nB + p) * nB + k): _sgn(Bdeg(p) * Bdeg(q)) * half})
    rep = Report("skew_witness")
    rep.checked += 1
    dP = H.nabla(P)
    if dP != S:
        rep.fail("(1 x tau) alpha + alpha = dP", eadd(dict(S), dP, -1))
    rep.notes["symmetrization_zero"] = not S
    return HomotopyWitness("P", P, H, rep)


def _jacobi_module(pair: SHLiePair, E: AModule) -> AModule:
    Bd = dual_module(quotient_module(pair))
    return tensor_module(Bd, tensor_module(Bd, end_module(E)))


def jacobi_element(pair: SHLiePair, E: AModule, alpha: AtiyahCocycle | None = None) -> dict:
    """``T = delta(alpha^E)`` in ``O(A) (x) B^ (x) B^ (x) End(E)``."""
    alpha = alpha or atiyah_operator_oracle(pair, E)
    delta = decompose_Q(pair).delta
    nB, nE = pair.nB, E.space.dim
    inner = nB * nE * nE
    T: dict = {}
    for (w, (j, eo, ei)), c in alpha.element.items():
        for (mm, i), cc in pair.J_B(delta.apply_mono(w)).items():
            eadd(T, {(mm, i * inner + (j * nE + eo) * nE + ei): c * cc})
    return T


def double_hom(pair: SHLiePair, Z: dict, E) -> dict:
    """``B^ (x) B^ (x) End(E) -> Hom(B (x) (B (x) E), E)`` by two applications of :func:`dual_tensor_to_hom`."""
    Bsp = pair.B_space
    nE = E.dim
    BE = tensor_space(Bsp, E)
    inner_n = Bsp.dim * nE * nE
    Z1: dict = {}
    for (m, t), c in Z.items():
        i, rest = divmod(t, inner_n)
        for (_, h), cc in dual_tensor_to_hom({((), rest): c}, Bsp, E, E).items():
            eadd(Z1, {(m, i * nE * BE.dim + h): cc})
    return dual_tensor_to_hom(Z1, Bsp, BE, E)


def apply_double(pair: SHLiePair, Z: dict, x: dict, y: dict, r: dict, E, hom: dict | None = None) -> dict:
    """``Z`` in ``O(A) (x) B^ (x) B^ (x) End(E)`` evaluated on ``x (x) y (x) r``."""
    Bsp = pair.B_space
    dd = pair.a_degs
    BE = tensor_space(Bsp, E)
    if hom is None:
        hom = double_hom(pair, Z, E)
    arg = tensor_elements(x, tensor_elements(y, r, Bsp, E, dd), Bsp, BE, dd)
    return evaluate(hom, arg, tensor_space(Bsp, BE), E, dd)


def jacobi_witness(pair: SHLiePair, E: AModule, max_weight: int = 2) -> HomotopyWitness:
    """``T = delta(alpha^E)``; checks the defect of ``alpha^E`` being a Lie action.

    ``a(x)(a(y)r) - (-1)^{|x||y|} a(y)(a(x)r) = a(a^B(x)y) r + (dT)(x (x) y (x) r)``
    on basis elements ``x, y, r`` of weight at most ``max_weight``.
    """
    dd = pair.a_degs
    ops = AtiyahOperators(pair, E)
    T = jacobi_element(pair, E, ops.alpha_E)
    M = _jacobi_module(pair, E)
    dT = M.nabla(T)
    dTh = double_hom(pair, dT, E.space)
    rep = Report("jacobi_witness")
    Bsp = pair.B_space
    xs = list(basis_elements(dd, Bsp, max_weight))
    rs = list(basis_elements(dd, E.space, max_weight))
    for x in xs:
        xd = element_degree(x, dd, Bsp)
        for y in xs:
            yd = element_degree(y, dd, Bsp)
            for r in rs:
                lhs = ops.act(x, ops.act(y, r))
                eadd(lhs, ops.act(y, ops.act(x, r)), -_sgn(xd * yd))
                rhs = ops.act(ops.bracket(x, y), r)
                eadd(rhs, apply_double(pair, dT, x, y, r, E.space, dTh))
                rep.checked += 1
                if lhs != rhs:
                    rep.fail((x, y, r), eadd(dict(lhs), rhs, -1))
    return HomotopyWitness("T", T, M, rep)


# --- cohomology tables -----------------------------------------------------------------------

@dataclass
class BracketTable:
    """Structure constants of ``[x_i, y_j] = sum_k c_ijk z_k`` on cohomology representatives.

    Degrees are shifted (``BB = B[-2]``, ``EE = E[-2]``).  ``entries`` maps
    ``(i, j)`` to ``{k: c}``; ``exact`` is False when some degree involved is
    only computed up to the weight bound.
    """
    kind: str
    degrees: tuple
    max_weight: int
    left: list
    right: list
    target: list
    entries: dict
    exact: bool
    report: Report = field(default_factory=lambda: Report("table"))


class _Classes:
    """Cohomology representatives of one module in one shifted degree, with coordinates."""

    def __init__(self, cx, n_shifted: int):
        self.cx = cx
        self.n = n_shifted - SHIFT
        self.result = cohomology(cx, self.n)
        self.reps = [r.terms for r in self.result.representatives]

    def coordinates(self, z: dict):
        """Coordinates of ``z`` in the representative basis, modulo coboundaries."""
        cx, n = self.cx, self.n
        b = cx.to_vector(z, n) if z else {}
        img = cx.columns(n - 1) if cx.dim(n - 1) else []
        cols = list(img) + [cx.to_vector(r, n) for r in self.reps]
        if not b:
            return {}
        y, _ = linalg.solve(cols, b) if cols else (None, b)
        if y is None:
            raise ArithmeticError("element is not a cocycle of the truncation")
        k0 = len(img)
        return {i - k0: c for i, c in y.items() if i >= k0 and c}

    def is_exact(self, z: dict) -> bool:
        if not z:
            return True
        cx, n = self.cx, self.n
        img = cx.columns(n - 1) if cx.dim(n - 1) else []
        if not img:
            return False
        y, _ = linalg.solve(img, cx.to_vector(z, n))
        return y is not None


def _truncated(x: dict, N: int) -> dict:
    return truncate(x, N)


def _table(kind, ops: AtiyahOperators, left: _Classes, right: _Classes, target: _Classes, op, N):
    entries = {}
    rep = Report(kind)
    for i, x in enumerate(left.reps):
        for j, y in enumerate(right.reps):
            z = _truncated(op(x, y), N)
            rep.checked += 1
            if target.cx.apply(z):
                rep.fail(("not a cocycle", i, j), None)
                continue
            entries[(i, j)] = target.coordinates(z)
    exact = all(c.result.exact for c in (left, right, target))
    return entries, exact, rep


def bracket_table(pair: SHLiePair, n1: int, n2: int, max_weight: int | None = None,
                  ops: AtiyahOperators | None = None) -> BracketTable:
    """``[x, y] = alpha^B(x) y`` on ``H^{n1}(A, BB) x H^{n2}(A, BB)``."""
    ops = ops or AtiyahOperators(pair)
    N = max_weight if max_weight is not None else _default_weight(n1, n2)
    cx = build(ops.B, N)
    L, R, T = _Classes(cx, n1), _Classes(cx, n2), _Classes(cx, n1 + n2)
    entries, exact, rep = _table("bracket", ops, L, R, T, ops.bracket, N)
    return BracketTable("bracket", (n1, n2), N, L.reps, R.reps, T.reps, entries, exact, rep)


def action_table(pair: SHLiePair, E: AModule, n1: int, n2: int, max_weight: int | None = None,
                 ops: AtiyahOperators | None = None) -> BracketTable:
    """``x . r = alpha^E(x) r`` on ``H^{n1}(A, BB) x H^{n2}(A, EE)``."""
    ops = ops or AtiyahOperators(pair, E)
    N = max_weight if max_weight is not None else _default_weight(n1, n2)
    cxB = build(ops.B, N)
    cxE = build(E, N)
    L, R, T = _Classes(cxB, n1), _Classes(cxE, n2), _Classes(cxE, n1 + n2)
    entries, exact, rep = _table("action", ops, L, R, T, ops.act, N)
    return BracketTable("action", (n1, n2), N, L.reps, R.reps, T.reps, entries, exact, rep)


def _default_weight(n1: int, n2: int) -> int:
    return max(n1 + n2 - SHIFT + 2, 2)


def lie_checks(pair: SHLiePair, degrees=(-2, -1, 0, 1, 2), max_weight: int | None = None,
               E: AModule | None = None) -> Report:
    """Graded skew-symmetry and Jacobi for ``[,]`` (and the action on ``E``) modulo coboundaries.

    Representatives are taken in every shifted degree listed; a triple is
    tested when all degrees it produces are inside the list's range.
    """
    ops = AtiyahOperators(pair, E)
    degrees = sorted(degrees)
    lo, hi = degrees[0], degrees[-1]
    N = max_weight if max_weight is not None else max(hi - SHIFT + 3, 2)
    cx = build(ops.B, N)
    classes = {n: _Classes(cx, n) for n in range(min(lo, 2 * lo), max(hi, 3 * hi) + 1)}
    rep = Report("lie")

    def par(n):
        return n & 1

    def cut(z):
        return _truncated(z, N)
    br = lambda x, y: cut(ops.bracket(x, y))
    for n1 in degrees:
        for n2 in degrees:
            for x in classes[n1].reps:
                for y in classes[n2].reps:
                    s = br(x, y)
                    eadd(s, br(y, x), _sgn(par(n1) * par(n2)))
                    rep.checked += 1
                    if not classes[n1 + n2].is_exact(s):
                        rep.fail(("skew", n1, n2), s)
            for n3 in degrees:
                for x in classes[n1].reps:
                    for y in classes[n2].reps:
                        xy = br(x, y)
                        for z in classes[n3].reps:
                            lhs = br(x, br(y, z))
                            rhs = br(xy, z)
                            eadd(rhs, br(y, br(x, z)), _sgn(par(n1) * par(n2)))
                            d = eadd(dict(lhs), rhs, -1)
                            rep.checked += 1
                            if not classes[n1 + n2 + n3].is_exact(d):
                                rep.fail(("jacobi", n1, n2, n3), d)
    if E is not None:
        cxE = build(E, N)
        eclasses = {n: _Classes(cxE, n) for n in range(min(lo, 2 * lo), max(hi, 3 * hi) + 1)}
        act = lambda x, r: cut(ops.act(x, r))
        for n1 in degrees:
            for n2 in degrees:
                for n3 in degrees:
                    for x in classes[n1].reps:
                        for y in classes[n2].reps:
                            xy = br(x, y)
                            for r in eclasses[n3].reps:
                                lhs = act(x, act(y, r))
                                eadd(lhs, act(y, act(x, r)), -_sgn(par(n1) * par(n2)))
                                d = eadd(lhs, act(xy, r), -1)
                                rep.checked += 1
                                if not eclasses[n1 + n2 + n3].is_exact(d):
                                    rep.fail(("action", n1, n2, n3), d)
    return rep


def functor_check(pair: SHLiePair, E: AModule, F: AModule, phi: dict, max_weight: int = 2) -> Report:
    """For a cocycle ``phi`` in ``O(A) (x) Hom(E, F)``:
    ``a^F(x) phi(r) - (-1)^{|x||phi|} phi(a^E(x) r) = (d delta(phi))(x (x) r)``.
    """
    dd = pair.a_degs
    H = hom_module(E, F)
    rep = Report("functor")
    rep.checked += 1
    if H.nabla(phi):
        rep.fail("phi is not a cocycle", H.nabla(phi))
        return rep
    aE = atiyah_operator_oracle(pair, E)
    aF = atiyah_operator_oracle(pair, F)
    hE, hF = atiyah_hom(aE), atiyah_hom(aF)
    W = delta_apply(pair, phi, H.space.dim)
    M = tensor_module(dual_module(quotient_module(pair)), H)
    dW = M.nabla(W)
    dWh = dual_tensor_to_hom(dW, pair.B_space, E.space, F.space)
    pd = element_degree(phi, dd, H.space) or 0
    for x in basis_elements(dd, pair.B_space, max_weight):
        xd = element_degree(x, dd, pair.B_space)
        for r in basis_elements(dd, E.space, max_weight):
            lhs = atiyah_operator(aF, x, evaluate(phi, r, E.space, F.space, dd), hF)
            eadd(lhs, evaluate(phi, atiyah_operator(aE, x, r, hE), E.space, F.space, dd), -_sgn(xd * pd))
            rhs = evaluate(dWh, tensor_elements(x, r, pair.B_space, E.space, dd),
                           tensor_space(pair.B_space, E.space), F.space, dd)
            rep.checked += 1
            if lhs != rhs:
                rep.fail((x, r), eadd(dict(lhs), rhs, -1))
    return rep


__all__ = [
    "AtiyahOperators", "BracketTable", "HomotopyWitness", "NoSolutionUpToWeight", "action_table",
    "alpha_apply", "apply_double", "atiyah_hom", "atiyah_operator", "atiyah_operator_matrix", "bracket_table",
    "chain_map_check", "delta_apply", "dual_tensor_to_hom", "evaluate", "functor_check", "jacobi_element",
    "jacobi_witness", "leibniz_checks", "lie_checks", "operator_as_element", "pairing",
    "skew_witness", "tensor_elements",
]
