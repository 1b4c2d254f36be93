"""Atiyah cocycles of a pair ``(L, A)`` with coefficients in an A-module.

Three independent computations are provided:

* bracket side: the multilinear components ``alpha_k(a_1..a_k, b, e)`` from
  the brackets of ``L`` and the actions on ``E`` (:func:`atiyah_cocycle`);
* operator side: ``delta`` applied to ``D^{A,E}`` (:func:`atiyah_operator_oracle`);
* curvature side: ``(J (x) 1)`` of the curvature of a connection
  (:func:`atiyah_from_curvature`).

The element form lives in ``O(A) (x) B^ (x) End(E)``; a term
``c w (x) b_j^ (x) e'`` of ``alpha(e)`` is stored under ``(w, (j, e', e))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .complex import Cochain, NoSolutionUpToWeight, build, default_weight, solve_coboundary
from .graded import koszul_sign, monomials, sort_sign, unshuffles
from .multilinear import SymMap, mono_degree, mul_mono, padd
from .operators import apply_connection, apply_linear, eadd
from .report import Report
from .shlie import (AModule, SHLiePair, _apply_sym, _dadd, _sgn, actions_to_operator, canonical_tuples,
                    decompose_Q, dual_module, end_module, operator_to_actions, quotient_module,
                    tensor_module)

ONE = Fraction(1)


class ExtensionMismatch(ValueError):
    """A connection does not restrict to the module structure on pure A inputs."""


# --- connections ------------------------------------------------------------------

@dataclass
class Connection:
    """``nabla = Q_L + D^{L,E}``; ``D[e]`` is an element of ``O(L) (x) E``."""
    pair: SHLiePair
    module: AModule
    D: dict

    def restriction(self) -> dict:
        nA = self.pair.nA
        return {e: {(m, e2): c for (m, e2), c in img.items() if all(g < nA for g in m)}
                for e, img in self.D.items()}

    def extends(self) -> bool:
        r = self.restriction()
        return all(r.get(e, {}) == self.module.D.get(e, {}) for e in range(self.module.space.dim))

    @cached_property
    def actions(self) -> dict:
        """``m~_k: S^{k-1}(L) (x) E -> E``."""
        return operator_to_actions(self.pair.L.space, self.module.space, self.D, 1)

    def action(self, k: int) -> SymMap:
        return self.actions.get(k) or SymMap(k, self.pair.L.space, self.module.space, 1, slot=self.module.space)

    def apply(self, x: dict) -> dict:
        return apply_connection(self.pair.L.Q, self.D, x, self.pair.dd)

    @classmethod
    def from_actions(cls, pair, module, actions) -> "Connection":
        return cls(pair, module, actions_to_operator(pair.L.space, module.space, actions, 1))


def trivial_connection(pair: SHLiePair, module: AModule) -> Connection:
    return Connection(pair, module, {e: dict(img) for e, img in module.D.items()})


def curvature(conn: Connection) -> dict:
    """``R = nabla^2`` on the basis of ``E`` (an O(L)-linear operator of degree 2)."""
    return {e: conn.apply(conn.apply({((), e): ONE})) for e in range(conn.module.space.dim)}


def bianchi_residual(conn: Connection) -> dict:
    """``Q_L(R) + [D^{L,E}, R]`` evaluated on the basis: ``nabla R(e) - R(D(e))``."""
    R = curvature(conn)
    dd = conn.pair.dd
    out = {}
    for e in range(conn.module.space.dim):
        r = conn.apply(R[e])
        eadd(r, apply_linear(R, 2, conn.D.get(e, {}), dd), -1)
        out[e] = r
    return out


# --- cocycles -----------------------------------------------------------------------

@dataclass
class AtiyahCocycle:
    pair: SHLiePair
    module: AModule
    element: dict  # (A-monomial, (j, e_out, e_in)) -> Fraction
    route: str = ""

    @cached_property
    def coefficient_module(self) -> AModule:
        return coefficient_module(self.pair, self.module)

    def cochain(self) -> Cochain:
        return Cochain(self.coefficient_module, self.as_coefficients(), 2 if self.element else None)

    def as_coefficients(self) -> dict:
        nE = self.module.space.dim
        nEnd = nE * nE
        return {(m, j * nEnd + eo * nE + ei): c for (m, (j, eo, ei)), c in self.element.items()}

    @cached_property
    def components(self) -> dict:
        """``{k: {(a-tuple, j, e): {e': c}}}`` with canonical a-tuples."""
        return element_to_components(self.pair, self.module, self.element)

    def value(self, a, j: int, e: int) -> dict:
        """``alpha_k(a_1..a_k, b_j, e)`` for A-indices in any order."""
        s, key = sort_sign(list(a), self.pair.dd)
        if not s:
            return {}
        v = self.components.get(len(key), {}).get((key, j, e), {})
        return {k: s * c for k, c in v.items()}

    def as_dual_tensor(self) -> dict:
        """Coefficients in ``O(A) (x) B^ (x) E^ (x) E``, keys ``(w, (j, e_in, e_out))``.

        Uses ``(phi (x) w)(v) = (-1)^{|w||v|} phi(v) w``, so that
        ``[e -> e'] = (-1)^{|e||e'|} e^ (x) e'``.
        """
        deg = self.module.space.degree
        return {(m, (j, ei, eo)): _sgn(deg(ei) * deg(eo)) * c for (m, (j, eo, ei)), c in self.element.items()}

    def render_dual_tensor(self) -> str:
        from .complex import render_mono
        items = self.as_dual_tensor()
        if not items:
            return "0"
        names = self.pair.A_space.names()
        Bn = self.pair.B_space.names()
        En = self.module.space.names()
        parts = []
        for (m, (j, ei, eo)), c in sorted(items.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
            coef = "" if c == 1 else "-" if c == -1 else "%s*" % c
            parts.append("%s%s (x) %s^ (x) %s^ (x) %s" % (coef, render_mono(m, names), Bn[j], En[ei], En[eo]))
        return " + ".join(parts).replace("+ -", "- ")

    def is_zero(self) -> bool:
        return not self.element

    def __eq__(self, other):
        return isinstance(other, AtiyahCocycle) and self.element == other.element

    def render(self) -> str:
        return render_alpha(self.pair, self.module, self.element)

    def render_components(self) -> list[str]:
        names = self.pair.L.space.names()
        Bn = self.pair.B_space.names()
        En = self.module.space.names()
        lines = []
        for k in sorted(self.components):
            for (a, j, e), val in sorted(self.components[k].items()):
                out = " + ".join("%s*%s" % (c, En[t]) for t, c in sorted(val.items())).replace("+ -", "- ")
                args = ",".join([names[x] for x in a] + [Bn[j], En[e]])
                lines.append("alpha_%d(%s) = %s" % (k, args, out))
        return lines


def coefficient_module(pair: SHLiePair, module: AModule) -> AModule:
    """``B^ (x) End(E)`` with its A-module structure."""
    return tensor_module(dual_module(quotient_module(pair)), end_module(module))


def render_alpha(pair, module, element) -> str:
    if not element:
        return "0"
    from .complex import render_mono
    names = pair.A_space.names()
    Bn = pair.B_space.names()
    En = module.space.names()
    parts = []
    for (m, (j, eo, ei)), c in sorted(element.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
        coef = "" if c == 1 else "-" if c == -1 else "%s*" % c
        parts.append("%s%s (x) %s^ (x) [%s -> %s]" % (coef, render_mono(m, names), Bn[j], En[ei], En[eo]))
    return " + ".join(parts).replace("+ -", "- ")


def element_to_components(pair: SHLiePair, module: AModule, element: dict) -> dict:
    """Components ``alpha_k(a.., b, e)`` of an element of ``O(A) (x) B^ (x) End(E)``.

    With ``X(e) = sum c (w . b_j^) (x) e'`` read as brackets of a degree-2
    derivation, ``alpha_k(a.., b, e) = (-1)^{k+1+|e'|} X_{k+2}(a.., b, e)``.
    This matches the Jacobiator of ``L (+) E`` on ``(a.., b, e)``.
    """
    nA = pair.nA
    X: dict = {}
    for (m, (j, eo, ei)), c in element.items():
        s, mm = mul_mono(m, (nA + j,), pair.dd)
        _dadd(X.setdefault(ei, {}), {(mm, eo): s * c})
    acts = operator_to_actions(pair.L.space, module.space, X, 2)
    comps: dict = {}
    for n, f in acts.items():
        for (U, e), val in f.coeffs.items():
            bs = [u for u in U if u >= nA]
            if len(bs) != 1:
                raise AssertionError("Atiyah element with %d B-inputs" % len(bs))
            a = tuple(u for u in U if u < nA)
            # move b to the end of the symmetric inputs
            pos = U.index(bs[0])
            s = _sgn(pair.L.space.degree(bs[0]) * sum(pair.L.space.degree(u) for u in U[pos + 1:]))
            k = len(a)
            comps.setdefault(k, {})[(a, bs[0] - nA, e)] = {
                t: s * _sgn(k + 1 + module.space.degree(t)) * c for t, c in val.items()}
    return comps


def components_to_element(pair: SHLiePair, module: AModule, comps: dict) -> dict:
    nA = pair.nA
    E = module.space
    maps: dict = {}
    for k, table in comps.items():
        f = maps.setdefault(k + 2, SymMap(k + 2, pair.L.space, E, 2, slot=E))
        for (a, j, e), val in table.items():
            f.add_value(list(a) + [nA + j], {t: _sgn(k + 1 + E.degree(t)) * c for t, c in val.items()}, e)
    X = actions_to_operator(pair.L.space, E, maps, 2)
    out: dict = {}
    for ei, img in X.items():
        for (mm, eo), c in img.items():
            if not mm or mm[-1] < nA or (len(mm) > 1 and mm[-2] >= nA):
                raise AssertionError("component without a single B input")
            out[(mm[:-1], (mm[-1] - nA, eo, ei))] = c
    return out


def atiyah_operator_oracle(pair: SHLiePair, module: AModule) -> AtiyahCocycle:
    """``delta(D^{A,E})``: apply ``delta`` to the O(A)-coefficients of ``D(e)``."""
    dec = decompose_Q(pair)
    out: dict = {}
    for e, img in module.D.items():
        for (m, eo), c in img.items():
            for (mm, j), cc in pair.J_B(dec.delta.apply_mono(m)).items():
                _dadd(out, {(mm, (j, eo, e)): c * cc})
    return AtiyahCocycle(pair, module, out, "operator")


def atiyah_from_curvature(conn: Connection) -> AtiyahCocycle:
    """``(J (x) 1)(R)``; raises if an ``A^``-component survives."""
    pair = conn.pair
    R = curvature(conn)
    out: dict = {}
    for e, img in R.items():
        for (mm, tag), c in pair.J_elem(img).items():
            if tag[0] == "A":
                raise AssertionError("curvature has an A-component after J")
            j, eo = tag
            _dadd(out, {(mm, (j, eo, e)): c})
    return AtiyahCocycle(pair, conn.module, out, "curvature")


def _max_k(pair, module, conn=None):
    mmax = max(module.actions, default=0)
    if conn is not None:
        mmax = max(mmax, max(conn.actions, default=0))
        return pair.L.k_max + mmax
    return max(pair.L.k_max + mmax - 3, 0)


def split_formula(pair: SHLiePair, module: AModule, a, j: int, e: int) -> dict:
    """``(-1)^{k+1} alpha_k(a.., b_j, e)`` by the split formula (trivial connection)."""
    L = pair.L
    nA = pair.nA
    b = nA + j
    bdeg = L.space.degree(b)
    k = len(a)
    degs = [L.space.degree(x) for x in a]
    total = sum(degs)
    out: dict = {}
    for p in range(0, k + 1):
        lam = L.bracket(p + 1)
        m = module.action(k - p + 2)
        if lam.is_zero() or m.is_zero():
            continue
        for sigma in unshuffles([p, k - p]):
            inner = lam.value([a[s] for s in sigma[:p]] + [b])
            inner = {w: c for w, c in inner.items() if w < nA}
            if not inner:
                continue
            dag = sum(degs[s] for s in sigma[:p])
            sign = koszul_sign(sigma, degs) * _sgn(bdeg * (total - dag))
            _dadd(out, _apply_sym(m, inner, [a[s] for s in sigma[p:]], e), sign)
    return out


def general_formula(conn: Connection, a, j: int, e: int) -> dict:
    """``(-1)^{k+1} alpha_k(a.., b_j, e)`` for an arbitrary connection (four sums)."""
    pair, module = conn.pair, conn.module
    L = pair.L
    l = pair.nA + j
    bdeg = L.space.degree(l)
    k = len(a)
    degs = [L.space.degree(x) for x in a]
    total = sum(degs)
    out: dict = {}
    for p in range(0, k + 1):
        for sigma in unshuffles([p, k - p]):
            first = [a[s] for s in sigma[:p]]
            rest = [a[s] for s in sigma[p:]]
            eps = koszul_sign(sigma, degs)
            dag = sum(degs[s] for s in sigma[:p])
            # inner bracket on A inputs only
            inner = L.bracket(p).value(first)
            if inner:
                _dadd(out, _apply_sym(conn.action(k - p + 3), inner, rest + [l], e), eps)
            # inner bracket containing l
            inner = L.bracket(p + 1).value(first + [l])
            if inner:
                _dadd(out, _apply_sym(conn.action(k - p + 2), inner, rest, e), eps * _sgn(bdeg * (total - dag)))
            # nested, l inside
            inner = conn.action(k - p + 2).value(rest + [l], e)
            for e2, c in inner.items():
                _dadd(out, module.action(p + 1).value(first, e2), eps * _sgn(dag) * c)
            # nested, l outside
            inner = module.action(k - p + 1).value(rest, e)
            sg = eps * _sgn(dag + bdeg * (total - dag + 1))
            for e2, c in inner.items():
                _dadd(out, conn.action(p + 2).value(first + [l], e2), sg * c)
    return out


def atiyah_cocycle(pair: SHLiePair, module: AModule, conn: Connection | None = None) -> AtiyahCocycle:
    """Bracket-side computation; the trivial connection unless ``conn`` is given."""
    if conn is not None and not conn.extends():
        raise ExtensionMismatch("connection does not extend the module")
    kmax = _max_k(pair, module, conn)
    comps: dict = {}
    for k in range(0, kmax + 1):
        for a in canonical_tuples(pair.a_degs, k):
            for j in range(pair.nB):
                for e in range(module.space.dim):
                    v = split_formula(pair, module, a, j, e) if conn is None else general_formula(conn, a, j, e)
                    if v:
                        comps.setdefault(k, {})[(a, j, e)] = {t: _sgn(k + 1) * c for t, c in v.items()}
    elem = components_to_element(pair, module, comps)
    return AtiyahCocycle(pair, module, elem, "brackets")


def cocycle_residual(alpha: AtiyahCocycle) -> dict:
    F = alpha.coefficient_module
    return apply_connection(F.base.Q, F.D, alpha.as_coefficients(), F.dd)


# --- independence of the connection ---------------------------------------------------

@dataclass
class ConnectionComparison:
    witness: dict        # element of O(A) (x) B^ (x) End(E), same keys as AtiyahCocycle.element
    difference: dict
    boundary: dict
    holds: bool


def J_operator_element(pair: SHLiePair, D: dict) -> tuple[dict, dict]:
    """``(J (x) 1)`` of an O(L)-valued operator; returns (B-part, A-part)."""
    bpart: dict = {}
    apart: dict = {}
    for e, img in D.items():
        for (mm, tag), c in pair.J_elem(img).items():
            if tag[0] == "A":
                _dadd(apart, {(mm, (tag[1], tag[2], e)): c})
            else:
                _dadd(bpart, {(mm, (tag[0], tag[1], e)): c})
    return bpart, apart


def compare_connections(pair, module, c1: Connection, c2: Connection) -> ConnectionComparison:
    for c in (c1, c2):
        if not c.extends():
            raise ExtensionMismatch("connection does not restrict to D^{A,E}")
    phi = {e: eadd(dict(c1.D.get(e, {})), c2.D.get(e, {}), -1) for e in range(module.space.dim)}
    W, _ = J_operator_element(pair, phi)
    a1 = atiyah_from_curvature(c1)
    a2 = atiyah_from_curvature(c2)
    diff = eadd(dict(a1.element), a2.element, -1)
    wc = AtiyahCocycle(pair, module, W)
    F = wc.coefficient_module
    bd = apply_connection(F.base.Q, F.D, wc.as_coefficients(), F.dd)
    nE = module.space.dim
    bd_el = {(m, (t // (nE * nE), (t % (nE * nE)) // nE, t % nE)): c for (m, t), c in bd.items()}
    return ConnectionComparison(W, diff, bd_el, bd_el == diff)


# --- vanishing ------------------------------------------------------------------------------

@dataclass
class VanishingVerdict:
    vanishes: bool
    exact: bool
    max_weight: int
    alpha: AtiyahCocycle
    primitive: Cochain | None = None
    certificate: NoSolutionUpToWeight | None = None
    zero_cocycle: bool = False

    @property
    def label(self) -> str:
        if self.zero_cocycle:
            return "VANISHES (cocycle is identically zero)"
        if self.vanishes:
            return "VANISHES (primitive verified in the full complex)"
        if self.exact:
            return "NONVANISHING (exact)"
        return "NONVANISHING (no primitive up to weight %d)" % self.max_weight


def class_vanishes(pair: SHLiePair, module: AModule, max_weight: int | None = None) -> VanishingVerdict:
    alpha = atiyah_operator_oracle(pair, module)
    N = default_weight(2) if max_weight is None else max_weight
    if alpha.is_zero():
        return VanishingVerdict(True, True, N, alpha, zero_cocycle=True)
    cx = build(alpha.coefficient_module, N)
    z = alpha.cochain()
    res = solve_coboundary(cx, z)
    if isinstance(res, NoSolutionUpToWeight):
        return VanishingVerdict(False, cx.is_exact_at(2), N, alpha, certificate=res)
    full = apply_connection(cx.module.base.Q, cx.module.D, res.terms, cx.dd)
    if full != z.terms:
        # a truncated primitive that fails in the full complex is not a proof
        return VanishingVerdict(False, False, N, alpha, primitive=res)
    return VanishingVerdict(True, True, N, alpha, primitive=res)


# --- connecting map ------------------------------------------------------------------------

def restricted_adjoint(pair: SHLiePair) -> AModule:
    """``L`` as an A-module: ``m_k(a.., l) = lambda_k(a.., l)``."""
    L, nA = pair.L, pair.nA
    acts = []
    for lam in L.brackets[1:]:
        f = SymMap(lam.arity, pair.A_space, L.space, 1, slot=L.space)
        for U, val in lam.coeffs.items():
            nb = pair.n_b(U)
            if nb > 1:
                continue
            positions = [len(U) - 1 - i for i, u in enumerate(reversed(U)) if nb == 0 or u >= nA]
            seen = set()
            for pos in positions:
                if U[pos] in seen:
                    continue
                seen.add(U[pos])
                rest = U[:pos] + U[pos + 1:]
                sign = _sgn(L.space.degree(U[pos]) * sum(L.space.degree(u) for u in U[pos + 1:]))
                key = (rest, U[pos])
                if key not in f.coeffs:
                    f.coeffs[key] = {w: sign * c for w, c in val.items()}
        acts.append(f)
    return AModule.from_actions(pair.A, L.space, acts, name="L")


def key_relation_residual(pair: SHLiePair, omega: dict) -> dict:
    """``d^perp(J(w)) - J(Q_L(w))`` for ``w`` in the ideal generated by ``B^``."""
    Bd = dual_module(quotient_module(pair))
    lhs = Bd.nabla(pair.J_B(omega))
    rhs = pair.J_B(pair.L.Q(omega))
    return eadd(dict(lhs), rhs, -1)


def connecting_check(pair: SHLiePair, module: AModule, samples=None) -> Report:
    rep = Report("connecting")
    nA, nE = pair.nA, module.space.dim
    conn = trivial_connection(pair, module)
    beta_b, beta_a = J_operator_element(pair, conn.D)
    # (1 (x) j^ (x) 1) beta = (I^A (x) 1)(D^{A,E})
    ia: dict = {}
    for e, img in module.D.items():
        for (m, eo), c in img.items():
            for (mm, g), cc in pair.I({m: c}, pair.a_degs).items():
                _dadd(ia, {(mm, (g, eo, e)): cc})
    rep.checked += 1
    if ia != beta_a:
        rep.fail("restriction of beta", (ia, beta_a))
    # d beta = alpha in O(A) (x) L^ (x) End(E)
    Ld = dual_module(restricted_adjoint(pair))
    F = tensor_module(Ld, end_module(module))
    coeffs: dict = {}
    for (m, (g, eo, e)), c in beta_a.items():
        _dadd(coeffs, {(m, g * nE * nE + eo * nE + e): c})
    for (m, (j, eo, e)), c in beta_b.items():
        _dadd(coeffs, {(m, (nA + j) * nE * nE + eo * nE + e): c})
    dbeta = apply_connection(F.base.Q, F.D, coeffs, F.dd)
    alpha = atiyah_operator_oracle(pair, module)
    target = {(m, (nA + j) * nE * nE + eo * nE + e): c for (m, (j, eo, e)), c in alpha.element.items()}
    rep.checked += 1
    if dbeta != target:
        rep.fail("d beta = alpha", (dbeta, target))
    # (I^A (x) 1) D^{A,E} is a cocycle in O(A) (x) A^ (x) End(E)
    Ad = dual_module(_adjoint_of(pair.A))
    FA = tensor_module(Ad, end_module(module))
    ca = {(m, g * nE * nE + eo * nE + e): c for (m, (g, eo, e)), c in ia.items()}
    rep.checked += 1
    if apply_connection(FA.base.Q, FA.D, ca, FA.dd):
        rep.fail("(I^A x 1) D is a cocycle", None)
    # key relation on sampled elements of ker j^
    for w in (samples if samples is not None else _ideal_samples(pair)):
        rep.checked += 1
        r = key_relation_residual(pair, w)
        if r:
            rep.fail(("key relation", w), r)
    return rep


def _adjoint_of(alg):
    from .shlie import adjoint_module
    return adjoint_module(alg)


def _ideal_samples(pair: SHLiePair, max_weight: int = 3) -> list[dict]:
    """Monomials with at least one ``B^`` factor, weight <= max_weight."""
    out = []
    for w in range(1, max_weight + 1):
        for m in monomials(pair.dd, w):
            if pair.n_b(m) >= 1:
                out.append({m: ONE})
    return out


# --- identities of J ----------------------------------------------------------------------

def _j_dual(pair: SHLiePair, poly: dict) -> dict:
    """``j^``: drop every monomial containing a ``B^`` factor."""
    return {m: c for m, c in poly.items() if pair.n_b(m) == 0}


def ij_residual(pair: SHLiePair, omega: dict) -> dict:
    """``(1 (x) j^) J(w) - I^A(j^ w)``."""
    lhs = {k: c for k, c in pair.J(omega).items() if k[1] < pair.nA}
    return eadd(lhs, pair.I(_j_dual(pair, omega), pair.a_degs), -1)


def _poly_degree(p: dict, dd) -> int:
    return mono_degree(next(iter(p)), dd) if p else 0


def j_derivation_residual(pair: SHLiePair, w1: dict, w2: dict) -> dict:
    """``J(w1 w2) - j^(w1) J(w2) - (-1)^{|w1||w2|} j^(w2) J(w1)`` (homogeneous inputs)."""
    dd = pair.dd
    prod: dict = {}
    for m1, c1 in w1.items():
        for m2, c2 in w2.items():
            s, m = mul_mono(m1, m2, dd)
            if s:
                padd(prod, {m: s * c1 * c2})
    out = dict(pair.J(prod))
    s12 = _sgn(_poly_degree(w1, dd) * _poly_degree(w2, dd))
    for left, right, sign in ((w1, w2, 1), (w2, w1, s12)):
        for m, c in _j_dual(pair, left).items():
            for (mm, g), cc in pair.J(right).items():
                s, m3 = mul_mono(m, mm, dd)
                if s:
                    eadd(out, {(m3, g): s * sign * c * cc}, -1)
    return out


def _J_op(pair: SHLiePair, X: dict) -> dict:
    """``(J (x) 1) X`` per basis vector: ``{e: {(m, g, e'): c}}`` meaning ``m g^ (x) e'``."""
    out: dict = {}
    for e, img in X.items():
        acc: dict = {}
        for (m, eo), c in img.items():
            for (mm, g), cc in pair.J({m: c}).items():
                eadd(acc, {(mm, g, eo): cc})
        out[e] = acc
    return out


def j1_residual(pair: SHLiePair, phi: dict, phideg: int, psi: dict, basis) -> dict:
    """``(J(x)1)(phi psi) - (j^(x)1)(phi) (J(x)1)(psi) - (J(x)1)(phi) (j^(x)1)(psi)``.

    ``phi`` and ``psi`` are O(L)-linear operators on ``O(L) (x) E``;
    ``phi`` is homogeneous of degree ``phideg``.
    """
    dd = pair.dd
    jphi = {e: {k: c for k, c in img.items() if pair.n_b(k[0]) == 0} for e, img in phi.items()}
    Jphi = _J_op(pair, phi)
    Jpsi = _J_op(pair, psi)
    comp = {e: apply_linear(phi, phideg, psi.get(e, {}), dd) for e in basis}
    lhs = _J_op(pair, comp)
    out = {}
    for e in basis:
        r = dict(lhs[e])
        for (mm, g, e1), c in Jpsi.get(e, {}).items():
            s0 = _sgn(phideg * (mono_degree(mm, dd) + dd[g]))
            for (m2, e2), c2 in jphi.get(e1, {}).items():
                s, m3 = mul_mono(mm, m2, dd)
                if s:
                    eadd(r, {(m3, g, e2): -s0 * s * _sgn(dd[g] * mono_degree(m2, dd)) * c * c2})
        for (m, e1), c in psi.get(e, {}).items():
            if pair.n_b(m):
                continue
            s0 = _sgn(phideg * mono_degree(m, dd))
            for (mm, g, e2), c2 in Jphi.get(e1, {}).items():
                s, m3 = mul_mono(m, mm, dd)
                if s:
                    eadd(r, {(m3, g, e2): -s0 * s * c * c2})
        if r:
            out[e] = r
    return out
