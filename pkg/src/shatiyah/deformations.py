"""First-order deformations ``Q(h) = Q_L + h Q_+`` of a pair and gauge invariance.

A deformation is stored as the degree-1 derivation ``Q_+`` of ``O(L)`` in the
(reordered) basis of the pair.  A gauge map is the degree-0 derivation
``lambda = sum_k Psi_k`` sending ``A^`` into ``O(A) (x) S^k(B^)`` and killing
``B^``.  Two deformations are gauge equivalent through ``lambda`` when
``Q_+ - Qbar_+ = [Q_L, lambda]``.

Computations over ``Q[h]`` use :class:`~shatiyah.dual.DualScalar`
coefficients in the generic code; the operator side splits everything into
body and soul by hand.  The two are compared in the tests.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .atiyah import AtiyahCocycle, atiyah_cocycle, atiyah_operator_oracle, coefficient_module
from .complex import TruncatedComplex
from .dual import H, DualScalar, split
from .multilinear import Derivation, commutator, mono_degree, padd
from .operators import apply_connection
from .report import Report
from .shlie import AModule, LInftyAlgebra, SHLiePair, _dadd, decompose_Q


class GaugeCheckFailed(ArithmeticError):
    """The gauge relation or the witness identity does not hold."""

    def __init__(self, message: str, report: Report | None = None):
        super().__init__(message)
        self.report = report


def _gen_name(pair: SHLiePair, g: int) -> str:
    return pair.L.space.basis[g].name + "^"


# --- data --------------------------------------------------------------------------

@dataclass
class Deformation:
    """``Q_+`` as a derivation of ``O(L)`` (pair basis order)."""
    Q_plus: Derivation
    name: str = "Q+"

    @classmethod
    def zero(cls, pair: SHLiePair) -> "Deformation":
        return cls(Derivation(pair.dd, 1, {}))

    @classmethod
    def from_images(cls, pair: SHLiePair, images: dict, name: str = "Q+") -> "Deformation":
        return cls(Derivation(pair.dd, 1, images), name)

    def is_zero(self) -> bool:
        return self.Q_plus.is_zero()

    def components(self, pair: SHLiePair) -> dict:
        """``{"delta": .., "R": .., "T": {i: ..}, "A": .., "B1": ..}``.

        ``A`` and ``B1`` collect terms that a compatible deformation cannot have.
        """
        dd = pair.dd
        parts: dict = {"delta": {}, "R": {}, "A": {}, "B1": {}}
        T: dict = {}
        for g, img in self.Q_plus.images.items():
            for m, c in img.items():
                nb = pair.n_b(m)
                if g < pair.nA:
                    key = "A" if nb == 0 else "delta" if nb == 1 else "R"
                    parts[key].setdefault(g, {})[m] = c
                elif nb >= 2:
                    T.setdefault(nb, {}).setdefault(g, {})[m] = c
                else:
                    parts["B1"].setdefault(g, {})[m] = c
        out = {k: Derivation(dd, 1, v) for k, v in parts.items()}
        out["T"] = {i: Derivation(dd, 1, v) for i, v in sorted(T.items())}
        return out

    def delta_plus(self, pair: SHLiePair) -> Derivation:
        return self.components(pair)["delta"]


@dataclass
class GaugeMap:
    """``lambda = sum_k Psi_k``, a degree-0 derivation killing ``B^``."""
    psi: Derivation

    @classmethod
    def zero(cls, pair: SHLiePair) -> "GaugeMap":
        return cls(Derivation(pair.dd, 0, {}))

    @classmethod
    def from_images(cls, pair: SHLiePair, images: dict) -> "GaugeMap":
        return cls(Derivation(pair.dd, 0, images))

    def Psi(self, pair: SHLiePair, k: int) -> Derivation:
        imgs = {g: {m: c for m, c in img.items() if pair.n_b(m) == k}
                for g, img in self.psi.images.items()}
        return Derivation(pair.dd, 0, imgs)

    def validate(self, pair: SHLiePair) -> Report:
        """Shape: degree 0, ``B^`` fixed, ``A^ -> O(A) (x) S^{>=1}(B^)``.

        Higher ``Psi_k`` are checked here but only ``Psi_1`` enters the witness.
        """
        rep = Report("gauge map")
        dd = pair.dd
        for g, img in self.psi.images.items():
            rep.checked += 1
            if g >= pair.nA:
                rep.fail(("lambda moves a B generator", _gen_name(pair, g)), img)
                continue
            for m, c in img.items():
                if mono_degree(m, dd) != dd[g]:
                    rep.fail(("degree", _gen_name(pair, g)), {m: c})
                elif pair.n_b(m) == 0:
                    rep.fail(("lambda is not the identity on O(A)", _gen_name(pair, g)), {m: c})
        return rep


def inner_deformation(pair: SHLiePair, g: GaugeMap) -> Deformation:
    """``[Q_L, lambda]``."""
    return Deformation(commutator(pair.L.Q, g.psi), "[Q_L, lambda]")


def gauge_transform(pair: SHLiePair, d: Deformation, g: GaugeMap) -> Deformation:
    """The deformation gauge equivalent to ``d`` through ``g``: ``Q_+ - [Q_L, lambda]``."""
    return Deformation(d.Q_plus - commutator(pair.L.Q, g.psi), d.name + "'")


# --- dual numbers -------------------------------------------------------------------

def _lift_poly(p: dict) -> dict:
    return {m: DualScalar(c) for m, c in p.items()}


def dual_derivation(base: Derivation, plus: Derivation) -> Derivation:
    """``base + h plus`` with DualScalar coefficients."""
    imgs = {g: _lift_poly(p) for g, p in base.images.items()}
    for g, p in plus.images.items():
        padd(imgs.setdefault(g, {}), p, H)
    return Derivation(base.degrees, base.degree, imgs)


def dual_pair(pair: SHLiePair, d: Deformation) -> SHLiePair:
    """``(L[h], A[h])`` with ``Q(h) = Q_L + h Q_+``; already in pair order."""
    alg = LInftyAlgebra(pair.L.space, dual_derivation(pair.L.Q, d.Q_plus), pair.L.name)
    return SHLiePair(alg, list(range(pair.nA)))


def _split_derivation(D: Derivation) -> tuple[Derivation, Derivation]:
    body, soul = {}, {}
    for g, p in D.images.items():
        b, s = split(p)
        if b:
            body[g] = b
        if s:
            soul[g] = s
    return Derivation(D.degrees, D.degree, body), Derivation(D.degrees, D.degree, soul)


# --- checks ----------------------------------------------------------------------------

def check_compatible(pair: SHLiePair, d: Deformation) -> Report:
    """Both containments on every generator, and ``Q(h)^2 = 0``.

    The square is checked twice: as ``[Q_L, Q_+] = 0`` over the rationals and
    as ``Q(h)^2 = 0`` with dual-number coefficients.
    """
    rep = Report("compatible")
    dd = pair.dd
    for g in range(len(dd)):
        rep.checked += 1
        img = d.Q_plus.image(g)
        for m, c in img.items():
            if mono_degree(m, dd) != dd[g] + 1:
                rep.fail(("degree", _gen_name(pair, g)), {m: c})
        need = 1 if g < pair.nA else 2
        bad = {m: c for m, c in img.items() if pair.n_b(m) < need}
        if bad:
            what = "Q+(A^) has a term outside O(A) (x) O+(B)" if g < pair.nA else \
                "Q+(B^) has a term outside O(A) (x) S>=2(B^)"
            rep.fail((what, _gen_name(pair, g)), bad)
    rep.checked += 1
    br = commutator(pair.L.Q, d.Q_plus)
    if not br.is_zero():
        rep.fail("[Q_L, Q+] != 0", {_gen_name(pair, g): p for g, p in br.images.items() if p})
    rep.checked += 1
    Qh = dual_derivation(pair.L.Q, d.Q_plus)
    sq = commutator(Qh, Qh)
    sq_body, sq_soul = _split_derivation(sq)
    if not sq_soul.is_zero():
        rep.fail("Q(h)^2 != 0", {_gen_name(pair, g): p for g, p in sq_soul.images.items()})
    if not sq_body.is_zero():
        rep.fail("Q_L^2 != 0", None)
    rep.notes["scalar_and_composition_agree"] = br.is_zero() == sq_soul.is_zero()
    return rep


def _apply_sigma(g: GaugeMap, p: dict) -> dict:
    """``(1 + h lambda)(p)`` with DualScalar output."""
    out = {m: DualScalar.lift(c) for m, c in p.items()}
    padd(out, g.psi(p), H)
    return out


def check_gauge(pair: SHLiePair, d1: Deformation, d2: Deformation, g: GaugeMap) -> Report:
    """``Q_+ - Qbar_+ = [Q_L, lambda]`` on generators, cross-checked against
    ``sigma Q(h) = Qbar(h) sigma`` over dual numbers."""
    rep = Report("gauge")
    rep.merge(g.validate(pair))
    res = d1.Q_plus - d2.Q_plus - commutator(pair.L.Q, g.psi)
    Qh = dual_derivation(pair.L.Q, d1.Q_plus)
    Qbar = dual_derivation(pair.L.Q, d2.Q_plus)
    for gen in range(len(pair.dd)):
        rep.checked += 1
        r = res.image(gen)
        if r:
            rep.fail(("Q+ - Qbar+ - [Q_L, lambda]", _gen_name(pair, gen)), r)
        x = {(gen,): Fraction(1)}
        lhs = _apply_sigma(g, Qh(x))
        rhs = Qbar(_apply_sigma(g, x))
        diff = padd(dict(lhs), rhs, -1)
        if bool(diff) != bool(r):
            rep.fail(("sigma Q(h) != Qbar(h) sigma disagrees with the residual", _gen_name(pair, gen)), diff)
    return rep


def delta_extraction_check(pair: SHLiePair, d: Deformation) -> Report:
    """``delta_+`` from ``Q_+`` equals the soul of ``delta`` of ``Q(h)``."""
    rep = Report("delta+ extraction")
    dec = decompose_Q(dual_pair(pair, d))
    body, soul = _split_derivation(dec.delta)
    rep.checked += 1
    if soul != d.delta_plus(pair):
        rep.fail("delta+ != soul(delta(Q(h)))", soul.images)
    if body != decompose_Q(pair).delta:
        rep.fail("body(delta(Q(h))) != delta", body.images)
    return rep


# --- deformed Atiyah cocycles -----------------------------------------------------------

@dataclass
class DeformedAtiyah:
    """``alpha^{E[h]} = body + h soul``."""
    pair: SHLiePair
    module: AModule
    deformation: Deformation
    body: AtiyahCocycle
    soul: AtiyahCocycle
    route: str = "operator"

    @property
    def element(self) -> dict:
        out = {k: DualScalar(c) for k, c in self.body.element.items()}
        for k, c in self.soul.element.items():
            out[k] = out.get(k, DualScalar()) + H * c
        return {k: v for k, v in out.items() if v}

    def is_cocycle(self) -> bool:
        """Body and soul are cocycles separately: the coefficient differential is not deformed."""
        F = self.body.coefficient_module
        return all(not apply_connection(F.base.Q, F.D, a.as_coefficients(), F.dd)
                   for a in (self.body, self.soul))

    def render(self) -> str:
        return "%s + h*(%s)" % (self.body.render(), self.soul.render())


def _delta_applied(pair: SHLiePair, module: AModule, delta: Derivation) -> dict:
    out: dict = {}
    for e, img in module.D.items():
        for (m, eo), c in img.items():
            for (mm, j), cc in pair.J_B(delta.apply_mono(m)).items():
                _dadd(out, {(mm, (j, eo, e)): c * cc})
    return out


def deformed_atiyah(pair: SHLiePair, module: AModule, d: Deformation, route: str = "operator") -> DeformedAtiyah:
    """``alpha^E + h [d_A, delta_+]``.

    ``route="operator"`` applies ``delta`` and ``delta_+`` to ``D^{A,E}``;
    ``route="brackets"`` runs the bracket-side computation over ``Q[h]``.
    """
    if route == "operator":
        body = atiyah_operator_oracle(pair, module)
        soul = AtiyahCocycle(pair, module, _delta_applied(pair, module, d.delta_plus(pair)), "operator")
    elif route == "brackets":
        ph = dual_pair(pair, d)
        mh = AModule(ph.A, module.space, module.D, module.name)
        el = atiyah_cocycle(ph, mh).element
        b, s = split(el)
        body = AtiyahCocycle(pair, module, b, "brackets")
        soul = AtiyahCocycle(pair, module, s, "brackets")
    else:
        raise ValueError("unknown route %r" % route)
    return DeformedAtiyah(pair, module, d, body, soul, route)


# --- gauge invariance ---------------------------------------------------------------------

@dataclass
class GaugeWitness:
    """``W = [Psi_1, D^E]`` with ``alpha - alphabar = h d W``."""
    W: dict                 # same keys as AtiyahCocycle.element
    difference: dict        # soul(alpha) - soul(alphabar); bodies agree
    boundary: dict
    report: Report = field(default_factory=lambda: Report("gauge invariance"))

    @property
    def holds(self) -> bool:
        return self.report.ok


def gauge_witness(pair: SHLiePair, module: AModule, g: GaugeMap) -> dict:
    """``W = [Psi_1, D^E]``: ``Psi_1`` applied to the coefficients of ``D^E(e)``.

    ``Psi_1`` kills ``E`` so the commutator reduces to ``Psi_1 o D^E`` on
    the basis; it is O(A)-linear because ``Psi_1`` vanishes on ``O(A)`` after
    ``J``.
    """
    return _delta_applied(pair, module, g.Psi(pair, 1))


def _boundary(pair: SHLiePair, module: AModule, W: dict) -> dict:
    wc = AtiyahCocycle(pair, module, W)
    F = coefficient_module(pair, module)
    bd = apply_connection(F.base.Q, F.D, wc.as_coefficients(), F.dd)
    nE = module.space.dim
    return {(m, (t // (nE * nE), (t % (nE * nE)) // nE, t % nE)): c for (m, t), c in bd.items()}


def verify_gauge_invariance(pair: SHLiePair, module: AModule, d1: Deformation, d2: Deformation,
                            g: GaugeMap) -> GaugeWitness:
    """Check ``alpha^{E[h]} - alphabar^{E[h]} = h d_A W`` exactly.

    Raises :class:`GaugeCheckFailed` when ``g`` does not relate ``d1`` and
    ``d2`` or when the identity fails.
    """
    pre = check_gauge(pair, d1, d2, g)
    if not pre:
        raise GaugeCheckFailed("deformations are not related by the given gauge map", pre)
    a1 = deformed_atiyah(pair, module, d1)
    a2 = deformed_atiyah(pair, module, d2)
    W = gauge_witness(pair, module, g)
    diff = dict(a1.soul.element)
    _dadd(diff, a2.soul.element, -1)
    bd = _boundary(pair, module, W)
    rep = Report("gauge invariance")
    rep.checked += 2
    if a1.body.element != a2.body.element:
        rep.fail("bodies differ", None)
    if diff != bd:
        rep.fail("soul difference != d W", {"difference": diff, "dW": bd})
        raise GaugeCheckFailed("alpha - alphabar != h dW", rep)
    return GaugeWitness(W, diff, bd, rep)


# --- cohomology over dual numbers --------------------------------------------------------

@dataclass
class DualDimensions:
    degree: int
    rational: int
    dual: int          # dimension over Q of H^n of the complex tensored with Q[h]
    body_soul_split: bool


def dual_cohomology_dims(module: AModule, n: int, max_weight: int) -> DualDimensions:
    """``H^n`` of ``C (x) Q[h]`` with the differential run over DualScalar.

    The Q-basis of ``C (x) Q[h]`` is ``x`` and ``h x``; the differential
    matrix is assembled from dual-number images and its body/soul blocks are
    checked to be ``diag(d, d)``.
    """
    cx = TruncatedComplex(module, max_weight)
    Qh = Derivation(module.dd, 1, {g: _lift_poly(p) for g, p in module.base.Q.images.items()})
    Dh = {e: {k: DualScalar(c) for k, c in img.items()} for e, img in module.D.items()}

    def cols(deg):
        basis = cx.basis(deg)
        idx = {x: i for i, x in enumerate(cx.basis(deg + 1))}
        m = len(idx)
        out = []
        for scal in (DualScalar(1), H):
            for x in basis:
                img = apply_connection(Qh, Dh, {x: scal}, cx.dd)
                col = {}
                for k, v in img.items():
                    if len(k[0]) > cx.N:
                        continue
                    v = DualScalar.lift(v)
                    if v.body:
                        col[idx[k]] = v.body
                    if v.soul:
                        col[m + idx[k]] = v.soul
                out.append(col)
        return out

    def block_ok(deg, cs):
        nb = cx.dim(deg)
        m = cx.dim(deg + 1)
        ref = cx.columns(deg)
        for i in range(nb):
            if cs[i] != ref[i] or cs[nb + i] != {k + m: v for k, v in ref[i].items()}:
                return False
        return True

    cn = cols(n)
    cp = cols(n - 1) if cx.dim(n - 1) else []
    ok = block_ok(n, cn) and (not cp or block_ok(n - 1, cp))
    dim_n = 2 * cx.dim(n)
    rk_n = linalg.rank(cn) if cn else 0
    rk_p = linalg.rank(cp) if cp else 0
    dual_dim = dim_n - rk_n - rk_p
    r_n = linalg.rank(cx.columns(n)) if cx.dim(n) else 0
    r_p = linalg.rank(cx.columns(n - 1)) if cx.dim(n - 1) else 0
    return DualDimensions(n, cx.dim(n) - r_n - r_p, dual_dim, ok)


__all__ = [
    "DeformedAtiyah", "Deformation", "DualDimensions", "GaugeCheckFailed", "GaugeMap", "GaugeWitness",
    "check_compatible", "check_gauge", "deformed_atiyah", "delta_extraction_check", "dual_cohomology_dims",
    "dual_derivation", "dual_pair", "gauge_transform", "gauge_witness", "inner_deformation",
    "verify_gauge_invariance",
]
