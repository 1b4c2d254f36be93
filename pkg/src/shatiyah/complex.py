"""Weight-truncated Chevalley-Eilenberg complexes ``O^{<=N}(A) (x) E``.

The differential is ``Q_A + D^E``.  With ``lambda_0 = 0`` it never lowers
weight, so dropping monomials of weight above ``N`` is a quotient complex
and a chain map from the full complex.  In particular, if ``dy = z`` has no
solution in the truncation, it has none in the full complex either.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import linalg
from .graded import monomials
from .multilinear import mono_degree
from .operators import apply_connection, truncate
from .shlie import AModule

ONE = Fraction(1)


class NonzeroCurvature(ValueError):
    """The base algebra has lambda_0 != 0; truncation is not a quotient complex."""


class NotACocycle(ValueError):
    pass


@dataclass
class Cochain:
    """Element of ``O(A) (x) E``; ``terms`` maps ``(monomial, e)`` to a Fraction."""
    module: AModule
    terms: dict
    degree: int | None = None

    def __post_init__(self):
        self.terms = {k: Fraction(v) for k, v in self.terms.items() if v}
        if self.degree is None and self.terms:
            degs = {mono_degree(m, self.module.dd) + self.module.space.degree(e) for m, e in self.terms}
            if len(degs) != 1:
                raise ValueError("inhomogeneous cochain")
            self.degree = degs.pop()

    @property
    def weight(self) -> int:
        return max((len(m) for m, _ in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def render(self) -> str:
        return render_element(self.terms, self.module)


def render_mono(m, names) -> str:
    if not m:
        return "1"
    out = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        p = j - i
        out.append("%s^" % names[m[i]] + ("" if p == 1 else "**%d" % p))
        i = j
    return ".".join(out)


def render_element(terms: dict, mod: AModule) -> str:
    if not terms:
        return "0"
    names = mod.base.space.names()
    enames = mod.space.names()
    parts = []
    for (m, e), c in sorted(terms.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
        coef = "" if c == 1 else "-" if c == -1 else "%s*" % c
        parts.append("%s%s (x) %s" % (coef, render_mono(m, names), enames[e]))
    return " + ".join(parts).replace("+ -", "- ")


@dataclass
class NoSolutionUpToWeight:
    """``dy = z`` is inconsistent on the weight-``N`` truncation.

    ``certificate`` is a functional ``u`` on ``C^n`` vanishing on the image of
    ``d`` with ``u(z) != 0``.
    """
    max_weight: int
    degree: int
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return False


@dataclass
class CohomologyResult:
    degree: int
    dimension: int
    representatives: list
    kernel_dim: int
    image_rank: int
    cochain_dim: int
    exact: bool


class TruncatedComplex:
    def __init__(self, module: AModule, max_weight: int):
        A = module.base
        if A.is_curved:
            raise NonzeroCurvature("lambda_0 = %r is nonzero" % A.lambda0)
        self.module = module
        self.N = int(max_weight)
        self.dd = module.dd
        self._basis: dict[int, list] = {}
        self._index: dict[int, dict] = {}
        self._cols: dict[int, list] = {}
        by_deg: dict[int, list] = {}
        E = module.space
        for w in range(self.N + 1):
            for m in monomials(self.dd, w):
                md = mono_degree(m, self.dd)
                for e in range(E.dim):
                    by_deg.setdefault(md + E.degree(e), []).append((m, e))
        for d, b in by_deg.items():
            self._basis[d] = b
            self._index[d] = {x: i for i, x in enumerate(b)}

    # structure -------------------------------------------------------------

    @cached_property
    def exact_mode(self) -> bool:
        """All dual generators have degree >= 1: each degree is finite."""
        return all(d >= 1 for d in self.dd)

    def is_exact_at(self, n: int) -> bool:
        if not self.exact_mode:
            return False
        fmin = min(self.module.space.degrees, default=0)
        return self.N >= n + 1 - fmin

    def degrees(self) -> list[int]:
        return sorted(self._basis)

    def basis(self, n: int) -> list:
        return self._basis.get(n, [])

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def apply(self, terms: dict) -> dict:
        out = apply_connection(self.module.base.Q, self.module.D, terms, self.dd)
        return truncate(out, self.N)

    def columns(self, n: int) -> list[dict]:
        """Matrix of ``d: C^n -> C^{n+1}`` stored by columns."""
        if n not in self._cols:
            idx = self._index.get(n + 1, {})
            cols = []
            for x in self.basis(n):
                img = self.apply({x: ONE})
                col = {}
                for k, v in img.items():
                    if k not in idx:
                        raise AssertionError("differential left the truncated basis")
                    col[idx[k]] = v
                cols.append(col)
            self._cols[n] = cols
        return self._cols[n]

    def rows(self, n: int) -> list[dict]:
        return linalg.transpose(self.columns(n), self.dim(n + 1))

    def check_square_zero(self, n: int | None = None) -> bool:
        degs = [n] if n is not None else self.degrees()
        for d in degs:
            c1 = self.columns(d)
            c2 = self.columns(d + 1) if self.dim(d + 1) else []
            for col in c1:
                if col and linalg.matvec(c2, col):
                    return False
        return True

    # vectors ------------------------------------------------------------------

    def to_vector(self, z: Cochain | dict, n: int) -> dict:
        terms = z.terms if isinstance(z, Cochain) else z
        idx = self._index.get(n, {})
        v = {}
        for k, c in truncate(terms, self.N).items():
            if k not in idx:
                raise ValueError("cochain term %r not of degree %d" % (k, n))
            v[idx[k]] = Fraction(c)
        return v

    def to_cochain(self, v: dict, n: int) -> Cochain:
        b = self.basis(n)
        return Cochain(self.module, {b[i]: c for i, c in v.items()}, n)


def build(module: AModule, max_weight: int) -> TruncatedComplex:
    cx = TruncatedComplex(module, max_weight)
    if not cx.check_square_zero():
        raise AssertionError("d^2 != 0 on the truncation")
    return cx


def cohomology(cx: TruncatedComplex, n: int) -> CohomologyResult:
    dn = cx.rows(n)
    ker = linalg.kernel(dn, cx.dim(n))
    img_cols = cx.columns(n - 1) if cx.dim(n - 1) else []
    img_piv = linalg.echelon(img_cols)
    r_img = len(img_piv)
    reps = []
    piv = dict(img_piv)
    kmod = linalg.kernel_module()
    for v in ker:
        red = kmod.reduce_row(linalg.to_int_row(v), piv)
        if red:
            piv[min(red)] = red
            reps.append(cx.to_cochain(_reduce_mod_image(v, img_piv), n))
    return CohomologyResult(n, len(ker) - r_img, reps, len(ker), r_img, cx.dim(n), cx.is_exact_at(n))


def _reduce_mod_image(v: dict, img_piv: dict) -> dict:
    """Subtract image components along image pivots (Fractions)."""
    v = dict(v)
    for p in sorted(img_piv):
        c = v.get(p)
        if not c:
            continue
        r = img_piv[p]
        f = Fraction(c) / r[p]
        for k, x in r.items():
            nv = v.get(k, 0) - f * x
            if nv:
                v[k] = nv
            else:
                v.pop(k, None)
    return v


def solve_coboundary(cx: TruncatedComplex, z: Cochain):
    """A primitive ``y`` with ``dy = z`` on the truncation, or a certificate."""
    n = z.degree
    if z.is_zero():
        return Cochain(cx.module, {}, None)
    if cx.apply(z.terms):
        raise NotACocycle("dz != 0")
    cols = cx.columns(n - 1) if cx.dim(n - 1) else []
    b = cx.to_vector(z, n)
    if not cols:
        return NoSolutionUpToWeight(cx.N, n, dict(b))
    y, u = linalg.solve(cols, b)
    if y is None:
        return NoSolutionUpToWeight(cx.N, n, u)
    return cx.to_cochain(y, n - 1)


def default_weight(n: int) -> int:
    return max(n + 2, 0)
