"""Elements of ``O(V) (x) T`` and the operators acting on them.

An element is a dict ``{(monomial, t): coeff}`` where ``t`` indexes a basis
of the graded space ``T`` (often itself a tuple such as ``(beta, e)``).
An O(V)-linear operator ``X`` of degree ``d`` is stored by its values on
``1 (x) t``; it acts by ``X(w (x) t) = (-1)^{d|w|} w . X(t)``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .multilinear import Derivation, mono_degree, mul_mono

ZERO = Fraction(0)

Elem = dict


def eadd(target: Elem, x: Elem, c=1) -> Elem:
    if not c:
        return target
    for k, v in x.items():
        nv = target.get(k, ZERO) + c * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)
    return target


def esub(x: Elem, y: Elem) -> Elem:
    return eadd(dict(x), y, -1)


def escale(x: Elem, c) -> Elem:
    if not c:
        return {}
    return {k: c * v for k, v in x.items()}


def lmul(poly: Mapping, x: Elem, degs: Sequence[int]) -> Elem:
    """``w . (eta (x) t) = (w eta) (x) t``."""
    out: Elem = {}
    for w, cw in poly.items():
        for (m, t), c in x.items():
            s, mm = mul_mono(w, m, degs)
            if s:
                k = (mm, t)
                nv = out.get(k, ZERO) + s * cw * c
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
    return out


def apply_linear(X: Mapping, xdeg: int, x: Elem, degs: Sequence[int]) -> Elem:
    out: Elem = {}
    for (m, t), c in x.items():
        img = X.get(t)
        if not img:
            continue
        sign = -1 if (xdeg * mono_degree(m, degs)) & 1 else 1
        eadd(out, lmul({m: Fraction(sign) * c}, img, degs))
    return out


def apply_connection(Qd: Derivation | None, X: Mapping, x: Elem, degs: Sequence[int]) -> Elem:
    """``(Q + X)(w (x) t) = Q(w) (x) t + (-1)^{|w|} w . X(t)``."""
    out: Elem = {}
    if Qd is not None:
        for (m, t), c in x.items():
            for mm, cc in Qd.apply_mono(m).items():
                k = (mm, t)
                nv = out.get(k, ZERO) + c * cc
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
    eadd(out, apply_linear(X, 1, x, degs))
    return out


def compose(X: Mapping, xdeg: int, Y: Mapping, basis: Sequence, degs: Sequence[int]) -> dict:
    """Operator ``X o Y`` (both O-linear) on the listed basis of ``T``."""
    return {t: apply_linear(X, xdeg, Y.get(t, {}), degs) for t in basis}


def op_commutator(X: Mapping, xdeg: int, Y: Mapping, ydeg: int, basis, degs) -> dict:
    sign = -1 if (xdeg * ydeg) & 1 else 1
    out = {}
    for t in basis:
        a = apply_linear(X, xdeg, Y.get(t, {}), degs)
        b = apply_linear(Y, ydeg, X.get(t, {}), degs)
        out[t] = eadd(a, b, -sign)
    return out


def map_tags(x: Elem, f: Callable) -> Elem:
    """Relabel the ``T``-index of every term; ``f`` returns (sign, new_t) or None."""
    out: Elem = {}
    for (m, t), c in x.items():
        r = f(t)
        if r is None:
            continue
        s, nt = r
        eadd(out, {(m, nt): s * c})
    return out


def truncate(x: Elem, max_weight: int) -> Elem:
    return {k: v for k, v in x.items() if len(k[0]) <= max_weight}


def op_is_zero(X: Mapping) -> bool:
    return not any(X.values())


def elem_degree(x: Elem, degs, tdeg: Callable) -> int | None:
    ds = {mono_degree(m, degs) + tdeg(t) for (m, t) in x}
    if len(ds) > 1:
        raise ValueError("inhomogeneous element")
    return ds.pop() if ds else None
