"""Exact sparse linear algebra over Q.

Matrices are lists of sparse rows ``{col: Fraction}``.  Elimination runs on
integer rows (each row cleared of denominators) through the echelon kernel,
which is the compiled extension when it is importable and the pure-Python
module otherwise.  Set ``SHATIYAH_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import _echelon_py

BACKEND = "python"
_kernel = _echelon_py
if not os.environ.get("SHATIYAH_PURE"):
    try:
        from . import _echelon as _compiled  # type: ignore[attr-defined]
        _kernel = _compiled
        BACKEND = "compiled"
    except ImportError:
        pass


def use_backend(name: str):
    """Switch kernel at runtime (used by the benchmark)."""
    global _kernel, BACKEND
    if name == "python":
        _kernel, BACKEND = _echelon_py, "python"
    elif name == "compiled":
        from . import _echelon as _compiled  # type: ignore[attr-defined]
        _kernel, BACKEND = _compiled, "compiled"
    else:
        raise ValueError(name)


def kernel_module():
    return _kernel


def to_int_row(row: dict) -> dict:
    if not row:
        return {}
    m = lcm(*(Fraction(v).denominator for v in row.values()))
    return {k: int(Fraction(v) * m) for k, v in row.items() if v}


def echelon(rows: Sequence[dict]) -> dict:
    return _kernel.echelon([to_int_row(r) for r in rows])


def rank(rows: Sequence[dict]) -> int:
    return len(echelon(rows))


def transpose(rows: Sequence[dict], ncols: int | None = None) -> list[dict]:
    if ncols is None:
        ncols = 1 + max((k for r in rows for k in r), default=-1)
    out = [dict() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j, v in r.items():
            out[j][i] = v
    return out


def rref(rows: Sequence[dict]) -> dict:
    """Reduced row echelon form: ``{pivot: row}`` with pivot entry 1, Fractions."""
    piv = echelon(rows)
    red = {p: {k: Fraction(v, r[p]) for k, v in r.items()} for p, r in piv.items()}
    for p in sorted(red, reverse=True):
        rp = red[p]
        for q in red:
            if q < p and p in red[q]:
                c = red[q][p]
                rq = red[q]
                for k, v in rp.items():
                    nv = rq.get(k, 0) - c * v
                    if nv:
                        rq[k] = nv
                    else:
                        rq.pop(k, None)
    return red


def kernel(rows: Sequence[dict], ncols: int) -> list[dict]:
    """Basis of ``{x : A x = 0}`` for ``A`` given by rows; deterministic order."""
    red = rref(rows)
    free = [j for j in range(ncols) if j not in red]
    basis = []
    for f in free:
        v = {f: Fraction(1)}
        for p, r in red.items():
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def matvec(cols: Sequence[dict], x: dict) -> dict:
    """``A x`` with ``A`` stored by columns."""
    out: dict = {}
    for j, c in x.items():
        for i, v in cols[j].items():
            nv = out.get(i, 0) + c * v
            if nv:
                out[i] = nv
            else:
                out.pop(i, None)
    return out


def solve(cols: Sequence[dict], b: dict):
    """Solve ``A y = b`` with ``A`` given by columns.

    Returns ``(y, None)`` on success or ``(None, u)`` where ``u`` satisfies
    ``u^T A = 0`` and ``u . b != 0`` (an inconsistency certificate).
    """
    n = len(cols)
    piv = echelon(_rows_of(list(cols) + [dict(b)]))
    if n in piv:
        for u in kernel([dict(c) for c in cols], _nrows(cols, b)):
            if sum(u.get(i, 0) * v for i, v in b.items()) != 0:
                return None, u
        raise AssertionError("inconsistent system without certificate")
    # back substitution on the integer echelon form, free variables set to 0
    y: dict = {}
    for p in sorted(piv, reverse=True):
        r = piv[p]
        acc = Fraction(r.get(n, 0))
        for k, v in r.items():
            if k != p and k != n and k in y:
                acc -= v * y[k]
        if acc:
            y[p] = acc / r[p]
    return y, None


def _nrows(cols, b=None):
    m = max((i for c in cols for i in c), default=-1)
    if b:
        m = max(m, max(b))
    return m + 1


def _rows_of(cols: Sequence[dict]) -> list[dict]:
    nr = _nrows(cols)
    rows = [dict() for _ in range(nr)]
    for j, c in enumerate(cols):
        for i, v in c.items():
            rows[i][j] = v
    return rows
