"""Fraction-free sparse row echelon form over the integers (pure Python).

Rows are dicts ``{column: int}``.  Rows are inserted one at a time and
reduced against the pivots found so far; every stored pivot row is
primitive (content 1) with a positive leading entry.
"""
from math import gcd


def _primitive(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {k: v // g for k, v in row.items()}
    return row


def reduce_row(row, pivots):
    """Reduce ``row`` against ``pivots`` (col -> primitive row); returns a new dict."""
    row = dict(row)
    while row:
        lead = min(row)
        prow = pivots.get(lead)
        if prow is None:
            return _primitive(row)
        a = prow[lead]
        c = row[lead]
        g = gcd(a, c)
        ma, mc = a // g, c // g
        out = {}
        for k, v in row.items():
            if k == lead:
                continue
            out[k] = v * ma
        for k, v in prow.items():
            if k == lead:
                continue
            nv = out.get(k, 0) - mc * v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        row = out
    return row


def echelon(rows):
    """Insert all rows; return ``{pivot column: primitive row}``."""
    pivots = {}
    for r in rows:
        if not r:
            continue
        red = reduce_row(r, pivots)
        if red:
            pivots[min(red)] = red
    return pivots
