# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of :mod:`shatiyah._echelon_py` (same algorithm, same output)."""
from math import gcd


cdef dict _primitive(dict row):
    cdef object g = 0
    cdef object v
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    cdef object lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        return {k: v // g for k, v in row.items()}
    return row


cpdef dict reduce_row(dict row, dict pivots):
    cdef dict prow, out
    cdef object a, c, g, ma, mc, nv, v
    cdef Py_ssize_t lead, k
    row = dict(row)
    while row:
        lead = min(row)
        prow = pivots.get(lead)
        if prow is None:
            return _primitive(row)
        a = prow[lead]
        c = row[lead]
        g = gcd(a, c)
        ma = a // g
        mc = c // g
        out = {}
        for k, v in row.items():
            if k != lead:
                out[k] = v * ma
        for k, v in prow.items():
            if k == lead:
                continue
            nv = out.get(k, 0) - mc * v
            if nv:
                out[k] = nv
            else:
                del out[k]
        row = out
    return row


cpdef dict echelon(list rows):
    cdef dict pivots = {}
    cdef dict red
    for r in rows:
        if not r:
            continue
        red = reduce_row(r, pivots)
        if red:
            pivots[min(red)] = red
    return pivots
