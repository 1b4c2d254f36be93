import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shatiyah import _echelon_py, linalg

try:
    from shatiyah import _echelon as compiled
except ImportError:  # pragma: no cover - only when the extension was not built
    compiled = None

sparse_rows = st.lists(
    st.dictionaries(st.integers(0, 7), st.integers(-5, 5).filter(bool), max_size=4),
    max_size=8,
)


@pytest.mark.skipif(compiled is None, reason="compiled kernel not built")
@given(sparse_rows)
def test_compiled_and_python_kernels_agree(rows):
    assert compiled.echelon(rows) == _echelon_py.echelon(rows)


@given(sparse_rows)
def test_rank_plus_nullity(rows):
    ncols = 8
    ker = linalg.kernel(rows, ncols)
    assert linalg.rank(rows) + len(ker) == ncols
    for v in ker:
        for r in rows:
            assert sum(c * v.get(j, 0) for j, c in r.items()) == 0


@settings(max_examples=50)
@given(st.integers(0, 10 ** 6))
def test_solve_returns_solution_or_certificate(seed):
    rng = random.Random(seed)
    cols = [{i: Fraction(rng.randint(-2, 2)) for i in range(4) if rng.random() < 0.5} for _ in range(3)]
    cols = [{i: v for i, v in c.items() if v} for c in cols]
    b = {i: Fraction(rng.randint(-2, 2)) for i in range(4)}
    b = {i: v for i, v in b.items() if v}
    y, u = linalg.solve(cols, b)
    if y is not None:
        assert linalg.matvec(cols, y) == b
    else:
        for c in cols:
            assert sum(u.get(i, 0) * v for i, v in c.items()) == 0
        assert sum(u.get(i, 0) * v for i, v in b.items()) != 0


def test_use_backend_switches_and_restores():
    before = linalg.BACKEND
    linalg.use_backend("python")
    assert linalg.kernel_module() is _echelon_py
    if compiled is not None:
        linalg.use_backend("compiled")
        assert linalg.kernel_module() is compiled
    linalg.use_backend(before)
    with pytest.raises(ValueError):
        linalg.use_backend("fortran")


def test_rref_has_unit_pivots():
    red = linalg.rref([{0: 2, 1: 4}, {0: 1, 2: 3}])
    assert all(r[p] == 1 for p, r in red.items())
    assert set(red) == {0, 1}
