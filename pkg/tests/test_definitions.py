from fractions import Fraction

import pytest

from shatiyah.atiyah import atiyah_operator_oracle
from shatiyah.definitions import (DefinitionError, DefinitionSyntaxError, DegreeMismatch, DuplicateKey,
                                  OddRepetition, UnknownName, dumps, load, parse, parse_coeff)
from shatiyah.fixtures import delta_pair

from conftest import EXAMPLES

HEADER = """\
field: Q
L:
  basis:
    - {name: a, degree: -1, part: A}
    - {name: c, degree: -1, part: A}
    - {name: b, degree: 0, part: B}
"""

SHIPPED = sorted(EXAMPLES.glob("*.shl"))


def test_all_examples_are_shipped():
    assert [p.name for p in SHIPPED] == ["abext.shl", "delta-pair.shl", "k-pair.shl", "liepair.shl"]


@pytest.mark.parametrize("path", SHIPPED, ids=lambda p: p.name)
def test_roundtrip(path):
    df = parse(path)
    again = load(dumps(df))
    assert again.pair.L.Q == df.pair.L.Q
    assert list(again.pair.L.space.names()) == list(df.pair.L.space.names())
    assert again.pair.nA == df.pair.nA
    assert {n: m.D for n, m in again.modules.items()} == {n: m.D for n, m in df.modules.items()}
    assert {n: d.Q_plus for n, d in again.deformations.items()} == \
        {n: d.Q_plus for n, d in df.deformations.items()}
    assert {n: g.psi for n, g in again.gauges.items()} == {n: g.psi for n, g in df.gauges.items()}
    assert dumps(again) == dumps(df)


def test_delta_pair_file_matches_the_fixture():
    df = parse(EXAMPLES / "delta-pair.shl")
    fx = delta_pair()
    assert df.pair.L.Q == fx.L.Q
    assert atiyah_operator_oracle(df.pair, df.modules.get("B") or _quot(df)) == \
        atiyah_operator_oracle(fx, _quot_fx(fx))


def _quot(df):
    from shatiyah.shlie import quotient_module
    return quotient_module(df.pair)


def _quot_fx(pair):
    from shatiyah.shlie import quotient_module
    return quotient_module(pair)


def test_out_of_order_inputs_fold_the_sign():
    a = load(HEADER + "brackets:\n  - inputs: [a, c, b]\n    output: [{basis: a, coeff: 1}]\n")
    b = load(HEADER + "brackets:\n  - inputs: [c, b, a]\n    output: [{basis: a, coeff: -1}]\n")
    assert a.pair.L.Q == b.pair.L.Q
    assert b.normalizations[0].sign == -1
    assert list(b.normalizations[0].canonical) == ["a", "c", "b"]


def test_entry_order_does_not_matter():
    text1 = HEADER + ("brackets:\n"
                      "  - inputs: [a, c, b]\n    output: [{basis: a, coeff: 1}]\n"
                      "  - inputs: [b, a]\n    output: [{basis: b, coeff: 2}]\n")
    text2 = HEADER + ("brackets:\n"
                      "  - inputs: [a, b]\n    output: [{basis: b, coeff: 2}]\n"
                      "  - inputs: [c, a, b]\n    output: [{basis: a, coeff: -1}]\n")
    assert dumps(load(text1)) == dumps(load(text2))


@pytest.mark.parametrize("text, exc, line", [
    (HEADER + "brackets:\n  - inputs: [a, c]\n    output: [{basis: b, coeff: 1}]\n", DegreeMismatch, 8),
    (HEADER + "brackets:\n  - inputs: [a, a, b]\n    output: [{basis: b, coeff: 1}]\n", OddRepetition, 8),
    (HEADER + "brackets:\n  - inputs: [a, zz]\n    output: [{basis: a, coeff: 1}]\n", UnknownName, 8),
    (HEADER + "brackets: [\n", DefinitionSyntaxError, None),
    ("field: Q\nfield: Q\n", DuplicateKey, 2),
    (HEADER.replace("part: B", "part: C"), DefinitionError, 6),
    ("field: R\nL: {basis: []}\n", DefinitionError, 1),
])
def test_input_errors_carry_positions(text, exc, line):
    with pytest.raises(exc) as info:
        load(text)
    if line is not None:
        assert info.value.line == line
    assert info.value.column is not None or line is None


def test_duplicate_canonical_keys_are_rejected():
    text = HEADER + ("brackets:\n"
                     "  - inputs: [a, c, b]\n    output: [{basis: b, coeff: 1}]\n"
                     "  - inputs: [c, a, b]\n    output: [{basis: b, coeff: 1}]\n")
    with pytest.raises(DefinitionError):
        load(text)


def test_coefficients_are_exact():
    assert parse_coeff(3) == 3
    assert parse_coeff("-7/3") == Fraction(-7, 3)
    for bad in (0.5, True, "x", "1.5"):
        with pytest.raises(DefinitionError):
            parse_coeff(bad)


def test_missing_file():
    with pytest.raises(DefinitionError):
        parse(EXAMPLES / "nope.shl")
