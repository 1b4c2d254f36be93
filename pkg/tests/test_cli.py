import io
import json
import subprocess
import sys

import pytest

from shatiyah.cli import run

from conftest import EXAMPLES

K = str(EXAMPLES / "k-pair.shl")
DELTA = str(EXAMPLES / "delta-pair.shl")
ABEXT = str(EXAMPLES / "abext.shl")
LIE = str(EXAMPLES / "liepair.shl")


def cli(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def test_atiyah_k_pair_golden():
    code, out = cli("atiyah", K, "--module", "E")
    assert code == 0
    assert "alpha_2(a1,a2,b,e) = -13*e" in out
    assert out.count("alpha_") == 1
    assert out.rstrip().endswith("result: PASS")


def test_class_k_pair_is_nonvanishing():
    code, out = cli("class", K, "--module", "E", "--max-weight", "3")
    assert code == 0 and "verdict: NONVANISHING (exact)" in out


def test_class_abelian_extension_vanishes():
    code, out = cli("class", ABEXT, "--module", "E")
    assert code == 0 and "VANISHES (primitive verified" in out


def test_bracket_delta_pair():
    code, out = cli("bracket", DELTA, "--degree", "1")
    assert code == 0
    assert "[b[-2], b[-2]] = a1^ (x) b[-2]" in out


@pytest.mark.parametrize("argv", [
    ("validate", K), ("validate", DELTA), ("validate", LIE), ("validate", ABEXT),
    ("atiyah", DELTA), ("atiyah", LIE, "--module", "E"), ("oracle", ABEXT, "--module", "E"),
    ("action", K, "--module", "E", "--degree", "2", "--degree", "2"),
    ("deform", K, "--module", "E", "--deformation", "d1", "--deformation", "d2", "--gauge", "g1"),
    ("deform", DELTA, "--deformation", "d1", "--deformation", "d2", "--gauge", "g1"),
    ("cohomology", DELTA, "--module", "B^xEnd(B)", "--degree", "1", "--degree", "2", "--max-weight", "3"),
])
def test_commands_pass_on_examples(argv):
    code, out = cli(*argv)
    assert code == 0, out


def test_wrong_gauge_is_a_math_failure():
    code, out = cli("deform", K, "--module", "E", "--deformation", "d1", "--deformation", "d1", "--gauge", "g1")
    assert code == 1
    assert "result: FAIL" in out


@pytest.mark.parametrize("argv", [
    ("atiyah", K, "--module", "NOPE"),
    ("atiyah", str(EXAMPLES / "missing.shl")),
    ("deform", K, "--deformation", "nope"),
    ("class", K, "--max-weight", "-1"),
])
def test_input_errors_exit_2(argv, capsys):
    code, _ = cli(*argv)
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_degree_mismatch_reports_the_position(tmp_path, capsys):
    bad = tmp_path / "bad.shl"
    bad.write_text("field: Q\nL:\n  basis:\n    - {name: a, degree: -1, part: A}\n"
                   "    - {name: b, degree: 0, part: B}\nbrackets:\n"
                   "  - inputs: [a, b]\n    output: [{basis: a, coeff: 1}]\n")
    code, _ = cli("validate", str(bad))
    assert code == 2
    assert "line 7" in capsys.readouterr().err


def test_json_mirrors_text():
    _, text = cli("atiyah", K, "--module", "E")
    code, raw = cli("atiyah", K, "--module", "E", "--json")
    doc = json.loads(raw)
    assert code == 0 and doc["result"] == "PASS"
    assert doc["command"] == "atiyah"
    flat = json.dumps(doc)
    assert "-13*e" in flat and "-13*e" in text


def test_output_is_deterministic_and_jobs_do_not_change_it():
    argv = ("cohomology", DELTA, "--module", "B^xEnd(B)", "--degree", "0", "--degree", "1",
            "--degree", "2", "--max-weight", "3")
    a = cli(*argv)
    b = cli(*argv)
    c = cli(*argv, "--jobs", "3")
    assert a == b == c


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "shatiyah", "atiyah", K, "--module", "E"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "-13*e" in proc.stdout


def test_verbose_echoes_normalization():
    code, out = cli("validate", DELTA, "-v")
    assert code == 0
    assert "(b, c, a0) -> (a0, c, b), sign -1" in out
