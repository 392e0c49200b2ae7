"""Command line behavior: verbs, exit codes, output formats, and
diagnostics, all exercised in process."""

import json

import pytest

from mzkernel.cli import main
from mzkernel.instancefile import parse_instance

VG_GF4_Z6 = """\
group: Z6
field: GF(4)
row: 1, 0, 0, 0, 0, 0
"""

VG_GF7_Z6 = """\
group: Z6
field: GF(7)
row: 1, 0, 0, 0, 0, 0
"""

ZERO_GF2_Z4 = """\
group: Z4
field: GF(2)
row: 0, 0, 0, 0
"""

SMALL_GF2_Z2 = """\
group: Z2
field: GF(2)
row: 0, 1
"""

CHARS_GF3_Z2 = """\
group: Z2
field: GF(3)
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def put(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# ---------------------------------------------------------------------------
# decide

def test_decide_notmz_text(tmp_path, capsys):
    path = put(tmp_path, "vg.txt", VG_GF4_Z6)
    code, out, err = run(capsys, "decide", path)
    assert code == 1
    assert err == ""
    assert out.startswith("mzkernel 0.1.0\n")
    assert "verdict: NotMZ  (zero-sum-subset)" in out
    assert "column group: Z3  [characters of the p'-part, p = 2]" in out
    assert "dead columns: (none)" in out
    assert "live columns: 1 2 3" in out
    assert "witness: zero-sum subset of live columns {1, 2}" in out
    assert "search path: gray-python" in out


def test_decide_mz_exit_zero(tmp_path, capsys):
    path = put(tmp_path, "vg7.txt", VG_GF7_Z6)
    code, out, _ = run(capsys, "decide", path)
    assert code == 0
    assert "verdict: MZ  (no-zero-sum-subset)" in out
    assert "column group: Z6  [characters of the full group]" in out


def test_decide_witness_only(tmp_path, capsys):
    path = put(tmp_path, "vg.txt", VG_GF4_Z6)
    code, out, _ = run(capsys, "decide", path, "--witness-only")
    assert code == 1
    assert out == "zero-sum subset of live columns {1, 2}\n"
    path = put(tmp_path, "zero.txt", ZERO_GF2_Z4)
    code, out, _ = run(capsys, "decide", path, "--witness-only")
    assert code == 0
    assert out == "none\n"


def test_decide_json_is_stable_and_complete(tmp_path, capsys):
    path = put(tmp_path, "vg.txt", VG_GF4_Z6)
    code1, out1, _ = run(capsys, "decide", path, "--json")
    code2, out2, _ = run(capsys, "decide", path, "--json")
    assert code1 == code2 == 1
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["provenance"]["engine"] == "mzkernel 0.1.0"
    assert "modulus z^2 + z + 1" in doc["provenance"]["field"]
    assert "last factor fastest" in doc["provenance"]["group"]
    assert doc["verdict"] == "NotMZ"
    assert doc["witness"] == {"type": "zero_sum_subset", "columns": [1, 2]}
    assert doc["modular"] == {"p": 2, "sylow_order": 2, "coprime_order": 3}
    assert doc["search"]["exact"] is True


def test_exit_code_is_format_independent(tmp_path, capsys):
    path = put(tmp_path, "vg.txt", VG_GF4_Z6)
    codes = {run(capsys, "decide", path)[0],
             run(capsys, "decide", path, "--json")[0],
             run(capsys, "decide", path, "--witness-only")[0]}
    assert codes == {1}


def test_decide_equation_failure_text(tmp_path, capsys):
    path = put(tmp_path, "eq.txt", SMALL_GF2_Z2)
    code, out, _ = run(capsys, "decide", path)
    assert code == 1
    assert "verdict: NotMZ  (offset-equation-failure)" in out
    assert "offset equation failure: row 1, character 1, coset offset 2" in out


# ---------------------------------------------------------------------------
# table verbs

def test_characters_table(tmp_path, capsys):
    path = put(tmp_path, "c.txt", CHARS_GF3_Z2)
    code, out, _ = run(capsys, "characters", path)
    assert code == 0
    assert out == "chi_1: 1, 1\nchi_2: 1, 2\n"


def test_idempotents_table(tmp_path, capsys):
    path = put(tmp_path, "c.txt", CHARS_GF3_Z2)
    code, out, _ = run(capsys, "idempotents", path)
    assert code == 0
    assert out == "e_1: 2, 2\ne_2: 2, 1\n"


def test_gamma_table(tmp_path, capsys):
    path = put(tmp_path, "vg.txt", VG_GF4_Z6)
    code, out, _ = run(capsys, "gamma", path)
    assert code == 0
    assert out == "column group: Z3\ngamma_1: 1, 1, 1\n"


def test_gamma_zero_map(tmp_path, capsys):
    path = put(tmp_path, "zero.txt", ZERO_GF2_Z4)
    code, out, _ = run(capsys, "gamma", path)
    assert code == 0
    assert out == "zero map: no gamma matrix\n"


def test_characters_json(tmp_path, capsys):
    path = put(tmp_path, "c.txt", CHARS_GF3_Z2)
    code, out, _ = run(capsys, "characters", path, "--json")
    assert code == 0
    assert json.loads(out) == [["1", "1"], ["1", "2"]]


# ---------------------------------------------------------------------------
# oracle

def test_oracle_budget_refusal_and_override(tmp_path, capsys):
    path = put(tmp_path, "vg.txt", VG_GF4_Z6)
    code, out, err = run(capsys, "oracle", path)
    assert code == 2
    assert out == ""
    assert err.startswith("error: ")
    assert "max_algebra_size" in err
    code, out, err = run(capsys, "oracle", path, "--budget", "4096")
    assert code == 1
    assert err == ""
    assert "oracle verdict: NotMZ  (|K[G]| = 4096" in out
    assert "escapes at every exponent" in out


def test_oracle_mz_exit_zero(tmp_path, capsys):
    path = put(tmp_path, "zero.txt", ZERO_GF2_Z4)
    code, out, _ = run(capsys, "oracle", path)
    assert code == 0
    assert "oracle verdict: MZ" in out


def test_oracle_budget_from_instance_file(tmp_path, capsys):
    text = VG_GF4_Z6 + "budget: max_algebra_size=4096\n"
    path = put(tmp_path, "vgb.txt", text)
    code, out, _ = run(capsys, "oracle", path)
    assert code == 1
    assert "oracle verdict: NotMZ" in out


def test_oracle_json_counterexample(tmp_path, capsys):
    path = put(tmp_path, "eq.txt", SMALL_GF2_Z2)
    code, out, _ = run(capsys, "oracle", path, "--json")
    assert code == 1
    doc = json.loads(out)
    assert doc["verdict"] == "NotMZ"
    assert doc["counterexample"]["u"] == "1"
    assert doc["counterexample"]["a"] == "g[1]"


# ---------------------------------------------------------------------------
# crosscheck

def test_crosscheck_agreeing_corpus(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "a.txt").write_text(SMALL_GF2_Z2)
    (corpus / "b.txt").write_text(ZERO_GF2_Z4)
    (corpus / "c.txt").write_text("group: Z2\nfield: GF(3)\nrow: 1, 0\n")
    code, out, _ = run(capsys, "crosscheck", str(corpus))
    assert code == 0
    assert "DISAGREEMENT" not in out
    assert out.endswith("3 instances: 2 MZ, 1 NotMZ, 0 disagreements\n")


def test_crosscheck_empty_directory(tmp_path, capsys):
    corpus = tmp_path / "empty"
    corpus.mkdir()
    code, out, _ = run(capsys, "crosscheck", str(corpus))
    assert code == 0
    assert out == "0 instances: 0 MZ, 0 NotMZ, 0 disagreements\n"


def test_crosscheck_rejects_missing_directory(tmp_path, capsys):
    code, out, err = run(capsys, "crosscheck", str(tmp_path / "nope"))
    assert code == 2
    assert err.startswith("error: ")


# ---------------------------------------------------------------------------
# emit-instance

def test_emit_instance_round_trip(tmp_path, capsys):
    code, out1, _ = run(capsys, "emit-instance", "Z2 x Z3", "GF(4)",
                        "--rows", "2", "--seed", "5")
    code2, out2, _ = run(capsys, "emit-instance", "Z2 x Z3", "GF(4)",
                         "--rows", "2", "--seed", "5")
    assert code == code2 == 0
    assert out1 == out2
    assert "# seed=5" in out1
    inst = parse_instance(out1)
    assert inst.group.orders == (2, 3)
    assert len(inst.rows) == 2 and len(inst.rows[0]) == 6
    # a different seed gives different rows
    _, out3, _ = run(capsys, "emit-instance", "Z2 x Z3", "GF(4)",
                     "--rows", "2", "--seed", "6")
    assert out3 != out1


def test_emitted_instance_feeds_decide(tmp_path, capsys):
    _, text, _ = run(capsys, "emit-instance", "Z6", "GF(7)", "--seed", "11")
    path = put(tmp_path, "emitted.txt", text)
    code, out, _ = run(capsys, "decide", path)
    assert code in (0, 1)
    assert "verdict:" in out


# ---------------------------------------------------------------------------
# diagnostics

def test_missing_instance_file(tmp_path, capsys):
    code, out, err = run(capsys, "decide", str(tmp_path / "absent.txt"))
    assert code == 2
    assert err.startswith("error: ")


def test_bad_literal_diagnostic_names_line_and_position(tmp_path, capsys):
    text = "group: Z2\nfield: GF(3)\nrow: 1//2, 0\n"
    path = put(tmp_path, "bad.txt", text)
    code, _, err = run(capsys, "decide", path)
    assert code == 2
    assert f"{path}:3" in err
    assert "column 1" in err
    assert "expected a denominator" in err


def test_bad_field_spec_diagnostic(tmp_path, capsys):
    path = put(tmp_path, "badfield.txt", "group: Z2\nfield: GF(6)\nrow: 1, 0\n")
    code, _, err = run(capsys, "decide", path)
    assert code == 2
    assert "prime power" in err


def test_duplicate_section_diagnostic(tmp_path, capsys):
    path = put(tmp_path, "dup.txt", "group: Z2\ngroup: Z3\nfield: GF(3)\nrow: 1, 0\n")
    code, _, err = run(capsys, "decide", path)
    assert code == 2
    assert "duplicate group section" in err


def test_unknown_budget_key_diagnostic(tmp_path, capsys):
    path = put(tmp_path, "bb.txt", SMALL_GF2_Z2 + "budget: max_widgets=3\n")
    code, _, err = run(capsys, "decide", path)
    assert code == 2
    assert "budget" in err


def test_split_failure_surfaces_as_user_error(tmp_path, capsys):
    path = put(tmp_path, "split.txt", "group: Z3\nfield: GF(5)\nrow: 1, 0, 0\n")
    code, _, err = run(capsys, "decide", path)
    assert code == 2
    assert "not split" in err


def test_size_cap_error_and_unsafe_large(tmp_path, capsys):
    rows = ", ".join(["1"] * 65)
    path = put(tmp_path, "big.txt", f"group: Z65\nfield: Q(zeta_65)\nrow: {rows}\n")
    code, _, err = run(capsys, "decide", path)
    assert code == 2
    assert "exceeds the default bound" in err
    code, out, _ = run(capsys, "decide", path, "--unsafe-large")
    assert code == 0
    assert "verdict: MZ" in out


def test_backend_flag_accepts_numpy(tmp_path, capsys):
    path = put(tmp_path, "vg.txt", VG_GF4_Z6)
    code, out, _ = run(capsys, "decide", path, "--backend", "numpy")
    assert code == 1
    assert "verdict: NotMZ" in out
