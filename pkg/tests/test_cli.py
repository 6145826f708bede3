import json
import os
import subprocess
import sys

import pytest
from click.testing import CliRunner

from gtilt.cli import cli

from conftest import spec_path

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def run(*args):
    res = CliRunner().invoke(cli, list(args))
    return res.exit_code, res.output


def golden(name):
    with open(os.path.join(GOLDEN, name), encoding="utf-8") as fh:
        return fh.read()


def test_verify_tilting_golden_report():
    code, out = run("verify-tilting", spec_path("example1.spec"), "--window", "-4:4")
    assert code == 0
    assert out == golden("example1_verify_tilting.json")


def test_reports_are_deterministic():
    a = run("conditions", spec_path("example1.spec"))
    b = run("conditions", spec_path("example1.spec"))
    assert a == b
    assert a[1] == golden("example1_conditions.json")


def test_graded_example_one_is_crossed_product():
    code, out = run("graded", spec_path("example1.spec"))
    report = json.loads(out)
    assert code == 0
    assert report["verdict"] == "graded tilting" and report["crossed_product"] is True


def test_graded_oracle_on_example_two():
    code, out = run("graded", spec_path("example2.spec"), "--oracle")
    assert code == 0
    assert out == golden("example2_graded_oracle.json")
    direct = json.loads(out)["direct"]
    assert direct["R_dimension"] == 10 and direct["routes_agree"] and direct["identity_holds"]


def test_graded_oracle_refuses_infinite_group():
    code, out = run("graded", spec_path("example1.spec"), "--oracle")
    assert code == 1 and "finite" in json.loads(out)["reason"]


def test_regular_complex_passes():
    for name in ("example1.spec", "example2.spec"):
        code, _ = run("verify-tilting", spec_path(name), "--complex", "A")
        assert code == 0


def test_partial_complex_fails():
    code, out = run("verify-tilting", spec_path("example1.spec"), "--complex", "P")
    assert code == 1 and "iii" in json.loads(out)["failed"]


def test_endo_report():
    code, out = run("endo", spec_path("example1.spec"))
    assert code == 0 and out == golden("example1_endo.json")


def test_complete_returns_arrow_complex():
    code, out = run("complete", spec_path("example1.spec"))
    report = json.loads(out)
    assert code == 0 and report["complement"]["terms"] == {"0": [2], "1": [1]}


def test_scrambled_g_set_names_condition_e(tmp_path):
    text = open(spec_path("example1.spec"), encoding="utf-8").read().replace(
        "gset g = S1, S2, S3", "gset g = S2, S3, S1")
    p = tmp_path / "scrambled.spec"
    p.write_text(text)
    code, out = run("conditions", str(p))
    report = json.loads(out)
    assert code == 1
    assert report["conditions"]["e"] is False
    assert any(f["condition"] == "e" for f in report["failures"])


def test_input_errors_exit_three(tmp_path):
    code, out = run("verify-tilting", str(tmp_path / "missing.spec"))
    assert code == 3
    bad = tmp_path / "bad.spec"
    bad.write_text("[quiver]\nvertices = 2\narrow a = 1 -> 5\n")
    code, out = run("verify-tilting", str(bad))
    assert code == 3 and "line 3" in json.loads(out)["error"]
    code, _ = run("verify-tilting", spec_path("example1.spec"), "--complex", "nope")
    assert code == 3


def test_usage_errors_exit_three_through_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gtilt.cli", "verify-tilting", spec_path("example1.spec"),
                           "--window", "x"], capture_output=True, text=True)
    assert proc.returncode == 3


def test_text_format():
    code, out = run("complete", spec_path("example1.spec"), "--format", "text")
    assert code == 0 and "complement:" in out and not out.startswith("{")
