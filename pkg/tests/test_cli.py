"""DSL parsing, report generation, exit codes, golden-file stability."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from scheme_explorer import dsl
from scheme_explorer.cli import render_json, run_script
from scheme_explorer.errors import DslSyntaxError

REPO = Path(__file__).resolve().parent.parent
SCRIPTS = REPO / "scripts"
GOLDEN = Path(__file__).resolve().parent / "golden"


def run_cli(args):
    proc = subprocess.run(
        [sys.executable, "-m", "scheme_explorer.cli", *args],
        capture_output=True,
        text=True,
        cwd=REPO,
        env={"PYTHONPATH": str(REPO / "src"), "PATH": "/usr/bin:/bin"},
    )
    return proc


def test_parse_counts_statements():
    script = dsl.parse("ring A = ZZ[T]; spec describe A --bound 5;")
    assert len(script.statements) == 2


def test_parse_ideal_definition():
    script = dsl.parse("ideal I = (6*X^2+18*X-3) in ZZ[X];")
    stmt = script.statements[0]
    assert isinstance(stmt, dsl.IdealDef)
    assert stmt.name == "I"


def test_parse_error_position():
    with pytest.raises(DslSyntaxError) as err:
        dsl.parse("ring = ;")
    assert err.value.column == 6
    assert err.value.line == 1


def test_round_trip_on_documented_corpus():
    corpus = [
        'ring A = ZZ[X]/(6*X^2+18*X-3);',
        'specialize A over QQ, GF(2), GF(3), GF(5), GF(11);',
        'spec describe ZZ[T] --bound 7;',
        'spec closure --ring "ZZ[T]" --point "eta,(2*T-1)" --fibers 20;',
        'ideal I = (X^2, Y) in QQ[X,Y];',
        'poly QQ[X,Y] : X^2*Y - 3;',
        'fiber --map "ZZ->ZZ[T]" --at p=7;',
        'normalize --ring "QQ[X,Y]" --ideal "(X*Y-1)";',
        'proj charts --graded "QQ[T0,T1,T2]/(T0*T2-T1^2)";',
        'proj points --space "P^2(GF(5))";',
        'proj segre --p "[1:2]" --q "[3:5]";',
        'proj sections --n 2 --d 2;',
        'sheaf check --space "spec(ZZ/12)";',
        'sheaf sections --space "spec(ZZ/12)" --at 2;',
        'ring B = GF(49,t^2+1)[X];',
    ]
    for line in corpus:
        script = dsl.parse(line)
        assert dsl.parse(script.to_text()) == script, line


def test_empty_script_gives_empty_report():
    records, had_error = run_script(dsl.parse(""))
    assert records == [] and not had_error


def test_run_reports_module_errors_and_continues():
    script = dsl.parse(
        'ring A = QQ[X]; normalize --ring "ZZ[X]" --ideal "(X)"; poly A : X;'
    )
    records, had_error = run_script(script)
    assert had_error
    assert [r["ok"] for r in records] == [True, False, True]
    assert records[1]["error"]["code"] == "non-field-base"


def test_cli_exit_codes():
    ok = run_cli(["exec", "poly QQ[X] : X;"])
    assert ok.returncode == 0
    query_error = run_cli(["exec", 'normalize --ring "ZZ[X]" --ideal "(X)";'])
    assert query_error.returncode == 1
    parse_error = run_cli(["exec", "ring = ;"])
    assert parse_error.returncode == 2
    assert "column 6" in parse_error.stderr


def test_cli_single_statement_words():
    proc = run_cli(["proj", "conic", "--p", "[2:3]", "--format", "json"])
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["schema"] == 1
    data = payload["results"][0]["data"]
    assert data["raw_image"] == "[4:6:9]"
    assert data["conic_check"] == "0"


def test_json_schema_tag_and_key_order():
    records, _ = run_script(dsl.parse("poly QQ[X] : X;"))
    text = render_json(records)
    payload = json.loads(text)
    assert payload["schema"] == 1
    assert text == render_json(records)  # byte-stable


@pytest.mark.parametrize("script_path", sorted(SCRIPTS.glob("*.scm")))
def test_golden_scripts_are_byte_identical(script_path):
    source = script_path.read_text(encoding="utf-8")
    records, had_error = run_script(dsl.parse(source))
    assert not had_error, records
    rendered = render_json(records)
    golden_path = GOLDEN / (script_path.stem + ".json")
    assert golden_path.exists(), f"golden file missing for {script_path.name}"
    assert rendered == golden_path.read_text(encoding="utf-8")
    # and a second in-process run is identical too
    records2, _ = run_script(dsl.parse(source))
    assert render_json(records2) == rendered


def test_juxtaposition_multiplication_in_polynomials():
    for text, expected in [
        ("2T-1", "2*T - 1"),
        ("3(T+1)", "3*(T + 1)"),
        ("T(T-1)", "T*(T - 1)"),
    ]:
        ast = dsl.parse_poly_text(text)
        assert ast.to_text() == expected
        assert dsl.parse_poly_text(ast.to_text()) == ast
    records, err = run_script(dsl.parse(
        'spec closure --ring "ZZ[T]" --point "eta,(2T-1)" --fibers 7;'
    ))
    assert not err
    assert records[0]["data"]["closure"] == "V(2*T - 1)"


def test_quoted_ring_positional_from_argv():
    proc = run_cli(["spec", "describe", "ZZ[T]", "--bound", "3", "--format", "json"])
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["results"][0]["data"]["family"] == "ZZT"
    # quoted and bare forms parse to the same statement
    a = dsl.parse('spec describe "ZZ[T]" --bound 3;')
    b = dsl.parse("spec describe ZZ[T] --bound 3;")
    assert a == b
