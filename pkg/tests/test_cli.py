import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from e7theta import cli


@pytest.fixture(scope="module")
def schema():
    return json.loads(resources.files("e7theta").joinpath("schema/certificate.schema.json").read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


QUICK = [
    ("sympl", "enum", "--g", "3"),
    ("sympl", "order", "--g", "2"),
    ("sympl", "aronhold", "--g", "2", "--verify"),
    ("sympl", "convert", "--g", "2"),
    ("lattice", "roots"),
    ("lattice", "exceptional"),
    ("lattice", "quotient"),
    ("weyl", "order"),
    ("weyl", "frame"),
    ("weyl", "abelian-report"),
    ("weyl", "hyperelliptic", "--g", "2"),
    ("inv", "perm-sw", "--degree", "2"),
    ("inv", "perm-sw", "--source", "hyperelliptic", "--g", "2", "--degree", "2"),
    ("inv", "tables"),
    ("torus", "sample"),
    ("torus", "verify"),
    ("torus", "experiment", "--trials", "10"),
]


@pytest.mark.parametrize("argv", QUICK, ids=[" ".join(a) for a in QUICK])
def test_commands_pass_and_validate(capsys, schema, argv):
    code, cert = run_json(capsys, *argv)
    assert code == 0
    jsonschema.validate(cert, schema)
    assert cert["summary"] == {"passed": True, "exit_code": 0}


def test_sympl_enum_values(capsys):
    _, cert = run_json(capsys, "sympl", "enum", "--g", "3")
    assert cert["results"] == {"g": 3, "forms": 64, "odd": 28, "even": 36}


def test_torus_sample_values(capsys):
    _, cert = run_json(capsys, "torus", "sample", "--prime", "101", "--seed", "42")
    assert cert["results"]["values"] == [82, 15, 4, 95, 36, 32, 29]
    assert cert["results"]["p"] == 101


def test_frame_provenance(capsys):
    _, cert = run_json(capsys, "weyl", "frame")
    assert cert["provenance"]["frame"] == [0, 11, 18, 25, 48, 55, 62]


def test_text_output(capsys):
    code, out = run(capsys, "sympl", "enum", "--g", "2")
    assert code == 0
    assert "odd: 6" in out and out.strip().endswith("result: pass")


@pytest.mark.parametrize(
    "argv",
    [
        ("sympl", "enum", "--g", "9"),
        ("sympl", "order", "--g", "0"),
        ("lattice", "roots", "--degree", "9"),
        ("torus", "sample", "--prime", "5"),
        ("torus", "experiment", "--prime", "7"),
        ("torus", "experiment", "--trials", "-1"),
        ("inv", "perm-sw", "--degree", "15"),
        ("inv", "perm-sw", "--degree", "5", "--degree-cap", "4"),
        ("weyl", "order", "--full", "--budget", "1000"),
    ],
    ids=lambda a: " ".join(a),
)
def test_configuration_errors_exit_2(capsys, argv):
    code, out = run(capsys, *argv, "--json")
    assert code == 2
    assert "error" in json.loads(out)


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["sympl", "nonsense"])
    assert info.value.code == 2


def test_out_file(tmp_path, capsys, schema):
    target = tmp_path / "cert.json"
    code, _ = run(capsys, "lattice", "quotient", "--out", str(target))
    assert code == 0
    jsonschema.validate(json.loads(target.read_text()), schema)


def test_determinism_modulo_timestamp(capsys):
    argv = ("torus", "experiment", "--trials", "25", "--seed", "3")
    _, a = run_json(capsys, *argv)
    _, b = run_json(capsys, *argv)
    assert json.dumps(a["results"], sort_keys=True) == json.dumps(b["results"], sort_keys=True)
    a.pop("timestamp"), b.pop("timestamp")
    a["provenance"].pop("seconds"), b["provenance"].pop("seconds")
    assert a == b


def test_injected_fault_is_named(capsys, schema):
    code, cert = run_json(capsys, "report-all", "--inject-fault", "2")
    assert code == 1
    jsonschema.validate(cert, schema)
    res = cert["results"]
    assert res["failing"] == [2]
    assert res["failing_names"] == [c["name"] for c in res["criteria"] if c["number"] == 2]
    for c in res["criteria"]:
        jsonschema.validate(c, schema["$defs"]["criterion"])
        assert c["passed"] == (c["number"] != 2)
    assert cert["summary"] == {"passed": False, "exit_code": 1}


def test_console_script_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "e7theta", "lattice", "roots", "--degree", "9"], capture_output=True, text=True
    )
    assert out.returncode == 2
    out = subprocess.run([sys.executable, "-m", "e7theta", "sympl", "enum", "--g", "1"], capture_output=True, text=True)
    assert out.returncode == 0 and "result: pass" in out.stdout
