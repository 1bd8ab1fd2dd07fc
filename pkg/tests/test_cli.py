import json

import jsonschema

from qfsplit.cli import main

VALUE_SCHEMA = {
    "type": "object",
    "properties": {
        "value": {"oneOf": [{"type": "integer"}, {"const": "infinity"}]},
        "cap": {"type": ["integer", "null"]},
    },
    "required": ["value"],
}

ARTIN_SCHEMA = {
    "type": "object",
    "properties": {
        "equation": {"type": "string"},
        "p": {"type": "integer"},
        "ext_degree": {"type": "integer"},
        "weights": {"type": "array", "items": {"type": "integer"}},
        "family": {"enum": ["quartic_K3", "weighted_sextic_K3", "general_CY"]},
        "height": VALUE_SCHEMA,
        "ns": VALUE_SCHEMA,
        "tau": {"oneOf": [VALUE_SCHEMA, {"type": "null"}]},
        "sigma_note": {
            "enum": ["equals_tau", "tau_or_tau_plus_1_char2_quartic", "not_applicable"]
        },
        "caps_used": {"type": "object"},
        "provenance": {"type": "object"},
    },
    "required": ["equation", "p", "weights", "family", "height", "ns", "tau",
                 "sigma_note", "caps_used", "provenance"],
}


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_artin_text_report(capsys):
    code, out, _ = run_cli(
        capsys, "artin", "-p", "2", "--weights", "1,1,1,1",
        "x^4+x^2*y^2+x*y^3+y*w^3+z^3*w",
    )
    assert code == 0
    assert "ns         = 3" in out
    assert "tau        = 3" in out


def test_artin_json_schema_and_values_match_text(capsys):
    eq = "x^4 + xy^3 + yw^3 + z^3w"
    code, text_out, _ = run_cli(capsys, "artin", "-p", "2", eq)
    code2, json_out, _ = run_cli(capsys, "artin", "-p", "2", "--format", "json", eq)
    assert code == code2 == 0
    doc = json.loads(json_out)
    jsonschema.validate(doc, ARTIN_SCHEMA)
    assert doc["ns"]["value"] == 9
    assert "ns         = 9" in text_out
    assert doc["height"]["value"] == "infinity"
    assert "height     = infinity" in text_out


def test_height_json(capsys):
    code, out, _ = run_cli(capsys, "height", "-p", "5", "--format", "json",
                           "x^4+y^4+z^4+w^4")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc["result"], VALUE_SCHEMA)
    assert doc["result"]["value"] == 1


def test_ns_command(capsys):
    code, out, _ = run_cli(capsys, "ns", "-p", "3", "x^4+y^4+z^4+w^4")
    assert code == 0 and "ns = 1" in out


def test_delsarte_family(capsys):
    code, out, _ = run_cli(capsys, "delsarte", "--family", "0", "-p", "7")
    assert code == 0 and "sigma    = 1" in out


def test_delsarte_matrix_json(capsys):
    code, out, _ = run_cli(
        capsys, "delsarte", "--matrix",
        "4,0,0,0,1,3,0,0,0,1,3,0,0,0,1,3", "-p", "2", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["det_abs"] == 108 and doc["e_A"] == 27
    assert doc["result"] == {"kind": "sigma", "value": 9}


def test_delsarte_inadmissible_prime_is_domain_error(capsys):
    code, _, err = run_cli(capsys, "delsarte", "--family", "0", "-p", "2")
    assert code == 2 and "e_A" in err


def test_lift_find_infinite(capsys):
    code, out, _ = run_cli(capsys, "lift", "-p", "2",
                           "x^4 + xy^3 + yw^3 + z^3w", "--find-infinite")
    assert code == 0 and "ns_lift = infinity" in out


def test_lift_random_distribution(capsys):
    code, out, _ = run_cli(capsys, "lift", "-p", "2", "--format", "json",
                           "x^4 + xy^3 + yw^3 + z^3w", "--random", "20", "--seed", "4")
    assert code == 0
    doc = json.loads(out)
    finite = {k for k in doc["distribution"] if k != "infinity"}
    assert finite <= {"9"}


def test_scan_json(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys, "scan", "-p", "2", "--mode", "histogram", "--count", "10",
        "--seed", "2", "--format", "json", "--out", str(tmp_path),
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["total"] == 10
    assert (tmp_path / "scan.csv").exists()


def test_check_smooth(capsys):
    code, out, _ = run_cli(capsys, "check-smooth", "-p", "3", "x^4")
    assert code == 0 and "singular point" in out
    code, out, _ = run_cli(capsys, "check-smooth", "-p", "3", "x^4+y^4+z^4+w^4")
    assert code == 0 and "no witness" in out and "NOT a smoothness proof" in out


def test_extension_field_flags(capsys):
    code, out, _ = run_cli(
        capsys, "height", "-p", "2", "--ext-degree", "2",
        "x^4 + (t)*x*y^3 + y*w^3 + z^3*w",
    )
    assert code == 0 and out.startswith("height = ")
    # explicit modulus: t^2 + t + 1 as constant-first coefficients
    code2, out2, _ = run_cli(
        capsys, "height", "-p", "2", "--ext-degree", "2", "--modulus", "1,1,1",
        "x^4 + (t)*x*y^3 + y*w^3 + z^3*w",
    )
    assert code2 == 0 and out2 == out


def test_exit_code_usage_error(capsys):
    code, _, err = run_cli(capsys, "height", "-p", "3", "x^4 + q")
    assert code == 1 and "usage error" in err
    code, _, err = run_cli(capsys, "height", "-p", "4", "x^4")
    assert code == 1


def test_exit_code_domain_error(capsys):
    code, _, err = run_cli(capsys, "delsarte", "--matrix",
                           "4,0,0,0,4,0,0,0,0,0,4,0,0,0,0,4", "-p", "3")
    assert code == 2


def test_exit_code_resource_error(capsys):
    # corner oracle cap: n_max > 4 surfaces as a resource error through lift of
    # coupling machinery is internal; use a giant literal exponent instead
    code, _, err = run_cli(capsys, "height", "-p", "2", "x^4294967297")
    assert code == 3 and "resource error" in err


def test_tables_golden_regression(capsys):
    code, out, _ = run_cli(capsys, "tables", "--which", "f3")
    assert code == 0
    assert out.count("PASS") == 10 and "FAIL" not in out


def test_tables_quintic_and_delsarte(capsys):
    code, out, _ = run_cli(capsys, "tables", "--which", "quintic")
    assert code == 0 and "computed 58" in out
    code, out, _ = run_cli(capsys, "tables", "--which", "rdp", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["failures"] == 0
