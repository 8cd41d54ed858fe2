import io as _io
import json
from pathlib import Path

import pytest

from freeline_lab import io
from freeline_lab.cli import run
from freeline_lab.errors import ParseError, ValidationError
from freeline_lab.kersys import LinearSystem
from freeline_lab.linegeom import Hypersurface
from freeline_lab.p1split import TwistedMap

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def call(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--output", "json")
    return code, (json.loads(out) if out else None), err


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


# -- parsing -------------------------------------------------------------------
def test_parse_shipped_inputs():
    assert isinstance(io.parse_input(DATA / "euler.json"), TwistedMap)
    assert isinstance(io.parse_input(DATA / "fermat_cubic_threefold_f4.json"), Hypersurface)
    assert isinstance(io.parse_input(DATA / "cubes_char3.json"), LinearSystem)


def test_parse_error_has_location(tmp_path):
    path = write(tmp_path, "bad.json", '{\n  "field": 3,\n  "terms": [1, 2,]\n}')
    with pytest.raises(ParseError) as info:
        io.parse_input(path)
    assert info.value.line == 3 and info.value.column > 0
    assert "line 3" in str(info.value)


def test_non_homogeneous_terms(tmp_path):
    doc = {"field": 5, "n": 2, "d": 3, "terms": [{"exps": [3, 0, 0]}, {"exps": [1, 1, 0]}]}
    with pytest.raises(ValidationError, match="exponent sum ≠ d"):
        io.parse_input(write(tmp_path, "f.json", doc))


@pytest.mark.parametrize("c", [5, -1, [5], [0, 1]])
def test_coefficient_outside_field(tmp_path, c):
    doc = {"field": 5, "n": 1, "d": 1, "terms": [{"exps": [1, 0], "c": c}]}
    with pytest.raises(ValidationError):
        io.parse_input(write(tmp_path, "f.json", doc))


def test_extension_coefficients_as_digits(tmp_path):
    doc = {"field": {"p": 2, "e": 2}, "n": 1, "d": 1,
           "terms": [{"exps": [1, 0], "c": [0, 1]}, {"exps": [0, 1], "c": 3}]}
    X = io.parse_input(write(tmp_path, "f.json", doc))
    assert X.f.terms == {(1, 0): 2, (0, 1): 3}


def test_unknown_type(tmp_path):
    with pytest.raises(ValidationError):
        io.parse_input(write(tmp_path, "x.json", {"type": "sheaf", "field": 2}))


def test_dumps_is_canonical():
    a = io.dumps({"b": 1, "a": [1.0, float("-inf")]})
    assert a == io.dumps({"a": [1.0, float("-inf")], "b": 1})
    assert json.loads(a) == {"schema": 1, "a": [1.0, "-inf"], "b": 1}


# -- commands --------------------------------------------------------------------
def test_splitting_command():
    code, out, _ = call("splitting", "--map", str(DATA / "euler.json"))
    assert code == 0 and out.strip() == "(0)"
    code, rep, _ = call_json("splitting", "--map", str(DATA / "case1_map.json"))
    assert code == 0 and rep["splitting"] == [-2, 1, 1] and rep["schema"] == 1


def test_line_report_command():
    code, rep, _ = call_json("line-report", "--hypersurface",
                             str(DATA / "fermat_cubic_threefold_f4.json"),
                             "--line", "[[1, 1, 0, 0, 0], [0, 0, 1, 1, 0]]")
    assert code == 0
    assert rep["splitting"] == [-1, 1] and rep["free"] is False
    assert rep["linear_parts"]["zero_space_dim"] == 1


def test_line_not_on_hypersurface_is_input_error():
    code, _, err = call("line-report", "--hypersurface", str(DATA / "fermat_cubic_threefold_f4.json"),
                        "--line", "[[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]]")
    assert code == 2 and "LineNotOnHypersurface" in err


def test_kplane_report_command():
    code, rep, _ = call_json("kplane-report", "--hypersurface",
                             str(DATA / "fermat_cubic_surface_f4.json"),
                             "--plane", "[[1, 1, 0, 0], [0, 0, 1, 1]]",
                             "--small", "[[1, 1, 0, 0]]")
    assert code == 0 and rep["tangent_dim"] == 0 and rep["expected_dim"] == 0
    assert "flag" in rep


def test_bpf_and_kernel_splitting():
    cubes = str(DATA / "cubes_char3.json")
    code, rep, _ = call_json("bpf", "--system", cubes)
    assert code == 0 and rep["basepoint_free"] is True
    code, rep, _ = call_json("kernel-splitting", "--system", cubes, "--curve", "twisted-cubic")
    assert code == 0 and rep["splitting"] == [0, 0, 0]
    code, rep, _ = call_json("kernel-splitting", "--system", cubes, "--samples", "10", "--ext", "2")
    assert code == 0 and rep["histogram"] == {"case1": 10}


def test_search_free_curve_command():
    code, rep, _ = call_json("search-free-curve", "--system", str(DATA / "cubes_char3.json"),
                             "--budget", "5")
    assert code == 0 and rep["stage"] == "twisted_cubic"


def test_fermat_audit_no_free_lines():
    code, rep, _ = call_json("fermat-audit", "--mode", "no-free-lines", "--p", "2", "--n", "4")
    assert code == 0 and rep["status"] == "ok"
    assert list(rep["splittings"]) == ["(-1, 1)"]


def test_fermat_audit_free_curve_and_errors():
    code, rep, _ = call_json("fermat-audit", "--mode", "free-curve", "--d", "3", "--k", "7", "--p", "2")
    assert code == 0 and rep["verdict"] == "free"
    code, _, err = call("fermat-audit", "--mode", "free-curve", "--d", "3", "--k", "5", "--p", "2")
    assert code == 2 and "DimensionTooSmall" in err


def test_census_command_and_heuristic_nesting():
    code, rep, _ = call_json("census", "--hypersurface", str(DATA / "fermat_cubic_surface_f4.json"),
                             "--estimate", "2")
    assert code == 0 and rep["count"] == 27
    assert rep["heuristic"]["label"] == "HEURISTIC" and rep["heuristic"]["estimate"] == 0
    assert "HEURISTIC" not in json.dumps({k: v for k, v in rep.items() if k != "heuristic"})


def test_budget_exit_code():
    code, _, err = call("census", "--hypersurface", str(DATA / "fermat_cubic_threefold_f4.json"),
                        "--budget", "10")
    assert code == 3 and "budget" in err


def test_usage_errors():
    assert call("no-such-command")[0] == 2
    assert call("splitting")[0] == 2
    assert call("splitting", "--map", "/nonexistent.json")[0] == 2


def test_malformed_input_exit_code(tmp_path):
    path = write(tmp_path, "m.json", '{"source": [1, 1], "target": [2], "field": 3, "entries": [[[1, 0]]]}')
    code, _, err = call("splitting", "--map", path)
    assert code == 2 and "error" in err


def test_not_surjective_is_input_error(tmp_path):
    doc = {"field": 3, "source": [0, 0], "target": [2], "entries": [[[1, 0, 0], [0, 1, 0]]]}
    code, _, err = call("splitting", "--map", write(tmp_path, "m.json", doc))
    assert code == 2 and "NotSurjective" in err


def test_json_output_is_deterministic():
    argv = ("kernel-splitting", "--system", str(DATA / "cubes_char3.json"), "--samples", "8",
            "--seed", "3", "--ext", "2")
    assert call_json(*argv)[1] == call_json(*argv)[1]
    assert call(*argv, "--output", "json")[1] == call(*argv, "--output", "json")[1]
