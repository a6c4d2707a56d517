import json
from pathlib import Path

import numpy as np
import pytest

from endocross import io
from endocross.cli import main
from endocross.errors import ValidationError
from endocross.matcalc import random_element
from endocross.sampling import random_system

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out) if out else None


def test_reduce_sys1(capsys):
    code, doc = run_json(capsys, "reduce", "--system", DATA / "sys1.json")
    assert code == 0
    assert doc["chain"] == [[], [0], [0, 1]]
    assert doc["j_infinity"] == [0, 1]
    assert doc["degenerate"] is False


def test_norm_relation_element(capsys):
    args = ("norm", "--system", DATA / "sys2.json", "--element", DATA / "sys2_killed.json")
    assert run_json(capsys, *args, "--ideal", "")[1]["value"] == 1.0
    code, doc = run_json(capsys, *args, "--ideal", "0")
    assert code == 0 and doc["value"] == 0.0
    assert doc["bounds"] == {"lower": 0.0, "upper": 0.0}


def test_seminorm_plus_u(capsys):
    code, doc = run_json(capsys, "seminorm", "--system", DATA / "sys2.json",
                         "--element", DATA / "sys2_killed_plus_u.json")
    assert doc["value"] == 1.0 and doc["per_diagonal"] == {"0": 0.0, "1": 1.0}


def test_norm_multi_diagonal_is_marked_inexact(capsys):
    code, doc = run_json(capsys, "norm", "--system", DATA / "sys2.json", "--ideal", "",
                         "--element", DATA / "sys2_killed_plus_u.json", "--kmax", "4")
    assert doc["exact"] is False
    assert doc["bounds"]["lower"] - 1e-9 <= doc["value"] <= doc["bounds"]["upper"] + 1e-9
    code, doc = run_json(capsys, "norm", "--system", DATA / "sys2.json", "--ideal", "",
                         "--element", DATA / "sys2_killed_plus_u.json", "--k", "1")
    assert doc["exact"] is True and doc["value"] == 1.0


def test_info_sys1(capsys):
    code, doc = run_json(capsys, "info", "--system", DATA / "sys1.json")
    assert doc["blocks"] == [1, 1, 1]
    assert doc["kernel"] == [0] and doc["annihilator_of_kernel"] == [1, 2]
    assert doc["alpha_one_rank"] == [1, 1, 1]
    assert doc["labels"] == ["b1", "b2", "b3"]


def test_text_mode_is_a_table(capsys):
    code, out, _ = run(capsys, "info", "--system", DATA / "sys1.json")
    lines = out.splitlines()
    assert code == 0
    assert len({line.index("  ") for line in lines}) >= 1
    assert lines[0].startswith("J_orthogonal_to_kernel")


def test_json_byte_stable(capsys):
    args = ("katsura", "--system", DATA / "sys2.json", "--json")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_canonical_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "canonical", "--system", DATA / "sys1.json", "--ideal", "1,2", "--json")
    path = tmp_path / "can.json"
    path.write_text(out)
    first = json.loads(out)
    assert first["report"]["checks"]["kernel_is_second_part"]
    code, again = run_json(capsys, "canonical", "--system", path)
    assert code == 0
    assert again["endomorphism"] == first["endomorphism"]
    assert again["report"]["checks"] == first["report"]["checks"]


def test_stacey_and_dual(capsys):
    code, doc = run_json(capsys, "stacey", "--system", DATA / "sys1.json")
    assert doc["j_infinity"] == [0, 1] and doc["reduced_system"]["blocks"] == [1]
    code, doc = run_json(capsys, "dual", "--system", DATA / "sys1.json")
    assert doc["periodic_points"] == [2] and doc["topologically_free"] is False


def test_dual_unsupported_pattern_exit_2(capsys, tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"blocks": [2, 1], "endomorphism": {"multiplicity": [[0, 2], [0, 1]]}}))
    code, doc = run_json(capsys, "dual", "--system", p)
    assert code == 2 and doc["error"] == "UnsupportedPatternError"


def test_star_and_nk(capsys):
    code, doc = run_json(capsys, "star", "--system", DATA / "sys2.json",
                         "--element", DATA / "sys2_killed_plus_u.json",
                         "--element", DATA / "sys2_killed_plus_u.json")
    assert code == 0 and doc["entries"]
    code, doc = run_json(capsys, "nk", "--system", DATA / "sys2.json",
                         "--element", DATA / "sys2_killed_plus_u.json", "--k", "1")
    assert [(e["row"], e["col"]) for e in doc["entries"]] == [(0, 0)]


def test_estimate_budget_exit_3(capsys, monkeypatch):
    import endocross.cli as cli
    from endocross import norms
    real = norms.norm_estimate
    monkeypatch.setattr(cli, "norm_estimate", lambda ctx, a, k: real(ctx, a, k, budget=0))
    code, doc = run_json(capsys, "estimate", "--system", DATA / "sys2.json",
                         "--element", DATA / "sys2_killed_plus_u.json", "--ideal", "")
    assert code == 3
    assert doc["error"] == "ResourceError" and "partial" in doc


def test_check_rep_file_and_truncation(capsys):
    code, doc = run_json(capsys, "check-rep", "--system", DATA / "swap.json", "--rep", DATA / "swap_rep.json")
    assert code == 0
    assert doc["kernel_report"]["J"] == [0, 1]
    assert doc["correspondence"]["axioms_hold"] is True
    assert doc["covariance_equivalences"]["equivalent"] is True
    code, doc = run_json(capsys, "check-rep", "--system", DATA / "sys2.json", "--truncation", "3")
    assert doc["windowed"] is True and doc["kernel_report"]["J"] == []
    assert max(doc["residuals"].values()) < 1e-12


@pytest.mark.parametrize("doc,pointer", [
    ({"blocks": [1, "x"], "endomorphism": {"multiplicity": [[1]]}}, "/blocks/1"),
    ({"blocks": [1], "endomorphism": {"multiplicity": [[1, 0]]}}, "/endomorphism/multiplicity/0"),
    ({"blocks": [1, 1], "endomorphism": {"multiplicity": [[2, 0], [0, 1]]}}, "/endomorphism"),
    ({"blocks": [1, 1], "endomorphism": {"multiplicity": [[1, 0], [0, 1]]}, "ideal_J": [0, 5]}, "/ideal_J/1"),
    ({"blocks": [1], "endomorphism": {}}, "/endomorphism"),
])
def test_schema_errors_carry_pointers(capsys, tmp_path, doc, pointer):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, out = run_json(capsys, "info", "--system", p)
    assert code == 2
    assert out["pointer"] == pointer


def test_element_shape_error_pointer(sys2):
    with pytest.raises(ValidationError) as info:
        io.element_from_dict({"entries": [{"row": 0, "col": 0, "blocks": [[[1]], [[1, 2]]]}]}, sys2)
    assert info.value.pointer == "/entries/0/blocks/1"


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "info", "--system", tmp_path / "nope.json")
    assert code == 2 and "cannot read" in err


def test_needs_system(capsys):
    assert run(capsys, "info")[0] == 2


def test_element_round_trip(rng):
    e = random_system(rng)
    a = random_element(e, rng, 2)
    back = io.element_from_dict(json.loads(json.dumps(io.element_to_dict(a, digits=17))), e)
    assert back.max_abs_diff(a) < 1e-12


def test_system_round_trip(rng):
    e = random_system(rng)
    again, J = io.system_from_dict(json.loads(json.dumps(io.system_to_dict(e, digits=17))))
    assert np.array_equal(again.multiplicity, e.multiplicity)
    assert np.allclose(again.matrix, e.matrix, atol=1e-12)


def test_tolerance_flag(capsys):
    from endocross import config
    code, _ = run_json(capsys, "info", "--system", DATA / "sys1.json", "--tol", "1e-6")
    assert code == 0 and config.tol() == 1e-6
    config.set_tol(1e-9)
