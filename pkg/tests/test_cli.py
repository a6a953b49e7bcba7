import json
import subprocess
import sys

import pytest

from ultraspec.cli import main
from ultraspec.serialize import CSV_HEADER, op_from_json, op_to_json, vector_from_json, vector_to_json

D15 = {"kind": "matrix", "entries": [["1", "0"], ["0", "5"]]}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def doc(**kw):
    return json.dumps({"p": 5, **kw})


def test_member_example(capsys):
    out = run_json(
        capsys,
        "member",
        doc(op={"kind": "right_shift"}, **{"lambda": "1"}, epsilon="1/5", side="left", kind="pseudospectrum"),
    )
    assert out == {"member": False}


def test_member_all_kinds(capsys):
    out = run_json(capsys, "member", doc(op={"kind": "right_shift"}, **{"lambda": "0"}, side="right"))
    assert out == {"spectrum": True, "pseudospectrum": True, "condition_pseudospectrum": True}


def test_invert_example(capsys):
    out = run_json(capsys, "invert", doc(op=D15, side="left"))
    assert out["invertible"] is True and out["min_inverse_norm"] == {"pow": 1}
    assert out["certificate"]["matrix"] == [["1", "0"], ["0", "1/5"]]


def test_norm(capsys):
    assert run_json(capsys, "norm", doc(op=D15)) == {"norm": {"pow": 0}}
    vec = {"ambient": "c0", "entries": {"3": "1/25"}}
    assert run_json(capsys, "norm", doc(vector=vec)) == {"norm": {"pow": 2}}


def test_laws_empty(capsys):
    assert run(capsys, "laws", '{"instances": []}') == (0, "", "")


def test_laws_stream_and_exit_codes(capsys):
    good = {"law": "L13", "p": 5, "op": D15, "lambda": "0", "epsilon": "1/2", "samples": 10}
    bad = {"law": "L12", "p": 5, "op": {"kind": "right_shift"}}
    code, out, _ = run(capsys, "laws", json.dumps({"instances": [good]}))
    assert code == 0 and json.loads(out)["pass"] is True
    code, out, _ = run(capsys, "laws", json.dumps({"instances": [good, bad]}))
    lines = [json.loads(line) for line in out.splitlines()]
    assert code == 1 and [line["pass"] for line in lines] == [True, False]


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--format", "csv", "--grid-valuations", "0:1", doc(op={"kind": "left_shift"}, epsilon="1"))
    lines = out.splitlines()
    assert code == 0 and lines[0].split(",") == CSV_HEADER
    assert len(lines) == 1 + 1 + 2 * 5
    assert lines[1] == "0,1,0,1,0,1,0,5^0,inf,5^0"


def test_scan_explicit_grid_json_and_svg(capsys):
    out = run_json(capsys, "scan", doc(op={"kind": "right_shift"}, epsilon="1/5", grid=["0", "1", "5", "1/5"]))
    assert [r["sigma_r"] for r in out["rows"]] == [True, True, True, False]
    code, svg, _ = run(capsys, "scan", "--format", "svg", doc(op={"kind": "right_shift"}, epsilon="1"))
    assert code == 0 and svg.startswith("<svg") and svg.count("<rect") == 1 + 7 * 5


def test_witness_and_destabilize(capsys):
    w = run_json(capsys, "witness", doc(op=D15, **{"lambda": "0"}, epsilon="1/2"))
    assert w["witness"]["entries"] == {"1": "1/5"} and w["image_norm"] == {"pow": 0}
    d = run_json(capsys, "destabilize", doc(op=D15, **{"lambda": "0"}, epsilon="1/2"))
    assert d["C"]["entries"] == [["0", "0"], ["0", "-5"]] and d["norm_bound_checked"]


@pytest.mark.parametrize(
    "argv",
    [
        ["member", '{"p": 4, "op": {"kind": "right_shift"}, "lambda": "1"}'],
        ["member", '{"p": 5, "op": {"kind": "nope"}, "lambda": "1"}'],
        ["member", '{"p": 5, "op": {"kind": "right_shift"}, "lambda": "1.5"}'],
        ["member", '{"p": 5, "op": {"kind": "right_shift"}, "lambda": "1", "epsilon": "0"}'],
        ["invert", "{not json"],
        ["invert", '{"op": {"kind": "right_shift"}}'],
    ],
)
def test_schema_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err


def test_contract_errors_exit_3(capsys):
    code, _, err = run(capsys, "witness", doc(op={"kind": "right_shift"}, **{"lambda": "0"}, epsilon="1"))
    assert code == 3 and "NotInPseudospectrum" in err
    code, _, _ = run(capsys, "invert", doc(op={"kind": "rank_one", "inner": {"kind": "right_shift"},
                                              "u": {"ambient": "c0", "entries": {"0": "1"}},
                                              "phi": {"coefficients": {"0": "1"}}}))
    assert code == 3
    zero_beta = {"kind": "affine", "alpha": "1", "beta": "0", "inner": {"kind": "left_shift"}}
    code, _, err = run(capsys, "invert", doc(op=zero_beta))
    assert code == 3 and "ZeroBeta" in err


def test_file_and_stdin_input(tmp_path):
    path = tmp_path / "op.json"
    path.write_text(doc(op=D15))
    cmd = [sys.executable, "-m", "ultraspec.cli", "invert"]
    from_file = subprocess.run(cmd + [str(path)], capture_output=True, text=True, check=True).stdout
    from_stdin = subprocess.run(cmd + ["-"], input=path.read_text(), capture_output=True, text=True, check=True).stdout
    assert from_file == from_stdin


def test_output_is_byte_deterministic(capsys):
    instances = [
        {"law": law, "p": 3, "op": {"kind": "matrix", "entries": [["1", "3"], ["1/3", "2"]]},
         "lambda": "1", "epsilon": "1/3", "epsilon2": "3", "samples": 40, "seed": 5}
        for law in ("L12", "L13", "L17ii", "L22", "L23")
    ]
    for args in (["laws", json.dumps({"instances": instances})],
                 ["scan", "--format", "csv", doc(op=D15, epsilon="1/5")]):
        first = run(capsys, *args)
        assert first == run(capsys, *args)


@pytest.mark.parametrize(
    "op",
    [
        D15,
        {"kind": "diagonal", "prefix": ["1", "1/5"], "tail": "25"},
        {"kind": "affine", "alpha": "3", "beta": "5", "inner": {"kind": "right_shift"}},
        {"kind": "shifted", "lambda": "2", "inner": {"kind": "left_shift"}},
        {"kind": "rank_one", "inner": {"kind": "left_shift"},
         "u": {"ambient": "c0", "entries": {"2": "1"}}, "phi": {"coefficients": {"0": "5"}}},
    ],
)
def test_operator_round_trip(op):
    A = op_from_json(op, 5)
    assert op_from_json(op_to_json(A), 5) == A


def test_vector_round_trip():
    from ultraspec.inverse import shift_eigenvector

    z = shift_eigenvector(5, 5)
    assert vector_from_json(vector_to_json(z), 5) == z
