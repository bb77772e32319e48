import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from conftest import Z, deg_minus3_rank2, extension_grid, fuchsian
from logfuchs import io
from logfuchs.cli import main
from logfuchs.construct import irreducible_fuchsian
from logfuchs.errors import ParseError, ValidationError
from logfuchs.exactalg import INF, RatMatrix
from logfuchs.extension import ExtensionDatum
from logfuchs.logconn import LogConnection, degree


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_instance(tmp_path, name, conn):
    path = tmp_path / name
    path.write_text(io.dump_instance(conn), encoding="utf-8")
    return path


def test_parse_examples():
    text = json.dumps({"format_version": 1, "rank": 1, "genus": 0, "marked": [], "A": [["0"]]})
    conn = io.parse_instance(text)
    assert conn.rank == 1 and degree(conn) == 0
    bad = json.dumps({"format_version": 1, "rank": 1, "genus": 0, "marked": ["0"], "A": [["1/(z"]]})
    with pytest.raises(ParseError) as exc:
        io.parse_instance(bad)
    assert exc.value.position == 4
    dbl = json.dumps({"format_version": 1, "rank": 1, "genus": 0, "marked": ["0", "inf"], "A": [["1/z^2"]]})
    with pytest.raises(ValidationError) as exc:
        io.parse_instance(dbl)
    assert "NotLogarithmic" in str(exc.value) and "0" in str(exc.value)


def test_round_trip_fixtures(rng):
    fixtures = [irreducible_fuchsian(2, 0, 1, 2), irreducible_fuchsian(3, 0, 1, 2), deg_minus3_rank2(),
                fuchsian({F(1, 2): [[1, 2], [3, 4]], F(-3): [[0, 0], [1, 0]]}, extra_marked=(F(7),))]
    for conn in fixtures:
        text = io.dump_instance(conn)
        back = io.parse_instance(text)
        assert back == conn
        assert io.dump_instance(back) == text
    for e in extension_grid(rng)[:10]:
        text = io.dumps(io.extension_to_dict(e))
        assert io.parse_extension(text) == e


def test_construct_then_pipeline(tmp_path, capsys):
    inst = tmp_path / "c2.json"
    code, out, _ = run(capsys, "construct", "--rank", 2, "--points", "0,1,2", "-o", inst)
    assert code == 0
    code, out, _ = run(capsys, "inspect", inst)
    assert code == 0
    summary = json.loads(out)
    assert summary["degree"] == 0 and summary["splitting_type"] == "0,0"
    fuchs = tmp_path / "out.json"
    gauge = tmp_path / "gauge.json"
    code, out, _ = run(capsys, "pipeline", inst, "--point", 2, "-o", fuchs, "--record", gauge)
    assert code == 0
    report = json.loads(out)
    assert report["final_splitting"] == "0,0"
    assert report["outcome"] == "ok"
    code, out, _ = run(capsys, "verify-equiv", inst, fuchs, gauge, "--point", 2)
    assert code == 0 and json.loads(out)["equivalent"] is True
    code, out, _ = run(capsys, "inspect", fuchs)
    assert code == 0


def test_exit_codes(tmp_path, capsys):
    code, _, err = run(capsys, "construct", "--rank", 2, "--points", "0,1,2", "--scale", 1)
    assert code == 2 and "ScreenFailed" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"format_version": 1, "rank": 1, "genus": 0, "marked": ["0"], "A": [["1/(z"]]}')
    code, _, err = run(capsys, "inspect", bad)
    assert code == 1 and "ParseError" in err
    code, _, _ = run(capsys, "inspect", tmp_path / "missing.json")
    assert code == 1
    irr = write_instance(tmp_path, "irr.json", fuchsian({F(0): [[0, 1], [-1, 0]]}))
    code, _, err = run(capsys, "gabber", irr, "--point", 0)
    assert code == 2 and "NonRationalSpectrum" in err
    diag = write_instance(tmp_path, "diag.json", fuchsian({F(0): [[2, 1], [0, 5]]}))
    code, _, _ = run(capsys, "transform", diag, "--point", 0, "--eigenvalue", 3)
    assert code == 2
    code, out, _ = run(capsys, "transform", diag, "--point", 0, "--eigenvalue", 5)
    assert code == 0 and json.loads(out)["eigenvector"] == ["1", "3"]
    genus = tmp_path / "genus.json"
    genus.write_text('{"format_version": 1, "rank": 1, "genus": 1, "marked": [], "A": [["0"]]}')
    code, _, _ = run(capsys, "inspect", genus)
    assert code in (1, 2)


def test_gabber_and_screen(tmp_path, capsys):
    c = fuchsian({F(0): [[0, 1], [0, 0]], F(1): [[0, 0], [1, 0]]})
    path = write_instance(tmp_path, "g.json", c)
    code, out, _ = run(capsys, "gabber", path, "--point", 0, "--gap", 3)
    assert code == 0
    assert len(json.loads(out)["log"]["steps"]) == 3
    ints = write_instance(tmp_path, "ints.json", fuchsian({F(0): [[1, 0], [0, 2]], F(1): [[-3, 1], [0, 0]]}))
    code, out, _ = run(capsys, "screen", ints)
    assert code == 0 and json.loads(out)["verdict"] == "Inconclusive"


def test_semistabilize_command(tmp_path, capsys):
    path = write_instance(tmp_path, "d3.json", deg_minus3_rank2())
    code, out, _ = run(capsys, "semistabilize", path, "--point", 0)
    assert code == 0
    report = json.loads(out)
    assert len(report["log"]["steps"]) == 3 and report["twist"] == 0


def test_lift_ext_command(tmp_path, capsys):
    ok = ExtensionDatum(-1, 1, 1 / Z, 1 / Z, 0, (F(0), INF))
    path = tmp_path / "ok.json"
    path.write_text(io.dumps(io.extension_to_dict(ok)))
    code, out, _ = run(capsys, "lift-ext", path)
    assert code == 0 and json.loads(out)["liftable"] is True
    bad = ExtensionDatum(0, 2, 1 / Z, F(3) / Z, 0, (F(0), INF))
    path = tmp_path / "bad.json"
    path.write_text(io.dumps(io.extension_to_dict(bad)))
    code, out, err = run(capsys, "lift-ext", path)
    assert code == 2 and "ObstructionNonzero" in err
    assert json.loads(out)["obstruction"]["coefficients"] == ["2"]


def test_determinism_subprocess(tmp_path):
    outs = []
    for k in range(2):
        inst = tmp_path / f"c{k}.json"
        fuchs = tmp_path / f"f{k}.json"
        gauge = tmp_path / f"g{k}.json"
        cmd = [sys.executable, "-m", "logfuchs.cli"]
        subprocess.run(cmd + ["construct", "--rank", "3", "--points", "0,1,2", "-o", str(inst)], check=True,
                       capture_output=True)
        rep = subprocess.run(cmd + ["pipeline", str(inst), "--point", "2", "-o", str(fuchs), "--record",
                                    str(gauge)], check=True, capture_output=True)
        outs.append((inst.read_bytes(), fuchs.read_bytes(), gauge.read_bytes(), rep.stdout))
    assert outs[0] == outs[1]


def test_written_instances_inspect_clean(tmp_path, capsys):
    conn = LogConnection(rank=2, marked=(F(0), INF), A=RatMatrix.diagonal([2 / Z, 5 / Z]))
    path = write_instance(tmp_path, "t.json", conn)
    out_path = tmp_path / "t2.json"
    code, _, _ = run(capsys, "transform", path, "--point", 0, "--eigenvalue", 2, "-o", out_path)
    assert code == 0
    code, out, err = run(capsys, "inspect", out_path)
    assert code == 0 and err == ""
    assert json.loads(out)["splitting_type"] == "1,0"
