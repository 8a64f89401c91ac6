import io
import json

import pytest

from nfold.cli import EXIT_CAPACITY, EXIT_FALSIFIED, EXIT_INPUT, EXIT_OK, run


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), stream=out)
    return code, out.getvalue()


def invoke_json(*argv):
    code, text = invoke(*argv)
    return code, json.loads(text)


def test_coherence_2x2():
    code, rep = invoke_json("coherence", "--grid", "2x2")
    assert code == EXIT_OK and rep["status"] == "ok"
    r = rep["result"]
    assert (r["trees"], r["edges"], r["h1"]["rank"]) == (2, 1, 0)


def test_coherence_emits_complex(tmp_path):
    path = tmp_path / "cx.json"
    code, rep = invoke_json("coherence", "--grid", "2x2x2", "--emit-complex", str(path))
    assert code == EXIT_OK
    cx = json.loads(path.read_text())
    assert cx and rep["result"]["complex_written"] == "cx.json"


def test_dw_torus(fixtures_dir):
    code, rep = invoke_json("dw", "--cobordism", str(fixtures_dir / "torus.json"), "--group", "S3")
    assert code == EXIT_OK
    assert rep["result"]["Z"] == "3" and rep["result"]["flat_fields"] == 18
    assert set(rep["inputs"]) == {"torus.json"}


@pytest.mark.parametrize("name,group,z", [("sphere", "Z2", "1/2"), ("genus2", "Z2", "8"), ("torus2", "S3", "3")])
def test_dw_fixtures(fixtures_dir, name, group, z):
    code, rep = invoke_json("dw", "--cobordism", str(fixtures_dir / f"{name}.json"), "--group", group)
    assert code == EXIT_OK and rep["result"]["Z"] == z


def test_dw_group_from_file(fixtures_dir, tmp_path):
    from nfold.groups import builtin_group

    path = tmp_path / "s3.json"
    path.write_text(json.dumps(builtin_group("S3").to_json()))
    code, rep = invoke_json("dw", "--cobordism", str(fixtures_dir / "torus.json"), "--group", str(path))
    assert code == EXIT_OK and rep["result"]["Z"] == "3"
    assert "s3.json" in rep["inputs"]


def test_nerve_check_passes(fixtures_dir):
    code, rep = invoke_json("nerve-check", "--input", str(fixtures_dir / "dc.json"), "--cap", "2,2")
    assert code == EXIT_OK and rep["result"]["witness"] is None


def test_nerve_check_broken(fixtures_dir):
    code, rep = invoke_json("nerve-check", "--input", str(fixtures_dir / "broken.json"), "--cap", "2,2")
    assert code == EXIT_FALSIFIED and rep["status"] == "falsified"
    assert rep["result"]["witness"]
    assert not rep["result"]["horns"]["ok"]


def test_axioms(capsys):
    code, rep = invoke_json("axioms", "--shape", "hexagon2", "--seed", "3", "--core-size", "2")
    assert code == EXIT_OK and rep["result"]["cell"]


@pytest.mark.parametrize("alias", [["dw", "compose"], ["dw-compose"]])
def test_dw_compose(fixtures_dir, alias):
    code, rep = invoke_json(
        *alias, "--left", str(fixtures_dir / "cylinder.json"), "--right", str(fixtures_dir / "cylinder.json"),
        "--group", "S3", "--check-coherence",
    )
    assert code == EXIT_OK
    assert rep["command"] == "dw-compose"
    assert rep["result"]["Z"]["composite"] == "1" and rep["result"]["coherence"]["ok"]


def test_output_is_byte_identical(fixtures_dir):
    args = ("nerve-check", "--input", str(fixtures_dir / "broken.json"), "--cap", "2,2")
    assert invoke(*args) == invoke(*args)
    args = ("axioms", "--shape", "pentagon", "--seed", "7")
    assert invoke(*args) == invoke(*args)


def test_text_format(fixtures_dir):
    code, text = invoke("dw", "--cobordism", str(fixtures_dir / "torus.json"), "--group", "S3", "--format", "text")
    assert code == EXIT_OK
    assert 'result.Z: "3"' in text.splitlines()


@pytest.mark.parametrize(
    "argv",
    [
        ["coherence", "--grid", "2xq"],
        ["coherence", "--grid", "0x2"],
        ["dw", "--cobordism", "missing.json", "--group", "S3"],
        ["axioms", "--shape", "pentagon", "--core-size", "0"],
    ],
)
def test_input_errors(argv):
    code, rep = invoke_json(*argv)
    assert code == EXIT_INPUT and rep["status"] == "input-error"


def test_unknown_group(fixtures_dir):
    code, rep = invoke_json("dw", "--cobordism", str(fixtures_dir / "torus.json"), "--group", "A5")
    assert code == EXIT_INPUT


def test_seam_mismatch(fixtures_dir):
    code, rep = invoke_json("dw-compose", "--left", str(fixtures_dir / "cylinder.json"), "--right", str(fixtures_dir / "interval.json"))
    assert code == EXIT_INPUT and rep["error"]["type"] == "ComposabilityError"


def test_bad_mutation_rank(fixtures_dir, tmp_path):
    data = json.loads((fixtures_dir / "broken.json").read_text())
    data["delete_simplex"]["rank"] = 10**6
    path = tmp_path / "b.json"
    path.write_text(json.dumps(data))
    code, _ = invoke_json("nerve-check", "--input", str(path), "--cap", "2,2")
    assert code == EXIT_INPUT


def test_capacity():
    code, rep = invoke_json("coherence", "--grid", "3x3", "--cap", "10")
    assert code == EXIT_CAPACITY and rep["error"]["type"] == "CapacityError"


def test_dw_capacity(fixtures_dir):
    code, _ = invoke_json("dw", "--cobordism", str(fixtures_dir / "genus2.json"), "--group", "S3", "--cap", "100")
    assert code == EXIT_CAPACITY


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        run(["coherence", "--bogus"], stream=io.StringIO())
    assert exc.value.code == 2


def test_report():
    code, rep = invoke_json("report")
    assert code == EXIT_OK
    assert rep["result"]["dw"]["values"]["torus/S3"] == "3"
