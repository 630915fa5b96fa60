import json
import subprocess
import sys

import pytest

from heistorsor.cli import (
    BUDGET_ENV,
    EXIT_BUDGET,
    EXIT_INVALID,
    EXIT_NEGATIVE,
    EXIT_OK,
    HELP,
    ValidationError,
    effort_from_env,
    load_artifact,
    main,
    make_parser,
)


def run(argv, tmp_path, name="out.json"):
    path = tmp_path / name
    code = main(argv + ["--out", str(path)])
    return code, path


def test_certify_connected_and_replay(tmp_path):
    code, path = run(["certify", "--n", "3", "--lambda", "2"], tmp_path)
    assert code == EXIT_OK
    art = json.loads(path.read_text())
    assert art["verdict"] == "certified-connected"
    assert art["config"]["n"] == "3" and art["seed"] == "0"
    assert main(["replay", str(path)]) == EXIT_OK


def test_certify_controls(tmp_path):
    code, path = run(["certify", "--abstract-toy", "7"], tmp_path, "toy.json")
    assert code == EXIT_NEGATIVE
    assert json.loads(path.read_text())["verdict"] == "refused"
    code, path = run(["certify", "--n", "3", "--lambda", "2", "--dependent"], tmp_path, "dep.json")
    art = json.loads(path.read_text())
    assert art["connected"] is False and art["verdict"] == "certified"


def test_tampered_artifact_is_caught(tmp_path, capsys):
    code, path = run(["certify", "--abstract-toy", "7"], tmp_path)
    art = json.loads(path.read_text())
    art["primes"][0]["product_log"] = "0"
    path.write_text(json.dumps(art, sort_keys=True, indent=2) + "\n")
    capsys.readouterr()
    assert main(["replay", str(path)]) == EXIT_NEGATIVE
    out = json.loads(capsys.readouterr().out)
    assert not out["verified"]
    assert any("p=7" in d for d in out["discrepancies"])


def test_outputs_are_deterministic(tmp_path):
    _, a = run(["pairing", "--n", "3", "--lambda", "2"], tmp_path, "a.json")
    _, b = run(["pairing", "--n", "3", "--lambda", "2"], tmp_path, "b.json")
    assert a.read_bytes() == b.read_bytes()


def test_integers_serialised_as_strings(tmp_path):
    _, path = run(["curve", "--n", "3", "--lambda", "2"], tmp_path)
    art = json.loads(path.read_text())

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)
        else:
            assert not isinstance(x, int) or isinstance(x, bool)

    walk(art)


@pytest.mark.parametrize(
    "argv",
    [
        ["certify", "--n", "4", "--lambda", "2"],
        ["certify", "--n", "3", "--lambda", "1"],
        ["certify", "--n", "3", "--lambda", "x/y"],
        ["certify", "--n", "3", "--lambda", "2", "--primes", "7,11,13"],
        ["curve", "--n", "3", "--lambda", "0"],
        ["group", "--n", "1"],
    ],
)
def test_validation_errors(argv, tmp_path):
    code, path = run(argv, tmp_path)
    assert code == EXIT_INVALID
    assert not path.exists()


def test_budget_exhaustion(tmp_path, monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "prime_bound=10")
    code, _ = run(["certify", "--n", "3", "--lambda", "2"], tmp_path)
    assert code == EXIT_BUDGET


def test_budget_env_parsing():
    assert effort_from_env({BUDGET_ENV: "pairing=7, rho=9"})["pairing"] == 7
    with pytest.raises(ValidationError):
        effort_from_env({BUDGET_ENV: "nonsense=1"})
    with pytest.raises(ValidationError):
        effort_from_env({BUDGET_ENV: "rho=-1"})


def test_group_subcommand(tmp_path):
    code, path = run(["group", "--n", "3", "--d", "1", "--exhaustive", "--check-axioms"], tmp_path)
    assert code == EXIT_OK
    res = json.loads(path.read_text())["result"]
    assert res["ok"] is True


def test_specialize_small_height(tmp_path):
    code, path = run(["specialize", "--n", "3", "--lambda", "2", "--height", "12", "--S", "3"], tmp_path, "s.jsonl")
    lines = path.read_text().splitlines()
    header = json.loads(lines[0])
    assert header["kind"] == "specialize" and header["config"]["height"] == "12"
    assert code == EXIT_OK
    assert len(lines) - 1 == int(header["summary"]["points"]) > 0
    assert load_artifact(path.read_text())[0] == "specialize"
    assert main(["replay", str(path)]) == EXIT_OK


def test_census_small(tmp_path):
    code, path = run(["census", "--n", "3", "--lambda", "2", "--height", "20", "--grid", "1000,1000000,1000000000"], tmp_path)
    res = json.loads(path.read_text())["result"]
    counts = [int(r["count"]) for r in res["grid"]]
    assert counts == sorted(counts)
    assert code == (EXIT_OK if counts[-1] >= 1 else EXIT_NEGATIVE)


def test_help_documents_each_theorem(capsys):
    parser = make_parser()
    for cmd, text in HELP.items():
        with pytest.raises(SystemExit):
            parser.parse_args([cmd, "--help"])
        out = " ".join(capsys.readouterr().out.split())
        assert " ".join(text.split())[:40] in out


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "heistorsor", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for cmd in ("group", "curve", "pairing", "certify", "specialize", "census", "replay"):
        assert cmd in out.stdout
