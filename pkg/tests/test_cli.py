import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bianchitower.cli import ConfigError, RunConfig, main


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_primes_example(capsys):
    code, out, _ = run(capsys, "primes", "--d", "1", "--limit", "20")
    assert code == 0 and json.loads(out) == [5, 13, 17]


def test_indices_example(capsys):
    code, out, _ = run(capsys, "indices", "--d", "1", "--primes", "5", "--kinds", "all")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header.split("\t")[2:] == ["principal", "hecke0", "hecke1"]
    assert row.split("\t")[2:] == ["60", "6", "12"]


def test_empty_generators_exit_2(capsys):
    code, _, err = run(capsys, "enumerate", "--d", "1", "--generators", "[]")
    assert code == 2 and "empty" in err


@pytest.mark.parametrize("args", [
    ["primes", "--d", "4"],
    ["enumerate", "--d", "1", "--generators", "[[[1, 1], [1, 1]]]"],
    ["enumerate", "--d", "1", "--generators", "not json"],
    ["indices", "--d", "1", "--primes", "3"],
    ["indices", "--d", "1", "--kinds", "bogus", "--primes", "5"],
    ["enumerate"],
])
def test_input_errors_exit_2(capsys, args):
    assert run(capsys, *args)[0] == 2


def test_bad_toml_exit_2(capsys, tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("d = [1,\n")
    assert run(capsys, "primes", "--config", str(cfg))[0] == 2
    cfg.write_text("d = 1\nunknown_key = 3\n")
    assert run(capsys, "primes", "--config", str(cfg))[0] == 2


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text('d = 3\nlimit = 20\n')
    code, out, _ = run(capsys, "primes", "--config", str(cfg))
    assert json.loads(out) == [7, 13, 19]
    code, out, _ = run(capsys, "primes", "--config", str(cfg), "--limit", "10")
    assert json.loads(out) == [7]


def test_custom_generators(capsys):
    gens = json.dumps([[[1, 1], [0, 1]], [[1, 0], [[0, -1], 1]]])
    code, out, _ = run(capsys, "enumerate", "--d", "3", "--generators", gens, "--depth", "2", "--cutoff", "2")
    assert code == 0
    assert out.splitlines()[0].startswith("word,word_length")
    assert any(line.startswith("AB,2,2-w,1,") for line in out.splitlines())


def test_replay_is_byte_identical(capsys, tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    assert run(capsys, "select-prime", "--preset", "figure8", "--depth", "6", "--cutoff", "2",
               "-o", str(first))[0] == 0
    assert run(capsys, "replay", str(first), "-o", str(second))[0] == 0

    def strip(p):
        return [line for line in p.read_text().splitlines() if "generated_at" not in line]

    assert strip(first) == strip(second)
    doc = json.loads(first.read_text())
    assert doc["result"]["certificate"]["p"] == 19 and doc["tool_version"]


def test_verify_lemma51_cli(capsys):
    code, out, _ = run(capsys, "verify-lemma51", "--preset", "picard", "--primes", "5:3", "--depth", "6",
                       "--kinds", "hecke0,principal")
    assert code == 0
    doc = json.loads(out)
    assert {r["kind"] for r in doc["result"]["reports"]} == {"hecke0", "principal"}


def test_verify_lemma51_cli_fail(capsys):
    code, out, _ = run(capsys, "verify-lemma51", "--preset", "picard", "--primes", "5:3", "--depth", "6",
                       "--kinds", "principal", "--t", "0.4472135955")
    assert code == 1 and json.loads(out)["status"] == "FAIL"


def test_tower_commands(capsys):
    code, out, _ = run(capsys, "tower-noncompact", "--preset", "picard", "--eps", "0.05", "--levels", "3")
    doc = json.loads(out)
    assert code == 0 and len(doc["result"]["levels"]) == 3
    code, out, _ = run(capsys, "tower-closed", "--preset", "figure8", "--depth", "6", "--cutoff", "2",
                       "--eps", "0.1", "--levels", "1")
    doc = json.loads(out)
    level = doc["result"]["levels"][0]
    assert level["chaining"]["holds"] and level["certificate"]["depth_semantics"] == [6, 2.0]
    assert code == (0 if level["certificate"]["status"] == "PASS" else 1)
    code, out, _ = run(capsys, "bounds-t14", "--preset", "figure8", "--depth", "6", "--cutoff", "2", "--eps", "0.1")
    assert code in (0, 1) and "ineq_36" in out


def test_density_cli(capsys):
    code, out, _ = run(capsys, "density", "--d", "1", "--limit", "100000")
    body = json.loads(out)["result"]
    assert code == 0 and abs(body["ratio_pi"] - 0.5) < 0.02


entries = st.one_of(st.integers(-9, 9), st.lists(st.integers(-9, 9), min_size=2, max_size=2))


@given(st.fixed_dictionaries({
    "d": st.sampled_from([1, 2, 3, 7]),
    "eps": st.floats(0.01, 0.24),
    "depth": st.integers(1, 9),
    "kinds": st.lists(st.sampled_from(["principal", "hecke0", "hecke1", "gamma0", "all"]), min_size=1),
    "primes": st.lists(st.sampled_from(["5", "13:8", "17"]), unique=True),
    "generators": st.lists(st.lists(st.lists(entries, min_size=2, max_size=2), min_size=2, max_size=2),
                           min_size=1, max_size=3),
}))
def test_config_roundtrip(data):
    cfg = RunConfig.from_dict(data)
    again = RunConfig.from_toml(cfg.to_toml())
    assert again == cfg
    assert RunConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()


def test_config_rejects_bad_values():
    with pytest.raises(ConfigError):
        RunConfig(preset="nonexistent")
    with pytest.raises(ConfigError):
        RunConfig(generators=[[[1, 0], [0, 1]]])  # no field
    with pytest.raises(ConfigError):
        RunConfig(strategy="best")
