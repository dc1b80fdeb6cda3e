from __future__ import annotations

import pytest

from spast.cli import EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, NO_SUPER_STABLE, main, parse_grid
from spast.known_instances import (
    ALL_TIES_TEXT,
    CLONE_SOURCE_TEXT,
    CLONED_HRT_TEXT,
    FIVE_STUDENTS_TEXT,
    SIX_STUDENTS_TEXT,
)


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in [
        ("five", FIVE_STUDENTS_TEXT),
        ("six", SIX_STUDENTS_TEXT),
        ("source", CLONE_SOURCE_TEXT),
        ("hrt", CLONED_HRT_TEXT),
        ("ties", ALL_TIES_TEXT),
    ]:
        path = tmp_path / f"{name}.txt"
        path.write_text(text)
        out[name] = str(path)
    return out


def test_solve(files, capsys):
    assert main(["solve", files["five"], "--check"]) == EXIT_OK
    assert capsys.readouterr().out == "3 2\n4 3\n5 1\n"


def test_solve_trace(files, capsys):
    assert main(["solve", files["five"], "--trace"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "# APPLY 1 1"
    assert "# DELETE 4 2 rejected-tail" in out
    assert out[-3:] == ["3 2", "4 3", "5 1"]


def test_solve_none_exists(files, capsys):
    assert main(["solve", files["hrt"]]) == EXIT_NEGATIVE
    captured = capsys.readouterr()
    assert captured.out == NO_SUPER_STABLE + "\n"
    assert "multiply-assigned" in captured.err


def test_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 3\n1 1\n")
    assert main(["solve", str(bad)]) == EXIT_INPUT
    assert "error" in capsys.readouterr().err
    assert main(["solve", str(tmp_path / "missing.txt")]) == EXIT_INPUT


def test_check(files, tmp_path, capsys):
    good = tmp_path / "good.txt"
    good.write_text("3 2\n4 3\n5 1\n")
    assert main(["check", files["five"], str(good)]) == EXIT_OK
    assert capsys.readouterr().out == "super-stable\n"
    bad = tmp_path / "blocked.txt"
    bad.write_text("1 1\n2 2\n")
    assert main(["check", files["ties"], str(bad)]) == EXIT_NEGATIVE
    assert capsys.readouterr().out == "1 2 type-iii\n2 1 type-iii\n"
    assert main(["check", files["ties"], str(bad), "--notion", "weak"]) == EXIT_OK
    over = tmp_path / "over.txt"
    over.write_text("1 1\n2 1\n")
    assert main(["check", files["five"], str(over)]) == EXIT_INPUT


def test_oracle(files, capsys):
    assert main(["oracle", files["six"]]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[-1] == "# 2 super-stable matching(s)"
    assert main(["oracle", files["ties"]]) == EXIT_NEGATIVE
    assert main(["oracle", files["six"], "--max-nodes", "3"]) == EXIT_INPUT


def test_ipcheck(files, capsys):
    assert main(["ipcheck", files["six"]]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[-1] == "consistent"


def test_lpexport(files, tmp_path):
    out = tmp_path / "model.lp"
    assert main(["lpexport", files["five"], "-o", str(out)]) == EXIT_OK
    assert out.read_text().splitlines()[-1] == "End"


def test_clone(files, tmp_path):
    out = tmp_path / "clone.txt"
    assert main(["clone", files["source"], "-o", str(out)]) == EXIT_OK
    assert main(["solve", str(out)]) == EXIT_NEGATIVE


def test_generate_then_solve(tmp_path, capsys):
    out = tmp_path / "gen.txt"
    assert main(["generate", "--n1", "20", "--pref-len", "4", "--seed", "3", "-o", str(out)]) == EXIT_OK
    assert main(["solve", str(out), "--check"]) in (EXIT_OK, EXIT_NEGATIVE)
    assert main(["generate", "--n1", "20", "--pref-len", "40"]) == EXIT_INPUT


def test_experiment_and_bench(capsys):
    assert main(["experiment", "3", "--n1", "6", "--pref-len", "2", "--densities", "0,0.3", "--trials", "5", "--crosscheck"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("n1,pref_len,t_ds,t_dl")
    assert len(lines) == 5
    assert main(["experiment", "1", "--n1", "20", "--trials", "0", "--pref-len", "5"]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 1
    assert main(["experiment", "1", "--n1", "20", "--trials", "2"]) == EXIT_INPUT
    assert main(["bench", "--n1", "100", "--trials", "1"]) == EXIT_OK


def test_parse_grid():
    assert parse_grid("100,200") == [100, 200]
    assert parse_grid("100:500:200") == [100, 300, 500]
    assert parse_grid("3:5") == [3, 4, 5]
