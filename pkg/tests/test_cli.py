"""End-to-end CLI coverage with temp files; exit codes are contract."""

import json

import pytest

from cdckit.cli import main


def test_construct_writes_file_and_reports(tmp_path, capsys):
    out = tmp_path / "c.cdc"
    code = main(["construct", "--recipe", "8_4_4", "--q", "2", "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "expected_size=4797" in text and "generated=4797" in text
    assert out.read_text().count("\n") == 4797 + 10  # body + header lines


def test_construct_unknown_recipe_is_usage_error(capsys):
    assert main(["construct", "--recipe", "nope", "--q", "2"]) == 2


def test_construct_missing_import_is_precondition(capsys):
    assert main(["construct", "--recipe", "9_4_3", "--q", "2"]) == 4


def test_construct_bound_only_recipe(capsys):
    assert main(["construct", "--recipe", "16_4_4", "--q", "2"]) == 0
    assert "closed-form size only" in capsys.readouterr().out


def test_construct_parametric_requires_k(capsys):
    assert main(["construct", "--recipe", "4k_2k_2k", "--q", "2"]) == 2
    assert main(["construct", "--recipe", "4k_2k_2k", "--q", "2",
                 "--k", "4"]) == 0


def test_verify_sample_and_exit_codes(tmp_path, capsys):
    out = tmp_path / "c.cdc"
    main(["construct", "--recipe", "8_4_4", "--q", "2", "--out", str(out)])
    capsys.readouterr()
    code = main(["verify", "--file", str(out), "--mode", "sample",
                 "--pairs", "5000", "--seed", "1"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["violations"] == [] and report["min_distance_found"] == 4


def test_verify_full_small(tmp_path, capsys):
    out = tmp_path / "lm.cdc"
    from cdckit.cdc import lifted_mrd
    from cdckit.codefile import export
    export(lifted_mrd(2, 6, 3, 4), out)
    assert main(["verify", "--file", str(out), "--mode", "full"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["min_distance_found"] == 4


def test_verify_detects_violation(tmp_path, capsys):
    from cdckit.cdc import Cdc, lifted_mrd
    from cdckit.codefile import export
    from cdckit.subspace import distance
    lm = lifted_mrd(2, 6, 3, 4)
    words = lm.words()
    close = next(w for w in words[1:] if distance(words[0], w) == 4)
    bad = Cdc(lm.field, 6, 3, 6, words=[words[0], close])
    out = tmp_path / "bad.cdc"
    export(bad, out)
    assert main(["verify", "--file", str(out), "--mode", "full"]) == 1


def test_verify_corrupted_file_is_io_error(tmp_path, capsys):
    bad = tmp_path / "bad.cdc"
    bad.write_text("#Q=2\nnot a code file\n")
    assert main(["verify", "--file", str(bad), "--mode", "full"]) == 3
    assert main(["verify", "--file", str(tmp_path / "missing.cdc"),
                 "--mode", "full"]) == 3


def test_bound_table_output(capsys):
    assert main(["bound", "--q", "2", "--n", "6", "--d", "4", "--k", "3"]) == 0
    text = capsys.readouterr().out
    assert "77" in text and "81" in text and "93" in text
    assert main(["bound", "--q", "2", "--n", "6", "--d", "4", "--k", "3",
                 "--csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "name,kind,value,derivation"


def test_formula_values(capsys):
    assert main(["formula", "--name", "A_q(12,6;6)", "--q", "2"]) == 0
    assert capsys.readouterr().out.strip() == "16865629"
    assert main(["formula", "--name", "A_q(12,4;4)_cor", "--q", "2"]) == 0
    assert capsys.readouterr().out.strip() == "19673822"
    assert main(["formula", "--name", "A_q(nope)", "--q", "2"]) == 2
    assert main(["formula", "--name", "A_q(4k,2k;2k)", "--q", "2",
                 "--k", "4"]) == 0


def test_import_export_roundtrip(tmp_path, capsys):
    src = tmp_path / "c.cdc"
    dst = tmp_path / "d.cdc"
    main(["construct", "--recipe", "8_4_4", "--q", "2", "--out", str(src)])
    capsys.readouterr()
    assert main(["import", "--file", str(src)]) == 0
    assert "4797" in capsys.readouterr().out
    assert main(["export", "--file", str(src), "--out", str(dst)]) == 0


def test_import_with_subcode_cli(tmp_path, capsys):
    from cdckit.cdc import lifted_mrd, partial_spread_subcode
    from cdckit.codefile import export
    c = lifted_mrd(2, 8, 4, 4)
    sub = partial_spread_subcode(c, "lmrd_nested")
    p1, p2 = tmp_path / "c.cdc", tmp_path / "s.cdc"
    export(c, p1)
    export(sub, p2)
    assert main(["import", "--file", str(p1), "--subcode", str(p2)]) == 0


def test_oracle_kinds(tmp_path, capsys):
    assert main(["oracle", "--kind", "subspace-count", "--q", "2",
                 "--n", "4", "--k", "2"]) == 0
    assert capsys.readouterr().out.strip() == "35"
    assert main(["oracle", "--kind", "enumerate", "--q", "2",
                 "--n", "4", "--k", "2"]) == 0
    assert capsys.readouterr().out.strip() == "35"
    assert main(["oracle", "--kind", "rank-distribution", "--q", "2",
                 "--n", "3", "--m", "3", "--dr", "2", "--r", "3"]) == 0
    assert capsys.readouterr().out.strip() == "14"
    from cdckit.cdc import spread
    from cdckit.codefile import export
    p = tmp_path / "sp.cdc"
    export(spread(2, 8, 4), p)
    assert main(["oracle", "--kind", "coverage", "--file", str(p)]) == 0


def test_stdout_streaming(tmp_path, capsys):
    assert main(["construct", "--recipe", "8_4_4", "--q", "2", "--out", "-"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("#Q=2")
    assert "expected_size=4797" in captured.err
