from __future__ import annotations

import csv
import json

import pytest

from bsl.cli import main


def _run(tmp_path, name, argv):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, out.read_bytes()


def test_families_csv(tmp_path):
    code, data = _run(tmp_path, "t.csv", ["families", "--kind", "legendre", "--p", "7", "--d-min", "3", "--d-max", "100"])
    assert code == 0
    rows = list(csv.reader(data.decode().splitlines()))
    assert rows[0] == ["family", "p", "q", "d", "extra", "dim_sha", "deg_omega", "deg_omega_exact", "ratio_num", "ratio_den"]
    assert 1 < len(rows) <= 98
    assert all(int(r[3]) % 7 for r in rows[1:])


def test_families_workers_env(tmp_path, monkeypatch):
    argv = ["families", "--kind", "sextic", "--p", "5", "--d-min", "1", "--d-max", "60"]
    _, a = _run(tmp_path, "a.csv", argv)
    monkeypatch.setenv("BSL_WORKERS", "2")
    _, b = _run(tmp_path, "b.csv", argv)
    assert a == b


def test_oracle_legendre(tmp_path):
    code, data = _run(tmp_path, "o.json", ["oracle", "--preset", "legendre", "--p", "3", "--d", "8", "--n", "2", "--nu", "2", "--seed", "1"])
    assert code == 0
    rep = json.loads(data)
    assert rep["pass"]
    orb = rep["instances"][0]["orbits"]
    assert {"word", "d", "ht", "expected_exponent", "measured_exponent", "pass"} <= set(orb[0])


def test_oracle_needs_seed():
    with pytest.raises(SystemExit) as e:
        main(["oracle", "--preset", "legendre", "--p", "3", "--d", "8"])
    assert e.value.code == 1


def test_crosscheck_and_lfunction(tmp_path):
    code, data = _run(tmp_path, "c.json", ["crosscheck", "--kind", "legendre", "--p", "5", "--d", "3"])
    assert code == 0 and json.loads(data)["match"]
    code, data = _run(tmp_path, "l.json", ["lfunction", "--kind", "legendre", "--p", "5", "--d", "3"])
    rep = json.loads(data)
    assert code == 0
    assert rep["coeffs"] == [1, 0, -25] and rep["slopes"] == ["1/1", "1/1"]
    assert {"coeffs", "q", "conductor_deg", "slopes", "dim_sha_slopes", "dim_sha_orbits", "match"} <= set(rep)


def test_equidist_csv(tmp_path):
    code, data = _run(tmp_path, "e.csv", ["equidist", "--statement", "p91", "--p", "3", "--a", "0", "--b", "1/2", "--d", "5"])
    assert code == 0
    assert data.decode().splitlines() == ["statement,p,d,param,value_num,value_den", "p91,3,5,a=0;b=1/2,1,10"]


def test_orbits_json(tmp_path):
    code, data = _run(tmp_path, "orb.json", ["orbits", "--kind", "legendre", "--p", "7", "--d", "5"])
    rep = json.loads(data)
    assert code == 0 and rep["dim_sha"] == 2 and rep["d"] == 5


def test_grouplab(tmp_path):
    code, data = _run(tmp_path, "g.json", ["grouplab", "--suite", "pointed", "--seed", "7"])
    assert code == 0 and json.loads(data)["pass"]


@pytest.mark.parametrize(
    "argv",
    [
        ["families", "--kind", "legendre", "--p", "8", "--d", "3"],
        ["equidist", "--statement", "p91", "--p", "7", "--a", "x", "--d", "5"],
        ["frobnicate"],
        ["families", "--kind", "nonsense", "--p", "7", "--d", "3"],
        ["families", "--kind", "legendre", "--p", "7"],
        ["orbits", "--kind", "legendre", "--p", "7", "--d", "14"],
    ],
)
def test_validation_errors_exit_1(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as e:
        code = e.code
    assert code == 1


def test_determinism(tmp_path):
    for argv in (
        ["oracle", "--preset", "random", "--p", "2", "--seed", "9", "--instances", "3"],
        ["grouplab", "--suite", "orbits", "--seed", "7", "--instances", "30"],
        ["equidist", "--statement", "p93", "--p", "5", "--d-min", "3", "--d-max", "40"],
    ):
        _, a = _run(tmp_path, "x1", argv)
        _, b = _run(tmp_path, "x2", argv)
        assert a == b
