from __future__ import annotations

import io
import json

import pytest

from krdenom.cli import CONJECTURE_BANNER, run


def _run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_denom_json_single_factor():
    code, out, _ = _run("denom", "--type", "A3~1", "--kr", "1^1", "--kr", "1^1", "--json")
    assert code == 0
    assert out.strip() == '{"factors":[{"root":{"zeta24":0,"qexp":[2,1]},"mult":1}]}'


def test_denom_g2_exceptional_text():
    code, out, _ = _run("denom", "--type", "G2~1", "--kr", "2^2", "--kr", "2^2")
    assert code == 0
    assert "(z - q^{8/3})^2" in out and out.count("(z - ") == 6


def test_hl_check_reports_zero_violations():
    code, out, _ = _run("hl-check", "--type", "B2~1", "--depth", "12")
    assert code == 0
    assert out.startswith("0 violations / ")


def test_ar_matches_reflected_b3_row():
    code, out, _ = _run("ar", "--type", "B3~1", "--xi", "12", "--reflect", "1")
    assert code == 0
    assert out.splitlines()[0] == "row 1: [1]@2  [3,5]@4  [2,4]@6  [1,2]@8  [5]@10"


def test_ar_dot_and_json():
    _, dot, _ = _run("ar", "--type", "G2~1", "--xi", "12", "--dot")
    assert dot.startswith("digraph")
    _, js, _ = _run("ar", "--type", "G2~1", "--xi", "12", "--json")
    assert len(json.loads(js)["vertices"]) == 12


def test_sw_quiver_from_ar_and_from_file(tmp_path):
    code, out, _ = _run("sw-quiver", "--type", "B3~1", "--xi", "12", "--json")
    assert code == 0
    cartan = json.loads(out)["cartan"]
    assert sum(1 for i in range(5) for j in range(i + 1, 5) if cartan[i][j]) == 4
    datum = tmp_path / "datum.txt"
    datum.write_text("x 1 @ q^{0}\ny 1 @ q^{2}\n")
    code, out, _ = _run("sw-quiver", "--type", "A3~1", "--datum", str(datum))
    assert code == 0 and "x -- y" in out


def test_simple_with_module_file(tmp_path):
    mods = tmp_path / "mods.txt"
    mods.write_text("# two fundamentals\n1^1 @ q^{0}\n1^1 @ q^{2}\n")
    code, out, _ = _run("simple", "--type", "A3~1", "--modules", str(mods), "--json")
    assert code == 0 and json.loads(out)["simple"] is False
    mods.write_text("1^1 @ q^{0}\n1^1 @ q^{1}\n")
    code, out, _ = _run("simple", "--type", "A3~1", "--modules", str(mods))
    assert out.startswith("simple")


def test_dorey_higher_multiplicities():
    code, out, _ = _run("dorey", "--type", "A3~1", "--higher", "--m", "2", "--json")
    assert code == 0
    rows = json.loads(out)
    assert rows and all(r["multiplicity"] == 1 for r in rows)


def test_dorey_from_quiver():
    code, out, _ = _run("dorey", "--type", "C3~1", "--xi", "9")
    assert code == 0 and "[fundamental]" in out


def test_tsys_verify_and_qchar_and_ucoef():
    code, out, _ = _run("tsys", "--type", "A2~1", "--node", "1", "--level", "2", "--verify")
    assert code == 0 and "weight: ok, q-character: ok" in out
    code, out, _ = _run("qchar", "--type", "A2~1", "--node", "1", "--m", "1", "--json")
    assert code == 0 and len(json.loads(out)) == 3
    code, out, _ = _run("ucoef", "--type", "A3~1", "--kr", "1^1", "1^1")
    assert code == 0 and out.startswith("a_{1^1,1^1}(z) = ")


def test_ak_check_laurent():
    code, out, _ = _run(
        "ak-check", "--type", "A3~1", "--factor", "1^1@-q^{-1}", "--factor", "1^1@-q",
        "--target", "1^2", "--probe", "1^1@q^3",
    )
    assert code == 0 and out.startswith("laurent: true")


def test_conjectural_output_is_gated():
    code, _, err = _run("denom", "--type", "E6~1", "--kr", "1^1", "--kr", "1^1")
    assert code == 2 and "--allow-conjecture" in err
    code, out, _ = _run("denom", "--type", "E6~1", "--kr", "1^1", "--kr", "1^2", "--allow-conjecture")
    assert code == 0 and out.startswith(CONJECTURE_BANNER)


@pytest.mark.parametrize(
    "argv",
    [
        ("bogus",),
        ("denom", "--type", "A3~1", "--kr", "xx", "--kr", "1^1"),
        ("denom", "--type", "A3~1", "--kr", "1^1"),
        ("hl-check", "--type", "B2~1"),
        ("sw-quiver", "--type", "B3~1"),
    ],
)
def test_usage_errors_exit_one_with_grammar(argv):
    code, out, err = _run(*argv)
    assert code == 1 and out == "" and "usage:" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("denom", "--type", "Q3~1", "--kr", "1^1", "--kr", "1^1"),
        ("denom", "--type", "A3~1", "--kr", "9^1", "--kr", "1^1"),
        ("ar", "--type", "B3~1", "--xi", "12", "--reflect", "3"),
        ("hl-check", "--type", "A3~2", "--depth", "4"),
        ("dorey", "--type", "B3~1", "--higher", "--m", "1", "--k", "3"),
    ],
)
def test_domain_errors_exit_two(argv):
    code, out, err = _run(*argv)
    assert code == 2 and out == "" and err.startswith("error:")


def test_output_is_byte_stable():
    argv = ("hl-check", "--type", "C3~1", "--depth", "6", "--json")
    assert _run(*argv) == _run(*argv)
