from __future__ import annotations

import json

import pytest

from ordgraph.cli import run
from ordgraph.errors import NotOrderHom, ParseError
from ordgraph.formats import FIXTURES, HOM_FIXTURES, fixture_text, parse_hom_spec
from ordgraph.reductions import f2_to_bs12, f2_to_z

KINDS = ("ultrafilter", "leftregular")


# ---------------------------------------------------------------- hom specs


def test_hom_spec_examples():
    phi = parse_hom_spec("hom f2bs : free a b -> bs12_q { a = c t ; b = t }")
    assert phi == f2_to_bs12()
    assert parse_hom_spec("hom f2z : free a b -> free_abelian 1 { a = x ; b = x }") == f2_to_z()
    with pytest.raises(NotOrderHom):
        parse_hom_spec("hom bad : free a b -> bs12_q { a = c^-1 ; b = t }")


@pytest.mark.parametrize(
    "text",
    [
        "hom h : free a b -> free_abelian 1 { a = x }",
        "hom h : free a b -> free_abelian 1 { a = x ; a = x ; b = x }",
        "hom h : free a b -> free_abelian 1 { a = x ; q = x ; b = x }",
        "hom h : free a b -> free_abelian 1 { a = z ; b = x }",
        "hom h free a b { a = x }",
    ],
)
def test_hom_spec_errors(text):
    with pytest.raises(ParseError):
        parse_hom_spec(text)


@pytest.mark.parametrize("name", HOM_FIXTURES)
def test_hom_fixtures_parse(name):
    phi = parse_hom_spec(fixture_text(f"{name}.hom"))
    assert phi.name == name


# ---------------------------------------------------------------- commands


def test_demo():
    code, out, _ = run(["demo", "m5"])
    assert code == 0
    for line in ("U_v1 = {v1}", "U_t2c1 = {v5, c3, t2, c3c2, t2c1}", "f_c1 = E21", "f_t2c1 = E51", "f_c2 = E43"):
        assert line in out
    assert "stat span_dim: 25" in out


def test_tight_left_regular_witness():
    code, out, _ = run(["tight", "examples/m5.pgraph", "--kind", "leftregular"])
    assert code == 1
    assert "witness: bolt v5 {c3}" in out


def test_reduce_command():
    assert run(["reduce", "--hom", "examples/f2_to_z.hom", "--depth", "4"])[0] == 0
    code, out, _ = run(["reduce", "--hom", "f2_to_z", "--depth", "2", "--strong"])
    assert code == 1 and "witness: not_injective_on_P a b" in out
    assert run(["reduce", "--hom", "z2_sum", "--depth", "2", "--criteria"])[0] == 1


def test_hereditary_command():
    assert run(["hereditary", "--cone", "free_abelian 2", "--gens", "x", "--depth", "3"])[0] == 0
    code, out, _ = run(["hereditary", "--cone", "free_abelian 2", "--gens", "x y", "--depth", "2"])
    assert code == 1 and "not_hereditary (1,0) (0,1)" in out


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("kind", KINDS)
def test_exit_code_contract(name, kind):
    ultra = kind == "ultrafilter"
    expected = {
        ("validate",): 0,
        ("ultrafilters",): 0,
        ("rep", "--kind", kind): 0,
        ("relators", "--kind", kind): 0,
        ("tight", "--kind", kind): 0 if ultra else 1,
        ("etight", "--kind", kind): 0 if ultra else 1,
        ("etight", "--kind", kind, "--full"): 0 if ultra else 1,
        ("span", "--kind", kind): 0,
        ("span", "--kind", kind, "--balanced"): 0,
        ("grading", "--kind", kind): 0,
    }
    for args, code in expected.items():
        argv = [args[0], name, *args[1:]]
        assert run(argv)[0] == code, argv
        again = run(argv + ["--json"])
        assert again[0] == code
        payload = json.loads(again[1])
        assert payload["schema"] == 1 and payload["command"] == args[0]
        assert {"status", "witnesses", "stats"} <= payload.keys()


def test_usage_and_parse_errors(tmp_path):
    assert run([])[0] == 2
    assert run(["bogus"])[0] == 2
    assert run(["tight", "m5"])[0] == 2  # --kind missing
    assert run(["validate", str(tmp_path / "missing.pgraph")])[0] == 2
    bad = tmp_path / "bad.pgraph"
    bad.write_text(fixture_text("m5.pgraph").replace("deg c\n", "deg c q\n", 1))
    code, _, err = run(["validate", str(bad)])
    assert code == 2 and "line" in err
    bad.write_text("group free a\nfrobnicate x\n")
    assert run(["validate", str(bad)])[0] == 2
    hom = tmp_path / "bad.hom"
    hom.write_text("hom bad : free a b -> bs12_q { a = c^-1 ; b = t }")
    assert run(["reduce", "--hom", str(hom), "--depth", "2"])[0] == 2


def test_invalid_graph_is_a_failed_check(tmp_path):
    broken = tmp_path / "broken.pgraph"
    broken.write_text(fixture_text("m5.pgraph").replace("compose c3 c2 = c3c2\n", ""))
    code, out, _ = run(["validate", str(broken)])
    assert code == 1 and "witness: MissingComposite c3 c2" in out
    assert run(["tight", str(broken), "--kind", "ultrafilter"])[0] == 1


def test_rep_output_is_stable():
    code, out, _ = run(["rep", "fork", "--kind", "leftregular"])
    assert code == 0
    assert out.splitlines()[:7] == ["kind left_regular", "basis", "  1 u", "  2 w1", "  3 w2", "  4 e1", "  5 e2"]
    assert "t_e1\n  dim 5\n  4 2 1/1\n" in out


def test_help_exits_cleanly():
    assert run(["--help"])[0] == 0


def test_determinism():
    argvs = [["demo", "m5"], ["etight", "square", "--kind", "leftregular", "--full"], ["rep", "m5", "--kind", "ultrafilter", "--json"]]
    for argv in argvs:
        assert run(argv) == run(argv)
