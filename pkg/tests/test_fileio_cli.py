"""File formats and the command-line front end."""

import pytest

from polarmodal import catalog, cli, fileio
from polarmodal.errors import ParseError, PreconditionError
from polarmodal.frames import Sort
from polarmodal.semantics import LatticeModel, ModalModel


F0_TEXT = """\
# reference frame
sorts A: a0 a1  B: b0 b1
I: a0 b1 , a1 b0
"""

MODEL_TEXT = F0_TEXT + """\
val P0 : a0
val Q0 : b0
val p0 : a0
"""

CHAIN3_TEXT = """\
elems c0 c1 c2
leq: c0 c0 , c0 c1 , c0 c2 , c1 c1 , c1 c2 , c2 c2
op f type 1->1 table: c0 -> c0 , c1 -> c1 , c2 -> c2
"""


# ---------------------------------------------------------------- fileio

def test_load_frame(f0):
    frame = fileio.load_frame(F0_TEXT)
    assert frame.points_a == f0.points_a
    assert frame.incidence == f0.incidence
    with_rel = fileio.load_frame(
        F0_TEXT + "rel R sort 1;11 : a0 a0 a1 , a1 a1 a0\n")
    assert with_rel.relations["R"].tuples == {("a0", "a0", "a1"),
                                              ("a1", "a1", "a0")}
    with pytest.raises(ParseError):
        fileio.load_frame(MODEL_TEXT)  # valuation lines


def test_frame_parse_errors():
    with pytest.raises(ParseError, match="line 1"):
        fileio.load_frame("bogus x y\n")
    with pytest.raises(ParseError, match="line 2"):
        fileio.load_frame("sorts A: a0  B: b0\nI: a0\n")
    with pytest.raises(ParseError, match="arity"):
        fileio.load_frame("sorts A: a0  B: b0\nrel R sort 1;1 : a0\n")
    with pytest.raises(ParseError):
        fileio.load_frame("I: a0 b0\n")  # no sorts line


def test_load_model():
    modal, lattice = fileio.load_model(MODEL_TEXT)
    assert modal.var(Sort.ONE, 0) == {"a0"}
    assert modal.var(Sort.DEL, 0) == {"b0"}
    assert lattice.valuation[0] == {"a0"}
    only_lattice, _ = fileio.load_model(F0_TEXT + "val p0 : a0\n")
    assert only_lattice is None
    with pytest.raises(PreconditionError):
        fileio.load_modal_model(F0_TEXT + "val p0 : a0\n")


def test_model_roundtrip():
    modal, lattice = fileio.load_model(MODEL_TEXT)
    again = fileio.load_modal_model(fileio.dump_modal_model(modal))
    assert again.valuation == modal.valuation
    assert again.frame.incidence == modal.frame.incidence
    lat_again = fileio.load_model(fileio.dump_lattice_model(lattice))[1]
    assert lat_again.valuation == lattice.valuation


def test_frame_roundtrip():
    frame = fileio.load_frame(
        F0_TEXT + "rel R sort d;1d : b0 a0 b1\n")
    again = fileio.load_frame(fileio.dump_frame(frame))
    assert again.incidence == frame.incidence
    assert again.relations["R"].tuples == frame.relations["R"].tuples
    assert again.relations["R"].sorting == frame.relations["R"].sorting


def test_lattice_expansion_roundtrip():
    exp = fileio.load_lattice_expansion(CHAIN3_TEXT)
    assert exp.lattice.bottom == "c0" and exp.lattice.top == "c2"
    assert exp.apply("f", ("c1",)) == "c1"
    again = fileio.load_lattice_expansion(fileio.dump_lattice_expansion(exp))
    assert again.lattice.leq_pairs == exp.lattice.leq_pairs
    assert again.operators["f"] == exp.operators["f"]
    for name in catalog.catalog_names():
        exp = catalog.catalog_expansion(name)
        round_ = fileio.load_lattice_expansion(fileio.dump_lattice_expansion(exp))
        assert set(round_.operators) == set(exp.operators)


def test_lattice_parse_errors():
    with pytest.raises(ParseError):
        fileio.load_lattice_expansion("leq: c0 c0\n")  # no elems
    with pytest.raises(ParseError, match="row"):
        fileio.load_lattice_expansion(
            "elems c0\nleq: c0 c0\nop f type 1->1 table: c0 c0\n")


def test_signature_line():
    sig = fileio.parse_signature_line("f 1,1->1 , g d->d")
    assert sig.get("f").arity == 2 and sig.get("g").output is Sort.DEL
    sig2 = fileio.parse_signature_line("f 1,1->1, g d->d")
    assert sig2 == sig
    with pytest.raises(ParseError):
        fileio.parse_signature_line("f")


def test_load_assignment():
    asg, sig = fileio.load_assignment("sig: g d->d\np0 := g(Q0)\np1 := [d] P0\n")
    assert set(asg) == {0, 1}
    assert all(beta.sort is Sort.DEL for beta in asg.values())
    with pytest.raises(ParseError):
        fileio.load_assignment("p0 := P0\n")  # wrong sort
    with pytest.raises(ParseError):
        fileio.load_assignment("x := Q0\n")


def test_load_formula_file():
    sig, formulas = fileio.load_formula_file("sig: f 1->1\n# note\nP0\nf(P0)\n")
    assert "f" in sig and formulas == ["P0", "f(P0)"]


# ---------------------------------------------------------------- CLI

@pytest.fixture
def model_file(tmp_path):
    p = tmp_path / "model.txt"
    p.write_text(MODEL_TEXT)
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_eval(model_file, capsys):
    code, out, _ = run(capsys, "eval", model_file, "[b] Q0", "--point", "a1")
    assert code == 0 and "verdict: true" in out
    code, out, _ = run(capsys, "eval", model_file, "[b] Q0", "--point", "a0")
    assert code == 1 and "verdict: false" in out
    code, out, _ = run(capsys, "eval", model_file, "P0 | ~P0")
    assert code == 0 and "truth-set: a0 a1" in out


def test_cli_eval_errors(model_file, capsys):
    code, _, err = run(capsys, "eval", model_file, "[b] P0")
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "eval", "/nonexistent/m.txt", "P0")
    assert code == 2


def test_cli_extent(model_file, capsys):
    code, out, _ = run(capsys, "extent", model_file, "p0")
    assert code == 0
    assert "extent: a0" in out and "intent: b0" in out


def test_cli_translate(tmp_path, capsys):
    asg = tmp_path / "asg.txt"
    asg.write_text("p0 := Q0\np1 := [d] P0\n")
    code, out, _ = run(capsys, "translate", "p0 \\/ p1", "--asg", str(asg))
    assert code == 0
    assert out.strip() == "[b] (<d> [b] Q0 | <d> [b] [d] P0)"


def test_cli_sttrans(capsys):
    code, out, _ = run(capsys, "sttrans", "[b] Q0")
    assert code == 0 and out.strip() == "alld v1 . I(u, v1) -> Q0(v1)"


def test_cli_stable(capsys):
    code, out, _ = run(capsys, "stable", "P0")
    assert code == 1 and "stable: false" in out
    code, out, _ = run(capsys, "stable", "[b] Q0")
    assert code == 0 and "stable: true" in out
    code, out, _ = run(capsys, "stable", "--fol", "P0(u)")
    assert code == 1 and "stable: false" in out


def test_cli_bisim(model_file, capsys, tmp_path):
    code, out, _ = run(capsys, "bisim", model_file, model_file)
    assert code == 0
    assert "a0 a0" in out and "sort-1 pairs" in out
    pairs = tmp_path / "pairs.txt"
    pairs.write_text("a0 a0\nb1 b1\n")
    code, out, _ = run(capsys, "bisim", model_file, model_file,
                       "--pairs", str(pairs))
    assert code == 0 and "bisimulation: true" in out
    pairs.write_text("a0 a1\n")
    code, out, _ = run(capsys, "bisim", model_file, model_file,
                       "--pairs", str(pairs))
    assert code == 1 and "violation" in out


def test_cli_canon(tmp_path, capsys):
    lat = tmp_path / "chain3.txt"
    lat.write_text(CHAIN3_TEXT)
    code, out, _ = run(capsys, "canon", str(lat))
    assert code == 0
    assert out.splitlines()[0] == "sorts A: c0 c1 c2  B: c0* c1* c2*"
    assert any(line.startswith("rel f") for line in out.splitlines())


def test_cli_concepts(tmp_path, capsys):
    frame = tmp_path / "frame.txt"
    frame.write_text(F0_TEXT)
    code, out, _ = run(capsys, "concepts", str(frame))
    assert code == 0 and "# 4 concepts" in out


def test_cli_gen_roundtrip(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "frame", "--seed", "3")
    assert code == 0
    frame = fileio.load_frame(out)
    assert len(frame.points_a) == 3
    code, out2, _ = run(capsys, "gen", "frame", "--seed", "3")
    assert out2 == out
    code, out, _ = run(capsys, "gen", "model", "--seed", "3")
    assert code == 0
    fileio.load_modal_model(out)
    code, out, _ = run(capsys, "gen", "formula", "--lang", "modal",
                       "--sort", "d", "--seed", "5")
    assert code == 0
    from polarmodal.syntax import parse_modal
    assert parse_modal(out.strip()).sort is Sort.DEL


def test_cli_verify(capsys):
    code, out, _ = run(capsys, "verify", "galois", "--count", "5")
    assert code == 0
    assert "result: PASS" in out
    lines = out.splitlines()
    assert lines[-1].startswith("# wall time")
    # determinism modulo the timing line
    code, out2, _ = run(capsys, "verify", "galois", "--count", "5")
    assert out.splitlines()[:-1] == out2.splitlines()[:-1]
