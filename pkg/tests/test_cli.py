import subprocess
import sys
from pathlib import Path

import pytest

from paradigmkit.cli import FALSE, INVALID, IO_ERROR, OK, bench_rows, format_bench, main
from paradigmkit.lts import import_aut

MODELS = Path(__file__).resolve().parent.parent / "demos" / "models"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCommands:
    def test_validate(self, capsys):
        assert run(capsys, "validate", str(MODELS / "cs_basic_2.pm"))[:2] == (OK, "valid\n")

    def test_validate_broken(self, capsys, tmp_path):
        f = tmp_path / "bad.pm"
        f.write_text("std A { initial p; p -go-> q; }\npartition P of A { phase X { states p; traps { t = {}; } } }")
        code, _, err = run(capsys, "validate", str(f))
        assert code == INVALID and "empty" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "validate", "/nonexistent/model.pm")
        assert code == IO_ERROR and "cannot read" in err

    def test_syntax_error(self, capsys, tmp_path):
        f = tmp_path / "bad.pm"
        f.write_text("std A {")
        assert run(capsys, "validate", str(f))[0] == INVALID

    def test_translate_system(self, capsys):
        code, out, _ = run(capsys, "translate", "--clients", "2")
        lts = import_aut(out)
        assert code == OK and (lts.n_states, len(lts.transitions)) == (69, 142)

    def test_translate_reduced(self, capsys):
        code, out, _ = run(capsys, "translate", "--clients", "2", "--reduced")
        assert out.startswith("des (0, 54, 32)")

    @pytest.mark.parametrize("what, header", [
        ("detailed", "des (0, 7, 4)"),
        ("global", "des (0, 14, 6)"),
        ("dg", "des (0, 17, 13)"),
    ])
    def test_translate_component(self, capsys, what, header):
        code, out, _ = run(capsys, "translate", "--what", what)
        assert code == OK and out.splitlines()[0] == header

    def test_translate_conductor(self, capsys):
        code, out, _ = run(capsys, "translate", "--what", "conductor", "--instance", "Server")
        assert out.splitlines()[0] == "des (0, 8, 5)"

    def test_translate_reduced_dg(self, capsys):
        out = run(capsys, "translate", "--what", "dg", "--reduced")[1]
        assert import_aut(out).n_states == 9

    def test_output_file_and_names(self, capsys, tmp_path):
        out = tmp_path / "sys.aut"
        assert run(capsys, "translate", "-o", str(out))[0] == OK
        assert out.read_text().startswith("des (0, 142, 69)")
        names = (tmp_path / "sys.aut.names").read_text().splitlines()
        assert len(names) == 69 and names[0].startswith("0 (")

    def test_dot(self, capsys):
        out = run(capsys, "translate", "--what", "detailed", "--format", "dot")[1]
        assert out.startswith("digraph")

    def test_inert(self, capsys):
        code, out, _ = run(capsys, "inert")
        assert code == OK and "inert actions: explain, leave" in out

    def test_quotient(self, capsys):
        code, out, _ = run(capsys, "quotient", "--inert-set", "explain,leave")
        assert "AtDoor+Out = {Out, AtDoor}" in out
        assert "AtDoor+Out -enter-> Busy+Waiting" in out

    def test_quotient_aut(self, capsys, tmp_path):
        f = tmp_path / "cycle.aut"
        f.write_text('des (0, 3, 3)\n(0,"tau",1)\n(1,"tau",2)\n(2,"tau",0)\n')
        out = run(capsys, "quotient", "--aut", str(f))[1]
        assert out == "des (0, 0, 1)\n"

    def test_lemma1(self, capsys):
        code, out, _ = run(capsys, "lemma1", "--inert-set", "explain,leave")
        assert code == OK and "reduced 9 states, original 13 states" in out
        assert run(capsys, "lemma1", "--inert-set", "enter,thank")[0] == FALSE

    def test_lemma1_unknown_action(self, capsys):
        assert run(capsys, "lemma1", "--inert-set", "fly")[0] == INVALID

    def test_lemma2(self, capsys):
        assert run(capsys, "lemma2")[0] == OK
        assert run(capsys, "lemma2", "--variant", "return")[0] == FALSE

    def test_reduce_system(self, capsys):
        out = run(capsys, "reduce-system", "--clients", "3")[1]
        assert out.startswith("des (0, 204, 92)")

    def test_reduce_system_refuses(self, capsys):
        assert run(capsys, "reduce-system", "--inert-set", "enter,thank")[0] == INVALID
        assert run(capsys, "reduce-system", "--inert-set", "enter,thank", "--no-check")[0] == OK

    def test_equiv(self, capsys, tmp_path):
        a = tmp_path / "a.aut"
        b = tmp_path / "b.aut"
        a.write_text('des (0, 1, 2)\n(0,"a",1)\n')
        b.write_text('des (0, 2, 3)\n(0,"tau",1)\n(1,"a",2)\n')
        assert run(capsys, "equiv", str(a), str(a))[0] == OK
        assert run(capsys, "equiv", str(a), str(b))[0] == OK
        assert run(capsys, "equiv", "--oracle", str(a), str(b))[0] == OK
        b.write_text('des (0, 1, 2)\n(0,"b",1)\n')
        assert run(capsys, "equiv", str(a), str(b))[0] == FALSE
        assert run(capsys, "equiv", "--oracle", str(a), str(b))[0] == FALSE

    def test_equiv_bad_aut(self, capsys, tmp_path):
        a = tmp_path / "a.aut"
        a.write_text("des (0, 5, 2)\n")
        assert run(capsys, "equiv", str(a), str(a))[0] == INVALID

    def test_generate_round_trip(self, capsys):
        out = run(capsys, "generate", "--clients", "2")[1]
        assert out == (MODELS / "cs_basic_2.pm").read_text()


class TestBench:
    def test_rows(self):
        rows = bench_rows(3, reduced=True)
        assert [r[:5] for r in rows] == [(2, 69, 142, 32, 54), (3, 297, 819, 92, 204)]

    def test_format(self):
        text = format_bench([(2, 69, 142, None, None, 0.1)], reduced=True)
        assert text.splitlines()[2].split() == ["2", "|", "69", "142", "|", "--", "--"]

    def test_command(self, capsys):
        code, out, _ = run(capsys, "bench", "--clients-max", "3")
        assert code == OK
        assert [ln.split()[2:] for ln in out.splitlines()[2:]] == [["69", "142"], ["297", "819"]]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "paradigmkit", "inert"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "explain, leave" in proc.stdout
