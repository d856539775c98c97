import io
import subprocess
import sys

import pytest

from cubsub.cli import run
from cubsub.presheaf import Representable, TabulatedCubicalSet
from cubsub.names import names


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_compose():
    code, out = call("compose", "{a0}->{a1}: a0=>a1", "{a1}->{}: a1=>0")
    assert code == 0 and out.strip() == "{a0} -> {} : a0=>0"


def test_enumerate():
    code, out = call("enumerate", "{a0}", "{a1}")
    assert code == 0 and out.strip().splitlines()[-1] == "3 morphisms"
    code, out = call("enumerate", "{a0,a1}", "{a2}", "--format", "lines")
    assert out.strip().splitlines()[-1] == "count\t8"


def test_decompose():
    code, out = call("decompose", "{a0,a1} -> {a2} : a0=>a2, a1=>0")
    assert code == 0 and out == "perm: (a0 a2)\nsubst: [a1:=0]\n"


def test_laws_freesub():
    code, out = call("laws", "freesub:2", "--universe", "3")
    lines = out.strip().splitlines()
    assert code == 0 and lines[-1].startswith("PASS: 0 violation(s)")
    assert any(line.startswith("PASS a # x(a:=i)") for line in lines)


def test_lines_format_is_tab_separated():
    code, out = call("laws", "discrete", "--universe", "2", "--format", "lines")
    assert code == 0
    for line in out.strip().splitlines():
        fields = line.split("\t")
        assert fields[2] == "PASS" and int(fields[4]) == 0


@pytest.mark.parametrize("inst", ["discrete", "product", "rep:1", "box:1"])
def test_roundtrip_and_laws(inst):
    assert call("roundtrip", inst, "--universe", "3", "--support", "2")[0] == 0
    assert call("laws", inst, "--universe", "3", "--support", "2")[0] == 0


def test_table_instance(tmp_path):
    path = tmp_path / "rep.table"
    path.write_text(TabulatedCubicalSet.tabulate(Representable(names(0)), 2).to_text())
    assert call("laws", f"table:{path}")[0] == 0
    assert call("roundtrip", f"table:{path}")[0] == 0


def test_kan_verbs():
    assert call("kan", "discrete", "--objects", "3")[0] == 0
    code, out = call("kan", "freesub:1", "--universe", "3")
    assert code == 0 and "no filling for" in out


def test_fibration_exit_codes():
    assert call("fibration", "projection", "--universe", "3")[0] == 0
    code, out = call("fibration", "collapse", "--universe", "3")
    assert code == 1 and "witness:" in out and out.strip().splitlines()[-1].startswith("FAIL")


def test_bad_input_exit_2(capsys):
    assert call("compose", "{a0,a1}->{a2}: a0=>a2, a1=>a2", "{a2}->{}: a2=>0")[0] == 2
    err = capsys.readouterr().err
    assert "a0 and a1 both map to a2" in err and "position" in err
    assert call("laws", "nonsense")[0] == 2
    assert call("laws", "freesub:x")[0] == 2
    assert call("laws", "discrete", "--universe", "0")[0] == 2
    assert call("kan", "rep:1")[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cubsub", "enumerate", "{a0}", "{a1}"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "3 morphisms" in r.stdout
