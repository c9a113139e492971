import pytest

from esmin.cli import main
from esmin.iso import is_isomorphic
from esmin.textio import load_fixture, read_es


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestVerdicts:
    def test_folding(self, capsys):
        code, out, _ = run(capsys, "check-folding", "p0", "p2", "f02")
        assert code == 0
        assert out.startswith("folding f02: yes")

    def test_not_a_folding(self, capsys):
        code, out, _ = run(capsys, "check-folding", "p0", "p1", "f01")
        assert code == 1
        assert "[transition]" in out

    def test_pes_criteria(self, capsys):
        code, out, _ = run(capsys, "check-folding", "--criteria", "pes", "p0", "p1", "f01")
        assert code == 1
        assert "[1]" in out

    def test_not_a_morphism(self, capsys):
        code, out, _ = run(capsys, "check-folding", "f0", "f3", "ff03")
        assert code == 1
        assert "not a morphism" in out

    def test_morphism(self, capsys):
        assert run(capsys, "check-morphism", "p0", "p1", "f01")[0] == 0

    def test_abstraction(self, capsys):
        code, out, _ = run(capsys, "check-abstraction", "p7", "p8", "f78")
        assert code == 0
        assert "folding: no" in out

    def test_bisim(self, capsys):
        code, out, _ = run(capsys, "bisim", "p0", "p1")
        assert code == 0
        assert out.startswith("hhp-bisimilar: yes")

    def test_not_bisimilar(self, capsys):
        code, out, _ = run(capsys, "bisim", "--hp", "p4", "p5")
        assert code == 1
        assert out.strip() == "hp-bisimilar: no"


class TestStructures:
    def test_validate(self, capsys):
        code, out, _ = run(capsys, "validate", "p0")
        assert code == 0
        assert "p0: valid" in out

    def test_invalid_family(self, capsys, tmp_path):
        path = tmp_path / "bad.es"
        path.write_text("kind poset\nevent a\nevent c\nconfig a c : a<c\n", encoding="utf-8")
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 1
        assert "[prefix-closed]" in out

    def test_configs(self, capsys):
        code, out, _ = run(capsys, "configs", "either_c")
        assert code == 0
        assert out.splitlines()[0] == "{}"
        assert len(out.splitlines()) == 7

    def test_histories(self, capsys):
        _, out, _ = run(capsys, "histories", "either_c")
        assert [line for line in out.splitlines() if line.startswith("c:")] == [
            "c: {c}", "c: {a c : a<c}", "c: {b c : b<c}",
        ]

    def test_unfold_to_file(self, capsys, tmp_path):
        out_file = tmp_path / "u.es"
        assert run(capsys, "unfold", "either_c", "-o", str(out_file))[0] == 0
        assert is_isomorphic(read_es(out_file), load_fixture("either_c_pes"))

    def test_dot(self, capsys):
        code, out, _ = run(capsys, "dot", "p2")
        assert code == 0
        assert out.startswith("digraph")


class TestQuotients:
    def test_quotient(self, capsys, tmp_path):
        eq = tmp_path / "p0.eq"
        eq.write_text("class a1 a2\nclass b1 b2\n", encoding="utf-8")
        code, out, _ = run(capsys, "quotient", "p0", str(eq))
        assert code == 0
        assert out.startswith("kind poset")
        assert "config a1+a2 b1+b2 : a1+a2<b1+b2" in out

    def test_join(self, capsys):
        code, out, _ = run(capsys, "join", "p3", "f30", "p0", "f31", "p1")
        assert code == 0
        assert "# g1: p0 -> join" in out
        assert "map a1 a1+a2" in out

    def test_join_of_non_foldings(self, capsys):
        code, out, _ = run(capsys, "join", "p0", "f01", "p1", "f02", "p2")
        assert code == 1
        assert out.startswith("not foldings")

    def test_minimize(self, capsys):
        code, out, _ = run(capsys, "minimize", "split_a0", "--class", "aes")
        assert code == 0
        assert out.splitlines()[0].startswith("# 2 maximal folding equivalence(s) in class aes")
        assert "# quotient 0: a b c0+c1 c2" in out
        assert "# quotient 1: a b c0+c2 c1" in out

    def test_minimize_to_directory(self, capsys, tmp_path):
        assert run(capsys, "minimize", "p0", "--class", "pes", "-o", str(tmp_path))[0] == 0
        written = sorted(p.name for p in tmp_path.iterdir())
        assert written == ["p0.min0.eq", "p0.min0.es", "p0.min0.map"]
        assert is_isomorphic(read_es(tmp_path / "p0.min0.es"), load_fixture("p2"))


class TestErrors:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "validate", "no_such_structure")
        assert code == 2
        assert err.startswith("error[io-error]")

    def test_map_into_wrong_target(self, capsys):
        code, _, err = run(capsys, "check-folding", "p0", "p2", "f01")
        assert code == 2
        assert err.startswith("error[undeclared-event]")

    def test_wrong_class(self, capsys):
        code, _, err = run(capsys, "minimize", "either_c", "--class", "pes")
        assert code == 2
        assert "error[wrong-class]" in err

    def test_bad_config_value(self, capsys, monkeypatch):
        monkeypatch.setenv("ESMIN_TRIPLE_CAP", "lots")
        code, _, err = run(capsys, "bisim", "p0", "p1")
        assert code == 2
        assert err.startswith("error[config-error]")

    def test_usage(self, capsys):
        with pytest.raises(SystemExit) as exit_:
            main(["frobnicate"])
        assert exit_.value.code == 2
