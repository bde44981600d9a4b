import subprocess
import sys

import pytest

from gindex.cli import main
from gindex.oracle import CorpusSpec, gen_corpus


@pytest.fixture
def e1_files(tmp_path):
    txt = tmp_path / "e1.txt"
    txt.write_bytes(b"abab")
    idx = tmp_path / "e1.gcix"
    assert main(["build", str(txt), "-o", str(idx)]) == 0
    return txt, idx


def test_build_reports_stats(tmp_path, capsys):
    txt = tmp_path / "t.txt"
    txt.write_bytes(b"abab")
    assert main(["build", str(txt), "-o", str(tmp_path / "i")]) == 0
    out = capsys.readouterr().out
    assert "g=4" in out and "G_tree=4" in out and "G_repair=4" in out and "bps=" in out


def test_build_errors(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.write_bytes(b"")
    assert main(["build", str(empty), "-o", str(tmp_path / "i")]) == 2
    assert main(["build", str(tmp_path / "missing"), "-o", str(tmp_path / "i")]) == 1
    assert main(["build", "-o", str(tmp_path / "i")]) == 2
    txt = tmp_path / "t"
    txt.write_bytes(b"ab")
    assert main(["build", str(txt), "-o", str(tmp_path / "no" / "dir" / "i")]) == 1
    assert main(["build", str(txt), "-o", str(tmp_path / "i"), "--sample-rate", "0"]) == 2


def test_locate(e1_files, capsys):
    _, idx = e1_files
    capsys.readouterr()
    assert main(["locate", str(idx), "--pattern", "ab"]) == 0
    assert capsys.readouterr().out == "0\n2\n"
    assert main(["locate", str(idx), "--pattern-hex", "6261"]) == 0
    assert capsys.readouterr().out == "1\n"
    assert main(["locate", str(idx), "--pattern", "zz"]) == 0
    assert capsys.readouterr().out == ""
    assert main(["locate", str(idx), "--pattern", "ab", "--count"]) == 0
    assert capsys.readouterr().out == "2\n"


def test_locate_pattern_file_and_errors(e1_files, tmp_path, capsys):
    _, idx = e1_files
    pf = tmp_path / "p"
    pf.write_bytes(b"bab")
    assert main(["locate", str(idx), "--pattern-file", str(pf)]) == 0
    assert capsys.readouterr().out == "1\n"
    assert main(["locate", str(idx), "--pattern", ""]) == 2
    assert main(["locate", str(idx), "--pattern-hex", "zz"]) == 2
    assert main(["locate", str(tmp_path / "missing"), "--pattern", "a"]) == 1


def test_extract(e1_files, capsysbinary):
    _, idx = e1_files
    capsysbinary.readouterr()
    assert main(["extract", str(idx), "--from", "0", "--len", "4"]) == 0
    assert capsysbinary.readouterr().out == b"abab"
    assert main(["extract", str(idx), "--from", "3", "--len", "1"]) == 0
    assert capsysbinary.readouterr().out == b"b"
    assert main(["extract", str(idx), "--from", "4", "--len", "1"]) == 2
    assert main(["extract", str(idx), "--from", "-1", "--len", "1"]) == 2


def test_verify(tmp_path, capsys):
    text = gen_corpus(CorpusSpec(base_len=500, copies=10, mutation_rate=0.01, seed=2))
    txt = tmp_path / "c.txt"
    txt.write_bytes(text)
    idx = tmp_path / "c.gcix"
    assert main(["build", str(txt), "-o", str(idx), "--sample-rate", "8"]) == 0
    assert main(["verify", str(txt), str(idx)]) == 0
    assert "PASS verify" in capsys.readouterr().out
    wrong = tmp_path / "w.txt"
    wrong.write_bytes(text[:-1])
    assert main(["verify", str(wrong), str(idx)]) == 2
    # same length, different content: mismatches are reported
    other = tmp_path / "o.txt"
    other.write_bytes(bytes(reversed(text)))
    assert main(["verify", str(other), str(idx), "--patterns", "50"]) == 3
    assert "FAIL" in capsys.readouterr().out


def test_corrupted_index(e1_files, tmp_path):
    txt, idx = e1_files
    data = bytearray(idx.read_bytes())
    data[40] ^= 0x10
    bad = tmp_path / "bad.gcix"
    bad.write_bytes(bytes(data))
    assert main(["verify", str(txt), str(bad)]) == 1
    assert main(["locate", str(bad), "--pattern", "a"]) == 1
    assert main(["stats", str(bad)]) == 1


def test_stats(e1_files, capsys):
    _, idx = e1_files
    capsys.readouterr()
    assert main(["stats", str(idx)]) == 0
    out = capsys.readouterr().out
    assert "total" in out and "bps" in out
    total = int(next(ln for ln in out.splitlines() if ln.startswith("total")).split()[1])
    assert total > 0


def test_stats_bps_below_8_on_identical_copies(tmp_path, capsys):
    text = gen_corpus(CorpusSpec(base_len=10_000, copies=100, mutation_rate=0.0, seed=0))
    txt = tmp_path / "c.txt"
    txt.write_bytes(text)
    idx = tmp_path / "c.gcix"
    assert main(["build", str(txt), "-o", str(idx)]) == 0
    capsys.readouterr()
    assert main(["stats", str(idx)]) == 0
    line = next(ln for ln in capsys.readouterr().out.splitlines() if ln.startswith("total"))
    assert float(line.split()[3]) < 8


def test_bench(e1_files, capsys):
    _, idx = e1_files
    assert main(["bench", str(idx), "--queries", "0"]) == 2
    assert main(["bench", str(idx), "--queries", "20", "--plen", "2", "--extract-len", "3",
                 "--threads", "2"]) == 0
    out = capsys.readouterr().out
    assert "us/occurrence" in out and "us/symbol" in out


def test_grammar_in_and_out(tmp_path, capsys):
    txt = tmp_path / "t.txt"
    txt.write_bytes(b"abcabcabc")
    grm = tmp_path / "t.grm"
    assert main(["build", str(txt), "-o", str(tmp_path / "a"), "--grammar-out", str(grm)]) == 0
    assert grm.read_text().startswith("GRM1 ")
    assert main(["build", str(txt), "--grammar-in", str(grm), "-o", str(tmp_path / "b"),
                 "--with-trie"]) == 0
    assert main(["build", "--grammar-in", str(grm), "-o", str(tmp_path / "c")]) == 0
    assert (tmp_path / "a").read_bytes() == (tmp_path / "c").read_bytes()
    # text and grammar disagree
    other = tmp_path / "o.txt"
    other.write_bytes(b"abc")
    assert main(["build", str(other), "--grammar-in", str(grm), "-o", str(tmp_path / "d")]) == 2
    bad = tmp_path / "bad.grm"
    bad.write_text("nonsense\n")
    assert main(["build", "--grammar-in", str(bad), "-o", str(tmp_path / "e")]) == 2


def test_grammar_in_with_unit_rule_warns(tmp_path, capsys):
    grm = tmp_path / "u.grm"
    grm.write_text("GRM1 61,62 X2 4\nX0 -> 'a 'b\nX1 -> X0\nX2 -> X1 X0\n")
    idx = tmp_path / "u.gcix"
    assert main(["build", "--grammar-in", str(grm), "-o", str(idx)]) == 0
    assert "warning: 1 unit rule" in capsys.readouterr().err
    assert main(["locate", str(idx), "--pattern", "ab"]) == 0
    assert capsys.readouterr().out == "0\n2\n"


def test_console_script_entry_point(tmp_path):
    txt = tmp_path / "t.txt"
    txt.write_bytes(b"abab")
    idx = tmp_path / "t.gcix"
    run = [sys.executable, "-m", "gindex.cli"]
    r = subprocess.run(run + ["build", str(txt), "-o", str(idx)], capture_output=True)
    assert r.returncode == 0
    r = subprocess.run(run + ["locate", str(idx), "--pattern", "ab"], capture_output=True)
    assert r.stdout == b"0\n2\n"
    r = subprocess.run(run + ["locate", str(idx)], capture_output=True)
    assert r.returncode == 2
