import pytest

from winshift.automata import enumerate_words
from winshift.cli import main
from winshift.textformat import dumps, loads
from winshift.wreg import finite_language_dfa


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def three_words(tmp_path):
    f = tmp_path / "three-words.txt"
    f.write_text("000\n110\n111\n")
    return str(f)


def test_win_set(capsys, three_words):
    code, out, _ = run(capsys, "game", "win-set", "--file", three_words)
    assert code == 0 and out.strip() == "000,001,100"
    code, out, _ = run(capsys, "game", "win-set", "--file", three_words, "--lines")
    assert out.split() == ["000", "001", "100"]


def test_game_check(capsys):
    code, out, _ = run(capsys, "game", "check", "--word", "thue-morse", "--n", "4", "1101")
    assert code == 0 and out
    code, _, _ = run(capsys, "game", "check", "--word", "thue-morse", "--n", "4", "1111")
    assert code == 1


def test_max_branchings(capsys):
    assert run(capsys, "game", "max-branchings", "--word", "period-doubling", "--n", "64")[1].strip() == "2"


def test_witness(capsys):
    code, out, _ = run(capsys, "game", "witness", "thue-morse", "3", "--budget", "20")
    assert code == 0 and out.splitlines()[0] == "1^2 0 1"


def test_ans(capsys):
    assert run(capsys, "ans", "rep", "--system", "z", "22")[1].strip() == "1000"
    assert run(capsys, "ans", "val", "--system", "z", "1000")[1].strip() == "22"
    assert run(capsys, "ans", "rep", "--system", "z", "0", "4")[1] == "\n10\n"
    assert run(capsys, "ans", "val", "--system", "z", "2213")[0] == 3


def test_words(capsys):
    assert run(capsys, "word", "prefix", "thue-morse", "8")[1].strip() == "01101001"
    code, out, _ = run(capsys, "word", "factors", "thue-morse", "4")
    assert code == 0 and len(out.split()) == 10
    assert run(capsys, "word", "letter", "no-such-word", "3")[0] == 2


def test_coding_dim(capsys):
    assert run(capsys, "pred", "coding-dim", "thue-morse")[1].strip() == "3"
    code, out, _ = run(capsys, "pred", "coding-dim", "rudin-shapiro", "--dmax", "2")
    assert code == 7 and out.strip() == ">= 3"
    assert run(capsys, "pred", "coding-dim", "cassaigne-z")[0] == 4


def test_pred_compile(capsys, tmp_path):
    f = tmp_path / "f.txt"
    f.write_text('def factorEq "Ai (0 <= i & i < k) => T[n+i] = T[m+i]":\n$factorEq(2,0,m)\n')
    code, out, _ = run(capsys, "pred", "compile", str(f), "--out", "csv", "--bound", "20")
    assert code == 0
    tm = "0110100110010110"
    assert {int(r) for r in out.split() if int(r) < 14} == {m for m in range(14) if tm[m : m + 2] == "01"}
    bad = tmp_path / "bad.txt"
    bad.write_text("Ex x <\n")
    assert run(capsys, "pred", "compile", str(bad))[0] == 6


def test_pred_winshift(capsys):
    code, out, _ = run(capsys, "pred", "winshift", "thue-morse", "--arity", "3", "--out", "csv", "--bound", "13")
    assert code == 0
    rows = set(out.split())
    assert "1,5,13" in rows and "0,0,0" in rows
    assert run(capsys, "pred", "winshift", "thue-morse", "--arity", "2")[0] == 7
    code, out, _ = run(capsys, "pred", "winshift", "period-doubling", "--arity", "2", "--out", "dot")
    assert code == 0 and out.startswith("digraph")


def test_cap_environment(capsys, monkeypatch):
    monkeypatch.setenv("WINSHIFT_STATE_CAP", "3")
    assert run(capsys, "pred", "coding-dim", "thue-morse")[0] == 5


def test_wreg(capsys, tmp_path):
    f = tmp_path / "x.txt"
    f.write_text(dumps(finite_language_dfa(["000", "110", "111"], "01")))
    code, out, _ = run(capsys, "wreg", str(f), "--enumerate", "3")
    assert code == 0 and out.split() == ["000", "001", "100"]
    code, out, _ = run(capsys, "wreg", str(f))
    w = loads(out)
    assert {"".join(map(str, x)) for x in enumerate_words(w, 3)} == {"000", "001", "100"}


def test_reproduce(capsys):
    code, out, _ = run(capsys, "reproduce", "intro-example")
    assert code == 0 and out.startswith("PASS")
    assert run(capsys, "reproduce", "no-such-claim")[0] == 2
    code, out, _ = run(capsys, "reproduce", "--list")
    assert "z-sum4-witness" in out and "base2-arithmetic" in out
    assert run(capsys, "reproduce")[0] == 64


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["game", "win-set", "--n", "x"])
    assert exc.value.code != 0
    assert run(capsys, "game", "win-set")[0] == 64
