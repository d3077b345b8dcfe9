import subprocess
import sys
from pathlib import Path

PKG_ROOT = Path(__file__).resolve().parent.parent
BURGER = PKG_ROOT / "programs" / "burger.lp"
FLIGHTS = PKG_ROOT / "programs" / "flights.lp"


def run_cli(*args, stdin=""):
    return subprocess.run(
        [sys.executable, "-m", "addprolog.cli", *args],
        input=stdin, capture_output=True, text=True, timeout=60,
    )


def test_batch_burger_prov_exact():
    r = run_cli(str(BURGER), "--query", "hset & fset", "--semantics", "prov")
    assert r.stdout == "yes.\n"
    assert r.returncode == 0


def test_batch_flights_choice_zero_exact():
    r = run_cli(str(FLIGHTS), "--query",
                "panam(paris,nice,Dt,At) & delta(paris,nice,Dt2,At2)",
                "--choices", "0")
    assert r.stdout == (
        "Dt = '9:40'.\n"
        "At = '10:50'.\n"
        "Dt2 = '8:40'.\n"
        "At2 = '09:35'.\n"
        "yes.\n"
    )
    assert r.returncode == 0


def test_batch_flights_choice_one_exact():
    r = run_cli(str(FLIGHTS), "--query",
                "panam(paris,nice,Dt,At) & delta(paris,nice,Dt2,At2)",
                "--choices", "1")
    assert r.stdout == (
        "Dt = '9:40'.\n"
        "At = '10:50'.\n"
        "Dt2 = '8:40'.\n"
        "At2 = '09:35'.\n"
        "yes.\n"
    )
    assert r.returncode == 0


def test_missing_file_exits_3():
    r = run_cli("missing.lp")
    assert r.returncode == 3
    assert "missing.lp" in r.stderr


def test_program_parse_error_exits_3(tmp_path):
    bad = tmp_path / "bad.lp"
    bad.write_text("p :- q &.\n")
    r = run_cli(str(bad), "--query", "p")
    assert r.returncode == 3
    assert "bad.lp" in r.stderr and "1:" in r.stderr


def test_query_parse_error_exits_3():
    r = run_cli(str(BURGER), "--query", "hset &")
    assert r.returncode == 3


def test_failure_exits_1():
    r = run_cli(str(BURGER), "--query", "nosuch")
    assert r.stdout == "no.\n"
    assert r.returncode == 1


def test_indeterminate_exits_2(tmp_path):
    loop = tmp_path / "loop.lp"
    loop.write_text("p :- p.\n")
    r = run_cli(str(loop), "--query", "p", "--limit-steps", "50")
    assert r.stdout == "unknown.\n"
    assert r.returncode == 2


def test_scripted_batch_reads_no_stdin():
    # stdin is empty and closed; a prompt would fail loudly
    r = run_cli(str(BURGER), "--query", "hset & fset", "--choices", "1", stdin="")
    assert r.stdout == "yes.\n"
    assert r.returncode == 0


def test_script_too_short_exits_3():
    r = run_cli(str(BURGER), "--query", "hset & fset", "--choices", "", stdin="")
    assert r.returncode == 3
    assert "choices" in r.stderr


def test_bad_choices_flag_exits_3():
    r = run_cli(str(BURGER), "--query", "hset & fset", "--choices", "2")
    assert r.returncode == 3


def test_all_answers(tmp_path):
    prog = tmp_path / "p.lp"
    prog.write_text("p(a). p(b).\n")
    r = run_cli(str(prog), "--query", "p(X)", "--all")
    assert r.stdout == "X = a.\nyes.\nX = b.\nyes.\n"
    assert r.returncode == 0


def test_trace_goes_to_stderr():
    r = run_cli(str(BURGER), "--query", "hset", "--semantics", "prov", "--trace")
    assert r.stdout == "yes.\n"
    assert "[step1]" in r.stderr


def test_interactive_batch_prompt():
    r = run_cli(str(BURGER), "--query", "hset & fset", stdin="1\n")
    assert "[0] hset" in r.stdout and "[1] fset" in r.stdout
    assert r.stdout.endswith("yes.\n")
    assert r.returncode == 0


# -- REPL --------------------------------------------------------------------

def test_repl_choice_then_yes():
    r = run_cli(str(BURGER), stdin="?- hset & fset.\n0\nhalt.\n")
    assert "[0] hset" in r.stdout and "[1] fset" in r.stdout
    assert "yes.\n" in r.stdout
    assert r.returncode == 0


def test_repl_no():
    r = run_cli(str(BURGER), stdin="nosuch.\nhalt.\n")
    assert "no.\n" in r.stdout
    assert r.returncode == 0


def test_repl_parse_error_reprompts():
    r = run_cli(str(BURGER), stdin="p(X\nhset.\nhalt.\n")
    assert "parse error" in r.stdout
    assert "yes.\n" in r.stdout  # the session survived the bad line
    assert r.returncode == 0


def test_repl_more(tmp_path):
    prog = tmp_path / "p.lp"
    prog.write_text("p(a). p(b).\n")
    r = run_cli(str(prog), stdin="p(X).\nmore.\nmore.\nhalt.\n")
    assert "X = a.\n" in r.stdout
    assert "X = b.\n" in r.stdout
    assert r.stdout.count("yes.\n") == 2
    assert "no.\n" in r.stdout  # the third request had nothing left


def test_repl_more_without_session():
    r = run_cli(str(BURGER), stdin="more.\nhalt.\n")
    assert "no.\n" in r.stdout


def test_repl_bad_choice_input_reprompts():
    r = run_cli(str(BURGER), stdin="?- hset & fset.\nx\n7\n0\nhalt.\n")
    assert r.stdout.count("choice>") >= 3
    assert "please answer 0 or 1." in r.stdout
    assert "yes.\n" in r.stdout


def test_repl_eof_exits_cleanly():
    r = run_cli(str(BURGER), stdin="")
    assert r.returncode == 0


def test_interactive_prompt_eof_exits_3():
    # no --choices and stdin closed: the pending prompt cannot be answered
    r = run_cli(str(BURGER), "--query", "hset & fset", stdin="")
    assert r.returncode == 3
    assert "input closed" in r.stderr
