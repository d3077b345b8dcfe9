import pytest

from addprolog.engine import Failure as OutFailure
from addprolog.engine import Indeterminate as OutIndeterminate
from addprolog.engine import Limits, ScriptedOracle, Success, run_query
from addprolog.ast import Program
from addprolog.parser import parse_goal, parse_program, pretty
from addprolog.session import (
    ChoiceMade,
    ChoiceRequested,
    Failed,
    Indeterminate,
    InvalidState,
    Solved,
    UnknownRequest,
    outcomes_equal,
    start,
)

BURGER = """
hburger. fburger. coke. onion.
hset :- hburger , coke , (onion ; cone).
fset :- fburger , coke , (onion ; cone).
"""

FLIGHTS = """
panam(paris, nice, '9:40', '10:50').
panam(nice, london, '9:45', '10:10').
delta(paris, nice, '8:40', '09:35').
delta(paris, london, '9:24', '09:50').
"""

FLIGHT_GOAL = "panam(paris,nice,Dt,At) & delta(paris,nice,Dt2,At2)"


def flights_session(semantics="prove"):
    return start(parse_program(FLIGHTS), parse_goal(FLIGHT_GOAL), semantics)


def test_start_does_no_work():
    s = start(parse_program(BURGER), parse_goal("hset & fset"), "prove")
    assert s.state == "created"
    assert s.stats.resolution_steps == 0
    assert s.transcript == []


def test_advance_asks_for_the_with_choice():
    s = start(parse_program(BURGER), parse_goal("hset & fset"), "prove")
    ev = s.advance()
    assert isinstance(ev, ChoiceRequested)
    assert pretty(ev.cp.left) == "hset" and pretty(ev.cp.right) == "fset"
    assert s.state == "awaiting_choice"


def test_prov_session_never_suspends():
    s = start(parse_program(BURGER), parse_goal("hset"), "prov")
    ev = s.advance()
    assert isinstance(ev, Solved) and ev.bindings == ()
    assert s.stats.choice_requests == 0
    assert s.state == "done"


def test_advance_failure():
    s = start(Program(), parse_goal("a"), "prove")
    assert isinstance(s.advance(), Failed)
    assert isinstance(s.outcome, OutFailure)


def test_resolve_choice_flight_bindings():
    s = flights_session()
    ev = s.advance()
    solved = s.resolve_choice(ev.request_id, 0)
    assert isinstance(solved, Solved)
    assert [(n, pretty(t)) for n, t in solved.bindings] == [
        ("Dt", "'9:40'"), ("At", "'10:50'"), ("Dt2", "'8:40'"), ("At2", "'09:35'"),
    ]


def test_resolve_choice_index_out_of_range():
    s = flights_session()
    ev = s.advance()
    with pytest.raises(ValueError):
        s.resolve_choice(ev.request_id, 2)
    # the session is untouched and still answerable
    assert s.state == "awaiting_choice"
    assert isinstance(s.resolve_choice(ev.request_id, 1), Solved)


def test_resolve_choice_unknown_request_id():
    s = flights_session()
    ev = s.advance()
    with pytest.raises(UnknownRequest):
        s.resolve_choice("r999", 0)
    assert s.state == "awaiting_choice"
    assert isinstance(s.resolve_choice(ev.request_id, 0), Solved)


def test_resolve_choice_on_done_session():
    s = start(parse_program("q."), parse_goal("q"), "prove")
    s.advance()
    with pytest.raises(InvalidState):
        s.resolve_choice("r1", 0)


def test_advance_in_awaiting_or_done_is_invalid():
    s = flights_session()
    s.advance()
    with pytest.raises(InvalidState):
        s.advance()


def test_transcript_pairs_choices_with_requests():
    s = flights_session()
    ev = s.advance()
    s.resolve_choice(ev.request_id, 1)
    kinds = [type(e).__name__ for e in s.transcript]
    assert kinds == ["ChoiceRequested", "ChoiceMade", "Solved"]
    made = next(e for e in s.transcript if isinstance(e, ChoiceMade))
    assert made.request_id == ev.request_id and made.index == 1


def test_replay_reproduces_flight_session():
    s = flights_session()
    ev = s.advance()
    s.resolve_choice(ev.request_id, 0)
    assert outcomes_equal(s.replay(), s.outcome)


def test_replay_of_failed_session():
    s = start(parse_program("q."), parse_goal("p & q"), "prove")
    ev = s.advance()
    s.resolve_choice(ev.request_id, 1)
    assert isinstance(s.outcome, OutFailure)
    assert isinstance(s.replay(), OutFailure)


def test_replay_of_choice_free_session():
    s = start(parse_program(BURGER), parse_goal("hset & fset"), "prov")
    s.advance()
    assert outcomes_equal(s.replay(), s.outcome)


def test_replay_requires_done():
    s = flights_session()
    with pytest.raises(InvalidState):
        s.replay()


def test_indeterminate_session():
    s = start(parse_program("p :- p."), parse_goal("p"), "prove", Limits(steps=60))
    ev = s.advance()
    assert isinstance(ev, Indeterminate) and ev.reason == "steps"
    assert isinstance(s.outcome, OutIndeterminate)
    assert outcomes_equal(s.replay(), s.outcome)


def test_more_enumerates_further_answers():
    s = start(parse_program("p(a). p(b)."), parse_goal("p(X)"), "prove")
    first = s.advance()
    assert isinstance(first, Solved) and pretty(first.bindings[0][1]) == "a"
    second = s.more()
    assert isinstance(second, Solved) and pretty(second.bindings[0][1]) == "b"
    third = s.more()
    assert isinstance(third, Failed)
    assert isinstance(s.outcome, Success) and len(s.outcome.answers) == 2
    assert outcomes_equal(s.replay(), s.outcome)


def test_more_requires_success():
    s = start(Program(), parse_goal("a"), "prove")
    s.advance()
    with pytest.raises(InvalidState):
        s.more()


def test_more_can_suspend_again():
    # the second answer routes through another & execution: a fresh question
    prog = parse_program("p(a). p(b). q(a). q(b). r(a). r(b).")
    s = start(prog, parse_goal("p(X) , (q(X) & r(X))"), "prove")
    ev = s.advance()
    assert isinstance(ev, ChoiceRequested)
    assert isinstance(s.resolve_choice(ev.request_id, 0), Solved)
    ev2 = s.more()
    assert isinstance(ev2, ChoiceRequested)
    assert ev2.request_id != ev.request_id
    solved = s.resolve_choice(ev2.request_id, 1)
    assert isinstance(solved, Solved)
    assert pretty(solved.bindings[0][1]) == "b"
    assert outcomes_equal(s.replay(), s.outcome)


def test_suspension_matches_one_shot_scripted_run():
    s = flights_session()
    ev = s.advance()
    s.resolve_choice(ev.request_id, 1)
    oneshot = run_query(parse_program(FLIGHTS), parse_goal(FLIGHT_GOAL), "prove",
                        oracle=ScriptedOracle(s.choice_script()))
    assert outcomes_equal(oneshot, s.outcome)
    assert oneshot.stats.resolution_steps == s.stats.resolution_steps
    assert oneshot.stats.choice_requests == s.stats.choice_requests


def test_choice_requests_counted_per_reached_with():
    s = start(parse_program("a. b. c."), parse_goal("(b & c) & a"), "prove")
    ev = s.advance()
    ev = s.resolve_choice(ev.request_id, 0)
    assert isinstance(ev, ChoiceRequested)
    s.resolve_choice(ev.request_id, 1)
    assert s.stats.choice_requests == 2
    assert isinstance(s.outcome, Success)


def test_choice_point_shows_instantiated_operands():
    # bindings from the earlier conjunct are visible in the dialog
    prog = parse_program("p(a). q(a). r(a).")
    s = start(prog, parse_goal("p(X) , (q(X) & r(X))"), "prove")
    ev = s.advance()
    assert isinstance(ev, ChoiceRequested)
    assert pretty(ev.cp.left) == "q(a)" and pretty(ev.cp.right) == "r(a)"
    assert ev.cp.path == ("tensor.1",)
