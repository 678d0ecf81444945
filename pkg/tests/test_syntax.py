import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aspgraph.syntax import (
    EmptyConstraintError,
    Literal,
    ParseError,
    Program,
    Rule,
    parse_program,
    print_program,
)


def test_parse_normal_rule():
    program = parse_program("p :- q, not r, not p.")
    assert len(program.rules) == 1
    rule = program.rules[0]
    assert rule.head == "p"
    assert rule.body == (Literal("q"), Literal("r", True), Literal("p", True))
    assert program.atoms == {"p", "q", "r"}


def test_parse_fact():
    program = parse_program("q.")
    assert program.rules == (Rule("q", (), 0),)
    assert program.rules[0].is_fact


def test_parse_headless_constraint():
    program = parse_program(":- not q, not r.")
    rule = program.rules[0]
    assert rule.head is None
    assert rule.body == (Literal("q", True), Literal("r", True))


def test_empty_body_after_arrow_is_error():
    with pytest.raises(ParseError):
        parse_program("p :- .")


def test_bare_constraint_rejected():
    with pytest.raises(EmptyConstraintError):
        parse_program(":- .")


def test_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_program("p :- q,\n not .")
    assert err.value.line == 2
    assert err.value.column == 6


def test_duplicate_body_literals_deduplicated():
    program = parse_program("p :- q, q, not q.")
    assert program.rules[0].body == (Literal("q"), Literal("q", True))


def test_contradictory_pair_accepted():
    program = parse_program("p :- q, not q.")
    assert len(program.rules[0].body) == 2


def test_comments_and_multiline_rules():
    text = """
    % a comment
    p :-   % another
        q,
        not r.
    q.
    """
    program = parse_program(text)
    assert [r.head for r in program.rules] == ["p", "q"]


def test_not_is_reserved():
    with pytest.raises(ParseError):
        parse_program("not.")
    with pytest.raises(ParseError):
        parse_program("p :- not not q.")


def test_uppercase_atom_rejected():
    with pytest.raises(ParseError):
        parse_program("P :- q.")


def test_rule_order_and_source_index():
    program = parse_program("a. b :- a. :- not b.")
    assert [r.source_index for r in program.rules] == [0, 1, 2]
    assert [r.head for r in program.rules] == ["a", "b", None]


def test_print_single_rules():
    assert print_program(parse_program("p :- not q.")) == "p :- not q.\n"
    assert print_program(parse_program("q.")) == "q.\n"
    assert print_program(parse_program(":- a, not b.")) == ":- a, not b.\n"


def test_round_trip_program_two():
    text = "p :- q, not p. p :- not r."
    program = parse_program(text)
    assert parse_program(print_program(program)) == program
    assert len(program.rules) == 2


def test_atom_table_matches_identifiers():
    program = parse_program("alpha :- beta, not gamma_2. :- alpha.")
    assert program.atoms == {"alpha", "beta", "gamma_2"}


_atom = st.from_regex(r"[a-z][a-zA-Z0-9_]{0,6}", fullmatch=True).filter(
    lambda s: s != "not"
)
_literal = st.builds(Literal, _atom, st.booleans())


@st.composite
def _programs(draw):
    rules = []
    for index in range(draw(st.integers(0, 6))):
        body = tuple(
            dict.fromkeys(draw(st.lists(_literal, max_size=4)))
        )
        head = draw(st.one_of(st.none(), _atom))
        if head is None and not body:
            head = draw(_atom)
        rules.append(Rule(head, body, index))
    return Program(tuple(rules))


@given(_programs())
@settings(max_examples=200, deadline=None)
def test_round_trip_identity(program):
    assert parse_program(print_program(program)) == program


@given(st.text(alphabet="pqr:-,. notx\n%", max_size=60))
@settings(max_examples=400, deadline=None)
def test_parse_total_over_garbage(text):
    try:
        parse_program(text)
    except ParseError:
        pass


@given(st.text(max_size=40))
@settings(max_examples=200, deadline=None)
def test_parse_total_over_unicode(text):
    try:
        parse_program(text)
    except ParseError:
        pass
