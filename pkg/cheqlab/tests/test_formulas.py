import random

import pytest

from cheqlab.app.services.errors import ParseError, UnknownAxiomError, VariableNameError
from cheqlab.app.services.formulas import (
    AXIOM_TEXT,
    AXIOMS,
    And,
    Bottom,
    Implies,
    Or,
    Var,
    axiom,
    depth,
    neg,
    parse,
    to_text,
    tokenize,
    top,
    variables,
)

p, q, r = Var("p"), Var("q"), Var("r")


def random_formula(rng: random.Random, size: int):
    if size <= 1:
        return rng.choice([Var("p"), Var("q"), Var("r"), Var("s1"), Bottom()])
    kind = rng.randrange(4)
    if kind == 0:
        return neg(random_formula(rng, size - 1))
    left = rng.randint(1, size - 2) if size > 2 else 1
    a = random_formula(rng, left)
    b = random_formula(rng, max(1, size - 1 - left))
    return (And, Or, Implies)[kind - 1](a, b)


def test_precedence_and_associativity():
    assert parse("p & q | r") == Or(And(p, q), r)
    assert parse("p | q & r") == Or(p, And(q, r))
    assert parse("p -> q -> r") == Implies(p, Implies(q, r))
    assert parse("p | q | r") == Or(Or(p, q), r)
    assert parse("~p & q") == And(neg(p), q)
    assert parse("~~p") == neg(neg(p))
    assert parse("p -> q | r") == Implies(p, Or(q, r))


def test_constants_and_negation():
    assert parse("false") == Bottom()
    assert parse("true") == top()
    assert parse("~p") == Implies(p, Bottom())


def test_unicode_aliases():
    assert parse("¬p ∧ q → ⊥") == parse("~p & q -> false")
    assert parse("p ∨ ⊤") == Or(p, top())


def test_axiom_keywords_expand():
    assert parse("kp") == AXIOMS["kp"]
    assert parse("wem") == Or(neg(p), neg(neg(p)))
    assert parse("sa & p") == And(axiom("sa"), p)
    assert set(AXIOM_TEXT) == {"sa", "kp", "wem"}


def test_unknown_axiom():
    with pytest.raises(UnknownAxiomError):
        axiom("lem")


@pytest.mark.parametrize(
    "text, position",
    [("p &", 3), ("(p", 2), ("p q", 2), ("p $ q", 2), ("", 0), ("p -> )", 5)],
)
def test_parse_errors_report_position(text, position):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.position == position
    assert exc.value.expected
    assert f"position {position}" in str(exc.value)


def test_tokenize_marks_keywords():
    kinds = [(k, t) for k, t, _ in tokenize("kp -> x1")]
    assert kinds == [("kw", "kp"), ("op", "->"), ("name", "x1"), ("end", "")]


def test_printer_uses_minimal_parentheses():
    assert to_text(Implies(Implies(p, q), r)) == "(p -> q) -> r"
    assert to_text(Implies(p, Implies(q, r))) == "p -> q -> r"
    assert to_text(And(Or(p, q), r)) == "(p | q) & r"
    assert to_text(Or(p, Or(q, r))) == "p | (q | r)"
    assert to_text(neg(And(p, q))) == "~(p & q)"
    assert to_text(neg(neg(p))) == "~~p"
    assert str(top()) == "~false"


def test_axiom_texts_round_trip():
    for name, f in AXIOMS.items():
        assert parse(to_text(f)) == f
        assert to_text(f) == AXIOM_TEXT[name]


def test_random_round_trip():
    rng = random.Random(2024)
    for _ in range(1000):
        f = random_formula(rng, rng.randint(1, 14))
        assert parse(to_text(f)) == f


def test_variables_first_occurrence_order():
    assert variables(parse("(q -> p) | q & r")) == ["q", "p", "r"]
    assert variables(axiom("kp")) == ["p", "q", "r"]
    assert variables(parse("~false")) == []


def test_depth():
    assert depth(p) == 0
    assert depth(neg(p)) == 1
    assert depth(parse("(p -> q) -> r")) == 2


@pytest.mark.parametrize("name", ["P", "kp", "sa", "wem", "true", "false", "1p", "p-q", "", "p q"])
def test_var_rejects_names_that_do_not_print_back(name):
    with pytest.raises(VariableNameError):
        Var(name)


@pytest.mark.parametrize("name", ["p", "q1", "s_2", "kp1", "wemx"])
def test_var_names_print_and_parse_back(name):
    f = Implies(Var(name), Or(Var(name), Bottom()))
    assert parse(to_text(f)) == f
