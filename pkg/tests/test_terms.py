import random

import pytest

from conftest import random_repetition_free_term, random_repeating_term
from ldk.terms import (
    Identity,
    Join,
    Meet,
    ParseError,
    Variable,
    dual_identity,
    dual_term,
    is_one_balanced,
    is_repetition_free,
    occurrences,
    parse_identity,
    parse_term,
    pretty,
    pretty_identity,
)

R_TEXT = r"(x1 \/ (x2 /\ (x3 \/ x4)) \/ x5) /\ (((x6 \/ x7) /\ (x8 \/ x9)) \/ x10)"
R_DUAL_TEXT = r"(x1 /\ (x2 \/ (x3 /\ x4)) /\ x5) \/ (((x6 /\ x7) \/ (x8 /\ x9)) /\ x10)"

DISTRIBUTIVE = r"x1 /\ (x2 \/ x3) <= (x1 /\ x2) \/ (x1 /\ x3)"


def v(i):
    return Variable(i)


def test_parse_single_variable():
    assert parse_term("x1") == Variable(1)
    assert parse_term("  x17 ") == Variable(17)


def test_parse_ten_variable_example_term():
    expected = Meet(
        Join(Join(v(1), Meet(v(2), Join(v(3), v(4)))), v(5)),
        Join(Meet(Join(v(6), v(7)), Join(v(8), v(9))), v(10)),
    )
    assert parse_term(R_TEXT) == expected


def test_parse_dangling_operator():
    with pytest.raises(ParseError) as err:
        parse_term(r"x1 \/")
    assert err.value.position == len(r"x1 \/")


def test_parse_unmatched_paren():
    with pytest.raises(ParseError):
        parse_term(r"(x1 \/ x2")
    with pytest.raises(ParseError):
        parse_term(r"x1) ")


def test_parse_bad_tokens():
    with pytest.raises(ParseError) as err:
        parse_term("y1")
    assert err.value.position == 0
    with pytest.raises(ParseError):
        parse_term("x0")
    with pytest.raises(ParseError):
        parse_term("x")


def test_precedence_and_associativity():
    # meet binds tighter than join, both left-associative
    assert parse_term(r"x1 \/ x2 /\ x3") == Join(v(1), Meet(v(2), v(3)))
    assert parse_term(r"x1 \/ x2 \/ x3") == Join(Join(v(1), v(2)), v(3))
    assert parse_term(r"x1 /\ x2 /\ x3") == Meet(Meet(v(1), v(2)), v(3))


def test_parse_identity_le():
    assert parse_identity("x1 <= x1") == [Identity(v(1), v(1))]


def test_parse_identity_eq_expands():
    assert parse_identity("x1 = x2") == [Identity(v(1), v(2)),
                                         Identity(v(2), v(1))]


def test_parse_identity_distributive():
    idents = parse_identity(DISTRIBUTIVE)
    assert len(idents) == 1
    assert idents[0].lhs == Meet(v(1), Join(v(2), v(3)))
    assert idents[0].rhs == Join(Meet(v(1), v(2)), Meet(v(1), v(3)))


def test_parse_identity_missing_relation():
    with pytest.raises(ParseError):
        parse_identity(r"x1 \/ x2")
    with pytest.raises(ParseError):
        parse_identity("x1 = x2 = x3")


def test_dual_of_example_term():
    assert dual_term(parse_term(R_TEXT)) == parse_term(R_DUAL_TEXT)


def test_dual_fixes_variables():
    assert dual_term(Variable(1)) == Variable(1)


def test_dual_is_involution():
    rng = random.Random(7)
    for _ in range(50):
        t = random_repeating_term(rng, rng.randint(1, 9), range(1, 5))
        assert dual_term(dual_term(t)) == t


def test_pretty_parse_round_trip():
    rng = random.Random(8)
    for _ in range(50):
        t = random_repeating_term(rng, rng.randint(1, 9), range(1, 5))
        assert parse_term(pretty(t)) == t
    ident = parse_identity(DISTRIBUTIVE)[0]
    assert parse_identity(pretty_identity(ident)) == [ident]


def test_parse_normalizes_whitespace():
    assert parse_term("( x1   \\/ x2 )") == parse_term("(x1 \\/ x2)")
    t = parse_term(R_TEXT)
    assert parse_term(pretty(t)) == t and pretty(parse_term(pretty(t))) == pretty(t)


def test_occurrence_profile_distributive():
    profile = occurrences(parse_identity(DISTRIBUTIVE)[0])
    assert profile.counts == {1: (1, 2), 2: (1, 1), 3: (1, 1)}
    assert not is_one_balanced(parse_identity(DISTRIBUTIVE)[0])


def test_one_balanced_meet_join():
    ident = parse_identity(r"x1 /\ x2 <= x1 \/ x2")[0]
    assert occurrences(ident).counts == {1: (1, 1), 2: (1, 1)}
    assert is_one_balanced(ident)


def test_example_term_is_repetition_free():
    t = parse_term(R_TEXT)
    assert is_repetition_free(t)
    assert not is_repetition_free(Meet(v(1), v(1)))


def test_dual_swaps_profile_roles():
    rng = random.Random(9)
    for _ in range(30):
        ident = Identity(random_repeating_term(rng, rng.randint(1, 6), range(1, 4)),
                         random_repeating_term(rng, rng.randint(1, 6), range(1, 4)))
        direct = occurrences(ident).counts
        dual = occurrences(dual_identity(ident)).counts
        assert dual == {i: (vv, uu) for i, (uu, vv) in direct.items()}


def test_repetition_free_random_terms(term_corpus):
    for t in term_corpus:
        assert is_repetition_free(t)
