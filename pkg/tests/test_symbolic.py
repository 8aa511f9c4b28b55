import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.symbolic import (Alphabet, BudgetExceeded, TransitionRule, concat, count_words,
                               enumerate_words, star, words_array)


def test_full_shift_counts():
    rule = TransitionRule.full(3)
    assert count_words(4, rule) == 81
    assert words_array(4, 3, rule).shape == (81, 4)


@given(st.integers(2, 4), st.integers(1, 5), st.data())
@settings(max_examples=30, deadline=None)
def test_count_matches_enumeration(k, n, data):
    pairs = data.draw(st.lists(st.tuples(st.integers(0, k - 1), st.integers(0, k - 1)), max_size=k))
    try:
        rule = TransitionRule.from_forbidden(k, pairs)
    except ValueError:
        return  # a letter with no successor is rejected up front
    words = list(enumerate_words(n, k, rule))
    assert len(words) == count_words(n, rule)
    assert all(rule.admissible(w) for w in words)
    assert len(set(words)) == len(words)


def test_forbidden_pair_blocks_words():
    rule = TransitionRule.from_forbidden(2, [(1, 1)])
    assert not rule.admissible((0, 1, 1))
    assert rule.admissible((1, 0, 1))
    # golden-mean shift: Fibonacci counts
    assert [count_words(n, rule) for n in range(1, 7)] == [2, 3, 5, 8, 13, 21]


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        words_array(20, 2, None, budget=1000)


def test_alphabet_rejects_single_letter():
    with pytest.raises(ValueError):
        Alphabet(1)


def test_rule_json_roundtrip():
    rule = TransitionRule.from_forbidden(3, [(0, 2), (2, 1)])
    back = TransitionRule.from_json(rule.to_json_dict())
    assert back.to_json_dict() == rule.to_json_dict()


def test_star_product_layout():
    A = [(0, 1), (1, 0), (1, 1)]
    B = [(0, 0), (1, 1)]
    w = star(A, B)
    # a1' b1' a2' b2' a3: primed words drop their last letter
    assert tuple(w) == (0, 0, 1, 1, 1, 1)
    assert tuple(concat((0, 1), (1, 0))) == (0, 1, 1, 0)
