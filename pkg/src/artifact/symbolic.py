"""Alphabets, transition rules and streamed enumeration of admissible words.

Words are tuples of integer letters.  All models in this package use the
letter-indexed convention: a word of length n composes n branch maps, with
the last letter applied first (innermost).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed the configured word budget."""

    def __init__(self, count: int, budget: int, what: str = "words"):
        self.count = int(count)
        self.budget = int(budget)
        super().__init__(f"enumeration of {count} {what} exceeds budget {budget}")


@dataclass(frozen=True)
class Alphabet:
    size: int
    tail_truncated: bool = False
    tail_mass_bound: float = 0.0

    def __post_init__(self):
        if self.size < 2:
            raise ValueError("alphabet needs at least two letters")
        if not self.tail_truncated and self.tail_mass_bound != 0.0:
            raise ValueError("tail_mass_bound must be 0 for an untruncated alphabet")
        if self.tail_mass_bound < 0:
            raise ValueError("tail_mass_bound must be nonnegative")


@dataclass(frozen=True)
class TransitionRule:
    """Boolean matrix A(a, b): letter b may follow letter a."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("transition matrix must be square")
        if not m.any(axis=1).all():
            raise ValueError("transition rule has a dead state (row with no successor)")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def full(cls, size: int) -> "TransitionRule":
        return cls(np.ones((size, size), dtype=bool))

    @classmethod
    def from_forbidden(cls, size: int, forbidden_pairs: Sequence[Sequence[int]]) -> "TransitionRule":
        m = np.ones((size, size), dtype=bool)
        for a, b in forbidden_pairs:
            m[a, b] = False
        return cls(m)

    @classmethod
    def from_json(cls, source) -> "TransitionRule":
        if isinstance(source, (str, Path)) and Path(source).exists():
            data = json.loads(Path(source).read_text())
        elif isinstance(source, str):
            data = json.loads(source)
        else:
            data = dict(source)
        return cls.from_forbidden(int(data["size"]), data.get("forbidden_pairs", []))

    def to_json_dict(self) -> dict:
        bad = np.argwhere(~self.matrix)
        return {"size": self.size, "forbidden_pairs": [[int(a), int(b)] for a, b in bad]}

    @property
    def is_full(self) -> bool:
        return bool(self.matrix.all())

    def admissible(self, word: Sequence[int]) -> bool:
        w = tuple(word)
        if any(a < 0 or a >= self.size for a in w):
            return False
        return all(self.matrix[a, b] for a, b in zip(w[:-1], w[1:]))


Word = tuple


def prefix(word: Sequence[int]) -> tuple:
    """The primed word: last letter dropped."""
    return tuple(word)[:-1]


def last_letter(word: Sequence[int]) -> int:
    return int(tuple(word)[-1])


def count_words(n: int, rule: TransitionRule) -> int:
    """Number of admissible words of length n, 1^T A^(n-1) 1 (exact integers)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = rule.matrix.astype(object)
    v = np.ones(rule.size, dtype=object)
    for _ in range(n - 1):
        v = a.dot(v)
    return int(sum(v))


def _check_budget(n: int, rule: TransitionRule, budget: int | None) -> int:
    total = count_words(n, rule)
    cap = DEFAULT_BUDGET if budget is None else budget
    if total > cap:
        raise BudgetExceeded(total, cap)
    return total


def iter_word_blocks(n: int, alphabet: Alphabet | int, rule: TransitionRule | None = None,
                     budget: int | None = None, block_size: int = 1 << 16,
                     first_letters: Sequence[int] | None = None) -> Iterator[np.ndarray]:
    """Yield admissible words of length n as int arrays of shape (m, n), lexicographic order.

    ``first_letters`` restricts the leading letter, which lets independent
    workers each take a disjoint slice of the stream.
    """
    size = alphabet.size if isinstance(alphabet, Alphabet) else int(alphabet)
    rule = rule or TransitionRule.full(size)
    if rule.size != size:
        raise ValueError("rule size does not match alphabet size")
    _check_budget(n, rule, budget)
    lead = range(size) if first_letters is None else sorted(first_letters)
    # Stack-based depth-first walk; extend whole frontier blocks with numpy.
    succ = [np.flatnonzero(rule.matrix[a]) for a in range(size)]

    def extend(block: np.ndarray) -> np.ndarray:
        last = block[:, -1]
        pieces = []
        for row, a in zip(block, last):
            s = succ[a]
            p = np.empty((len(s), block.shape[1] + 1), dtype=np.int64)
            p[:, :-1] = row
            p[:, -1] = s
            pieces.append(p)
        return np.concatenate(pieces, axis=0)

    # Expand a prefix tree until blocks are big enough, then flush in order.
    stack = [np.array([[a]], dtype=np.int64) for a in reversed(list(lead))]
    while stack:
        blk = stack.pop()
        if blk.shape[1] == n:
            for s in range(0, blk.shape[0], block_size):
                yield blk[s:s + block_size]
            continue
        if rule.is_full and blk.shape[0] * size ** (n - blk.shape[1]) <= block_size:
            # Fast path: cartesian completion keeps lexicographic order.
            tails = np.array(np.meshgrid(*([np.arange(size)] * (n - blk.shape[1])), indexing="ij"))
            tails = tails.reshape(n - blk.shape[1], -1).T
            out = np.repeat(blk, tails.shape[0], axis=0)
            out = np.concatenate([out, np.tile(tails, (blk.shape[0], 1))], axis=1)
            yield out
            continue
        nxt = extend(blk)
        if nxt.shape[0] > block_size:
            # split to keep memory bounded, preserving order on the stack
            chunks = [nxt[i:i + block_size] for i in range(0, nxt.shape[0], block_size)]
            stack.extend(reversed(chunks))
        else:
            stack.append(nxt)


def enumerate_words(n: int, alphabet: Alphabet | int, rule: TransitionRule | None = None,
                    budget: int | None = None) -> Iterator[tuple]:
    """Stream the admissible words of length n, each once, lexicographically."""
    if n < 1:
        raise ValueError("n must be >= 1")
    for blk in iter_word_blocks(n, alphabet, rule, budget):
        for row in blk:
            yield tuple(int(v) for v in row)


def words_array(n: int, alphabet: Alphabet | int, rule: TransitionRule | None = None,
                budget: int | None = None) -> np.ndarray:
    """Materialize Σ^n as an (m, n) array.  Only for sizes that fit the budget."""
    blocks = list(iter_word_blocks(n, alphabet, rule, budget))
    return np.concatenate(blocks, axis=0)


INADMISSIBLE = None


def concat(a: Sequence[int], b: Sequence[int], rule: TransitionRule | None = None,
           primed: bool = False):
    """Join two words; ``primed`` drops the last letter of ``a`` first.

    Returns ``None`` (INADMISSIBLE) when the junction pair is forbidden.
    """
    left = tuple(a)[:-1] if primed else tuple(a)
    right = tuple(b)
    if rule is not None and left and right and not rule.matrix[left[-1], right[0]]:
        return INADMISSIBLE
    return left + right


def star(a_words: Sequence[Sequence[int]], b_words: Sequence[Sequence[int]],
         rule: TransitionRule | None = None):
    """Block product a1' b1' a2' b2' ... ak' bk' a_{k+1}."""
    if len(a_words) != len(b_words) + 1:
        raise ValueError("need k+1 A-words for k B-words")
    out: tuple = ()
    for a, b in zip(a_words[:-1], b_words):
        out = out + tuple(a)[:-1] + tuple(b)[:-1]
    out = out + tuple(a_words[-1])
    if rule is not None and not rule.admissible(out):
        return INADMISSIBLE
    return out
