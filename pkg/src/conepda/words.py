"""Alphabets with an involution, words, free reduction and inversion.

Words are plain tuples of letters.  Letters are opaque strings; the order in
which an alphabet declares them is the order used by every canonical
encoding downstream.  The inverse of a letter is stored explicitly and never
derived from its spelling, although the textual convention ``x^`` for the
partner of ``x`` is what :meth:`Alphabet.parse` understands.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

from .errors import ParseError

Word = tuple


class Alphabet:
    """A finite ordered label set, optionally carrying a proper involution."""

    __slots__ = ("letters", "_index", "_inverse")

    def __init__(self, letters: Sequence[str], inverse: dict | None = None):
        letters = tuple(letters)
        if len(set(letters)) != len(letters):
            raise ValueError(f"duplicate letters in {letters}")
        if not letters:
            raise ValueError("alphabet must be non-empty")
        self.letters = letters
        self._index = {a: i for i, a in enumerate(letters)}
        if inverse is not None:
            inverse = dict(inverse)
            for a in letters:
                b = inverse.get(a)
                if b is None or b not in self._index:
                    raise ValueError(f"involution undefined at {a!r}")
                if b == a:
                    raise ValueError(f"involution must be proper, {a!r} is fixed")
                if inverse.get(b) != a:
                    raise ValueError(f"involution not self-inverse at {a!r}")
        self._inverse = inverse

    @classmethod
    def symmetric(cls, *names: str) -> "Alphabet":
        """``Alphabet.symmetric('a', 'b')`` gives letters a, a^, b, b^."""
        letters, inverse = [], {}
        for x in names:
            letters += [x, x + "^"]
            inverse[x], inverse[x + "^"] = x + "^", x
        return cls(letters, inverse)

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        """Parse ``alphabet a a^ b b^`` (the leading keyword is optional)."""
        tokens = text.split()
        if tokens and tokens[0] == "alphabet":
            tokens = tokens[1:]
        if not tokens:
            raise ParseError("empty alphabet declaration")
        names = set(tokens)
        paired = {t for t in tokens if t.endswith("^") and t[:-1] in names}
        paired |= {t[:-1] for t in paired}
        if paired and paired != names:
            raise ParseError(f"letters without involution partner: {sorted(names - paired)}")
        if paired:
            inverse = {}
            for t in tokens:
                if t.endswith("^") and t[:-1] in names:
                    inverse[t], inverse[t[:-1]] = t[:-1], t
            return cls(tokens, inverse)
        return cls(tokens)

    @property
    def is_symmetric(self) -> bool:
        return self._inverse is not None

    def inverse(self, a: str) -> str:
        if self._inverse is None:
            raise ValueError("alphabet has no involution")
        return self._inverse[a]

    def index(self, a: str) -> int:
        return self._index[a]

    def __contains__(self, a) -> bool:
        return a in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Alphabet)
            and self.letters == other.letters
            and self._inverse == other._inverse
        )

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Alphabet({' '.join(self.letters)})"

    def text(self) -> str:
        return "alphabet " + " ".join(self.letters)

    def restrict(self, letters: Iterable[str]) -> "Alphabet":
        keep = [a for a in self.letters if a in set(letters)]
        if self._inverse is not None and all(self._inverse[a] in keep for a in keep):
            return Alphabet(keep, {a: self._inverse[a] for a in keep})
        return Alphabet(keep)

    def words(self, max_len: int, min_len: int = 0) -> Iterator[Word]:
        """All words of length min_len..max_len in shortlex order."""
        for n in range(min_len, max_len + 1):
            yield from itertools.product(self.letters, repeat=n)

    def count_words(self, max_len: int) -> int:
        return sum(len(self) ** n for n in range(max_len + 1))

    def reduced_words(self, max_len: int) -> Iterator[Word]:
        """Freely reduced words of length <= max_len, shortlex order."""
        layer = [()]
        yield ()
        for _ in range(max_len):
            nxt = []
            for w in layer:
                for a in self.letters:
                    if w and self.inverse(w[-1]) == a:
                        continue
                    nxt.append(w + (a,))
            yield from nxt
            layer = nxt

    def word(self, text: str) -> Word:
        """Parse a space-separated word such as ``"a b a^"``; ``eps`` is empty."""
        tokens = [t for t in text.split() if t not in ("eps", "ε")]
        for t in tokens:
            if t not in self._index:
                raise ParseError(f"letter {t!r} not in {self!r}")
        return tuple(tokens)


def format_word(w: Sequence[str]) -> str:
    return " ".join(w) if w else "eps"


def free_reduce(w: Sequence[str], alphabet: Alphabet) -> Word:
    """Cancel adjacent ``a a^-1`` pairs until none remain."""
    out: list[str] = []
    for a in w:
        if out and alphabet.inverse(out[-1]) == a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def is_reduced(w: Sequence[str], alphabet: Alphabet) -> bool:
    return all(alphabet.inverse(w[i]) != w[i + 1] for i in range(len(w) - 1))


def invert_word(w: Sequence[str], alphabet: Alphabet) -> Word:
    return tuple(alphabet.inverse(a) for a in reversed(w))


def group_multiply(v: Sequence[str], w: Sequence[str], alphabet: Alphabet) -> Word:
    """Product in the free group on the alphabet's letter pairs."""
    return free_reduce(tuple(v) + tuple(w), alphabet)
