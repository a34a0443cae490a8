"""Free-group words over a named generator alphabet.

Words are kept in run-length (syllable) form: a tuple of ``(generator index,
nonzero exponent)`` pairs with no two adjacent syllables on the same
generator.  Exponents are plain Python ints, so long powers stay compact.

Conventions: ``conjugate(g, c) = c^-1 g c`` and
``commutator(u, v) = u v u^-1 v^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

__all__ = [
    "Alphabet",
    "AlphabetMismatch",
    "UnknownGenerator",
    "Word",
    "WordSyntaxError",
    "commutator",
    "conjugate",
    "exponent_sum",
    "inverse",
    "multiply",
    "parse_word",
    "reduce",
]

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class AlphabetMismatch(ValueError):
    pass


class UnknownGenerator(ValueError):
    pass


class WordSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names.  Two alphabets are equal iff the names match."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        for n in names:
            if not isinstance(n, str) or not _NAME.match(n):
                raise ValueError(f"invalid generator name {n!r}")
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate generator name(s): {', '.join(dup)}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    def gen(self, name: str) -> "Word":
        return Word(self, ((self.index(name), 1),))

    def gens(self) -> list["Word"]:
        return [Word(self, ((i, 1),)) for i in range(len(self.names))]

    @property
    def identity(self) -> "Word":
        return Word(self, ())

    def word(self, text: str) -> "Word":
        return parse_word(text, self)


def _reduce_syllables(items: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[tuple[int, int]] = []
    for g, e in items:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e += out[-1][1]
            if e:
                out[-1] = (g, e)
            else:
                out.pop()
        else:
            out.append((g, e))
    return tuple(out)


GenLike = Union[str, int]


@dataclass(frozen=True)
class Word:
    """A freely reduced word.  Build through :func:`reduce`, parsing, or arithmetic."""

    alphabet: Alphabet
    syllables: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        syl = tuple((int(g), int(e)) for g, e in self.syllables)
        n = len(self.alphabet)
        for i, (g, e) in enumerate(syl):
            if not 0 <= g < n:
                raise UnknownGenerator(f"generator index {g} outside alphabet")
            if e == 0:
                raise ValueError("syllable with zero exponent")
            if i and syl[i - 1][0] == g:
                raise ValueError("adjacent syllables share a generator; use reduce()")
        object.__setattr__(self, "syllables", syl)

    @classmethod
    def _trusted(cls, alphabet: Alphabet, syllables) -> "Word":
        w = object.__new__(cls)
        object.__setattr__(w, "alphabet", alphabet)
        object.__setattr__(w, "syllables", syllables)
        return w

    @classmethod
    def from_raw(cls, alphabet: Alphabet, raw: Iterable[tuple[GenLike, int]]) -> "Word":
        items = []
        for g, e in raw:
            if isinstance(g, str):
                g = alphabet.index(g)
            elif not 0 <= g < len(alphabet):
                raise UnknownGenerator(f"generator index {g} outside alphabet")
            items.append((g, int(e)))
        return cls._trusted(alphabet, _reduce_syllables(items))

    @classmethod
    def from_letters(cls, alphabet: Alphabet, letters: Iterable[tuple[int, int]]) -> "Word":
        return cls._trusted(alphabet, _reduce_syllables(letters))

    # -- basic queries -------------------------------------------------

    def is_identity(self) -> bool:
        return not self.syllables

    def __bool__(self):
        return bool(self.syllables)

    @property
    def length(self) -> int:
        """Letter length (unbounded, unlike ``len``)."""
        return sum(abs(e) for _, e in self.syllables)

    def __len__(self):
        return self.length

    def letters(self) -> list[tuple[int, int]]:
        """Letter-by-letter expansion as ``(generator, +-1)`` pairs."""
        out = []
        for g, e in self.syllables:
            s = 1 if e > 0 else -1
            out.extend([(g, s)] * abs(e))
        return out

    def exponent_sum(self, g: GenLike) -> int:
        if isinstance(g, str):
            g = self.alphabet.index(g)
        return sum(e for h, e in self.syllables if h == g)

    def exponent_vector(self) -> list[int]:
        v = [0] * len(self.alphabet)
        for g, e in self.syllables:
            v[g] += e
        return v

    def generators_used(self) -> set[str]:
        return {self.alphabet.names[g] for g, _ in self.syllables}

    # -- letter slicing ------------------------------------------------

    def prefix(self, n: int) -> "Word":
        """First ``n`` letters (already reduced since this word is)."""
        if n < 0:
            raise ValueError("negative prefix length")
        out = []
        for g, e in self.syllables:
            if n <= 0:
                break
            k = min(n, abs(e))
            out.append((g, k if e > 0 else -k))
            n -= k
        return Word._trusted(self.alphabet, tuple(out))

    def suffix(self, n: int) -> "Word":
        """Letters from position ``n`` to the end."""
        if n < 0:
            raise ValueError("negative position")
        out = []
        for g, e in self.syllables:
            if n >= abs(e):
                n -= abs(e)
                continue
            k = abs(e) - n
            out.append((g, k if e > 0 else -k))
            n = 0
        return Word._trusted(self.alphabet, tuple(out))

    def subword(self, start: int, stop: int) -> "Word":
        return self.suffix(start).prefix(stop - start)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "Word"):
        if not isinstance(other, Word):
            return NotImplemented
        if other.alphabet is not self.alphabet and other.alphabet != self.alphabet:
            raise AlphabetMismatch(
                f"alphabets differ: {self.alphabet.names} vs {other.alphabet.names}"
            )
        return None

    def __mul__(self, other: "Word") -> "Word":
        if self._check(other) is NotImplemented:
            return NotImplemented
        if not self.syllables:
            return other
        if not other.syllables:
            return self
        return Word._trusted(self.alphabet, _reduce_syllables(self.syllables + other.syllables))

    def inverse(self) -> "Word":
        return Word._trusted(self.alphabet, tuple((g, -e) for g, e in reversed(self.syllables)))

    __invert__ = inverse

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0 or not self.syllables:
            return self.alphabet.identity
        if len(self.syllables) == 1:
            g, e = self.syllables[0]
            return Word._trusted(self.alphabet, ((g, e * n),))
        # cyclically reduce so the power stays linear in n
        syl = self.syllables
        k = 0
        while k < len(syl) // 2 and syl[k][0] == syl[-1 - k][0] and syl[k][1] == -syl[-1 - k][1]:
            k += 1
        outer = Word._trusted(self.alphabet, syl[:k])
        core = syl[k : len(syl) - k]
        if len(core) == 1:
            body = ((core[0][0], core[0][1] * n),)
        else:
            body = _reduce_syllables(core * n)
        return outer * Word._trusted(self.alphabet, body) * outer.inverse()

    def conjugate(self, c: "Word") -> "Word":
        return c.inverse() * self * c

    def __xor__(self, c: "Word") -> "Word":
        # g ^ c reads as g^c = c^-1 g c
        return self.conjugate(c)

    # -- text ----------------------------------------------------------

    def __str__(self):
        if not self.syllables:
            return "1"
        names = self.alphabet.names
        return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in self.syllables)

    def __repr__(self):
        return f"Word({str(self)!r})"


# -- module-level operations mirroring the public contract ---------------


def reduce(alphabet: Alphabet, raw: Iterable[tuple[GenLike, int]]) -> Word:
    """Freely reduce a raw sequence of ``(generator, exponent)`` pairs."""
    return Word.from_raw(alphabet, raw)


def multiply(u: Word, v: Word) -> Word:
    return u * v


def inverse(w: Word) -> Word:
    return w.inverse()


def conjugate(g: Word, c: Word) -> Word:
    """``c^-1 g c``."""
    return g.conjugate(c)


def commutator(u: Word, v: Word) -> Word:
    """``u v u^-1 v^-1``."""
    return u * v * u.inverse() * v.inverse()


def exponent_sum(w: Word, g: GenLike) -> int:
    return w.exponent_sum(g)


def product(words: Sequence[Word], alphabet: Alphabet | None = None) -> Word:
    if not words:
        if alphabet is None:
            raise ValueError("empty product needs an alphabet")
        return alphabet.identity
    items = []
    a = words[0].alphabet
    for w in words:
        if w.alphabet != a:
            raise AlphabetMismatch("alphabets differ in product")
        items.extend(w.syllables)
    return Word._trusted(a, _reduce_syllables(items))


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<one>1)(?![0-9])|(?P<lp>\()|(?P<rp>\))"
    r"|(?P<pow>\^\s*(?P<exp>[+-]?\s*[0-9]+)))"
)


def parse_word(text: str, alphabet: Alphabet, line: int = 1, col_offset: int = 0) -> Word:
    """Parse ``name``, ``name^k``, ``( ... )^k`` and ``1`` tokens into a reduced word."""
    pos = 0
    n = len(text)
    stack: list[list[Word]] = [[]]
    open_cols: list[int] = []

    def err(msg, at):
        raise WordSyntaxError(msg, line, col_offset + at + 1)

    def pending_power(at):
        m = _TOKEN.match(text, at)
        if m and m.group("pow"):
            k = int(m.group("exp").replace(" ", ""))
            return k, m.end()
        return None, at

    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            err(f"unexpected character {text[pos]!r}", pos)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group("name"):
            name = m.group("name")
            if name not in alphabet:
                err(f"unknown generator {name!r}", start)
            k, end = pending_power(m.end())
            if k == 0:
                err("zero exponent", m.end())
            stack[-1].append(Word._trusted(alphabet, ((alphabet.index(name), 1 if k is None else k),)))
            pos = end
        elif m.group("one"):
            k, end = pending_power(m.end())
            stack[-1].append(alphabet.identity)
            pos = end
        elif m.group("lp"):
            stack.append([])
            open_cols.append(start)
            pos = m.end()
        elif m.group("rp"):
            if len(stack) == 1:
                err("unmatched ')'", start)
            inner = product(stack.pop(), alphabet)
            open_cols.pop()
            k, end = pending_power(m.end())
            if k == 0:
                err("zero exponent", m.end())
            stack[-1].append(inner ** (1 if k is None else k))
            pos = end
        else:
            err("exponent without a base", start)
    if len(stack) != 1:
        err("unclosed '('", open_cols[-1])
    return product(stack[0], alphabet)
