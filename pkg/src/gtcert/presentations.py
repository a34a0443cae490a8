"""Finitely presented groups: text format, family builders, CLI shorthand.

File grammar (``#`` starts a comment)::

    gens: x y
    rel: y^-1 x y x

Relators are stored as reduced words equal to the identity.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field

from .words import Alphabet, Word, WordSyntaxError, commutator, parse_word

PresentationSyntaxError = WordSyntaxError


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple[Word, ...] = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        rels = tuple(self.relators)
        for r in rels:
            if r.alphabet != self.alphabet:
                raise ValueError("relator over a different alphabet")
        object.__setattr__(self, "relators", rels)

    @property
    def gens(self) -> tuple[str, ...]:
        return self.alphabet.names

    def word(self, text: str) -> Word:
        return parse_word(text, self.alphabet)

    def gen(self, name: str) -> Word:
        return self.alphabet.gen(name)

    def render(self) -> str:
        return render(self)

    def __str__(self):
        rels = ", ".join(str(r) for r in self.relators)
        return f"< {' '.join(self.gens)} | {rels} >"


def render(p: Presentation) -> str:
    lines = []
    if p.label:
        lines.append(f"# {p.label}")
    lines.append("gens: " + " ".join(p.gens))
    lines.extend(f"rel: {r}" for r in p.relators)
    return "\n".join(lines) + "\n"


def parse_presentation(text: str, label: str = "") -> Presentation:
    alphabet = None
    relators = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key_s = key.strip()
        col = len(key) + 2
        if not sep:
            raise WordSyntaxError("expected 'gens:' or 'rel:'", lineno, len(line) - len(line.lstrip()) + 1)
        if key_s == "gens":
            if alphabet is not None:
                raise WordSyntaxError("second 'gens:' line", lineno, 1)
            names = rest.split()
            seen = set()
            for tok in re.finditer(r"\S+", rest):
                n = tok.group(0)
                if n in seen:
                    raise WordSyntaxError(f"duplicate generator name {n!r}", lineno, col + tok.start())
                seen.add(n)
            try:
                alphabet = Alphabet(tuple(names))
            except ValueError as exc:
                raise WordSyntaxError(str(exc), lineno, col) from None
        elif key_s == "rel":
            if alphabet is None:
                raise WordSyntaxError("'rel:' before 'gens:'", lineno, 1)
            relators.append(parse_word(rest, alphabet, line=lineno, col_offset=len(key) + 1))
        else:
            raise WordSyntaxError(f"unknown key {key_s!r}", lineno, len(key) - len(key.lstrip()) + 1)
    if alphabet is None:
        raise WordSyntaxError("missing 'gens:' line", 1, 1)
    return Presentation(alphabet, tuple(relators), label)


def free_group(*names: str) -> Presentation:
    return Presentation(Alphabet(names), (), "free")


def klein_bottle() -> Presentation:
    """``< x, y | y^-1 x y x >``."""
    al = Alphabet(("x", "y"))
    return Presentation(al, (parse_word("y^-1 x y x", al),), "klein")


def kb_circle_bundle() -> Presentation:
    """Non-trivial circle bundle over the Klein bottle: ``x^2 y^2`` is central."""
    al = Alphabet(("x", "y"))
    x, y = al.gens()
    h = x**2 * y**2
    return Presentation(al, (commutator(h, x), commutator(h, y)), "kbcircle")


def fibonacci(m: int) -> Presentation:
    """``F(2, m)``: generators ``a1..am`` and relators ``a_i a_{i+1} a_{i+2}^-1``."""
    if m < 1:
        raise ValueError("fibonacci(m) needs m >= 1")
    al = Alphabet(tuple(f"a{i}" for i in range(1, m + 1)))

    def idx(i):
        return (i - 1) % m

    rels = tuple(
        Word.from_raw(al, [(idx(i), 1), (idx(i + 1), 1), (idx(i + 2), -1)]) for i in range(1, m + 1)
    )
    return Presentation(al, rels, f"fibonacci:m={m}")


def torus_bundle(a: int, b: int, c: int, d: int) -> Presentation:
    """Torus bundle group with monodromy ``t^-1 l t = l^a m^b``, ``t^-1 m t = l^c m^d``.

    Accepts any matrix in GL_2(Z); the certificate builder is stricter.
    """
    det = a * d - b * c
    if det not in (1, -1):
        raise ValueError(f"monodromy determinant is {det}, expected +-1")
    al = Alphabet(("l", "m", "t"))
    l, mm, t = al.gens()
    rels = (
        commutator(l, mm),
        l.conjugate(t) * (l**a * mm**b).inverse(),
        mm.conjugate(t) * (l**c * mm**d).inverse(),
    )
    return Presentation(al, rels, f"torusbundle:a={a},b={b},c={c},d={d}")


def rss(p: int, q: int, m: int) -> Presentation:
    """``G(p,q,m) = < a,b,t | t^-1 a t = a b a^(m-1), t^-1 b t = a^-1, t^p [a,b]^q >``."""
    if math.gcd(p, q) != 1:
        raise ValueError(f"gcd({p}, {q}) != 1")
    al = Alphabet(("a", "b", "t"))
    a, b, t = al.gens()
    rels = (
        a.conjugate(t) * (a * b * a ** (m - 1)).inverse(),
        b.conjugate(t) * a,
        t**p * commutator(a, b) ** q,
    )
    return Presentation(al, rels, f"rss:p={p},q={q},m={m}")


FAMILIES = {
    "klein": ((), klein_bottle),
    "kbcircle": ((), kb_circle_bundle),
    "fibonacci": (("m",), fibonacci),
    "torusbundle": (("a", "b", "c", "d"), torus_bundle),
    "rss": (("p", "q", "m"), rss),
}


def parse_params(text: str) -> dict[str, int]:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        k, sep, v = item.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {item!r}")
        try:
            out[k.strip()] = int(v)
        except ValueError:
            raise ValueError(f"parameter {k.strip()!r} is not an integer: {v!r}") from None
    return out


def from_family(name: str, params: dict[str, int]) -> Presentation:
    try:
        keys, builder = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None
    if set(params) != set(keys):
        raise ValueError(f"family {name!r} takes parameters {list(keys)}, got {sorted(params)}")
    return builder(*(params[k] for k in keys))


def is_shorthand(text: str) -> bool:
    return text.partition(":")[0] in FAMILIES


def from_shorthand(text: str) -> Presentation:
    """``fibonacci:m=8``, ``torusbundle:a=0,b=-1,c=1,d=-1``, ``klein``, ..."""
    name, _, rest = text.strip().partition(":")
    return from_family(name, parse_params(rest))


def load_presentation(ref: str, base_dir: str | None = None) -> Presentation:
    """Family shorthand, or a path to a presentation file."""
    if is_shorthand(ref):
        return from_shorthand(ref)
    path = ref if base_dir is None or os.path.isabs(ref) else os.path.join(base_dir, ref)
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read(), label=ref)
