"""Todd-Coxeter coset enumeration, Felsch strategy.

Cosets are defined in order and every new table entry is pushed onto a
deduction stack; each deduction is traced through all cyclic conjugates of
the relators that start with the affected column.  Coincidences are merged
with union-find.  On completion the table is compacted and numbered in
definition order.
"""

from __future__ import annotations

import builtins
import math
import os
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .presentations import Presentation
from .words import AlphabetMismatch, Word

DEFAULT_MAX_COSETS = 10**6

Permutation = tuple[int, ...]


def default_max_cosets() -> int:
    env = os.environ.get("GTCERT_MAX_COSETS")
    return int(env) if env else DEFAULT_MAX_COSETS


class Status(Enum):
    COMPLETE = "complete"
    ABORTED = "aborted"


class IncompleteTable(RuntimeError):
    pass


@dataclass(frozen=True)
class CosetTable:
    """Permutation action of the generators on the cosets (0-based; coset 0 is the base point)."""

    alphabet: object
    n_cosets: int
    action: tuple[Permutation, ...]
    inverse_action: tuple[Permutation, ...]
    status: Status
    limit: int

    @property
    def complete(self) -> bool:
        return self.status is Status.COMPLETE

    def _require(self):
        if not self.complete:
            raise IncompleteTable(f"coset enumeration aborted at limit {self.limit}")

    def generator_perm(self, g: int, e: int) -> Permutation:
        self._require()
        base = self.action[g] if e > 0 else self.inverse_action[g]
        return perm_power(base, abs(e))

    def evaluate(self, w: Word) -> Permutation:
        return evaluate(self, w)

    def order_of(self, w: Word) -> int:
        return order_of(self, w)


def perm_power(p: Permutation, k: int) -> Permutation:
    n = len(p)
    if k == 1:
        return p
    out = [0] * n
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        cyc = [s]
        seen[s] = True
        x = p[s]
        while x != s:
            cyc.append(x)
            seen[x] = True
            x = p[x]
        L = len(cyc)
        r = k % L
        for i, c in builtins.enumerate(cyc):
            out[c] = cyc[(i + r) % L]
    return tuple(out)


def perm_order(p: Permutation) -> int:
    n = len(p)
    seen = [False] * n
    out = 1
    for s in range(n):
        if seen[s]:
            continue
        L = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = p[x]
            L += 1
        out = math.lcm(out, L)
    return out


def evaluate(T: CosetTable, w: Word) -> Permutation:
    """Right action of ``w`` on cosets: coset ``c`` goes to ``evaluate(T, w)[c]``."""
    T._require()
    if w.alphabet != T.alphabet:
        raise AlphabetMismatch("word is not over the table's alphabet")
    cur = list(range(T.n_cosets))
    for g, e in w.syllables:
        p = T.generator_perm(g, e)
        cur = [p[c] for c in cur]
    return tuple(cur)


def order_of(T: CosetTable, w: Word) -> int:
    return perm_order(evaluate(T, w))


def is_identity_perm(p: Permutation) -> bool:
    return all(i == x for i, x in builtins.enumerate(p))


class _Aborted(Exception):
    pass


class _Enumerator:
    def __init__(self, P: Presentation, subgroup: Sequence[Word], max_cosets: int):
        ngens = len(P.gens)
        self.ncols = 2 * ngens
        # column 2g is g, 2g+1 is g^-1
        self.inv = [c ^ 1 for c in range(self.ncols)]
        self.max = max_cosets
        self.table: list[list[int]] = []
        self.parent: list[int] = []
        self.live = 0
        self.deductions: list[tuple[int, int]] = []
        rels = [self._columns(r) for r in P.relators if r]
        self.subgroup = [self._columns(w) for w in subgroup if w]
        # cyclic conjugates of relators and their inverses, grouped by first column
        self.rel_by_col: list[list[list[int]]] = [[] for _ in range(self.ncols)]
        seen = set()
        for r in rels:
            for word in (r, [c ^ 1 for c in reversed(r)]):
                for k in range(len(word)):
                    rot = tuple(word[k:] + word[:k])
                    if rot not in seen:
                        seen.add(rot)
                        self.rel_by_col[rot[0]].append(list(rot))

    @staticmethod
    def _columns(w: Word) -> list[int]:
        out = []
        for g, e in w.syllables:
            out.extend([2 * g + (e < 0)] * abs(e))
        return out

    def new_coset(self) -> int:
        if self.live >= self.max:
            raise _Aborted
        self.table.append([-1] * self.ncols)
        self.parent.append(len(self.parent))
        self.live += 1
        return len(self.table) - 1

    def define(self, c: int, x: int):
        d = self.new_coset()
        self.table[c][x] = d
        self.table[d][self.inv[x]] = c
        self.deductions.append((c, x))

    def rep(self, c: int) -> int:
        p = self.parent
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            p[c], c = r, p[c]
        return r

    def merge(self, k: int, l: int, queue: list[int]):
        a, b = self.rep(k), self.rep(l)
        if a != b:
            a, b = min(a, b), max(a, b)
            self.parent[b] = a
            self.live -= 1
            queue.append(b)

    def coincidence(self, k: int, l: int):
        queue: list[int] = []
        self.merge(k, l, queue)
        i = 0
        table, inv = self.table, self.inv
        while i < len(queue):
            g = queue[i]
            i += 1
            row = table[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                xi = inv[x]
                table[d][xi] = -1
                mu, nu = self.rep(g), self.rep(d)
                if table[mu][x] >= 0:
                    self.merge(nu, table[mu][x], queue)
                elif table[nu][xi] >= 0:
                    self.merge(mu, table[nu][xi], queue)
                else:
                    table[mu][x] = nu
                    table[nu][xi] = mu
                    self.deductions.append((mu, x))

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def scan(self, c: int, w: list[int]):
        table, inv = self.table, self.inv
        f, i, b, j = c, 0, c, len(w) - 1
        while i <= j:
            nxt = table[f][w[i]]
            if nxt < 0:
                break
            f = nxt
            i += 1
        else:
            if f != c:
                self.coincidence(f, c)
            return
        while j >= i:
            nxt = table[b][inv[w[j]]]
            if nxt < 0:
                break
            b = nxt
            j -= 1
        if j < i:
            self.coincidence(f, b)
        elif j == i:
            table[f][w[i]] = b
            table[b][inv[w[i]]] = f
            self.deductions.append((f, w[i]))

    def scan_and_fill(self, c: int, w: list[int]):
        table, inv = self.table, self.inv
        f, i, b, j = c, 0, c, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != c:
                    self.coincidence(f, c)
                return
            while j >= i and table[b][inv[w[j]]] >= 0:
                b = table[b][inv[w[j]]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                table[f][w[i]] = b
                table[b][inv[w[i]]] = f
                self.deductions.append((f, w[i]))
                return
            self.define(f, w[i])

    def process_deductions(self):
        while self.deductions:
            c, x = self.deductions.pop()
            if not self.alive(c):
                continue
            for w in self.rel_by_col[x]:
                if not self.alive(c):
                    break
                self.scan(c, w)
            d = self.table[c][x]
            if d >= 0 and self.alive(d):
                for w in self.rel_by_col[self.inv[x]]:
                    if not self.alive(d):
                        break
                    self.scan(d, w)
            for w in self.subgroup:
                self.scan(0, w)

    def run(self):
        self.new_coset()
        for w in self.subgroup:
            self.scan_and_fill(0, w)
            self.process_deductions()
        c = 0
        while c < len(self.table):
            for x in range(self.ncols):
                if self.alive(c) and self.table[c][x] < 0:
                    self.define(c, x)
                    self.process_deductions()
            c += 1

    def compact(self) -> tuple[int, list[list[int]]]:
        live = [c for c in range(len(self.table)) if self.alive(c)]
        new = {c: k for k, c in builtins.enumerate(live)}
        rows = [[new[self.rep(self.table[c][x])] for x in range(self.ncols)] for c in live]
        return len(live), rows


def enumerate_cosets(
    P: Presentation, subgroup_gens: Sequence[Word] = (), max_cosets: int | None = None
) -> CosetTable:
    """Enumerate cosets of ``<subgroup_gens>`` in ``P``; status ABORTED past ``max_cosets``."""
    if max_cosets is None:
        max_cosets = default_max_cosets()
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    for w in subgroup_gens:
        if w.alphabet != P.alphabet:
            raise AlphabetMismatch("subgroup generator over a different alphabet")
    ngens = len(P.gens)
    en = _Enumerator(P, subgroup_gens, max_cosets)
    try:
        en.run()
    except _Aborted:
        return CosetTable(P.alphabet, en.live, (), (), Status.ABORTED, max_cosets)
    n, rows = en.compact()
    action = tuple(tuple(rows[c][2 * g] for c in range(n)) for g in range(ngens))
    inverse = tuple(tuple(rows[c][2 * g + 1] for c in range(n)) for g in range(ngens))
    return CosetTable(P.alphabet, n, action, inverse, Status.COMPLETE, max_cosets)


# the public name used throughout the docs
enumerate = enumerate_cosets  # noqa: A001
