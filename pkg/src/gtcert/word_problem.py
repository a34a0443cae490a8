"""Normal-form engines and the relator-derivation proof checker.

A :class:`TrivialityProof` is a list of steps ``(u, j, s)``; it certifies that
``target`` freely equals ``prod_i u_i^-1 r_{j_i}^{s_i} u_i``, hence is trivial
in the group.  :class:`Equation` wraps a proof of ``lhs rhs^-1`` so larger
derivations can be assembled from small ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .presentations import Presentation
from .words import Alphabet, AlphabetMismatch, Word, WordSyntaxError, parse_word, product

KLEIN_ALPHABET = Alphabet(("x", "y"))
TB_ALPHABET = Alphabet(("l", "m", "t"))


# -- Klein bottle group --------------------------------------------------------


@dataclass(frozen=True)
class KleinElement:
    """``x^p y^q``; multiplication uses ``y^-1 x y = x^-1``."""

    p: int = 0
    q: int = 0

    def __mul__(self, other: "KleinElement") -> "KleinElement":
        sign = -1 if self.q % 2 else 1
        return KleinElement(self.p + sign * other.p, self.q + other.q)

    def is_identity(self) -> bool:
        return self.p == 0 and self.q == 0


def klein_eval(w: Word) -> KleinElement:
    if w.alphabet != KLEIN_ALPHABET:
        raise AlphabetMismatch(f"klein_eval needs alphabet (x, y), got {w.alphabet.names}")
    p = q = 0
    for g, e in w.syllables:
        if g == 0:
            p += -e if q % 2 else e
        else:
            q += e
    return KleinElement(p, q)


# -- torus bundle groups -------------------------------------------------------

Mat2 = tuple[tuple[int, int], tuple[int, int]]


def _mat_mul(X: Mat2, Y: Mat2) -> Mat2:
    return (
        (X[0][0] * Y[0][0] + X[0][1] * Y[1][0], X[0][0] * Y[0][1] + X[0][1] * Y[1][1]),
        (X[1][0] * Y[0][0] + X[1][1] * Y[1][0], X[1][0] * Y[0][1] + X[1][1] * Y[1][1]),
    )


def _mat_pow(X: Mat2, n: int) -> Mat2:
    if n < 0:
        X, n = _mat_inv(X), -n
    out: Mat2 = ((1, 0), (0, 1))
    while n:
        if n & 1:
            out = _mat_mul(out, X)
        X = _mat_mul(X, X)
        n >>= 1
    return out


def _mat_inv(X: Mat2) -> Mat2:
    (a, b), (c, d) = X
    det = a * d - b * c
    if det not in (1, -1):
        raise ValueError("matrix is not invertible over Z")
    return ((d * det, -b * det), (-c * det, a * det))


def _apply(X: Mat2, v: tuple[int, int]) -> tuple[int, int]:
    return (X[0][0] * v[0] + X[0][1] * v[1], X[1][0] * v[0] + X[1][1] * v[1])


def lattice_action(A: Sequence[Sequence[int]]) -> Mat2:
    """Matrix ``M`` with ``t^-1 x(v) t = x(M v)`` for ``torus_bundle(a, b, c, d)``.

    ``A = [[a, b], [c, d]]`` lists the parameters row by row; the images of
    ``l`` and ``m`` are the columns ``(a, b)`` and ``(c, d)``, so ``M = A^T``.
    """
    (a, b), (c, d) = A
    if a * d - b * c not in (1, -1):
        raise ValueError(f"determinant of {A} is not +-1")
    return ((a, c), (b, d))


@dataclass(frozen=True)
class TBElement:
    """``l^v0 m^v1 t^k``."""

    v: tuple[int, int] = (0, 0)
    k: int = 0

    def is_identity(self) -> bool:
        return self.v == (0, 0) and self.k == 0


def tb_mul(A, x: TBElement, y: TBElement) -> TBElement:
    M = lattice_action(A)
    w = _apply(_mat_pow(M, -x.k), y.v)
    return TBElement((x.v[0] + w[0], x.v[1] + w[1]), x.k + y.k)


def tb_eval(A: Sequence[Sequence[int]], w: Word) -> TBElement:
    if w.alphabet != TB_ALPHABET:
        raise AlphabetMismatch(f"tb_eval needs alphabet (l, m, t), got {w.alphabet.names}")
    M = lattice_action(A)
    Minv = _mat_inv(M)
    # running state x(v) t^k, with P = M^-k
    v0 = v1 = 0
    k = 0
    P: Mat2 = ((1, 0), (0, 1))
    for g, e in w.syllables:
        if g == 2:
            k += e
            P = _mat_mul(P, _mat_pow(Minv, e) if e > 0 else _mat_pow(M, -e))
        elif g == 0:
            v0 += P[0][0] * e
            v1 += P[1][0] * e
        else:
            v0 += P[0][1] * e
            v1 += P[1][1] * e
    return TBElement((v0, v1), k)


# -- proofs --------------------------------------------------------------------


@dataclass(frozen=True)
class DerivationStep:
    conjugator: Word
    relator_index: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("step sign must be +1 or -1")


@dataclass(frozen=True)
class TrivialityProof:
    target: Word
    steps: tuple[DerivationStep, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self):
        return len(self.steps)


class ProofIndexError(IndexError):
    pass


def proof_product(P: Presentation, steps: Iterable[DerivationStep]) -> Word:
    """Free reduction of ``prod u^-1 r_j^s u`` in step order."""
    rels = P.relators
    inv_rels = [r.inverse() for r in rels]
    syl: list[tuple[int, int]] = []
    for st in steps:
        j = st.relator_index
        if not 0 <= j < len(rels):
            raise ProofIndexError(f"relator index {j} out of range (0..{len(rels) - 1})")
        u = st.conjugator
        if u.alphabet != P.alphabet:
            raise AlphabetMismatch("proof conjugator over a different alphabet")
        r = rels[j] if st.sign > 0 else inv_rels[j]
        syl.extend(u.inverse().syllables)
        syl.extend(r.syllables)
        syl.extend(u.syllables)
    return Word.from_raw(P.alphabet, syl)


def check_proof(P: Presentation, proof: TrivialityProof) -> bool:
    """True iff the conjugated-relator product freely equals ``proof.target``."""
    if proof.target.alphabet != P.alphabet:
        raise AlphabetMismatch("proof target over a different alphabet")
    return proof_product(P, proof.steps) == proof.target


def conjugate_steps(steps: Sequence[DerivationStep], g: Word) -> list[DerivationStep]:
    if g.is_identity():
        return list(steps)
    return [DerivationStep(s.conjugator * g, s.relator_index, s.sign) for s in steps]


def invert_steps(steps: Sequence[DerivationStep]) -> list[DerivationStep]:
    return [DerivationStep(s.conjugator, s.relator_index, -s.sign) for s in reversed(steps)]


def conjugate_proof(proof: TrivialityProof, g: Word) -> TrivialityProof:
    return TrivialityProof(proof.target.conjugate(g), tuple(conjugate_steps(proof.steps, g)))


def invert_proof(proof: TrivialityProof) -> TrivialityProof:
    return TrivialityProof(proof.target.inverse(), tuple(invert_steps(proof.steps)))


def concat_proofs(*proofs: TrivialityProof) -> TrivialityProof:
    if not proofs:
        raise ValueError("nothing to concatenate")
    target = product([p.target for p in proofs])
    return TrivialityProof(target, tuple(s for p in proofs for s in p.steps))


@dataclass(frozen=True)
class Equation:
    """``lhs = rhs`` in the group, with steps proving ``lhs rhs^-1``."""

    lhs: Word
    rhs: Word
    steps: tuple[DerivationStep, ...] = ()

    @classmethod
    def free(cls, lhs: Word, rhs: Word | None = None) -> "Equation":
        """Free identity; no relators needed."""
        rhs = lhs if rhs is None else rhs
        if lhs != rhs:
            raise ValueError(f"{lhs} and {rhs} are not freely equal")
        return cls(lhs, rhs, ())

    @classmethod
    def relator(cls, P: Presentation, j: int, sign: int = 1) -> "Equation":
        r = P.relators[j] if sign > 0 else P.relators[j].inverse()
        return cls(r, P.alphabet.identity, (DerivationStep(P.alphabet.identity, j, sign),))

    @classmethod
    def single(cls, P: Presentation, lhs: Word, rhs: Word) -> "Equation":
        """One conjugated relator, found among cyclic rotations of the relators."""
        step = find_single_step(P, lhs * rhs.inverse())
        if step is None:
            raise ValueError(f"{lhs} = {rhs} is not a single conjugated relator")
        return cls(lhs, rhs, (step,))

    @property
    def alphabet(self) -> Alphabet:
        return self.lhs.alphabet

    def proof(self) -> TrivialityProof:
        return TrivialityProof(self.lhs * self.rhs.inverse(), self.steps)

    def check(self, P: Presentation) -> bool:
        return check_proof(P, self.proof())

    def sym(self) -> "Equation":
        return Equation(self.rhs, self.lhs, tuple(invert_steps(self.steps)))

    def then(self, other: "Equation") -> "Equation":
        if self.rhs != other.lhs:
            raise ValueError(f"cannot chain: {self.rhs} vs {other.lhs}")
        return Equation(self.lhs, other.rhs, self.steps + other.steps)

    def __mul__(self, other: "Equation") -> "Equation":
        # X1 X2 Y2^-1 Y1^-1 = (X2 Y2^-1)^(X1^-1) (X1 Y1^-1)
        moved = conjugate_steps(other.steps, self.lhs.inverse())
        return Equation(self.lhs * other.lhs, self.rhs * other.rhs, tuple(moved) + self.steps)

    def conj(self, g: Word) -> "Equation":
        return Equation(self.lhs.conjugate(g), self.rhs.conjugate(g), tuple(conjugate_steps(self.steps, g)))

    def within(self, left: Word, right: Word | None = None) -> "Equation":
        """``left lhs right = left rhs right``."""
        right = self.alphabet.identity if right is None else right
        steps = tuple(conjugate_steps(self.steps, left.inverse()))
        return Equation(left * self.lhs * right, left * self.rhs * right, steps)

    def inverse(self) -> "Equation":
        """``lhs^-1 = rhs^-1``."""
        inv = invert_steps(self.steps)
        return Equation(self.lhs.inverse(), self.rhs.inverse(), tuple(conjugate_steps(inv, self.lhs)))

    def __pow__(self, k: int) -> "Equation":
        if k < 0:
            return self.inverse() ** (-k)
        X = self.lhs
        steps: list[DerivationStep] = []
        for i in range(k - 1, -1, -1):
            steps.extend(conjugate_steps(self.steps, X ** (-i)))
        return Equation(X**k, self.rhs**k, tuple(steps))


def find_single_step(P: Presentation, target: Word) -> DerivationStep | None:
    """A step ``(u, j, s)`` with ``u^-1 r_j^s u`` freely equal to ``target``, if one
    exists with ``target`` a cyclic rotation of a cyclically reduced relator."""
    tl = target.letters()
    n = len(tl)
    for j, r in enumerate(P.relators):
        for s in (1, -1):
            rl = (r if s > 0 else r.inverse()).letters()
            if len(rl) != n:
                continue
            for k in range(n):
                if rl[k:] + rl[:k] == tl:
                    pre = Word.from_letters(P.alphabet, rl[:k])
                    suf_inv = Word.from_letters(P.alphabet, rl[k:]).inverse()
                    u = pre if len(pre) <= len(suf_inv) else suf_inv
                    step = DerivationStep(u, j, s)
                    if proof_product(P, [step]) == target:
                        return step
    return None


# -- rewrite traces ------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    position: int
    relator_index: int
    sign: int
    direction: str  # "insert" or "delete"


class TraceError(ValueError):
    pass


def compile_rewrite_trace(
    P: Presentation, start: Word, trace: Sequence[TraceEntry | tuple]
) -> TrivialityProof:
    """Turn a rewrite sequence from ``start`` to the empty word into a proof.

    The state is a freely reduced word.  ``insert`` places ``r^s`` before
    letter ``position`` and reduces; ``delete`` removes a literal ``r^s``
    found at ``position``.
    """
    state = start
    steps: list[DerivationStep] = []
    for n, raw in enumerate(trace):
        ent = raw if isinstance(raw, TraceEntry) else TraceEntry(*raw)
        j, s, pos = ent.relator_index, ent.sign, ent.position
        if not 0 <= j < len(P.relators):
            raise TraceError(f"entry {n}: relator index {j} out of range")
        if s not in (1, -1):
            raise TraceError(f"entry {n}: sign must be +1 or -1")
        if not 0 <= pos <= len(state):
            raise TraceError(f"entry {n}: position {pos} outside word of length {len(state)}")
        r = P.relators[j] if s > 0 else P.relators[j].inverse()
        U = state.prefix(pos)
        if ent.direction == "delete":
            if state.subword(pos, pos + len(r)) != r:
                raise TraceError(f"trace inconsistent at entry {n}: relator not found at {pos}")
            state = U * state.suffix(pos + len(r))
            steps.append(DerivationStep(U.inverse(), j, s))
        elif ent.direction == "insert":
            state = U * r * state.suffix(pos)
            steps.append(DerivationStep(U.inverse(), j, -s))
        else:
            raise TraceError(f"entry {n}: unknown direction {ent.direction!r}")
    if not state.is_identity():
        raise TraceError(f"trace inconsistent: final word is {state}, not empty")
    return TrivialityProof(start, tuple(steps))


# -- text format ---------------------------------------------------------------


def render_proof(proof: TrivialityProof) -> list[str]:
    lines = [f"target: {proof.target}"]
    for s in proof.steps:
        lines.append(f"step: {s.conjugator} | {s.relator_index} | {'+1' if s.sign > 0 else '-1'}")
    return lines


def parse_step(text: str, alphabet: Alphabet, line: int = 1, col_offset: int = 0) -> DerivationStep:
    parts = text.split("|")
    if len(parts) != 3:
        raise WordSyntaxError("step needs 'conjugator | index | sign'", line, col_offset + 1)
    u = parse_word(parts[0], alphabet, line, col_offset)
    try:
        j = int(parts[1])
        s = int(parts[2])
    except ValueError:
        raise WordSyntaxError("bad relator index or sign", line, col_offset + len(parts[0]) + 2) from None
    if s not in (1, -1):
        raise WordSyntaxError("sign must be +1 or -1", line, col_offset + len(parts[0]) + len(parts[1]) + 3)
    return DerivationStep(u, j, s)
