"""Generalized torsion certificates: builders, verification, file format.

A certificate for ``g`` in a presented group lists conjugators ``c_i`` and
multiplicities ``k_i`` with ``prod (c_i^-1 g c_i)^k_i = 1``.  Triviality of
the product is carried by a relator derivation; nontriviality of ``g`` by a
separate piece of evidence.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Sequence

from . import abelian
from .coset_enum import default_max_cosets, enumerate_cosets, evaluate, is_identity_perm
from .presentations import (
    Presentation,
    fibonacci,
    from_family,
    is_shorthand,
    kb_circle_bundle,
    klein_bottle,
    load_presentation,
    rss,
    torus_bundle,
)
from .word_problem import (
    DerivationStep,
    Equation,
    TraceEntry,
    TrivialityProof,
    check_proof,
    compile_rewrite_trace,
    find_single_step,
    klein_eval,
    parse_step,
    render_proof,
    tb_eval,
)
from .words import Word, WordSyntaxError, commutator, parse_word, product

FORMAT_TAG = "gtcert/1"
FINITE_FIBONACCI_ORDERS = {1: 1, 2: 1, 3: 8, 4: 5, 5: 11, 7: 29}


class CertificateError(ValueError):
    pass


# -- evidence ------------------------------------------------------------------


class EvidenceKind(Enum):
    ABELIANIZATION_NONZERO = "abelianization-nonzero"
    FINITE_QUOTIENT = "finite-quotient"
    NORMAL_FORM = "normal-form"
    CITED = "cited"


@dataclass(frozen=True)
class NontrivialityEvidence:
    kind: EvidenceKind
    order: int | None = None  # finite quotient: expected order
    extra: tuple[Word, ...] = ()  # finite quotient: extra relators defining it
    engine: str | None = None  # normal form: "klein" or "torus-bundle"
    citation: str = ""

    @classmethod
    def abelianization(cls):
        return cls(EvidenceKind.ABELIANIZATION_NONZERO)

    @classmethod
    def finite_quotient(cls, order: int | None = None, extra: Sequence[Word] = ()):
        return cls(EvidenceKind.FINITE_QUOTIENT, order=order, extra=tuple(extra))

    @classmethod
    def normal_form(cls, engine: str):
        return cls(EvidenceKind.NORMAL_FORM, engine=engine)

    @classmethod
    def cited(cls, text: str):
        return cls(EvidenceKind.CITED, citation=text)

    def render(self) -> str:
        k = self.kind
        if k is EvidenceKind.ABELIANIZATION_NONZERO:
            return k.value
        if k is EvidenceKind.NORMAL_FORM:
            return f"{k.value} {self.engine}"
        if k is EvidenceKind.CITED:
            return f"{k.value} {self.citation}".rstrip()
        out = k.value
        if self.order is not None:
            out += f" order={self.order}"
        if self.extra:
            out += " extra=" + ", ".join(str(w) for w in self.extra)
        return out


def parse_evidence(text: str, P: Presentation, line: int = 1, col: int = 1) -> NontrivialityEvidence:
    kind_s, _, rest = text.strip().partition(" ")
    try:
        kind = EvidenceKind(kind_s)
    except ValueError:
        raise WordSyntaxError(f"unknown evidence kind {kind_s!r}", line, col) from None
    rest = rest.strip()
    if kind is EvidenceKind.ABELIANIZATION_NONZERO:
        if rest:
            raise WordSyntaxError("abelianization-nonzero takes no payload", line, col)
        return NontrivialityEvidence.abelianization()
    if kind is EvidenceKind.NORMAL_FORM:
        if rest not in ENGINES:
            raise WordSyntaxError(f"unknown normal-form engine {rest!r}", line, col)
        return NontrivialityEvidence.normal_form(rest)
    if kind is EvidenceKind.CITED:
        return NontrivialityEvidence.cited(rest)
    order = None
    extra: list[Word] = []
    head, sep, tail = rest.partition("extra=")
    for tok in head.split():
        key, _, val = tok.partition("=")
        if key != "order":
            raise WordSyntaxError(f"unexpected finite-quotient field {tok!r}", line, col)
        try:
            order = int(val)
        except ValueError:
            raise WordSyntaxError(f"bad order {val!r}", line, col) from None
    if sep:
        extra = [parse_word(w, P.alphabet, line) for w in tail.split(",") if w.strip()]
    return NontrivialityEvidence.finite_quotient(order, extra)


# -- normal-form engine dispatch -------------------------------------------------

ENGINES = ("klein", "torus-bundle")


def torus_params(P: Presentation) -> tuple[int, int, int, int] | None:
    """Recover ``(a, b, c, d)`` when ``P`` is literally ``torus_bundle(a, b, c, d)``."""
    if P.gens != ("l", "m", "t") or len(P.relators) != 3:
        return None
    v1 = P.relators[1].exponent_vector()
    v2 = P.relators[2].exponent_vector()
    a, b, c, d = 1 - v1[0], -v1[1], -v2[0], 1 - v2[1]
    if a * d - b * c not in (1, -1):
        return None
    return (a, b, c, d) if P == torus_bundle(a, b, c, d) else None


def detect_engine(P: Presentation) -> str | None:
    if P == klein_bottle():
        return "klein"
    if torus_params(P) is not None:
        return "torus-bundle"
    return None


def engine_is_identity(P: Presentation, engine: str, w: Word) -> bool:
    if engine == "klein":
        return klein_eval(w).is_identity()
    a, b, c, d = torus_params(P)
    return tb_eval(((a, b), (c, d)), w).is_identity()


# -- the certificate -------------------------------------------------------------


Factor = tuple[Word, int]


def factor_product(base: Word, factors: Iterable[Factor]) -> Word:
    return product([base.conjugate(c) ** k for c, k in factors], base.alphabet)


@dataclass(frozen=True)
class GtCertificate:
    """``prod (base^c)^k = 1`` for ``(c, k)`` in ``factors``.

    ``proof_source`` is either a finished proof or a zero-argument callable;
    torus-bundle derivations grow quickly with the matrix entries, so they
    are only built when first asked for.
    """

    presentation: Presentation
    base: Word
    factors: tuple[Factor, ...]
    evidence: NontrivialityEvidence
    proof_source: TrivialityProof | Callable[[], TrivialityProof] = field(repr=False, compare=False)
    presentation_ref: str = ""

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((c, int(k)) for c, k in self.factors))

    @cached_property
    def proof(self) -> TrivialityProof:
        src = self.proof_source
        return src if isinstance(src, TrivialityProof) else src()

    @cached_property
    def product_word(self) -> Word:
        return factor_product(self.base, self.factors)

    @property
    def total_multiplicity(self) -> int:
        return sum(k for _, k in self.factors)

    def with_factors(self, factors: Sequence[Factor]) -> "GtCertificate":
        """Same certificate with other factors (the proof is kept as is)."""
        return GtCertificate(
            self.presentation, self.base, tuple(factors), self.evidence, self.proof, self.presentation_ref
        )


def _make(P, base, factors, evidence, proof_source, ref=None) -> GtCertificate:
    factors = tuple((c, k) for c, k in factors if k)
    ref = ref if ref is not None else (P.label if is_shorthand(P.label) else "")
    return GtCertificate(P, base, factors, evidence, proof_source, ref)


# -- Klein bottle ----------------------------------------------------------------


def build_klein_certificate() -> GtCertificate:
    """``x x^y = 1`` in ``< x, y | y^-1 x y x >``."""
    P = klein_bottle()
    x, y = P.alphabet.gens()
    target = x * x.conjugate(y)
    # x | y^-1 x y  ->  x (x^-1 y^-1 x^-1 y) y^-1 x y  reduces to the empty word
    proof = compile_rewrite_trace(P, target, [TraceEntry(1, 0, -1, "insert")])
    return _make(P, x, [(P.alphabet.identity, 1), (y, 1)], NontrivialityEvidence.normal_form("klein"), proof)


def build_kbcircle_certificate() -> GtCertificate:
    """``[x,y]^(x^-1) [x,y] = [x^2, y] = 1`` when ``x^2 y^2`` is central."""
    P = kb_circle_bundle()
    x, y = P.alphabet.gens()
    base = commutator(x, y)
    factors = [(x.inverse(), 1), (P.alphabet.identity, 1)]
    target = factor_product(base, factors)
    step = find_single_step(P, target)
    if step is None:  # pragma: no cover - fixed presentation
        raise CertificateError("relator lookup failed")
    # x^2 = y^2 = (xy)^4 = 1 is the dihedral group of order 8, where [x,y] = (xy)^2 != 1
    ev = NontrivialityEvidence.finite_quotient(8, (x**2, y**2, (x * y) ** 4))
    return _make(P, base, factors, ev, TrivialityProof(target, (step,)))


def build_commutator_power_certificate(e: Word, f: Word, alpha: int) -> list[tuple[Word, Word]]:
    """Factors ``(c, [e,f])`` whose conjugate product freely equals ``[e^alpha, f]``.

    Unrolls ``[e^k, f] = [e^(k-1), f]^(e^-1) [e, f]``.
    """
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    base = commutator(e, f)
    return [(e ** (-i), base) for i in range(alpha - 1, -1, -1)]


# -- torus bundles ---------------------------------------------------------------


def torus_case(a: int, b: int, c: int, d: int) -> int:
    """1 or 2 for the two supported shapes; raises otherwise."""
    if a * d - b * c != 1:
        raise CertificateError(f"determinant is {a * d - b * c}, expected 1")
    if a + d >= 0:
        raise CertificateError(f"trace is {a + d}, expected < 0")
    if a <= 0 and d <= 0:
        return 1
    if a > 0 and d < 0:
        return 2
    raise CertificateError(f"matrix ({a},{b},{c},{d}) is in neither case shape (a,d <= 0 or a > 0 > d)")


def torus_factors(P: Presentation, a: int, b: int, c: int, d: int) -> list[Factor]:
    t = P.gen("t")
    one = P.alphabet.identity
    if torus_case(a, b, c, d) == 1:
        raw = [(one, 1), (t, -d), (t, -a), (t * t, 1)]
    else:
        raw = [(one, 1), (t, -a - d), (t * t, 1)]
    return [(u, k) for u, k in raw if k]


def lattice_sort(P: Presentation, w: Word) -> Equation:
    """``w = 1`` for a word in ``l, m`` with zero exponent sums, using ``[l, m]``.

    Reads ``w`` left to right keeping the prefix as ``l^x m^y``; each new
    ``l``-letter is swapped leftwards past the ``m``-block one letter at a time.
    """
    al = P.alphabet
    l, m = al.gen("l"), al.gen("m")
    li, mi = al.index("l"), al.index("m")
    swaps = {}
    for sg in (1, -1):
        for dl in (1, -1):
            X = m**sg * l**dl
            st = find_single_step(P, X * (l**dl * m**sg).inverse())
            if st is None:  # pragma: no cover - fixed presentation
                raise CertificateError("commutator relator not found")
            swaps[sg, dl] = st
    x = y = 0
    steps: list[DerivationStep] = []
    for g, s in w.letters():
        if g == mi:
            y += s
            continue
        if g != li:
            raise CertificateError("lattice_sort needs a word in l and m")
        if y:
            sg = 1 if y > 0 else -1
            st = swaps[sg, s]
            for i in range(1, abs(y) + 1):
                A = l**x * m ** (y - i * sg)
                steps.append(DerivationStep(st.conjugator * A.inverse(), st.relator_index, st.sign))
        x += s
    if x or y:
        raise CertificateError(f"lattice word has nonzero exponent sums ({x}, {y})")
    return Equation(w, al.identity, tuple(steps))


def torus_equation(P: Presentation, a: int, b: int, c: int, d: int, factors: Sequence[Factor]) -> Equation:
    """Derivation of the certificate product, via ``l^t = l^a m^b``, ``m^t = l^c m^d``."""
    l, m, t = P.alphabet.gens()
    one = P.alphabet.identity
    El = Equation(l.conjugate(t), l**a * m**b, (DerivationStep(one, 1, 1),))
    Em = Equation(m.conjugate(t), l**c * m**d, (DerivationStep(one, 2, 1),))
    # l^(t^2) = (l^a m^b)^t = (l^t)^a (m^t)^b = (l^a m^b)^a (l^c m^d)^b
    El2 = El.conj(t).then((El**a) * (Em**b))
    total = None
    for u, k in factors:
        if u == one:
            E = Equation.free(l) ** k
        elif u == t:
            E = El**k
        elif u == t * t:
            E = El2**k
        else:
            raise CertificateError(f"unexpected conjugator {u}")
        total = E if total is None else total * E
    return total.then(lattice_sort(P, total.rhs))


def build_torus_bundle_certificate(a: int, b: int, c: int, d: int) -> GtCertificate:
    """Base ``l``; factors from Cayley-Hamilton ``A^2 - tr(A) A + I = 0``."""
    torus_case(a, b, c, d)
    P = torus_bundle(a, b, c, d)
    factors = torus_factors(P, a, b, c, d)
    l = P.gen("l")

    def build() -> TrivialityProof:
        return torus_equation(P, a, b, c, d, factors).proof()

    return _make(P, l, factors, NontrivialityEvidence.normal_form("torus-bundle"), build)


# -- Fibonacci groups ------------------------------------------------------------


def fib(n: int) -> int:
    x, y = 0, 1
    for _ in range(n):
        x, y = y, x + y
    return x


def _fib_gen(P: Presentation, m: int, i: int) -> Word:
    return Word._trusted(P.alphabet, (((i - 1) % m, 1),))


def canonical_expression(m: int, i: int) -> Word:
    """``a_i`` as a positive word in ``a = a1, b = a2`` via ``a_{i+2} = a_i a_{i+1}``."""
    if m <= 2 or not 3 <= i <= m:
        raise ValueError(f"canonical expression needs m > 2 and 3 <= i <= m (got m={m}, i={i})")
    P = fibonacci(m)
    c = [None, _fib_gen(P, m, 1), _fib_gen(P, m, 2)]
    for k in range(3, i + 1):
        c.append(c[k - 2] * c[k - 1])
    return c[i]


def noncanonical_expression(m: int, i: int) -> Word:
    """``a_i`` in ``a, b`` via ``a_i = a_{i+2} a_{i+1}^-1`` from ``a_{m+1} = a``, ``a_{m+2} = b``."""
    if m <= 2 or not 1 <= i <= m:
        raise ValueError(f"non-canonical expression needs m > 2 and 1 <= i <= m (got m={m}, i={i})")
    P = fibonacci(m)
    n = {m + 1: _fib_gen(P, m, 1), m + 2: _fib_gen(P, m, 2)}
    for k in range(m, i - 1, -1):
        n[k] = n[k + 2] * n[k + 1].inverse()
    return n[i]


def claim_decomposition(
    w: Word, a: Word | None = None, b: Word | None = None, inverse: bool = False
) -> list[Factor]:
    """Write ``w = a^m1 b^n1 ... a^mk b^nk`` (with sum n = 0) as conjugates of ``a``.

    Returns ``(b^-(n1+...+n_{j-1}), m_j)``; with ``inverse=True`` the base is
    ``a^-1`` and every ``a``-exponent of ``w`` must be negative.
    """
    al = w.alphabet
    a = al.identity * (a if a is not None else Word._trusted(al, ((0, 1),)))
    b = al.identity * (b if b is not None else Word._trusted(al, ((1, 1),)))
    if len(a.syllables) != 1 or len(b.syllables) != 1 or a.syllables[0][1] != 1 or b.syllables[0][1] != 1:
        raise ValueError("a and b must be generators")
    ai, bi = a.syllables[0][0], b.syllables[0][0]
    sign = -1 if inverse else 1
    blocks: list[list[int]] = []  # [a-exponent, b-exponent]
    for g, e in w.syllables:
        if g == ai:
            if e * sign <= 0:
                raise ValueError(f"a-exponent {e} has the wrong sign")
            blocks.append([e * sign, 0])
        elif g == bi:
            if not blocks:
                blocks.append([0, 0])
            blocks[-1][1] = e
        else:
            raise ValueError(f"generator {al.names[g]} is neither a nor b")
    if sum(n for _, n in blocks) != 0:
        raise ValueError("total b-exponent is nonzero")
    out: list[Factor] = []
    s = 0
    for k, (mj, nj) in enumerate(blocks):
        if mj:
            out.append((b ** (-s), mj))
        s += nj
    return out


def fibonacci_equations(P: Presentation, m: int):
    """Equations ``a_i = canonical_i`` (i <= m) and ``a_i = noncanonical_i``."""
    g = lambda i: _fib_gen(P, m, i)  # noqa: E731
    one = P.alphabet.identity
    C = {1: Equation.free(g(1)), 2: Equation.free(g(2))}
    for i in range(3, m + 1):
        st = Equation(g(i), g(i - 2) * g(i - 1), (DerivationStep(one, i - 3, -1),))
        C[i] = st.then(C[i - 2] * C[i - 1])
    N = {m + 1: Equation.free(g(1)), m + 2: Equation.free(g(2))}
    for i in range(m, 0, -1):
        st = Equation(g(i), g(i + 2) * g(i + 1).inverse(), (DerivationStep(one, i - 1, 1),))
        N[i] = st.then(N[i + 2] * N[i + 1].inverse())
    return C, N


def fibonacci_evidence(P: Presentation, m: int) -> NontrivialityEvidence:
    if m in FINITE_FIBONACCI_ORDERS and FINITE_FIBONACCI_ORDERS[m] > 1:
        return NontrivialityEvidence.finite_quotient(FINITE_FIBONACCI_ORDERS[m])
    if any(abelian.image(P, _fib_gen(P, m, 1))):
        return NontrivialityEvidence.abelianization()
    return NontrivialityEvidence.cited("a1 != 1 in F(2,m) for m > 2")


def build_fibonacci_certificate(m: int) -> GtCertificate:
    """Base ``a = a1`` in ``F(2, m)``; ``b = a2``.

    Even ``m``: ``a = n_1`` starts with ``a``; dropping it and replacing the
    next ``a`` by ``u = c_{m-1} c_m`` gives a zero ``b``-sum word in ``a, b^+-1``
    with positive ``a`` only.  Odd ``m``: ``u^-1 n_1 = 1`` uses only ``a^-1``,
    which is decomposed over ``a^-1`` and then inverted.
    """
    if m <= 2:
        raise CertificateError("fibonacci certificate needs m > 2")
    P = fibonacci(m)
    a = _fib_gen(P, m, 1)
    C, N = fibonacci_equations(P, m)
    one = P.alphabet.identity
    # a = a_{m+1} = a_{m-1} a_m = u
    st = Equation(a, _fib_gen(P, m, m - 1) * _fib_gen(P, m, m), (DerivationStep(one, m - 2, -1),))
    Eu = st.then(C[m - 1] * C[m])
    u = Eu.rhs
    En = N[1]
    n1 = En.rhs
    if m % 2 == 0:
        if not n1.syllables or n1.syllables[0][0] != 0 or n1.syllables[0][1] < 1:
            raise CertificateError("non-canonical expression should start with a")  # pragma: no cover
        Ew = En.within(a.inverse()).sym()  # w' = 1
        w1 = Ew.lhs
        k = next(i for i, (g, s) in enumerate(w1.letters()) if g == 0)
        E = Eu.sym().within(w1.prefix(k), w1.suffix(k + 1)).then(Ew)
        W = E.lhs
        factors = claim_decomposition(W)
        final = E
    else:
        E = En.sym().within(u.inverse()).then(Eu.within(u.inverse()))
        W = E.lhs
        factors = list(reversed(claim_decomposition(W, inverse=True)))
        final = Equation(W.inverse(), one, tuple(E.sym().steps))
    proof = final.proof()
    if proof.target != factor_product(a, factors):
        raise CertificateError("fibonacci construction produced a mismatched product")  # pragma: no cover
    return _make(P, a, factors, fibonacci_evidence(P, m), proof)


# -- RSS groups ------------------------------------------------------------------


def rss_factors(P: Presentation, p: int, q: int) -> list[Factor]:
    b, t = P.gen("b"), P.gen("t")
    out = [(P.alphabet.identity, p - 2 * q)]
    for j in range(1, q + 1):
        out.append((b * t ** (2 * j - 1), 1))
        out.append((b.inverse() * t ** (2 * j), 1))
    return [(u, k) for u, k in out if k]


def build_rss_certificate(p: int, q: int, m: int) -> GtCertificate:
    """Base ``t``: ``t^(p-2q) prod_j t^(b t^(2j-1)) t^(b^-1 t^(2j)) = 1``.

    The product is ``t^(p-2q) B^q t^(2q)`` with ``B = t^-1 b^-1 t b t^-1 b t b^-1``,
    and ``B = [a, b]`` because ``t^-1 b t = a^-1``.
    """
    if math.gcd(p, q) != 1:
        raise CertificateError(f"gcd({p}, {q}) != 1")
    if not (p >= 2 * q and 2 * q > 1):
        raise CertificateError(f"need p >= 2q > 1, got p={p}, q={q}")
    P = rss(p, q, m)
    a, b, t = P.alphabet.gens()
    B = t.inverse() * b.inverse() * t * b * t.inverse() * b * t * b.inverse()
    comm = commutator(a, b)
    # B [a,b]^-1 = t^-1 b^-1 t b | t^-1 b t a | b^-1 a^-1: delete r1, then insert r1 before a^-1
    pf = compile_rewrite_trace(
        P, B * comm.inverse(), [TraceEntry(4, 1, 1, "delete"), TraceEntry(3, 1, 1, "insert")]
    )
    EB = Equation(B, comm, pf.steps)
    head, tail = t ** (p - 2 * q), t ** (2 * q)
    E = (EB**q).within(head, tail).then(Equation.relator(P, 2).conj(tail))
    factors = rss_factors(P, p, q)
    proof = E.proof()
    if proof.target != factor_product(t, factors):
        raise CertificateError("rss construction produced a mismatched product")  # pragma: no cover
    return _make(P, t, factors, NontrivialityEvidence.abelianization(), proof)


# -- dispatch by family name ------------------------------------------------------


def build_certificate(family: str, params: dict[str, int]) -> GtCertificate:
    builders = {
        "klein": ((), lambda: build_klein_certificate()),
        "kbcircle": ((), lambda: build_kbcircle_certificate()),
        "fibonacci": (("m",), build_fibonacci_certificate),
        "torusbundle": (("a", "b", "c", "d"), build_torus_bundle_certificate),
        "rss": (("p", "q", "m"), build_rss_certificate),
    }
    if family not in builders:
        raise CertificateError(f"no certificate builder for family {family!r}")
    keys, fn = builders[family]
    if set(params) != set(keys):
        raise CertificateError(f"family {family!r} takes parameters {list(keys)}, got {sorted(params)}")
    return fn(*(params[k] for k in keys))


# -- verification ----------------------------------------------------------------


class Method(Enum):
    PROOF = "proof"
    COSET = "coset"
    NORMAL_FORM = "normal-form"
    ABELIAN = "abelian"


class Result(Enum):
    PASS = "Pass"
    FAIL = "Fail"
    UNAVAILABLE = "Unavailable"


class Overall(Enum):
    VERIFIED = "Verified"
    CONDITIONALLY_VERIFIED = "ConditionallyVerified"
    FAILED = "Failed"


@dataclass(frozen=True)
class Check:
    result: Result
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    overall: Overall
    methods: dict[Method, Check]
    evidence: Check
    necessary_condition: Check

    @property
    def ok(self) -> bool:
        return self.overall is not Overall.FAILED

    def lines(self) -> list[str]:
        out = [f"overall={self.overall.value}"]
        for m in Method:
            if m in self.methods:
                c = self.methods[m]
                out.append(f"{m.value}={c.result.value}" + (f" ({c.detail})" if c.detail else ""))
        out.append(f"evidence={self.evidence.result.value}" + (f" ({self.evidence.detail})" if self.evidence.detail else ""))
        return out


DEFAULT_VERIFY_MAX_COSETS = 200_000


def _verify_limit(max_cosets: int | None) -> int:
    if max_cosets is not None:
        return max_cosets
    return min(default_max_cosets(), DEFAULT_VERIFY_MAX_COSETS)


def _check_proof(cert: GtCertificate) -> Check:
    if not cert.factors or any(k < 1 for _, k in cert.factors):
        return Check(Result.FAIL, "factors must be non-empty with positive multiplicities")
    try:
        pf = cert.proof
        if pf.target != cert.product_word:
            return Check(Result.FAIL, "proof target differs from the certificate product")
        if not check_proof(cert.presentation, pf):
            return Check(Result.FAIL, "relator product does not reduce to the target")
    except (ValueError, IndexError) as exc:
        return Check(Result.FAIL, str(exc))
    return Check(Result.PASS, f"{len(pf.steps)} steps")


def _check_abelian(cert: GtCertificate) -> Check:
    inv = abelian.abelianize(cert.presentation)
    coords = abelian.image(cert.presentation, cert.base)
    n = cert.total_multiplicity
    order = inv.order(coords)
    if order == abelian.INFINITE or n % order:
        return Check(Result.FAIL, f"{n} * [base] != 0 (order {order})")
    return Check(Result.PASS, f"order {order} divides {n}")


def _quotient(P: Presentation, extra: Sequence[Word]) -> Presentation:
    return Presentation(P.alphabet, P.relators + tuple(extra), P.label)


def _check_evidence(cert: GtCertificate, limit: int) -> Check:
    ev, P = cert.evidence, cert.presentation
    k = ev.kind
    if k is EvidenceKind.CITED:
        return Check(Result.UNAVAILABLE, f"cited: {ev.citation}")
    if k is EvidenceKind.ABELIANIZATION_NONZERO:
        if any(abelian.image(P, cert.base)):
            return Check(Result.PASS, f"image {abelian.image(P, cert.base)}")
        return Check(Result.FAIL, "base maps to 0 in the abelianization")
    if k is EvidenceKind.NORMAL_FORM:
        eng = detect_engine(P)
        if eng != ev.engine:
            return Check(Result.FAIL, f"presentation does not match engine {ev.engine}")
        if engine_is_identity(P, eng, cert.base):
            return Check(Result.FAIL, "base is trivial in normal form")
        return Check(Result.PASS, f"{eng} normal form")
    limit = max(limit, ev.order or 0)
    T = enumerate_cosets(_quotient(P, ev.extra), (), limit)
    if not T.complete:
        return Check(Result.FAIL, f"quotient enumeration aborted at {limit} cosets")
    if ev.order is not None and T.n_cosets != ev.order:
        return Check(Result.FAIL, f"quotient has order {T.n_cosets}, expected {ev.order}")
    if is_identity_perm(evaluate(T, cert.base)):
        return Check(Result.FAIL, "base is trivial in the quotient")
    return Check(Result.PASS, f"quotient of order {T.n_cosets}")


def _check_coset(cert: GtCertificate, limit: int) -> Check:
    P = cert.presentation
    if cert.evidence.kind is EvidenceKind.FINITE_QUOTIENT:
        P = _quotient(P, cert.evidence.extra)
        limit = max(limit, cert.evidence.order or 0)
    T = enumerate_cosets(P, (), limit)
    if not T.complete:
        return Check(Result.UNAVAILABLE, f"enumeration aborted at {limit} cosets")
    if not is_identity_perm(evaluate(T, cert.product_word)):
        return Check(Result.FAIL, "product is nontrivial in the coset table")
    if is_identity_perm(evaluate(T, cert.base)):
        return Check(Result.UNAVAILABLE, f"base trivial in table of order {T.n_cosets}")
    return Check(Result.PASS, f"order {T.n_cosets}")


def _check_normal_form(cert: GtCertificate) -> Check:
    P = cert.presentation
    eng = detect_engine(P)
    if eng is None:
        return Check(Result.UNAVAILABLE, "no normal-form engine for this presentation")
    if not engine_is_identity(P, eng, cert.product_word):
        return Check(Result.FAIL, f"product is nontrivial in {eng} normal form")
    if engine_is_identity(P, eng, cert.base):
        return Check(Result.FAIL, f"base is trivial in {eng} normal form")
    return Check(Result.PASS, eng)


ALL_METHODS = frozenset(Method)


def verify(
    cert: GtCertificate, methods: Iterable[Method] = ALL_METHODS, max_cosets: int | None = None
) -> VerificationReport:
    """Proof, evidence and the abelian necessary condition decide the verdict;
    coset tables and normal forms corroborate.  A corroborating Fail fails
    the certificate too."""
    methods = set(methods) | {Method.PROOF}
    limit = _verify_limit(max_cosets)
    proof = _check_proof(cert)
    necessary = _check_abelian(cert)
    evidence = _check_evidence(cert, limit)
    results = {Method.PROOF: proof}
    if Method.ABELIAN in methods:
        results[Method.ABELIAN] = necessary
    if Method.COSET in methods:
        results[Method.COSET] = _check_coset(cert, limit)
    if Method.NORMAL_FORM in methods:
        results[Method.NORMAL_FORM] = _check_normal_form(cert)
    core = [proof.result, necessary.result]
    if Result.FAIL in core or any(c.result is Result.FAIL for c in results.values()):
        overall = Overall.FAILED
    elif evidence.result is Result.PASS:
        overall = Overall.VERIFIED
    elif evidence.result is Result.UNAVAILABLE and cert.evidence.kind is EvidenceKind.CITED:
        overall = Overall.CONDITIONALLY_VERIFIED
    else:
        overall = Overall.FAILED
    return VerificationReport(overall, results, evidence, necessary)


# -- file format -----------------------------------------------------------------


def render_certificate(cert: GtCertificate, presentation_ref: str | None = None) -> str:
    ref = presentation_ref or cert.presentation_ref
    if not ref:
        raise CertificateError("certificate needs a presentation shorthand or path to be written")
    lines = [f"format: {FORMAT_TAG}", f"presentation: {ref}", f"base: {cert.base}"]
    lines += [f"factor: {c} | {k}" for c, k in cert.factors]
    lines += render_proof(cert.proof)
    lines.append(f"evidence: {cert.evidence.render()}")
    return "\n".join(lines) + "\n"


def write_certificate(cert: GtCertificate, path: str, presentation_ref: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_certificate(cert, presentation_ref))


def parse_certificate(text: str, base_dir: str | None = None) -> GtCertificate:
    P = None
    ref = ""
    base = target = evidence = None
    factors: list[Factor] = []
    steps: list[DerivationStep] = []
    seen_format = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        col = len(line.partition(":")[0]) + 1
        if not sep:
            raise WordSyntaxError("expected 'key: value'", lineno, 1)
        if not seen_format:
            if key != "format" or rest.strip() != FORMAT_TAG:
                raise WordSyntaxError(f"first line must be 'format: {FORMAT_TAG}'", lineno, 1)
            seen_format = True
            continue
        if key == "presentation":
            if P is not None:
                raise WordSyntaxError("second presentation line", lineno, 1)
            ref = rest.strip()
            try:
                P = load_presentation(ref, base_dir)
            except OSError as exc:
                raise CertificateError(f"line {lineno}: cannot read presentation {ref!r}: {exc}") from None
            except WordSyntaxError:
                raise
            except ValueError as exc:
                raise WordSyntaxError(str(exc), lineno, col + 1) from None
            continue
        if P is None:
            raise WordSyntaxError(f"'{key}' before the presentation line", lineno, 1)
        if key == "base":
            base = parse_word(rest, P.alphabet, lineno, col)
        elif key == "factor":
            w, bar, k = rest.rpartition("|")
            if not bar:
                raise WordSyntaxError("factor needs 'conjugator | multiplicity'", lineno, col + 1)
            try:
                mult = int(k)
            except ValueError:
                raise WordSyntaxError(f"bad multiplicity {k.strip()!r}", lineno, col + len(w) + 2) from None
            factors.append((parse_word(w, P.alphabet, lineno, col), mult))
        elif key == "target":
            target = parse_word(rest, P.alphabet, lineno, col)
        elif key == "step":
            steps.append(parse_step(rest, P.alphabet, lineno, col))
        elif key == "evidence":
            evidence = parse_evidence(rest, P, lineno, col + 1)
        elif key == "format":
            raise WordSyntaxError("duplicate format line", lineno, 1)
        else:
            raise WordSyntaxError(f"unknown key {key!r}", lineno, 1)
    missing = [n for n, v in (("presentation", P), ("base", base), ("target", target), ("evidence", evidence)) if v is None]
    if not seen_format:
        missing.insert(0, "format")
    if missing:
        raise CertificateError(f"certificate is missing: {', '.join(missing)}")
    return GtCertificate(P, base, tuple(factors), evidence, TrivialityProof(target, tuple(steps)), ref)


def read_certificate(path: str) -> GtCertificate:
    with open(path, encoding="utf-8") as fh:
        return parse_certificate(fh.read(), base_dir=os.path.dirname(os.path.abspath(path)))
