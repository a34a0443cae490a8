import os

import pytest
from hypothesis import given, settings, strategies as st

from conftest import AB, words
from gtcert import abelian
from gtcert.certificates import (
    CertificateError,
    EvidenceKind,
    GtCertificate,
    Method,
    NontrivialityEvidence,
    Overall,
    Result,
    build_certificate,
    build_commutator_power_certificate,
    build_fibonacci_certificate,
    build_kbcircle_certificate,
    build_klein_certificate,
    build_rss_certificate,
    build_torus_bundle_certificate,
    canonical_expression,
    claim_decomposition,
    factor_product,
    fib,
    noncanonical_expression,
    parse_certificate,
    read_certificate,
    render_certificate,
    torus_case,
    verify,
    write_certificate,
)
from gtcert.coset_enum import enumerate_cosets, evaluate, is_identity_perm
from gtcert.presentations import fibonacci
from gtcert.word_problem import DerivationStep, TrivialityProof, check_proof, klein_eval, tb_eval
from gtcert.words import WordSyntaxError, commutator, parse_word


def ab(text, m):
    """``a``/``b`` shorthand for ``a1``/``a2``."""
    toks = []
    for tok in text.split():
        name, _, e = tok.partition("^")
        toks.append({"a": "a1", "b": "a2"}[name] + (f"^{e}" if e else ""))
    return parse_word(" ".join(toks), fibonacci(m).alphabet)


# -- klein and kbcircle ------------------------------------------------------------


def test_klein_certificate():
    c = build_klein_certificate()
    x, y = c.presentation.alphabet.gens()
    assert c.base == x and c.factors == ((c.presentation.alphabet.identity, 1), (y, 1))
    assert str(c.product_word) == "x y^-1 x y"
    assert klein_eval(c.product_word).is_identity()
    assert not klein_eval(x).is_identity()
    assert abelian.torsion_order(c.presentation, x) == 2 == c.total_multiplicity
    rep = verify(c)
    assert rep.overall is Overall.VERIFIED
    for m in (Method.PROOF, Method.NORMAL_FORM, Method.ABELIAN):
        assert rep.methods[m].result is Result.PASS


def test_kbcircle_certificate():
    c = build_kbcircle_certificate()
    x, y = c.presentation.alphabet.gens()
    assert c.product_word == commutator(x * x, y)
    rep = verify(c)
    assert rep.overall is Overall.VERIFIED
    assert rep.evidence.result is Result.PASS


# -- commutator powers -------------------------------------------------------------


def test_commutator_power_small_cases():
    a, b = AB.gens()
    assert build_commutator_power_certificate(a, b, 1) == [(AB.identity, commutator(a, b))]
    two = build_commutator_power_certificate(a, b, 2)
    assert [c for c, _ in two] == [a.inverse(), AB.identity]
    assert commutator(a * a, b) == commutator(a, b).conjugate(a.inverse()) * commutator(a, b)
    with pytest.raises(ValueError):
        build_commutator_power_certificate(a, b, 0)


@given(words(AB, 10), words(AB, 10), st.integers(1, 10))
def test_commutator_power_free_equality(e, f, alpha):
    parts = build_commutator_power_certificate(e, f, alpha)
    assert len(parts) == alpha
    prod = AB.identity
    for c, base in parts:
        assert base == commutator(e, f)
        prod = prod * base.conjugate(c)
    assert prod == commutator(e**alpha, f)


# -- torus bundles -----------------------------------------------------------------


def test_torus_examples():
    c = build_torus_bundle_certificate(0, -1, 1, -1)
    l, m, t = c.presentation.alphabet.gens()
    one = c.presentation.alphabet.identity
    assert c.factors == ((one, 1), (t, 1), (t * t, 1))
    A = ((0, -1), (1, -1))
    assert tb_eval(A, c.product_word).is_identity()
    c2 = build_torus_bundle_certificate(1, 1, -3, -2)
    assert c2.factors == ((one, 1), (t, 1), (t * t, 1))
    assert tb_eval(((1, 1), (-3, -2)), c2.product_word).is_identity()
    c3 = build_torus_bundle_certificate(-1, 0, 0, -1)
    assert c3.factors == ((one, 1), (t, 1), (t, 1), (t * t, 1))
    for cert in (c, c2, c3):
        assert verify(cert).overall is Overall.VERIFIED


def test_torus_case_rejections():
    assert torus_case(-2, 1, -1, 0) == 1
    assert torus_case(2, 1, -7, -3) == 2
    for args in [(2, 1, 1, 1), (1, 1, 0, 1), (0, 1, -1, 0), (1, 0, 0, 1)]:
        with pytest.raises(CertificateError, match="trace"):
            torus_case(*args)
    with pytest.raises(CertificateError, match="case shape"):
        torus_case(-5, 1, -11, 2)
    with pytest.raises(CertificateError, match="determinant"):
        build_torus_bundle_certificate(0, 1, 1, -1)


def test_torus_proof_is_lazy():
    c = build_torus_bundle_certificate(-7, 2, 3, -1)
    assert "proof" not in c.__dict__
    assert check_proof(c.presentation, c.proof)
    assert c.proof.target == c.product_word


# -- Fibonacci expressions -----------------------------------------------------------


def test_canonical_examples():
    assert canonical_expression(5, 5) == ab("a b^2 a b", 5)
    assert canonical_expression(6, 6) == ab("b a b a b^2 a b", 6)
    assert canonical_expression(10, 10).exponent_sum("a2") == 34
    with pytest.raises(ValueError):
        canonical_expression(5, 2)
    with pytest.raises(ValueError):
        canonical_expression(2, 3)


def test_noncanonical_examples():
    assert noncanonical_expression(4, 3) == ab("a^2 b^-1", 4)
    assert noncanonical_expression(4, 1) == ab("a^2 b^-1 a^2 b^-1 a b^-1", 4)
    assert noncanonical_expression(7, 1).exponent_sum("a2") == 13
    assert noncanonical_expression(6, 6) == ab("b a^-1", 6)
    assert noncanonical_expression(6, 4) == ab("b a^-1 b a^-2", 6)
    with pytest.raises(ValueError):
        noncanonical_expression(5, 0)


@given(st.integers(3, 20).flatmap(lambda m: st.tuples(st.just(m), st.integers(1, m))))
def test_expression_recursions_and_sums(mi):
    m, i = mi
    n = noncanonical_expression(m, i)
    assert n.exponent_sum("a2") == (-1) ** (m + i) * fib(m + 1 - i)
    letters = {(g, 1 if e > 0 else -1) for g, e in n.syllables}
    assert letters <= ({(0, -1), (1, 1)} if (m - i) % 2 == 0 else {(0, 1), (1, -1)}) or i <= 2
    if i + 2 <= m:
        assert n == noncanonical_expression(m, i + 2) * noncanonical_expression(m, i + 1).inverse()
    if i >= 3:
        c = canonical_expression(m, i)
        assert c.exponent_sum("a2") == fib(i - 1)
        assert all(e > 0 for _, e in c.syllables)
        if i >= 5:
            assert c == canonical_expression(m, i - 2) * canonical_expression(m, i - 1)


# -- claim decomposition -------------------------------------------------------------


def test_claim_decomposition_examples():
    one = AB.identity
    b = AB.gen("b")
    assert claim_decomposition(parse_word("a b a b^-1", AB)) == [(one, 1), (b.inverse(), 1)]
    w = parse_word("a b^2 a^3 b^-1 a b^-1", AB)
    assert claim_decomposition(w) == [(one, 1), (b**-2, 3), (b.inverse(), 1)]
    with pytest.raises(ValueError):
        claim_decomposition(parse_word("a b a", AB))
    with pytest.raises(ValueError):
        claim_decomposition(parse_word("a b a^-1 b^-1", AB))


@st.composite
def well_shaped(draw):
    k = draw(st.integers(1, 8))
    ms = [draw(st.integers(0, 5))] + [draw(st.integers(1, 5)) for _ in range(k - 1)]
    ns = [draw(st.integers(-5, 5)) for _ in range(k - 1)]
    ns.append(-sum(ns))
    a, b = AB.gens()
    w = AB.identity
    for mj, nj in zip(ms, ns):
        w = w * a**mj * b**nj
    return w


@settings(max_examples=300)
@given(well_shaped())
def test_claim_decomposition_free_equality(w):
    fs = claim_decomposition(w)
    assert factor_product(AB.gen("a"), fs) == w
    assert all(k > 0 for _, k in fs)
    inv = claim_decomposition(w.inverse(), inverse=True)
    assert factor_product(AB.gen("a").inverse(), inv) == w.inverse()


# -- Fibonacci certificates ----------------------------------------------------------


def test_fibonacci4_certificate():
    c = build_fibonacci_certificate(4)
    b = c.presentation.gen("a2")
    one = c.presentation.alphabet.identity
    assert c.factors == ((one, 1), (b**-2, 3), (b.inverse(), 1))
    assert c.total_multiplicity == 5
    assert c.product_word == ab("a b^2 a^3 b^-1 a b^-1", 4)
    T = enumerate_cosets(c.presentation)
    assert T.n_cosets == 5
    assert is_identity_perm(evaluate(T, c.product_word))
    assert not is_identity_perm(evaluate(T, c.base))
    rep = verify(c, {Method.PROOF, Method.COSET})
    assert rep.methods[Method.PROOF].result is Result.PASS
    assert rep.methods[Method.COSET].result is Result.PASS
    assert rep.overall is Overall.VERIFIED


@pytest.mark.parametrize("m", range(3, 13))
def test_fibonacci_certificates(m):
    c = build_fibonacci_certificate(m)
    assert check_proof(c.presentation, c.proof)
    assert c.proof.target == c.product_word
    assert all(k >= 1 for _, k in c.factors)
    order = abelian.torsion_order(c.presentation, c.base)
    assert order != abelian.INFINITE and c.total_multiplicity % order == 0
    expected = {
        3: EvidenceKind.FINITE_QUOTIENT,
        4: EvidenceKind.FINITE_QUOTIENT,
        5: EvidenceKind.FINITE_QUOTIENT,
        7: EvidenceKind.FINITE_QUOTIENT,
    }
    if m in expected:
        assert c.evidence.kind is expected[m]
    assert verify(c, {Method.PROOF, Method.ABELIAN}).ok


def test_fibonacci_evidence_fallbacks():
    assert build_fibonacci_certificate(6).evidence.kind is EvidenceKind.ABELIANIZATION_NONZERO
    # where a1 dies in H1 the nontriviality claim is cited
    kinds = {m: build_fibonacci_certificate(m).evidence.kind for m in range(8, 13)}
    for m, k in kinds.items():
        P = fibonacci(m)
        if any(abelian.image(P, P.gen("a1"))):
            assert k is EvidenceKind.ABELIANIZATION_NONZERO
        else:
            assert k is EvidenceKind.CITED
            assert verify(build_fibonacci_certificate(m), {Method.PROOF}).overall is Overall.CONDITIONALLY_VERIFIED


def test_fibonacci_rejects_small_m():
    with pytest.raises(CertificateError):
        build_fibonacci_certificate(2)


# -- RSS -----------------------------------------------------------------------------


def test_rss_examples():
    c = build_rss_certificate(5, 2, -3)
    assert c.total_multiplicity == 5
    assert abelian.torsion_order(c.presentation, c.base) == 5
    c3 = build_rss_certificate(3, 1, -1)
    b, t = c3.presentation.gen("b"), c3.presentation.gen("t")
    assert c3.factors == ((c3.presentation.alphabet.identity, 1), (b * t, 1), (b.inverse() * t**2, 1))
    c2 = build_rss_certificate(2, 1, 4)
    assert c2.factors == ((b * t, 1), (b.inverse() * t**2, 1))
    for cert in (c, c3, c2):
        assert verify(cert).overall is Overall.VERIFIED
    with pytest.raises(CertificateError):
        build_rss_certificate(4, 2, 0)
    with pytest.raises(CertificateError):
        build_rss_certificate(3, 2, 0)


# -- verification --------------------------------------------------------------------


def test_corrupted_conjugator_fails_proof():
    c = build_fibonacci_certificate(4)
    b = c.presentation.gen("a2")
    bad = c.with_factors([(c.factors[0][0], 1), (b**-1, 3), (b.inverse(), 1)])
    rep = verify(bad)
    assert rep.methods[Method.PROOF].result is Result.FAIL
    assert rep.overall is Overall.FAILED


def test_bad_multiplicities_fail():
    c = build_klein_certificate()
    assert verify(c.with_factors([])).overall is Overall.FAILED
    assert verify(c.with_factors([(c.factors[0][0], 0), c.factors[1]])).overall is Overall.FAILED


def test_tampered_step_fails():
    c = build_klein_certificate()
    y = c.presentation.gen("y")
    bad = GtCertificate(
        c.presentation, c.base, c.factors, c.evidence, TrivialityProof(c.proof.target, (DerivationStep(y, 0, 1),))
    )
    assert verify(bad).methods[Method.PROOF].result is Result.FAIL


def test_wrong_evidence_fails():
    c = build_klein_certificate()
    x = c.presentation.gen("x")
    bogus = GtCertificate(c.presentation, x * x, ((c.presentation.alphabet.identity, 1),), c.evidence, c.proof)
    assert verify(bogus).overall is Overall.FAILED
    liar = GtCertificate(
        c.presentation, c.base, c.factors, NontrivialityEvidence.finite_quotient(3), c.proof
    )
    assert verify(liar).evidence.result is Result.FAIL


def test_cited_is_conditional():
    c = build_klein_certificate()
    cited = GtCertificate(c.presentation, c.base, c.factors, NontrivialityEvidence.cited("by hand"), c.proof)
    rep = verify(cited, {Method.PROOF})
    assert rep.overall is Overall.CONDITIONALLY_VERIFIED and rep.ok


def test_build_certificate_dispatch():
    assert build_certificate("fibonacci", {"m": 4}).factors == build_fibonacci_certificate(4).factors
    with pytest.raises(CertificateError):
        build_certificate("fibonacci", {"n": 4})
    with pytest.raises(CertificateError):
        build_certificate("nope", {})


# -- file format ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "family,params",
    [
        ("klein", {}),
        ("kbcircle", {}),
        ("fibonacci", {"m": 5}),
        ("torusbundle", {"a": -2, "b": 1, "c": -1, "d": 0}),
        ("rss", {"p": 5, "q": 2, "m": -3}),
    ],
)
def test_file_roundtrip(tmp_path, family, params):
    c = build_certificate(family, params)
    path = tmp_path / "c.gtc"
    write_certificate(c, str(path))
    back = read_certificate(str(path))
    assert back == c
    assert back.proof == c.proof
    assert verify(back).overall is Overall.VERIFIED
    assert render_certificate(back) == path.read_text()


def test_presentation_path_reference(tmp_path):
    from gtcert.presentations import render

    c = build_klein_certificate()
    (tmp_path / "k.txt").write_text(render(c.presentation))
    write_certificate(c, str(tmp_path / "k.gtc"), presentation_ref="k.txt")
    back = read_certificate(str(tmp_path / "k.gtc"))
    assert back.presentation_ref == "k.txt"
    assert (back.presentation, back.base, back.factors, back.proof) == (c.presentation, c.base, c.factors, c.proof)


@pytest.mark.parametrize(
    "text,line",
    [
        ("presentation: klein\n", 1),
        ("format: gtcert/1\nbase: x\n", 2),
        ("format: gtcert/1\npresentation: klein\nbase: z\n", 3),
        ("format: gtcert/1\npresentation: klein\nfactor: y\n", 3),
        ("format: gtcert/1\npresentation: klein\nfactor: y | two\n", 3),
        ("format: gtcert/1\npresentation: klein\nstep: y | 0 | 3\n", 3),
        ("format: gtcert/1\npresentation: klein\nevidence: magic\n", 3),
        ("format: gtcert/1\npresentation: klein\nwhat: 1\n", 3),
        ("format: gtcert/1\npresentation: klein\nno colon here\n", 3),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(WordSyntaxError) as e:
        parse_certificate(text)
    assert e.value.line == line


def test_missing_fields():
    with pytest.raises(CertificateError, match="missing: base, target, evidence"):
        parse_certificate("format: gtcert/1\npresentation: klein\n")
    with pytest.raises(CertificateError):
        parse_certificate("format: gtcert/1\npresentation: nosuchfile.txt\n", base_dir=os.getcwd())


def test_unwritable_without_reference():
    c = build_klein_certificate()
    anon = GtCertificate(c.presentation, c.base, c.factors, c.evidence, c.proof)
    with pytest.raises(CertificateError):
        render_certificate(anon)
