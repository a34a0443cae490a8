import pytest
from hypothesis import given, strategies as st

from conftest import AB, words
from gtcert.abelian import abelianize
from gtcert.presentations import (
    Presentation,
    PresentationSyntaxError,
    fibonacci,
    free_group,
    from_shorthand,
    kb_circle_bundle,
    klein_bottle,
    load_presentation,
    parse_presentation,
    render,
    rss,
    torus_bundle,
)
from gtcert.words import parse_word


def test_parse_klein():
    P = parse_presentation("gens: x y\nrel: y^-1 x y x")
    assert P == klein_bottle()


def test_parse_free_rank_one():
    P = parse_presentation("gens: a\n")
    assert P.gens == ("a",) and P.relators == ()


def test_parse_reduces_relators():
    P = parse_presentation("gens: a b\nrel: a b (a b a^2)^-1")
    # a b a^-2 b^-1 a^-1 after free reduction
    assert P.relators[0] == parse_word("a b a^-2 b^-1 a^-1", P.alphabet)


def test_parse_comments_and_blank_lines():
    text = "# a comment\n\ngens: x y   # trailing\nrel: x^2\nrel: y^3\n"
    P = parse_presentation(text)
    assert len(P.relators) == 2


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("gens: x y\nrel: x z", 2, 8),
        ("gens: x x", 1, 9),
        ("rel: x\ngens: x", 1, 1),
        ("gens: x\nfoo: x", 2, 1),
        ("gens: x\nrel: x ^", 2, 8),
        ("", 1, 1),
    ],
)
def test_parse_errors_carry_positions(text, line, col):
    with pytest.raises(PresentationSyntaxError) as e:
        parse_presentation(text)
    assert (e.value.line, e.value.column) == (line, col)


def test_klein_bottle():
    P = klein_bottle()
    assert len(P.gens) == 2 and len(P.relators) == 1
    assert abelianize(P).torsion == (2,)
    r = P.relators[0]
    assert r.exponent_sum("x") == 2 and r.exponent_sum("y") == 0


def test_fibonacci_relators():
    P = fibonacci(4)
    expected = ["a1 a2 a3^-1", "a2 a3 a4^-1", "a3 a4 a1^-1", "a4 a1 a2^-1"]
    assert [str(r) for r in P.relators] == expected
    assert str(fibonacci(1).relators[0]) == "a1"
    with pytest.raises(ValueError):
        fibonacci(0)


@given(st.integers(3, 30))
def test_fibonacci_shape(m):
    P = fibonacci(m)
    assert len(P.relators) == m
    assert all(len(r.syllables) == 3 for r in P.relators)


def test_torus_bundle():
    P = torus_bundle(0, -1, 1, -1)
    assert [str(r) for r in P.relators] == ["l m l^-1 m^-1", "t^-1 l t m", "t^-1 m t m l^-1"]
    Q = torus_bundle(1, 0, 0, 1)
    assert [str(r) for r in Q.relators][1:] == ["t^-1 l t l^-1", "t^-1 m t m^-1"]
    torus_bundle(1, 1, -3, -2)
    torus_bundle(0, 1, 1, 0)  # det -1 is accepted
    with pytest.raises(ValueError):
        torus_bundle(2, 0, 0, 2)


def test_rss():
    P = rss(5, 2, -3)
    assert P.relators[2] == parse_word("t^5 (a b a^-1 b^-1)^2", P.alphabet)
    rss(1, 1, 0)
    assert abelianize(P).torsion == (5, 5)
    with pytest.raises(ValueError):
        rss(4, 2, 0)


def test_kb_circle_bundle():
    P = kb_circle_bundle()
    assert len(P.gens) == 2 and len(P.relators) == 2
    assert all(r.exponent_vector() == [0, 0] for r in P.relators)
    inv = abelianize(P)
    assert inv.free_rank == 2 and inv.torsion == ()


def test_shorthand():
    assert from_shorthand("fibonacci:m=8") == fibonacci(8)
    assert from_shorthand("torusbundle:a=0,b=-1,c=1,d=-1") == torus_bundle(0, -1, 1, -1)
    assert from_shorthand("klein") == klein_bottle()
    with pytest.raises(ValueError):
        from_shorthand("fibonacci:n=3")
    with pytest.raises(ValueError):
        from_shorthand("fibonacci:m=x")


def test_load_from_file(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text(render(rss(3, 1, 2)))
    assert load_presentation(str(p)) == rss(3, 1, 2)


@given(st.lists(words(AB, 6), max_size=4))
def test_render_parse_roundtrip(rels):
    P = Presentation(AB, tuple(rels), "random")
    assert parse_presentation(render(P)) == P


@pytest.mark.parametrize("P", [klein_bottle(), fibonacci(5), torus_bundle(2, 1, 1, 1), rss(5, 2, -3), free_group("u", "v")])
def test_family_roundtrip(P):
    assert parse_presentation(render(P)) == P
