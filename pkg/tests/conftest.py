import itertools

from hypothesis import strategies as st

from gtcert.words import Alphabet, Word

AB = Alphabet(("a", "b"))
XY = Alphabet(("x", "y"))
LMT = Alphabet(("l", "m", "t"))


def raw_words(alphabet, max_len=12, max_exp=3):
    n = len(alphabet)
    syl = st.tuples(st.integers(0, n - 1), st.integers(-max_exp, max_exp))
    return st.lists(syl, max_size=max_len)


def words(alphabet, max_len=12, max_exp=3):
    return raw_words(alphabet, max_len, max_exp).map(lambda raw: Word.from_raw(alphabet, raw))


def _gl2(bound):
    mats = []
    for a, b, c, d in itertools.product(range(-bound, bound + 1), repeat=4):
        if a * d - b * c in (1, -1):
            mats.append(((a, b), (c, d)))
    return mats


GL2_SMALL = _gl2(6)
SL2_SMALL = [A for A in GL2_SMALL if A[0][0] * A[1][1] - A[0][1] * A[1][0] == 1]


def sl2_matrices():
    return st.sampled_from(SL2_SMALL)


def gl2_matrices():
    return st.sampled_from(GL2_SMALL)


@st.composite
def sl2_products(draw, max_factors=8):
    """Products of elementary generators; entries can get large."""
    S, T = ((0, -1), (1, 0)), ((1, 1), (0, 1))
    Ti = ((1, -1), (0, 1))
    M = ((1, 0), (0, 1))
    for g in draw(st.lists(st.sampled_from([S, T, Ti]), max_size=max_factors)):
        M = (
            (M[0][0] * g[0][0] + M[0][1] * g[1][0], M[0][0] * g[0][1] + M[0][1] * g[1][1]),
            (M[1][0] * g[0][0] + M[1][1] * g[1][0], M[1][0] * g[0][1] + M[1][1] * g[1][1]),
        )
    return M
