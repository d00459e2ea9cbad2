"""Shared test data and hypothesis strategies."""

from pathlib import Path

from hypothesis import strategies as st

from khtorsion.diagram import braid_closure_pd, parse_pd

DATA = Path(__file__).parent / "data"
TREFOIL = "[[1,5,2,4],[3,1,4,6],[5,3,6,2]]"
HOPF = "[[4,1,3,2],[2,3,1,4]]"


def braid_diagram(word, n_strands, name=None):
    pd = braid_closure_pd(word, n_strands)
    return parse_pd(str([list(x) for x in pd]), name=name or f"braid{list(word)}")


@st.composite
def braid_words(draw, max_strands=4, max_len=6):
    """(word, n_strands) with every strand crossed at least once."""
    n = draw(st.integers(2, max_strands))
    base = [draw(st.sampled_from([k, -k])) for k in range(1, n)]
    extra = draw(st.lists(st.sampled_from([g for k in range(1, n) for g in (k, -k)]),
                          max_size=max(0, max_len - len(base))))
    word = draw(st.permutations(base + extra))
    return tuple(word), n


@st.composite
def braid_diagrams(draw, max_strands=4, max_len=6):
    word, n = draw(braid_words(max_strands, max_len))
    return braid_diagram(word, n)
