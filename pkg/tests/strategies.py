"""Hypothesis strategies shared by the test modules."""

import random

from hypothesis import strategies as st

from dilatk.corpus import random_injective_map
from dilatk.endo import FinFunc


@st.composite
def finfuncs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    return FinFunc(draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n)))


@st.composite
def injective_maps(draw):
    return random_injective_map(random.Random(draw(st.integers(0, 10**6))))


@st.composite
def func_with_subset(draw, max_n=6):
    h = draw(finfuncs(max_n=max_n))
    sub = draw(st.sets(st.integers(0, h.n - 1)))
    return h, sorted(sub)
