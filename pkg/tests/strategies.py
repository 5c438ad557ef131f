"""Shared hypothesis strategies for random tangle words."""

from __future__ import annotations

from hypothesis import strategies as st

from qannular.diagram import Cap, Crossing, Cup, TangleWord

MODULI = (0, 1, 2, 3, 5)


@st.composite
def tangle_words(draw, max_k=3, max_body=8, max_crossings=6, moduli=MODULI):
    """A random valid (k,k)-word: body of legal slices, then close to k."""
    k = draw(st.integers(min_value=0, max_value=max_k))
    r = draw(st.sampled_from(moduli))
    body = draw(st.integers(min_value=0, max_value=max_body))
    slices = []
    c = k
    nx = 0
    for _ in range(body):
        kinds = ["cup"]
        if c >= 2:
            kinds.append("cap")
            if nx < max_crossings:
                kinds.append("x")
        kind = draw(st.sampled_from(kinds))
        if kind == "cup":
            slices.append(Cup(draw(st.integers(min_value=1, max_value=c + 1))))
            c += 2
        elif kind == "cap":
            slices.append(Cap(draw(st.integers(min_value=1, max_value=c - 1))))
            c -= 2
        else:
            slices.append(Crossing(draw(st.integers(min_value=1, max_value=c - 1)), draw(st.sampled_from([1, -1]))))
            nx += 1
    while c > k:
        slices.append(Cap(draw(st.integers(min_value=1, max_value=c - 1))))
        c -= 2
    while c < k:
        slices.append(Cup(draw(st.integers(min_value=1, max_value=c + 1))))
        c += 2
    return TangleWord(k, tuple(slices), r)


@st.composite
def braid_words(draw, max_k=4, max_crossings=6, moduli=MODULI):
    """A random braid-like word: crossings only, on k >= 2 strands."""
    k = draw(st.integers(min_value=2, max_value=max_k))
    r = draw(st.sampled_from(moduli))
    n = draw(st.integers(min_value=1, max_value=max_crossings))
    slices = tuple(
        Crossing(draw(st.integers(min_value=1, max_value=k - 1)), draw(st.sampled_from([1, -1])))
        for _ in range(n)
    )
    return TangleWord(k, slices, r)


@st.composite
def resolutions(draw, words=None):
    """A random word together with a random cube vertex u."""
    w = draw(words if words is not None else tangle_words())
    u = tuple(draw(st.integers(min_value=0, max_value=1)) for _ in range(w.n))
    return w, u
