from random import Random

from hypothesis import strategies as st

from orbits.group_arith.arith import random_element
from orbits.group_arith.involution import inversion_table
from orbits.group_core.models import (
    Cyclic,
    IdentityInvolution,
    IntLine,
    TwistedWrZ,
    TwistedWrZm,
    Unit,
    WrZ,
    WrZm,
    WrZZ,
    WrZZmn,
)

MAX_SHIFT = 8

CONSTRUCTIONS = (WrZ, WrZm, WrZZ, WrZZmn, TwistedWrZ, TwistedWrZm)


def leaves():
    return st.sampled_from([Unit(), IntLine(), Cyclic(2), Cyclic(3)])


def multiplicities():
    return st.integers(min_value=1, max_value=4)


@st.composite
def involutions(draw, h):
    if isinstance(h, Cyclic) and draw(st.booleans()):
        return inversion_table(h)
    return IdentityInvolution()


@st.composite
def construction_groups(draw, cls):
    """An instance of one construction over leaf groups, m, n <= 4."""
    if cls in (TwistedWrZ, TwistedWrZm):
        g, h = draw(leaves()), draw(leaves())
        return cls(g, h, draw(involutions(h)), draw(multiplicities()))
    base, m = draw(leaves()), draw(multiplicities())
    if cls in (WrZ, WrZm):
        return cls(base, m)
    return cls(base, m, draw(multiplicities()))


def twisted_groups():
    return st.one_of(construction_groups(TwistedWrZ), construction_groups(TwistedWrZm))


def constructed_groups():
    return st.one_of(*(construction_groups(cls) for cls in CONSTRUCTIONS))


@st.composite
def group_with_elements(draw, count: int, groups=None):
    """A group together with `count` of its elements, |k| <= MAX_SHIFT."""
    G = draw(groups if groups is not None else constructed_groups())
    rng = Random(draw(st.integers(min_value=0, max_value=2**32 - 1)))
    return (G,) + tuple(random_element(G, rng, MAX_SHIFT) for _ in range(count))
