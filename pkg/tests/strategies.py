#
# (c) 2026, pyCMono contributors
#
# Created: 08.10.2026
# Updated: 17.10.2026
#
# License: Apache 2.0
#
"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st
from sympy import QQ

from cmono.measures import AtomicMeasure, MomentSeq


def rationals(lo: int = -3, hi: int = 3, max_den: int = 4):
    return st.builds(lambda p, q: QQ(p, q), st.integers(lo * max_den, hi * max_den), st.integers(1, max_den))


def positive_rationals(max_num: int = 8, max_den: int = 4):
    return st.builds(lambda p, q: QQ(p, q), st.integers(1, max_num), st.integers(1, max_den))


@st.composite
def atomic_measures(draw, max_atoms: int = 3, lo: int = -3, hi: int = 3):
    """Small atomic probability measures with rational locations and weights."""
    locations = draw(st.lists(rationals(lo, hi, 2), min_size=1, max_size=max_atoms, unique=True))
    weights = draw(st.lists(st.integers(1, 5), min_size=len(locations), max_size=len(locations)))
    total = sum(weights)
    return AtomicMeasure([(x, QQ(w, total)) for x, w in zip(locations, weights)])


@st.composite
def positive_measures(draw, max_atoms: int = 3):
    """Atomic measures on `[0, oo)`."""
    locations = draw(st.lists(rationals(0, 3, 2), min_size=1, max_size=max_atoms, unique=True))
    weights = draw(st.lists(st.integers(1, 5), min_size=len(locations), max_size=len(locations)))
    total = sum(weights)
    return AtomicMeasure([(x, QQ(w, total)) for x, w in zip(locations, weights)])


def moment_tables(order: int, lo: int = -3, hi: int = 3):
    """Arbitrary rational sequences, used as formal moments."""
    return st.lists(rationals(lo, hi), min_size=order, max_size=order).map(MomentSeq)
