#
# (c) 2026, pyCMono contributors
#
# Created: 07.10.2026
# Updated: 16.10.2026
#
# License: Apache 2.0
#
"""
Non-crossing, monotone, and linearly ordered non-crossing partitions of `{1, ..., n}`, and the moment-cumulant
formulas indexed by them.

A block `V` lies on the inner side of a block `W` if `min W < min V` and `max V < max W`.  In a non-crossing
partition, the blocks together with this relation form a forest: the parent of a block is the innermost block
enclosing it, and the outer blocks are the roots.
"""
import functools
import itertools
import logging
import math

import sympy
from sympy import QQ

from .config import settings
from .errors import SizeCap


LOGGER = logging.getLogger(__name__)


class NCPartition(object):

    def __init__(self, blocks):
        self.blocks = tuple(sorted(tuple(sorted(b)) for b in blocks))
        self.n = sum(len(b) for b in self.blocks)
        self._parents = None

    _fields = ('blocks',)

    def __eq__(self, other):
        return isinstance(other, NCPartition) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __repr__(self):
        return f"NCPartition({self.to_brackets()})"

    def to_brackets(self):
        """The bracket notation, e.g. `{1,4}{2,3}{5}`."""
        return ''.join('{' + ','.join(str(i) for i in b) + '}' for b in self.blocks)

    def is_noncrossing(self):
        for v, w in itertools.combinations(self.blocks, 2):
            for a, c in itertools.combinations(v, 2):
                if any(a < b < c for b in w) and any(d < a or d > c for d in w):
                    return False
        return True

    @staticmethod
    def is_inside(v, w):
        return w[0] < v[0] and v[-1] < w[-1]

    @property
    def parents(self):
        """For every block (by position), the position of its innermost enclosing block, or `None`."""
        if self._parents is None:
            parents = []
            for v in self.blocks:
                best = None
                for j, w in enumerate(self.blocks):
                    if self.is_inside(v, w) and (best is None or w[0] > self.blocks[best][0]):
                        best = j
                parents.append(best)
            self._parents = tuple(parents)
        return self._parents

    def roles(self):
        """`'outer'` for blocks nested inside no other block, `'inner'` for the others."""
        return tuple('outer' if p is None else 'inner' for p in self.parents)

    def nested_pairs(self):
        """All pairs `(i, j)` of block positions such that block `i` lies inside block `j`."""
        return [(i, j) for i, v in enumerate(self.blocks) for j, w in enumerate(self.blocks)
                if self.is_inside(v, w)]

    def subtree_sizes(self):
        sizes = [1] * len(self.blocks)
        for i in range(len(self.blocks)):
            p = self.parents[i]
            while p is not None:
                sizes[p] += 1
                p = self.parents[p]
        return sizes

    def monotone_order_count(self):
        """The number of orders on the blocks in which inner blocks rank higher (linear extensions of the forest)."""
        return math.factorial(len(self.blocks)) // math.prod(self.subtree_sizes())


class MonotonePartition(object):
    """A non-crossing partition with ranks `1..|pi|` on its blocks such that inner blocks have higher rank."""

    def __init__(self, partition: NCPartition, ranks):
        self.partition = partition
        self.ranks = tuple(ranks)
        if sorted(self.ranks) != list(range(1, len(partition) + 1)):
            raise ValueError(f"ranks {self.ranks} are not a permutation of 1..{len(partition)}")
        for i, j in partition.nested_pairs():
            if self.ranks[i] <= self.ranks[j]:
                raise ValueError(f"block {partition.blocks[i]} is inside {partition.blocks[j]} but ranks lower")

    _fields = ('partition', 'ranks')

    def __eq__(self, other):
        return isinstance(other, MonotonePartition) and \
            self.partition == other.partition and self.ranks == other.ranks

    def __hash__(self):
        return hash((self.partition, self.ranks))

    def __repr__(self):
        return f"MonotonePartition({self.partition.to_brackets()}, {self.ranks})"


def _check_size(n: int, cap: int, what: str):
    if n < 1 or n > cap:
        raise SizeCap(f"{what} are enumerated for 1 <= n <= {cap}, not n={n}")


def _nc_blocks(elements):
    """All non-crossing partitions of the sorted tuple `elements`, as lists of blocks."""
    if len(elements) == 0:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for k in range(len(rest) + 1):
        for others in itertools.combinations(range(len(rest)), k):
            block = (first,) + tuple(rest[i] for i in others)
            # the gaps between consecutive block elements, and the tail, are partitioned independently
            cuts = (-1,) + others + (len(rest),)
            gaps = [rest[cuts[i] + 1:cuts[i + 1]] for i in range(len(cuts) - 1)]
            for parts in itertools.product(*[list(_nc_blocks(g)) for g in gaps]):
                yield [block] + [b for part in parts for b in part]


@functools.lru_cache(maxsize=None)
def _enumerate_nc(n: int):
    result = tuple(sorted((NCPartition(blocks) for blocks in _nc_blocks(tuple(range(1, n + 1)))),
                          key=lambda p: (len(p), p.blocks)))
    LOGGER.debug("NC(%d) has %d elements", n, len(result))
    return result


def enumerate_nc(n: int, cap: int = None):
    _check_size(n, settings.nc_cap if cap is None else cap, "non-crossing partitions")
    return list(_enumerate_nc(n))


def _linear_extensions(parents, placed, remaining):
    if len(remaining) == 0:
        yield ()
        return
    for i in sorted(remaining):
        if parents[i] is None or parents[i] in placed:
            for rest in _linear_extensions(parents, placed | {i}, remaining - {i}):
                yield (i,) + rest


def enumerate_monotone(n: int, cap: int = None):
    """All monotone partitions of `{1..n}`: every non-crossing partition with every admissible order."""
    _check_size(n, settings.monotone_cap if cap is None else cap, "monotone partitions")
    result = []
    for p in _enumerate_nc(n):
        for sequence in _linear_extensions(p.parents, frozenset(), frozenset(range(len(p)))):
            ranks = [0] * len(p)
            for rank, i in enumerate(sequence, start=1):
                ranks[i] = rank
            result.append(MonotonePartition(p, ranks))
    return result


def enumerate_lnc(n: int, cap: int = None):
    """All non-crossing partitions, each with every linear order of its blocks, as `(partition, ranks)` pairs."""
    _check_size(n, settings.lnc_cap if cap is None else cap, "linearly ordered non-crossing partitions")
    return [(p, ranks) for p in _enumerate_nc(n) for ranks in itertools.permutations(range(1, len(p) + 1))]


def catalan(n: int):
    return int(sympy.catalan(n))


def _product(factors):
    result = 1
    for f in factors:
        result = result * f
    return result


def eval_cmonotone_formula(r_pair, r_single, n: int, cap: int = None):
    """
    The c-monotone moment-cumulant formula
    ```
    m_n = sum_{(pi, lambda) in M(n)} 1/|pi|! prod_{V outer} r_|V|(mu, nu) prod_{V inner} r_|V|(nu)
    ```
    The sum over orders is done by counting them: `pi` carries `|pi|! / prod(subtree sizes)` orders.  The
    sequences are indexed from `r_1` at position 0, and may hold rationals or formal polynomials.
    """
    _check_size(n, settings.nc_cap if cap is None else cap, "non-crossing partitions")
    total = 0
    for p in _enumerate_nc(n):
        weight = QQ(p.monotone_order_count(), math.factorial(len(p)))
        term = _product(r_pair[len(b) - 1] if role == 'outer' else r_single[len(b) - 1]
                        for b, role in zip(p.blocks, p.roles()))
        total = total + term * weight
    return total


def eval_monotone_formula(r, n: int, cap: int = None):
    return eval_cmonotone_formula(r, r, n, cap)


def eval_cfree_formula(R_pair, R_single, n: int, cap: int = None):
    """`m_n = sum_{pi in NC(n)} prod_{V outer} R_|V|(mu, nu) prod_{V inner} R_|V|(nu)`."""
    _check_size(n, settings.nc_cap if cap is None else cap, "non-crossing partitions")
    total = 0
    for p in _enumerate_nc(n):
        total = total + _product(R_pair[len(b) - 1] if role == 'outer' else R_single[len(b) - 1]
                                 for b, role in zip(p.blocks, p.roles()))
    return total
