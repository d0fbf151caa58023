#
# (c) 2026, pyCMono contributors
#
# Created: 10.10.2026
# Updated: 18.10.2026
#
# License: Apache 2.0
#
"""
Mixed moments of c-monotone products of pairs of functionals `(phi_i, psi_i)`, one self-adjoint generator `x_i` per
algebra.  A word such as `x_1^2 x_2 x_1` is written `Word.parse("1^2 2^1 1^1")`.

A product `(phi_L, psi_L) |> (phi_R, psi_R)` evaluates `phi` by the calculation rules
```
(1)  phi(b a x) = phi_R(b) phi(a x)
(2)  phi(x a b) = phi(x a) phi_R(b)
(3)  phi(a_1 b_1 ... b_(n-1) a_n) = (phi_R(b_j) - psi_R(b_j)) phi(a_1 ... a_j) phi(a_(j+1) ... a_n)
                                    + psi_R(b_j) phi(a_1 ... a_j a_(j+1) ... a_n)
```
where `a`'s are runs of letters from the left factor and `b`'s runs from the right one.  The second functional is
the monotone product `psi_L |> psi_R`: `psi` is the product of `psi_R` over the `b`-runs times `psi_L` of all
`a`-runs merged.  Products nest, so that `(phi_1 |> phi_2) |> phi_3` and `phi_1 |> (phi_2 |> phi_3)` are both
just trees of `Leaf` and `Product` nodes.
"""
import dataclasses
import itertools
import logging
import typing

from sympy import QQ

from .config import settings
from .errors import DegreeCapExceeded, MalformedWord
from .measures import MomentSeq, to_rational


LOGGER = logging.getLogger(__name__)


class AlgebraSpec(object):
    """The tables `phi(x^n)` and `psi(x^n)`, `n = 1..D`, for the generator of algebra `index`."""

    def __init__(self, index: int, phi, psi=None):
        self.index = index
        self.phi = tuple(to_rational(v) for v in phi)
        self.psi = self.phi if psi is None else tuple(to_rational(v) for v in psi)

    _fields = ('index', 'phi', 'psi')

    def __repr__(self):
        return f"AlgebraSpec({self.index}, phi={[str(v) for v in self.phi]}, psi={[str(v) for v in self.psi]})"

    def value(self, kind: str, n: int):
        table = self.phi if kind == 'phi' else self.psi
        if n > len(table):
            raise DegreeCapExceeded(f"{kind}_{self.index}(x^{n}) is beyond the table of degree {len(table)}")
        return table[n - 1]


class Word(object):
    """An alternating product of powers `x_i^e`; adjacent letters of the same algebra are merged."""

    def __init__(self, letters=()):
        merged = []
        for letter in letters:
            try:
                index, exponent = letter
            except (TypeError, ValueError):
                raise MalformedWord(f"a letter is a pair (algebra, exponent), not {letter!r}")
            if type(index) is not int or type(exponent) is not int:
                raise MalformedWord(f"letter {letter!r} must consist of integers")
            if exponent < 1:
                raise MalformedWord(f"letter {letter!r} has exponent < 1")
            if len(merged) > 0 and merged[-1][0] == index:
                merged[-1] = (index, merged[-1][1] + exponent)
            else:
                merged.append((index, exponent))
        self.letters = tuple(merged)

    _fields = ('letters',)

    @classmethod
    def parse(cls, text: str):
        letters = []
        for item in text.split():
            index, _, exponent = item.partition('^')
            try:
                letters.append((int(index), int(exponent) if exponent != '' else 1))
            except ValueError:
                raise MalformedWord(f"cannot read the letter '{item}'")
        return cls(letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __len__(self):
        return len(self.letters)

    def __add__(self, other):
        return Word(self.letters + other.letters)

    def __repr__(self):
        return f"Word({str(self)!r})"

    def __str__(self):
        return ' '.join(f"{i}^{e}" for i, e in self.letters)

    @property
    def degree(self):
        return sum(e for _, e in self.letters)

    @property
    def indices(self):
        return {i for i, _ in self.letters}


class Leaf(object):

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        self.indices = frozenset({spec.index})

    _fields = ('spec',)

    def __repr__(self):
        return f"Leaf({self.spec.index})"


class Product(object):
    """The c-monotone product of `left` and `right`; letters of `right` play the role of the higher algebra."""

    def __init__(self, left, right):
        if len(left.indices & right.indices) > 0:
            raise MalformedWord("the factors of a product must use disjoint algebras")
        self.left = left
        self.right = right
        self.indices = left.indices | right.indices

    _fields = ('left', 'right')

    def __repr__(self):
        return f"Product({self.left!r}, {self.right!r})"


def fold_left(specs):
    """`((phi_1 |> phi_2) |> phi_3) ...`, the family ordered by position."""
    node = Leaf(specs[0])
    for spec in specs[1:]:
        node = Product(node, Leaf(spec))
    return node


def fold_right(specs):
    """`phi_1 |> (phi_2 |> (phi_3 ...))`."""
    node = Leaf(specs[-1])
    for spec in reversed(specs[:-1]):
        node = Product(Leaf(spec), node)
    return node


def _runs(node: Product, word: Word):
    """Split `word` into maximal runs of letters from the left (`False`) and the right (`True`) factor."""
    runs = []
    for side, letters in itertools.groupby(word.letters, key=lambda l: l[0] in node.right.indices):
        runs.append((side, Word(letters)))
    return runs


def _join(words):
    result = Word()
    for w in words:
        result = result + w
    return result


class Evaluator(object):
    """
    Evaluates `phi` and `psi` of a product tree on words, memoizing per instance.  With `strategy = 'right'`,
    rule (2) is tried before rule (1), and rule (3) splits at the last interior run instead of the first.
    """

    def __init__(self, root, strategy: str = 'left', degree_cap: int = None):
        if strategy not in ('left', 'right'):
            raise ValueError(f"unknown reduction strategy '{strategy}'")
        self.root = root
        self.strategy = strategy
        self.degree_cap = settings.word_degree_cap if degree_cap is None else degree_cap
        self._memo = {}

    def __call__(self, word: Word):
        if word.degree > self.degree_cap:
            raise DegreeCapExceeded(f"{word} has degree {word.degree} > {self.degree_cap}")
        if not word.indices <= self.root.indices:
            raise MalformedWord(f"{word} uses algebras outside {sorted(self.root.indices)}")
        return self.phi(self.root, word), self.psi(self.root, word)

    def phi(self, node, word: Word):
        return self._eval(node, word, 'phi')

    def psi(self, node, word: Word):
        return self._eval(node, word, 'psi')

    def _eval(self, node, word: Word, kind: str):
        if len(word) == 0:
            return QQ(1)
        key = (id(node), kind, word)
        if key not in self._memo:
            if isinstance(node, Leaf):
                (_, exponent), = word.letters
                value = node.spec.value(kind, exponent)
            elif kind == 'psi':
                value = self._psi_product(node, word)
            else:
                value = self._phi_product(node, word)
            self._memo[key] = value
        return self._memo[key]

    def _psi_product(self, node: Product, word: Word):
        value = QQ(1)
        lower = []
        for side, run in _runs(node, word):
            if side:
                value = value * self.psi(node.right, run)
            else:
                lower.append(run)
        return value * self.psi(node.left, _join(lower))

    def _phi_product(self, node: Product, word: Word):
        runs = _runs(node, word)
        if len(runs) == 1:
            side, run = runs[0]
            return self.phi(node.right if side else node.left, run)
        leading, trailing = runs[0][0], runs[-1][0]
        if self.strategy == 'left' and leading or self.strategy == 'right' and leading and not trailing:
            return self.phi(node.right, runs[0][1]) * self.phi(node, _join(r for _, r in runs[1:]))
        if trailing:
            return self.phi(node, _join(r for _, r in runs[:-1])) * self.phi(node.right, runs[-1][1])
        # both ends are runs of the left factor, so there is an interior right run
        if self.strategy == 'left':
            b = runs[1][1]
            front, back = runs[0][1], _join(r for _, r in runs[2:])
        else:
            b = runs[-2][1]
            front, back = _join(r for _, r in runs[:-2]), runs[-1][1]
        phi_b = self.phi(node.right, b)
        psi_b = self.psi(node.right, b)
        value = psi_b * self.phi(node, front + back)
        if phi_b != psi_b:
            value = value + (phi_b - psi_b) * self.phi(node, front) * self.phi(node, back)
        return value


def _root(family):
    if isinstance(family, (Leaf, Product)):
        return family
    return fold_left(list(family))


def eval_pair(word: Word, family, fold: str = 'left', strategy: str = 'left'):
    """
    The values `(phi, psi)` of the c-monotone product of the family on `word`.  `family` is a list of
    `AlgebraSpec`s in their linear order, multiplied from the left (or from the right, with `fold = 'right'`), or a
    ready-made tree.
    """
    if isinstance(word, str):
        word = Word.parse(word)
    if not isinstance(family, (Leaf, Product)):
        family = fold_left(list(family)) if fold == 'left' else fold_right(list(family))
    return Evaluator(family, strategy)(word)


def eval_monotone(word: Word, specs):
    """
    The monotone product of the `phi`s, ordered by algebra index, by the peak rule alone: any letter of the largest
    index occurring in the word is a peak and factors out.
    """
    tables = {s.index: s for s in specs}

    def evaluate(letters):
        if len(letters) == 0:
            return QQ(1)
        top = max(i for i, _ in letters)
        j = next(k for k, (i, _) in enumerate(letters) if i == top)
        rest = Word(letters[:j] + letters[j + 1:]).letters
        return tables[top].value('phi', letters[j][1]) * evaluate(rest)

    return evaluate(word.letters)


def words_of_sum(indices, n: int):
    """The words of the expansion of `(x_i + x_j + ...)^n`, with multiplicities."""
    counts = {}
    for letters in itertools.product(indices, repeat=n):
        w = Word((i, 1) for i in letters)
        counts[w] = counts.get(w, 0) + 1
    return counts


def moments_of_sum(family, order: int, fold: str = 'left'):
    """The moments `phi((x_1 + ... + x_k)^n)`, `n = 1..order`, and the same for `psi`."""
    root = _root(family) if fold == 'left' else fold_right(list(family))
    evaluator = Evaluator(root)
    indices = sorted(root.indices)
    phi, psi = [], []
    for n in range(1, order + 1):
        a, b = QQ(0), QQ(0)
        for word, count in words_of_sum(indices, n).items():
            p, q = evaluator(word)
            a += count * p
            b += count * q
        phi.append(a)
        psi.append(b)
    return MomentSeq(phi), MomentSeq(psi)


def all_words(indices, max_length: int, exponents=(1,)):
    """All alternating words over `indices` with up to `max_length` letters and the given exponents."""
    for length in range(1, max_length + 1):
        for letters in itertools.product(indices, repeat=length):
            if any(a == b for a, b in zip(letters, letters[1:])):
                continue
            for powers in itertools.product(exponents, repeat=length):
                yield Word(zip(letters, powers))


def centered_expansion(xs, ys, ps):
    """
    Expand `x_1 y_1 x_2 ... y_(n-1) x_n` as
    `sum_S (prod_{j not in S} p_j) x_(S_1) (y_(k_1) - p_(k_1)) x_(S_2) ... x_(S_(m+1))` and multiply out every
    `(y - p)` factor, giving a list of `(coefficient, Word)`.  The `x`s and `y`s are words, the `p`s rationals.
    """
    n = len(xs)
    terms = []
    for mask in itertools.product((False, True), repeat=n - 1):
        coeff = QQ(1)
        for j in range(n - 1):
            if not mask[j]:
                coeff = coeff * ps[j]
        # each (y_k - p_k) in S contributes either y_k or -p_k
        chosen = [j for j in range(n - 1) if mask[j]]
        for pick in itertools.product((True, False), repeat=len(chosen)):
            c = coeff
            picked = dict(zip(chosen, pick))
            word = Word()
            for j in range(n):
                word = word + xs[j]
                if j < n - 1 and picked.get(j, False):
                    word = word + ys[j]
                elif j < n - 1 and j in picked:
                    c = -c * ps[j]
            terms.append((c, word))
    return terms


@dataclasses.dataclass
class WordReport:
    checked: int = 0
    mismatches: typing.List[tuple] = dataclasses.field(default_factory=list)

    @property
    def passed(self):
        return len(self.mismatches) == 0


def check_product_associativity(specs, max_length: int = 5, exponents=(1,)):
    """Compare `phi` of the left- and the right-folded products on all alternating words up to `max_length`."""
    left = Evaluator(fold_left(list(specs)))
    right = Evaluator(fold_right(list(specs)))
    report = WordReport()
    for word in all_words(sorted(s.index for s in specs), max_length, exponents):
        a, b = left(word), right(word)
        report.checked += 1
        if a != b:
            report.mismatches.append((word, a, b))
    LOGGER.info("product associativity: %d mismatches in %d words", len(report.mismatches), report.checked)
    return report


def check_reduction_order(family, max_length: int = 5, exponents=(1,)):
    """Evaluate every word with both reduction strategies, which must agree."""
    root = _root(family)
    left = Evaluator(root, 'left')
    right = Evaluator(root, 'right')
    report = WordReport()
    for word in all_words(sorted(root.indices), max_length, exponents):
        a, b = left(word), right(word)
        report.checked += 1
        if a != b:
            report.mismatches.append((word, a, b))
    return report


def check_orthogonality(phi1, psi2, order: int = 6):
    """
    With `phi_2 = 0`, the moments of `x_1 + x_2` under `phi_1 |>_(psi_2) 0` are those of the orthogonal
    convolution of `phi_1` and `psi_2`.
    """
    from .pair_convolutions import orthogonal_convolve

    spec1 = AlgebraSpec(1, phi1)
    spec2 = AlgebraSpec(2, [0] * len(tuple(psi2)), psi2)
    phi, _ = moments_of_sum([spec1, spec2], order)
    expected = orthogonal_convolve(MomentSeq(spec1.phi[:order]), MomentSeq(spec2.psi[:order]), order)
    report = WordReport(checked=order)
    for n in range(1, order + 1):
        if phi[n] != expected[n]:
            report.mismatches.append((n, phi[n], expected[n]))
    return report
