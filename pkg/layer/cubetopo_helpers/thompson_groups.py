"""
Higman-Thompson groups V_{d,r} as reduced tree-pair diagrams.

A node of a forest is a pair (root, word) with word a tuple over 0..d-1.
Leaves are listed depth first, roots left to right. A tree pair maps the i-th
domain leaf to the bijection[i]-th range leaf and acts on finite addresses by
prefix replacement.
"""
from dataclasses import dataclass
from functools import cached_property
from random import Random
from typing import Dict, FrozenSet, Iterable, Iterator, List, Tuple, Union

import pyparsing as pp
from aws_lambda_powertools import Logger

from cubetopo_helpers.errors import (
    AddressTooShallow,
    InputError,
    ParameterMismatch,
    ParseError,
)

logger = Logger(service="cubetopo", child=True)

Node = Tuple[int, Tuple[int, ...]]


def child(node: Node, i: int) -> Node:
    return (node[0], node[1] + (i,))


def depth_key(node: Node) -> Tuple[int, int, Tuple[int, ...]]:
    return (len(node[1]), node[0], node[1])


@dataclass(frozen=True)
class Forest:
    """
    Finite forest of r rooted d-ary trees given by its carets.

    Attributes:
        d (int): Children per caret, at least 1.
        r (int): Number of roots, at least 1.
        carets (FrozenSet[Node]): Internal nodes; closed under taking parents.
    """

    d: int
    r: int
    carets: FrozenSet[Node] = frozenset()

    def __post_init__(self) -> None:
        if self.d < 1 or self.r < 1:
            raise InputError("Forests need d >= 1 and r >= 1, got d=%d r=%d" % (self.d, self.r))
        object.__setattr__(self, "carets", frozenset(self.carets))
        for root, word in self.carets:
            if not 0 <= root < self.r or any(not 0 <= i < self.d for i in word):
                raise InputError("Caret %s outside a (%d, %d) forest" % ((root, word), self.d, self.r))
            if word and (root, word[:-1]) not in self.carets:
                raise InputError("Caret %s has no parent caret" % ((root, word),))

    @classmethod
    def trivial(cls, d: int, r: int) -> "Forest":
        return cls(d, r, frozenset())

    def _walk(self, node: Node) -> Iterator[Node]:
        if node in self.carets:
            for i in range(self.d):
                yield from self._walk(child(node, i))
        else:
            yield node

    @cached_property
    def leaves(self) -> Tuple[Node, ...]:
        return tuple(leaf for root in range(self.r) for leaf in self._walk((root, ())))

    @cached_property
    def leaf_index(self) -> Dict[Node, int]:
        return {leaf: i for i, leaf in enumerate(self.leaves)}

    @property
    def size(self) -> int:
        return len(self.carets)

    def is_removable(self, caret: Node) -> bool:
        return caret in self.carets and all(
            child(caret, i) not in self.carets for i in range(self.d)
        )

    def removable(self) -> List[Node]:
        """Carets whose children are all leaves, in depth-first leaf order."""
        found = [c for c in self.carets if self.is_removable(c)]
        return sorted(found, key=lambda c: self.leaf_index[child(c, 0)])

    def expanded(self, leaf: Node) -> "Forest":
        if leaf not in self.leaf_index:
            raise InputError("%s is not a leaf" % (leaf,))
        return Forest(self.d, self.r, self.carets | {leaf})

    def without(self, caret: Node) -> "Forest":
        if not self.is_removable(caret):
            raise InputError("Caret %s is not removable" % (caret,))
        return Forest(self.d, self.r, self.carets - {caret})

    def _render(self, node: Node) -> str:
        if node not in self.carets:
            return "x"
        return "(%s)" % " ".join(self._render(child(node, i)) for i in range(self.d))

    def __str__(self) -> str:
        return ",".join(self._render((root, ())) for root in range(self.r))


def _forest_grammar() -> pp.ParserElement:
    node = pp.Forward()
    leaf = pp.Literal("x")
    caret = pp.Group(pp.Suppress("(") + pp.OneOrMore(node) + pp.Suppress(")"))
    node <<= leaf | caret
    return node + pp.ZeroOrMore(pp.Suppress(",") + node) + pp.StringEnd()


FOREST_GRAMMAR = _forest_grammar()


def parse_forest(text: str, d: int, r: int) -> Forest:
    """
    Parses a forest string such as "(x (x x)),x": "x" is a leaf, a caret lists
    its d children in parentheses, roots are separated by commas.

    Raises:
        ParseError: On syntax errors or a shape that does not match (d, r).
    """
    try:
        roots = FOREST_GRAMMAR.parse_string(text)
    except pp.ParseException as e:
        raise ParseError("Invalid forest %r: %s" % (text, e.msg))
    if len(roots) != r:
        raise ParseError("Forest %r has %d roots, expected %d" % (text, len(roots), r))
    carets = set()

    def visit(tree: Union[str, pp.ParseResults], node: Node) -> None:
        if isinstance(tree, str):
            return
        if len(tree) != d:
            raise ParseError("Caret with %d children in %r, expected %d" % (len(tree), text, d))
        carets.add(node)
        for i, sub in enumerate(tree):
            visit(sub, child(node, i))

    for root, tree in enumerate(roots):
        visit(tree, (root, ()))
    return Forest(d, r, frozenset(carets))


@dataclass(frozen=True)
class Address:
    """Finite address: a root and a word over 0..d-1."""

    root: int
    word: Tuple[int, ...] = ()

    def __str__(self) -> str:
        return "%d:%s" % (self.root, "".join(str(i) for i in self.word))

    @classmethod
    def parse(cls, text: str) -> "Address":
        root, sep, word = text.partition(":")
        if not sep or not root.isdigit() or not (word.isdigit() or word == ""):
            raise ParseError("Invalid address %r, expected root:word" % text)
        return cls(int(root), tuple(int(c) for c in word))


@dataclass(frozen=True)
class TreePair:
    """
    Element of V_{d,r}.

    Attributes:
        domain (Forest): Domain forest.
        range (Forest): Range forest with the same leaf count.
        bijection (Tuple[int, ...]): Domain leaf i maps to range leaf bijection[i].
    """

    domain: Forest
    range: Forest
    bijection: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bijection", tuple(self.bijection))
        if (self.domain.d, self.domain.r) != (self.range.d, self.range.r):
            raise ParameterMismatch("Domain and range forests have different (d, r)")
        n = len(self.domain.leaves)
        if len(self.range.leaves) != n:
            raise InputError(
                "Domain has %d leaves but range has %d" % (n, len(self.range.leaves))
            )
        if sorted(self.bijection) != list(range(n)):
            raise InputError("Leaf bijection %s is not a permutation of %d leaves" % (list(self.bijection), n))

    @property
    def d(self) -> int:
        return self.domain.d

    @property
    def r(self) -> int:
        return self.domain.r

    @classmethod
    def identity(cls, d: int, r: int) -> "TreePair":
        trivial = Forest.trivial(d, r)
        return cls(trivial, trivial, tuple(range(r)))

    @classmethod
    def from_leaf_map(cls, domain: Forest, range_: Forest, mapping: Dict[Node, Node]) -> "TreePair":
        return cls(
            domain, range_, tuple(range_.leaf_index[mapping[leaf]] for leaf in domain.leaves)
        )

    @cached_property
    def leaf_map(self) -> Dict[Node, Node]:
        targets = self.range.leaves
        return {leaf: targets[j] for leaf, j in zip(self.domain.leaves, self.bijection)}

    def is_identity(self) -> bool:
        return self == TreePair.identity(self.d, self.r)

    def __str__(self) -> str:
        return "%s -> %s %s" % (self.domain, self.range, list(self.bijection))


def expand(g: TreePair, leaf: Node) -> TreePair:
    """Splits a domain leaf and its image, matching children in order."""
    image = g.leaf_map[leaf]
    mapping = dict(g.leaf_map)
    del mapping[leaf]
    for i in range(g.d):
        mapping[child(leaf, i)] = child(image, i)
    return TreePair.from_leaf_map(g.domain.expanded(leaf), g.range.expanded(image), mapping)


def _cancellable(g: TreePair, caret: Node) -> Union[Node, None]:
    first = g.leaf_map[child(caret, 0)]
    if not first[1] or first[1][-1] != 0:
        return None
    parent = (first[0], first[1][:-1])
    for i in range(g.d):
        if g.leaf_map[child(caret, i)] != child(parent, i):
            return None
    return parent


def reduce(g: TreePair) -> TreePair:
    """
    Cancels domain carets whose children map in order onto the children of a
    single range caret, until none is left.
    """
    current = g
    while True:
        for caret in current.domain.removable():
            parent = _cancellable(current, caret)
            if parent is None:
                continue
            children = {child(caret, i) for i in range(current.d)}
            mapping = {
                leaf: image for leaf, image in current.leaf_map.items() if leaf not in children
            }
            mapping[caret] = parent
            current = TreePair.from_leaf_map(
                current.domain.without(caret), current.range.without(parent), mapping
            )
            break
        else:
            return current


def _check_same_group(g: TreePair, h: TreePair) -> None:
    if (g.d, g.r) != (h.d, h.r):
        raise ParameterMismatch(
            "Elements of V_{%d,%d} and V_{%d,%d} cannot be combined" % (g.d, g.r, h.d, h.r)
        )


def compose(g: TreePair, h: TreePair) -> TreePair:
    """
    The reduced tree pair of g ∘ h (h acts first).

    Both diagrams are expanded until h's range and g's domain equal the union
    of their carets, then the leaf maps are composed.

    Raises:
        ParameterMismatch: If g and h lie in different groups.
    """
    _check_same_group(g, h)
    common = sorted(h.range.carets | g.domain.carets, key=depth_key)
    for caret in common:
        if caret not in h.range.carets:
            preimage = {image: leaf for leaf, image in h.leaf_map.items()}
            h = expand(h, preimage[caret])
        if caret not in g.domain.carets:
            g = expand(g, caret)
    mapping = {leaf: g.leaf_map[image] for leaf, image in h.leaf_map.items()}
    return reduce(TreePair.from_leaf_map(h.domain, g.range, mapping))


def inverse(g: TreePair) -> TreePair:
    inverted = [0] * len(g.bijection)
    for i, j in enumerate(g.bijection):
        inverted[j] = i
    return TreePair(g.range, g.domain, tuple(inverted))


def act(g: TreePair, a: Address) -> Address:
    """
    Replaces the domain-leaf prefix of a by the matching range leaf.

    Raises:
        AddressTooShallow: If no domain leaf is a prefix of a.
    """
    for length in range(len(a.word) + 1):
        image = g.leaf_map.get((a.root, a.word[:length]))
        if image is not None:
            return Address(image[0], image[1] + a.word[length:])
    raise AddressTooShallow("No domain leaf of %s is a prefix of %s" % (g.domain, a))


def _caret_chain(root: int, words: Iterable[Tuple[int, ...]]) -> FrozenSet[Node]:
    return frozenset((root, w) for w in words)


def _order_preserving(domain: Forest, range_: Forest) -> TreePair:
    return TreePair(domain, range_, tuple(range(len(domain.leaves))))


def standard_generators(d: int, r: int) -> List[TreePair]:
    """
    A finite list of elements of V_{d,r}: the two Thompson-like order
    preserving elements at root 0, the transposition of the first two
    children of the root-0 caret (and a d-cycle for d >= 3), the root
    permutations, and for d = 1 the depth shift at root 0.
    """
    gens: List[TreePair] = []
    if d >= 2:
        last = d - 1
        gens.append(
            _order_preserving(
                Forest(d, r, _caret_chain(0, [(), (0,)])),
                Forest(d, r, _caret_chain(0, [(), (last,)])),
            )
        )
        gens.append(
            _order_preserving(
                Forest(d, r, _caret_chain(0, [(), (last,), (last, 0)])),
                Forest(d, r, _caret_chain(0, [(), (last,), (last, last)])),
            )
        )
        caret = Forest(d, r, _caret_chain(0, [()]))
        n = len(caret.leaves)
        swap = list(range(n))
        swap[0], swap[1] = 1, 0
        gens.append(TreePair(caret, caret, tuple(swap)))
        if d >= 3:
            cycle = [(i + 1) % d for i in range(d)] + list(range(d, n))
            gens.append(TreePair(caret, caret, tuple(cycle)))
    else:
        gens.append(_order_preserving(Forest(d, r, _caret_chain(0, [()])), Forest.trivial(d, r)))
    gens.extend(root_permutations(d, r))
    return [reduce(g) for g in gens]


def root_permutations(d: int, r: int) -> List[TreePair]:
    """A transposition of the first two roots and, for r >= 3, an r-cycle."""
    gens: List[TreePair] = []
    trivial = Forest.trivial(d, r)
    if r >= 2:
        swap = list(range(r))
        swap[0], swap[1] = 1, 0
        gens.append(TreePair(trivial, trivial, tuple(swap)))
    if r >= 3:
        gens.append(TreePair(trivial, trivial, tuple((i + 1) % r for i in range(r))))
    return gens


def random_forest(rng: Random, d: int, r: int, n_carets: int) -> Forest:
    forest = Forest.trivial(d, r)
    for _ in range(n_carets):
        forest = forest.expanded(rng.choice(forest.leaves))
    return forest


def random_tree_pair(rng: Random, d: int, r: int, max_carets: int = 6) -> TreePair:
    """
    Random reduced element with at most max_carets carets on each side. For
    d = 1 the two sides may have different caret counts.
    """
    n = rng.randint(0, max_carets)
    domain = random_forest(rng, d, r, n)
    range_ = random_forest(rng, d, r, n if d > 1 else rng.randint(0, max_carets))
    bijection = list(range(len(domain.leaves)))
    rng.shuffle(bijection)
    return reduce(TreePair(domain, range_, tuple(bijection)))


def random_address(rng: Random, d: int, r: int, length: int = 12) -> Address:
    return Address(rng.randrange(r), tuple(rng.randrange(d) for _ in range(length)))
