"""
Finite truncations of the Stein-Farley cube complex for V_{d,r}.

A vertex is a class [(F, g)] of a forest F and an element g. Two pairs are
identified when g2^-1 g1 maps the leaves of F1 onto the leaves of F2 and acts
rigidly below each of them, so a vertex is the multiset of its pieces: the
germs of g below the leaves of F. For d = 1 a piece also keeps its branch
length. Moving up splits a piece into d; moving down merges an ordered d-tuple
of pieces into one. A cube is a top vertex together with a set of pairwise
disjoint merges, and its vertices are the results of performing every subset.
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from aws_lambda_powertools import Logger
from networkx.utils import UnionFind

from cubetopo_helpers.connectivity_toolkit import JoinStructure, complete_join_over
from cubetopo_helpers.cubical import Cube, CubicalComplex
from cubetopo_helpers.errors import BudgetExceeded, InputError, ParameterMismatch
from cubetopo_helpers.simplicial_core import Simplex, SimplicialComplex
from cubetopo_helpers.thompson_groups import (
    Forest,
    Node,
    TreePair,
    child,
    compose,
    inverse,
    reduce,
)

logger = Logger(service="cubetopo", child=True)

NodeMap = Tuple[Tuple[Tuple[int, ...], Node], ...]
Merge = Tuple[tuple, ...]


def node_map(g: TreePair, node: Node) -> NodeMap:
    """
    The restriction of g below node, as sorted (relative word, image) pieces.
    A node lying inside a single domain leaf gives one piece with empty word.
    For reduced g the pieces are the largest cones on which g is rigid.
    """
    root, word = node
    pieces = []
    for leaf, image in g.leaf_map.items():
        if leaf[0] != root:
            continue
        prefix = leaf[1]
        if word[: len(prefix)] == prefix:
            return (((), (image[0], image[1] + word[len(prefix):])),)
        if prefix[: len(word)] == word:
            pieces.append((prefix[len(word):], image))
    return tuple(sorted(pieces))


def _disjoint_families(merges: Sequence[Merge], limit: int) -> Iterator[Tuple[int, ...]]:
    """Index sets of pairwise disjoint merges with at most limit members."""

    def extend(
        start: int, family: Tuple[int, ...], used: FrozenSet[tuple]
    ) -> Iterator[Tuple[int, ...]]:
        yield family
        if len(family) == limit:
            return
        for i in range(start, len(merges)):
            if used.isdisjoint(merges[i]):
                yield from extend(i + 1, family + (i,), used | frozenset(merges[i]))

    return extend(0, (), frozenset())


@dataclass(frozen=True, eq=False)
class SFVertex:
    """
    Attributes:
        forest (Forest): Forest of the stored representative.
        element (TreePair): Reduced element of the stored representative.
    """

    forest: Forest
    element: TreePair

    def __post_init__(self) -> None:
        if (self.forest.d, self.forest.r) != (self.element.d, self.element.r):
            raise ParameterMismatch(
                "Forest of V_{%d,%d} paired with an element of V_{%d,%d}"
                % (self.forest.d, self.forest.r, self.element.d, self.element.r)
            )
        object.__setattr__(self, "element", reduce(self.element))

    @classmethod
    def base(cls, d: int, r: int) -> "SFVertex":
        return cls(Forest.trivial(d, r), TreePair.identity(d, r))

    def _piece_key(self, leaf: Node) -> tuple:
        germ = node_map(self.element, leaf)
        if self.forest.d == 1:
            return (len(leaf[1]), germ)
        return germ

    @cached_property
    def pieces(self) -> Dict[tuple, Node]:
        """Piece key to the leaf carrying it in the stored representative."""
        return {self._piece_key(leaf): leaf for leaf in self.forest.leaves}

    @cached_property
    def key(self) -> tuple:
        return (self.forest.d, self.forest.r, self.height, tuple(sorted(self.pieces)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SFVertex) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def height(self) -> int:
        return self.forest.size

    def split(self, piece: tuple) -> Merge:
        """Keys of the d pieces obtained by splitting piece, in order."""
        leaf = self.pieces[piece]
        return tuple(self._piece_key(child(leaf, i)) for i in range(self.forest.d))

    def can_merge(self, merge: Merge) -> bool:
        d = self.forest.d
        if not self.height or len(merge) != d or len(set(merge)) != d:
            return False
        if any(k not in self.pieces for k in merge):
            return False
        return d > 1 or merge[0][0] > 0

    def merges(self) -> List[Merge]:
        """Ordered tuples of pieces that can be merged, in key order."""
        if not self.height:
            return []
        keys = sorted(self.pieces)
        if self.forest.d == 1:
            return [(k,) for k in keys if k[0] > 0]
        return list(permutations(keys, self.forest.d))

    def _merge(self, merge: Merge) -> "SFVertex":
        if not self.can_merge(merge):
            raise InputError("Pieces %s cannot be merged in %s" % (merge, self))
        d = self.forest.d
        leaves = [self.pieces[k] for k in merge]
        root, word = leaves[0]
        parent = (root, word[:-1])
        if word and leaves == [child(parent, i) for i in range(d)]:
            return SFVertex(self.forest.without(parent), self.element)
        caret = self.forest.removable()[0]
        slots = [child(caret, i) for i in range(d)]
        mapping = dict(zip(slots, leaves))
        rest = [leaf for leaf in self.forest.leaves if leaf not in slots]
        spare = [leaf for leaf in self.forest.leaves if leaf not in leaves]
        mapping.update(zip(rest, spare))
        shuffle = TreePair.from_leaf_map(self.forest, self.forest, mapping)
        return SFVertex(self.forest.without(caret), compose(self.element, shuffle))

    @cached_property
    def lower(self) -> Dict[Merge, "SFVertex"]:
        return {m: self._merge(m) for m in self.merges()}

    def merged(self, merges: Iterable[Merge]) -> "SFVertex":
        """
        Performs pairwise disjoint merges one after another.

        Raises:
            InputError: If some merge is not available when its turn comes.
        """
        v = self
        for m in merges:
            v = v._merge(m)
        return v

    def below(self) -> List["SFVertex"]:
        return list(self.lower.values())

    def above(self) -> List["SFVertex"]:
        return [SFVertex(self.forest.expanded(leaf), self.element) for leaf in self.forest.leaves]

    def __str__(self) -> str:
        return "%s | %s" % (self.forest, self.element)


def act_on_vertex(g: TreePair, v: SFVertex) -> SFVertex:
    """
    g . [(F, f)] = [(F, g ∘ f)].

    Raises:
        ParameterMismatch: If g and v belong to different groups.
    """
    if (g.d, g.r) != (v.forest.d, v.forest.r):
        raise ParameterMismatch(
            "Element of V_{%d,%d} cannot act on a vertex for V_{%d,%d}"
            % (g.d, g.r, v.forest.d, v.forest.r)
        )
    return SFVertex(v.forest, compose(g, v.element))


def _splitting(x: SFVertex, y: SFVertex) -> Optional[List[Merge]]:
    """Disjoint merges of y that produce x, or None when x is not below y."""
    if x.key[:2] != y.key[:2]:
        return None
    gap = y.height - x.height
    if gap < 0:
        return None
    mine, theirs = set(x.pieces), set(y.pieces)
    created = sorted(mine - theirs)
    if len(created) != gap:
        return None
    merges = [x.split(piece) for piece in created]
    used = [k for m in merges for k in m]
    if len(used) != len(set(used)) or set(used) != theirs - mine:
        return None
    return merges


def precedes(x: SFVertex, y: SFVertex) -> bool:
    """True when x is y with some set of disjoint merges performed."""
    return _splitting(x, y) is not None


@dataclass(frozen=True, eq=False)
class SFCube:
    """
    Attributes:
        top (SFVertex): Unique highest vertex.
        merges (Tuple[Merge, ...]): Pairwise disjoint merges of top, one per
            coordinate.
    """

    top: SFVertex
    merges: Tuple[Merge, ...]

    def __post_init__(self) -> None:
        for m in self.merges:
            if not self.top.can_merge(m):
                raise InputError("Pieces %s cannot be merged in %s" % (m, self.top))
        used = [k for m in self.merges for k in m]
        if len(used) != len(set(used)) or len(self.merges) > self.top.height:
            raise InputError("Merges of a cube must be disjoint and at most %d" % self.top.height)
        object.__setattr__(self, "merges", tuple(sorted(self.merges)))

    @cached_property
    def key(self) -> tuple:
        return (self.top.key, self.merges)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SFCube) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def dimension(self) -> int:
        return len(self.merges)

    @property
    def bottom(self) -> SFVertex:
        return self.top.merged(self.merges)

    def vertices(self) -> List[SFVertex]:
        return [
            self.top.merged(subset)
            for size in range(self.dimension + 1)
            for subset in combinations(self.merges, size)
        ]

    def faces(self) -> List[Tuple["SFCube", "SFCube"]]:
        """(front, back) facet pairs per coordinate: front performs the merge."""
        pairs = []
        for m in self.merges:
            rest = tuple(other for other in self.merges if other != m)
            pairs.append((SFCube(self.top.merged([m]), rest), SFCube(self.top, rest)))
        return pairs


def act_on_cube(g: TreePair, cube: SFCube) -> SFCube:
    """Moves the top vertex and renames the merged pieces accordingly."""
    moved = act_on_vertex(g, cube.top)
    at = {leaf: k for k, leaf in moved.pieces.items()}
    merges = tuple(tuple(at[cube.top.pieces[k]] for k in m) for m in cube.merges)
    return SFCube(moved, merges)


def interval(x: SFVertex, y: SFVertex) -> List[SFVertex]:
    """All z with x ⪯ z ⪯ y."""
    merges = _splitting(x, y)
    if merges is None:
        return []
    return [
        y.merged(subset)
        for size in range(len(merges) + 1)
        for subset in combinations(merges, size)
    ]


@dataclass(frozen=True)
class Truncation:
    """
    Attributes:
        d (int): Arity.
        r (int): Roots.
        max_height (int): Largest vertex height.
        vertices (Tuple[SFVertex, ...]): Sorted by height, then key.
        cubes (Tuple[SFCube, ...]): Sorted by dimension, then key; includes
            the 0-cubes.
    """

    d: int
    r: int
    max_height: int
    vertices: Tuple[SFVertex, ...]
    cubes: Tuple[SFCube, ...]

    @cached_property
    def index(self) -> Dict[SFVertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def __contains__(self, v: object) -> bool:
        return v in self.index

    def cubical(self) -> CubicalComplex:
        cells = []
        for cube in self.cubes:
            faces = tuple((front.key, back.key) for front, back in cube.faces())
            cells.append(Cube(cube.key, faces))
        return CubicalComplex(tuple(cells))

    def f_vector(self) -> List[int]:
        counts = [0] * (max((c.dimension for c in self.cubes), default=-1) + 1)
        for cube in self.cubes:
            counts[cube.dimension] += 1
        return counts


def _up_closure(seeds: Iterable[SFVertex], max_height: int, found: Dict[SFVertex, None], cap: int) -> None:
    queue = list(seeds)
    while queue:
        v = queue.pop()
        if v in found:
            continue
        found[v] = None
        if len(found) > cap:
            raise BudgetExceeded("Truncation exceeds %d vertices" % cap)
        if v.height < max_height:
            queue.extend(w for w in v.above() if w not in found)


def _component_of(base: SFVertex, found: Dict[SFVertex, None]) -> Dict[SFVertex, None]:
    components: UnionFind = UnionFind(found)
    for y in found:
        for x in y.below():
            if x in found:
                components.union(x, y)
    root = components[base]
    return {v: None for v in found if components[v] == root}


def build_truncation(
    d: int,
    r: int,
    max_height: int,
    generators: Sequence[TreePair] = (),
    saturation_rounds: int = 1,
    vertex_cap: int = 10000,
) -> Truncation:
    """
    Vertices of height at most max_height reachable from the base: the upward
    closure of the base, saturated under the generators and their inverses,
    cut down to the component of the base vertex, with every cube whose
    vertices are all present. Translates that only join the base above
    max_height are dropped. For d >= 2 a generator whose reduced pair has at
    most max_height carets always keeps its translate of the base, since
    (domain, g) and (range, id) are the same vertex.

    Args:
        d (int): Arity, at least 1.
        r (int): Roots, at least 1.
        max_height (int): Height bound s, at least 0.
        generators (Sequence[TreePair], optional): Elements of V_{d,r}.
        saturation_rounds (int, optional): Translation rounds. Defaults to 1.
        vertex_cap (int, optional): Vertex budget. Defaults to 10000.

    Raises:
        InputError: On a negative height or round count.
        ParameterMismatch: If a generator lies in another group.
        BudgetExceeded: If the vertex set outgrows vertex_cap.

    Returns:
        Truncation: The finite subcomplex.
    """
    if max_height < 0 or saturation_rounds < 0:
        raise InputError("Height and saturation rounds must be non-negative")
    for g in generators:
        if (g.d, g.r) != (d, r):
            raise ParameterMismatch(
                "Generator of V_{%d,%d} used for a V_{%d,%d} truncation" % (g.d, g.r, d, r)
            )
    base = SFVertex.base(d, r)
    found: Dict[SFVertex, None] = {}
    _up_closure([base], max_height, found, vertex_cap)
    moves = [h for g in generators for h in (g, inverse(g))]
    for _ in range(saturation_rounds):
        translates = [act_on_vertex(h, v) for v in list(found) for h in moves]
        fresh = [w for w in translates if w not in found]
        if not fresh:
            break
        _up_closure(fresh, max_height, found, vertex_cap)
    kept = _component_of(base, found)
    if len(kept) < len(found):
        logger.debug(
            "Translates apart from the base dropped", extra={"dropped": len(found) - len(kept)}
        )
    vertices = sorted(kept, key=lambda v: (v.height, v.key))
    cubes: Dict[SFCube, None] = {}
    for y in vertices:
        present = [m for m, x in y.lower.items() if x in kept]
        for family in _disjoint_families(present, y.height):
            cube = SFCube(y, tuple(present[i] for i in family))
            if all(z in kept for z in cube.vertices()):
                cubes[cube] = None
    ordered = tuple(sorted(cubes, key=lambda c: (c.dimension, c.key)))
    logger.info(
        "Truncation built",
        extra={"d": d, "r": r, "max_height": max_height, "vertices": len(vertices), "cubes": len(ordered)},
    )
    return Truncation(d, r, max_height, tuple(vertices), ordered)


@dataclass(frozen=True)
class DescendingLink:
    """
    Attributes:
        vertex (SFVertex): The vertex whose link this is.
        complex (SimplicialComplex): One simplex per set of merges that can
            be performed together.
        neighbours (Tuple[SFVertex, ...]): Vertex i of the complex.
    """

    vertex: SFVertex
    complex: SimplicialComplex
    neighbours: Tuple[SFVertex, ...]


def descending_link(v: SFVertex) -> DescendingLink:
    """
    Lower neighbours span a simplex when their merges are pairwise disjoint
    and no more numerous than the height of v. For d = 1 every merge uses
    its own branch, so the link is a full simplex; for d >= 2 it is empty at
    height 0 and otherwise a join of the orderings over disjoint pieces.
    """
    merges = v.merges()
    neighbours = tuple(v.lower[m] for m in merges)
    facets = [Simplex.of(f) for f in _disjoint_families(merges, v.height) if f]
    return DescendingLink(v, SimplicialComplex(tuple(facets)), neighbours)


def descending_link_join(v: SFVertex, multiplicity: Dict[int, int]) -> JoinStructure:
    """Complete join over the descending link of v with the given fibre sizes."""
    return complete_join_over(descending_link(v).complex, multiplicity)


def link_connectivity_bound(d: int, r: int, height: int, base_genus: int = 0) -> int:
    """
    Connectivity guaranteed for descending links at the given height:
    min(floor((g - 3) / 2), floor((|A| + 1) / (2d - 1)) - 2, |A| - 2) where
    g = base_genus + height and |A| = r + height * (d - 1).
    """
    if d < 1 or r < 1 or height < 0 or base_genus < 0:
        raise InputError("Bound needs d, r >= 1 and non-negative height and genus")
    genus = base_genus + height
    spots = r + height * (d - 1)
    return min((genus - 3) // 2, (spots + 1) // (2 * d - 1) - 2, spots - 2)


@dataclass(frozen=True)
class OrbitCensus:
    """
    Attributes:
        vertex_orbits (Dict[int, int]): Orbit count per height.
        cube_orbits (Dict[int, int]): Orbit count per cube dimension.
    """

    vertex_orbits: Dict[int, int]
    cube_orbits: Dict[int, int]

    def as_dict(self) -> Dict[str, Dict[str, int]]:
        return {
            "vertex_orbits": {str(k): n for k, n in sorted(self.vertex_orbits.items())},
            "cube_orbits": {str(k): n for k, n in sorted(self.cube_orbits.items())},
        }


def orbit_census(C: Truncation, generators: Sequence[TreePair]) -> OrbitCensus:
    """
    Counts classes of vertices and cubes of C under the relation generated by
    x ~ g.x whenever both lie in C.
    """
    vertices: UnionFind = UnionFind(C.vertices)
    cube_set = set(C.cubes)
    cubes: UnionFind = UnionFind(C.cubes)
    moves = [h for g in generators for h in (g, inverse(g))]
    for h in moves:
        for v in C.vertices:
            w = act_on_vertex(h, v)
            if w in C:
                vertices.union(v, w)
        for cube in C.cubes:
            image = act_on_cube(h, cube)
            if image in cube_set:
                cubes.union(cube, image)
    vertex_orbits: Dict[int, int] = {}
    for group in vertices.to_sets():
        height = next(iter(group)).height
        vertex_orbits[height] = vertex_orbits.get(height, 0) + 1
    cube_orbits: Dict[int, int] = {}
    for group in cubes.to_sets():
        dim = next(iter(group)).dimension
        cube_orbits[dim] = cube_orbits.get(dim, 0) + 1
    return OrbitCensus(vertex_orbits, cube_orbits)
