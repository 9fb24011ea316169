"""
Finite abstract simplicial complexes and their elementary constructions.

Complexes are stored by their maximal simplices (facets). Vertices are opaque
integers. Every value here is immutable; operations return new complexes.
"""
from dataclasses import dataclass, field
from functools import cached_property, total_ordering
from itertools import combinations, permutations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Tuple

from aws_lambda_powertools import Logger

from cubetopo_helpers.errors import (
    EmptyComplex,
    InputError,
    SimplexNotInComplex,
    VertexCollision,
)

logger = Logger(service="cubetopo", child=True)


@total_ordering
@dataclass(frozen=True)
class Simplex:
    """
    A finite set of vertices kept in ascending order.

    The canonical order on simplices is by dimension first, then
    lexicographically on the sorted vertex tuple.

    Attributes:
        vertices (Tuple[int, ...]): Sorted, pairwise distinct vertex ids.
    """

    vertices: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise InputError(
                "Simplex vertices must be sorted and distinct: %s" % (self.vertices,)
            )

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "Simplex":
        return cls(tuple(sorted(set(vertices))))

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __contains__(self, vertex: object) -> bool:
        return vertex in self.vertices

    def __lt__(self, other: "Simplex") -> bool:
        return (len(self.vertices), self.vertices) < (
            len(other.vertices),
            other.vertices,
        )

    def __str__(self) -> str:
        return "{%s}" % ",".join(str(v) for v in self.vertices)

    def as_set(self) -> FrozenSet[int]:
        return frozenset(self.vertices)

    def issubset(self, other: "Simplex") -> bool:
        return set(self.vertices) <= set(other.vertices)

    def union(self, other: Iterable[int]) -> "Simplex":
        return Simplex.of(set(self.vertices) | set(other))

    def difference(self, other: Iterable[int]) -> "Simplex":
        return Simplex.of(set(self.vertices) - set(other))

    def faces(self) -> Iterator["Simplex"]:
        """Yields every nonempty face, the simplex itself included."""
        for size in range(1, len(self.vertices) + 1):
            for combo in combinations(self.vertices, size):
                yield Simplex(combo)

    def boundary(self) -> List["Simplex"]:
        """
        Codimension-one faces; entry i omits the i-th vertex, which fixes the
        sign (-1)^i in boundary matrices.
        """
        if len(self.vertices) <= 1:
            return []
        return [
            Simplex(self.vertices[:i] + self.vertices[i + 1 :])
            for i in range(len(self.vertices))
        ]


def _maximal(simplices: Iterable[Simplex]) -> Tuple[Simplex, ...]:
    candidates = sorted(
        {s for s in simplices if len(s)}, key=lambda s: (-len(s), s.vertices)
    )
    kept: List[Simplex] = []
    kept_sets: List[FrozenSet[int]] = []
    for simplex in candidates:
        as_set = simplex.as_set()
        if any(as_set <= other for other in kept_sets):
            continue
        kept.append(simplex)
        kept_sets.append(as_set)
    return tuple(sorted(kept))


@dataclass(frozen=True)
class SimplicialComplex:
    """
    A finite simplicial complex given by its facets.

    Any iterable of simplices may be passed; non-maximal members are dropped
    so that no stored facet is a face of another. The empty complex has no
    facets and dimension -1.

    Attributes:
        facets (Tuple[Simplex, ...]): Maximal simplices in canonical order.
    """

    facets: Tuple[Simplex, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "facets", _maximal(self.facets))

    @classmethod
    def of(cls, *facets: Iterable[int]) -> "SimplicialComplex":
        return cls(tuple(Simplex.of(f) for f in facets))

    @classmethod
    def from_simplices(cls, simplices: Iterable[Simplex]) -> "SimplicialComplex":
        return cls(tuple(simplices))

    @cached_property
    def simplices(self) -> Tuple[Simplex, ...]:
        """All nonempty simplices in canonical order."""
        found = set()
        for facet in self.facets:
            found.update(facet.faces())
        return tuple(sorted(found))

    @cached_property
    def simplex_set(self) -> FrozenSet[Simplex]:
        return frozenset(self.simplices)

    @cached_property
    def vertex_set(self) -> Tuple[int, ...]:
        return tuple(sorted({v for facet in self.facets for v in facet}))

    @property
    def dimension(self) -> int:
        return max((f.dimension for f in self.facets), default=-1)

    def is_empty(self) -> bool:
        return not self.facets

    def __contains__(self, simplex: object) -> bool:
        return simplex in self.simplex_set

    def __len__(self) -> int:
        return len(self.simplices)

    def __str__(self) -> str:
        return "[%s]" % " ".join(str(f) for f in self.facets)

    def simplices_of_dim(self, k: int) -> List[Simplex]:
        return [s for s in self.simplices if s.dimension == k]

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return all(facet in other for facet in self.facets)

    def f_vector(self) -> List[int]:
        counts = [0] * (self.dimension + 1)
        for simplex in self.simplices:
            counts[simplex.dimension] += 1
        return counts

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))


@dataclass(frozen=True)
class VertexLabeling:
    """
    Assignment of one integer label to each vertex.

    Attributes:
        assignment (Tuple[Tuple[int, int], ...]): Sorted (vertex, label) pairs.
    """

    assignment: Tuple[Tuple[int, int], ...]

    @classmethod
    def of(cls, mapping: Mapping[int, int]) -> "VertexLabeling":
        return cls(tuple(sorted(mapping.items())))

    @cached_property
    def as_dict(self) -> Dict[int, int]:
        return dict(self.assignment)

    def __getitem__(self, vertex: int) -> int:
        return self.as_dict[vertex]

    def labels(self) -> FrozenSet[int]:
        return frozenset(self.as_dict.values())

    def covers(self, complex_: SimplicialComplex) -> bool:
        return set(complex_.vertex_set) <= set(self.as_dict)

    def restricted(self, vertices: Iterable[int]) -> "VertexLabeling":
        return VertexLabeling.of({v: self.as_dict[v] for v in vertices})

    def extended(self, mapping: Mapping[int, int]) -> "VertexLabeling":
        merged = dict(self.as_dict)
        merged.update(mapping)
        return VertexLabeling.of(merged)


def _require(X: SimplicialComplex, s: Simplex) -> None:
    if not len(s) or s not in X:
        raise SimplexNotInComplex("Simplex %s is not in complex %s" % (s, X))


def full_simplex(vertices: Iterable[int]) -> SimplicialComplex:
    return SimplicialComplex((Simplex.of(vertices),))


def simplex_boundary(vertices: Iterable[int]) -> SimplicialComplex:
    """Boundary of the simplex spanned by `vertices` (two points give S^0)."""
    top = Simplex.of(vertices)
    if len(top) == 1:
        return SimplicialComplex()
    return SimplicialComplex(tuple(top.boundary()))


def link(X: SimplicialComplex, s: Simplex) -> SimplicialComplex:
    """
    Link of a simplex: all t disjoint from s with t ∪ s in X.

    Args:
        X (SimplicialComplex): Ambient complex.
        s (Simplex): A simplex of X.

    Raises:
        SimplexNotInComplex: If s is empty or not a simplex of X.

    Returns:
        SimplicialComplex: The link, possibly empty.
    """
    _require(X, s)
    s_set = s.as_set()
    return SimplicialComplex(
        tuple(
            facet.difference(s_set)
            for facet in X.facets
            if s_set <= facet.as_set()
        )
    )


def star(X: SimplicialComplex, s: Simplex) -> SimplicialComplex:
    _require(X, s)
    s_set = s.as_set()
    return SimplicialComplex(tuple(f for f in X.facets if s_set <= f.as_set()))


def join(X: SimplicialComplex, Y: SimplicialComplex) -> SimplicialComplex:
    """
    Simplicial join of two complexes on disjoint vertex sets.

    Raises:
        VertexCollision: If X and Y share a vertex id.
    """
    shared = set(X.vertex_set) & set(Y.vertex_set)
    if shared:
        raise VertexCollision("Cannot join complexes sharing vertices %s" % sorted(shared))
    if X.is_empty():
        return Y
    if Y.is_empty():
        return X
    return SimplicialComplex(tuple(f.union(g) for f in X.facets for g in Y.facets))


def cone(X: SimplicialComplex, apex: int) -> SimplicialComplex:
    return join(X, full_simplex([apex]))


def suspension(X: SimplicialComplex, north: int, south: int) -> SimplicialComplex:
    return join(X, simplex_boundary([north, south]))


def skeleton(X: SimplicialComplex, k: int) -> SimplicialComplex:
    if k < -1:
        raise InputError("Skeleton dimension must be at least -1, got %d" % k)
    if k >= X.dimension:
        return X
    return SimplicialComplex.from_simplices(s for s in X.simplices if s.dimension <= k)


def full_subcomplex(X: SimplicialComplex, vertices: Iterable[int]) -> SimplicialComplex:
    """Subcomplex of all simplices of X whose vertices lie in `vertices`."""
    keep = set(vertices)
    return SimplicialComplex(tuple(Simplex.of(set(f) & keep) for f in X.facets))


def delete_simplex(X: SimplicialComplex, s: Simplex) -> SimplicialComplex:
    """Removes s together with every simplex containing it."""
    _require(X, s)
    s_set = s.as_set()
    kept: List[Simplex] = []
    for facet in X.facets:
        if not s_set <= facet.as_set():
            kept.append(facet)
            continue
        # faces of the facet that miss at least one vertex of s
        kept.extend(facet.difference([v]) for v in s)
    return SimplicialComplex(tuple(kept))


def relabel(X: SimplicialComplex, mapping: Mapping[int, int]) -> SimplicialComplex:
    """Renames vertices through an injective mapping."""
    if len(set(mapping[v] for v in X.vertex_set)) != len(X.vertex_set):
        raise InputError("Relabelling must be injective on the vertex set")
    return SimplicialComplex(
        tuple(Simplex.of(mapping[v] for v in f) for f in X.facets)
    )


def barycentric_ids(X: SimplicialComplex) -> Dict[Simplex, int]:
    """
    Deterministic fresh vertex ids for the barycentric subdivision: the i-th
    simplex of X in canonical order becomes vertex i.
    """
    return {s: i for i, s in enumerate(X.simplices)}


def barycentric(X: SimplicialComplex) -> SimplicialComplex:
    """
    Barycentric subdivision: vertices are simplices of X, simplices are
    chains under strict inclusion.

    Raises:
        EmptyComplex: If X is empty.
    """
    if X.is_empty():
        raise EmptyComplex("Barycentric subdivision of the empty complex")
    ids = barycentric_ids(X)
    chains = set()
    for facet in X.facets:
        for order in permutations(facet.vertices):
            chains.add(
                Simplex.of(ids[Simplex.of(order[: i + 1])] for i in range(len(order)))
            )
    logger.debug(
        "Barycentric subdivision built",
        extra={"simplices": len(ids), "facets": len(chains)},
    )
    return SimplicialComplex(tuple(chains))


def xm_subcomplex(X: SimplicialComplex, m: int) -> SimplicialComplex:
    """
    Full subcomplex of the barycentric subdivision spanned by simplices of
    dimension at least m - 1.

    Raises:
        InputError: If m is negative.
        EmptyComplex: If X is empty.
    """
    if m < 0:
        raise InputError("m must be nonnegative, got %d" % m)
    subdivision = barycentric(X)
    if m == 0:
        return subdivision
    ids = barycentric_ids(X)
    return full_subcomplex(
        subdivision, [i for s, i in ids.items() if s.dimension >= m - 1]
    )
