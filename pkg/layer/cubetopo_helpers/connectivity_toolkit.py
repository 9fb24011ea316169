"""
Checkers for connectivity transfer arguments: connectivity of the X_m
subcomplexes, fiber theorems, the bad simplex argument and (complete) join
complexes.

Every checker verifies hypotheses and conclusions homologically on the finite
instance at hand and returns a CheckReport.
"""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from aws_lambda_powertools import Logger

from cubetopo_helpers.errors import (
    IdempotenceViolation,
    InputError,
    MonotonicityViolation,
    NotABadSimplex,
    NotCompleteJoin,
    NotSimplicial,
    SimplexNotInComplex,
)
from cubetopo_helpers.homology_engine import (
    certify_contractible,
    connectivity_at_least,
    hconnectivity,
    induced_map_homology,
    wcm_check,
)
from cubetopo_helpers.reports import CheckReport
from cubetopo_helpers.simplicial_core import (
    Simplex,
    SimplicialComplex,
    barycentric,
    barycentric_ids,
    full_subcomplex,
    link,
    xm_subcomplex,
)

logger = Logger(service="cubetopo", child=True)


@dataclass(frozen=True)
class SimplicialMap:
    """
    Vertex map between two complexes.

    Attributes:
        source (SimplicialComplex): Domain.
        target (SimplicialComplex): Codomain.
        vertex_map (Tuple[Tuple[int, int], ...]): Sorted (vertex, image) pairs.
    """

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: Tuple[Tuple[int, int], ...]

    @classmethod
    def of(
        cls, source: SimplicialComplex, target: SimplicialComplex, mapping: Mapping[int, int]
    ) -> "SimplicialMap":
        return cls(source, target, tuple(sorted(mapping.items())))

    @classmethod
    def identity(cls, X: SimplicialComplex) -> "SimplicialMap":
        return cls.of(X, X, {v: v for v in X.vertex_set})

    @classmethod
    def inclusion(cls, A: SimplicialComplex, X: SimplicialComplex) -> "SimplicialMap":
        return cls.of(A, X, {v: v for v in A.vertex_set})

    @cached_property
    def as_dict(self) -> Dict[int, int]:
        return dict(self.vertex_map)

    def __getitem__(self, vertex: int) -> int:
        return self.as_dict[vertex]

    def image(self, s: Simplex) -> Simplex:
        return Simplex.of(self.as_dict[v] for v in s)

    def check(self) -> None:
        """
        Raises:
            NotSimplicial: If a source vertex is unmapped or a facet's image
                is not a simplex of the target.
        """
        missing = [v for v in self.source.vertex_set if v not in self.as_dict]
        if missing:
            raise NotSimplicial(
                "Vertex %d has no image" % missing[0], witness=Simplex((missing[0],))
            )
        for facet in self.source.facets:
            if self.image(facet) not in self.target:
                raise NotSimplicial(
                    "Image of %s is not a simplex of the target" % facet, witness=facet
                )

    def preimage(self, vertices: Iterable[int]) -> List[int]:
        wanted = set(vertices)
        return [v for v in self.source.vertex_set if self.as_dict[v] in wanted]


def carrier_map(X: SimplicialComplex) -> SimplicialMap:
    """Barycentric subdivision onto X, each barycentre going to the least vertex of its simplex."""
    ids = barycentric_ids(X)
    return SimplicialMap.of(barycentric(X), X, {i: s.vertices[0] for s, i in ids.items()})


def check_teo_m(X: SimplicialComplex, n: int, m: int) -> CheckReport:
    """
    If X is wCM of dimension n then X_m is (n - m)-connected.

    Args:
        X (SimplicialComplex): The complex.
        n (int): wCM dimension, at least 0.
        m (int): Index of the subcomplex, at least 0.

    Returns:
        CheckReport: Hypothesis is the wCM check; conclusion the connectivity
            of X_m.
    """
    if m < 0:
        raise InputError("m must be nonnegative, got %d" % m)
    details = {"n": n, "m": m}
    wcm = wcm_check(X, n)
    if not wcm.holds:
        return CheckReport("teo-m", False, None, wcm.describe_witness(), details)
    xm = xm_subcomplex(X, m)
    report = hconnectivity(xm)
    details.update(
        {
            "xm_vertices": len(xm.vertex_set),
            "xm_hconn": report.hconn,
            "required": n - m,
        }
    )
    return CheckReport("teo-m", True, report.at_least(n - m), "", details)


def fibers(p: SimplicialMap, s: Simplex) -> SimplicialComplex:
    """
    Preimage of the closed simplex s: all source simplices mapping into a face of s.

    Raises:
        SimplexNotInComplex: If s is not a simplex of the target.
    """
    if not len(s) or s not in p.target:
        raise SimplexNotInComplex("Simplex %s is not in the target" % s)
    return full_subcomplex(p.source, p.preimage(s))


def check_fiber_theorem(p: SimplicialMap, n: int) -> CheckReport:
    """
    Preimages of closed simplices n-connected implies source n-connected iff
    target n-connected.
    """
    p.check()
    details = {"n": n}
    for s in p.target.simplices:
        if not connectivity_at_least(fibers(p, s), n):
            return CheckReport("fiber", False, None, str(s), details)
    source_ok = connectivity_at_least(p.source, n)
    target_ok = connectivity_at_least(p.target, n)
    details.update({"source_connected": source_ok, "target_connected": target_ok})
    return CheckReport("fiber", True, source_ok == target_ok, "", details)


def _induced_xm_map(p: SimplicialMap, m: int) -> Tuple[Optional[SimplicialMap], Optional[Simplex]]:
    source_ids = barycentric_ids(p.source)
    target_ids = barycentric_ids(p.target)
    source_m = xm_subcomplex(p.source, m)
    target_m = xm_subcomplex(p.target, m)
    mapping = {}
    for simplex, vertex in source_ids.items():
        if simplex.dimension < m - 1:
            continue
        image = p.image(simplex)
        if image.dimension < m - 1:
            return None, simplex
        mapping[vertex] = target_ids[image]
    return SimplicialMap.of(source_m, target_m, mapping), None


def check_fiber2(
    p: SimplicialMap, m: int, collapse_budget: int = 100000, tietze_budget: int = 10000
) -> CheckReport:
    """
    Contractible vertex preimages of p_m: Y_m -> X_m imply that p_m is a
    homology isomorphism in every degree.

    Args:
        p (SimplicialMap): The map p: Y -> X.
        m (int): Index of the subcomplexes, at least 0.
        collapse_budget (int, optional): Elementary collapse budget per fiber.
        tietze_budget (int, optional): Fundamental group rewriting budget.

    Returns:
        CheckReport: Witness is the first source simplex on which p_m is
            undefined or the first target vertex with a non-contractible
            preimage.
    """
    if m < 0:
        raise InputError("m must be nonnegative, got %d" % m)
    p.check()
    details: Dict[str, object] = {"m": m}
    pm, undefined = _induced_xm_map(p, m)
    if pm is None:
        details["reason"] = "p_m undefined: image dimension below m - 1"
        return CheckReport("fiber2", False, None, str(undefined), details)
    target_ids = barycentric_ids(p.target)
    simplex_of = {vertex: simplex for simplex, vertex in target_ids.items()}
    methods = []
    for vertex in pm.target.vertex_set:
        preimage = full_subcomplex(pm.source, pm.preimage([vertex]))
        certificate = certify_contractible(preimage, collapse_budget, tietze_budget)
        if not certificate.certified:
            details["reason"] = "vertex preimage not certified contractible"
            return CheckReport("fiber2", False, None, str(simplex_of[vertex]), details)
        methods.append(certificate.method)
    top = max(pm.source.dimension, pm.target.dimension)
    statuses = [induced_map_homology(pm, d).status for d in range(top + 1)]
    details.update({"certificates": methods, "induced": statuses})
    return CheckReport(
        "fiber2", True, all(s == "isomorphism" for s in statuses), "", details
    )


@dataclass(frozen=True)
class BadVertexAssignment:
    """
    Assignment of bad vertices to the simplices of a complex.

    Attributes:
        carrier (SimplicialComplex): The complex X.
        bar (Tuple[Tuple[Simplex, Tuple[int, ...]], ...]): Sorted pairs
            (simplex, its bad vertices); unlisted simplices have none.
    """

    carrier: SimplicialComplex
    bar: Tuple[Tuple[Simplex, Tuple[int, ...]], ...]

    @classmethod
    def of(
        cls, carrier: SimplicialComplex, mapping: Mapping[Simplex, Iterable[int]]
    ) -> "BadVertexAssignment":
        return cls(
            carrier,
            tuple(sorted((s, tuple(sorted(set(b)))) for s, b in mapping.items() if b)),
        )

    @classmethod
    def from_bad_vertices(
        cls, carrier: SimplicialComplex, bad: Iterable[int]
    ) -> "BadVertexAssignment":
        """The assignment sigma -> sigma ∩ bad."""
        bad_set = set(bad)
        return cls.of(carrier, {s: set(s) & bad_set for s in carrier.simplices})

    @cached_property
    def as_dict(self) -> Dict[Simplex, FrozenSet[int]]:
        return {s: frozenset(b) for s, b in self.bar}

    def __call__(self, s: Simplex) -> FrozenSet[int]:
        return self.as_dict.get(s, frozenset())

    def validate(self) -> None:
        """
        Raises:
            InputError: If bar(sigma) is not a subset of sigma.
            MonotonicityViolation: If bar(tau) is not contained in bar(sigma)
                for a facet tau of sigma.
            IdempotenceViolation: If bar(bar(sigma)) differs from bar(sigma).
        """
        for s, b in self.bar:
            if s not in self.carrier or not set(b) <= set(s):
                raise InputError("bar(%s) = %s is not a face of it" % (s, list(b)))
        for s in self.carrier.simplices:
            for face in s.boundary():
                if not self(face) <= self(s):
                    raise MonotonicityViolation(
                        "bar(%s) is not contained in bar(%s)" % (face, s), witness=s
                    )
            own = self(s)
            if own and self(Simplex.of(own)) != own:
                raise IdempotenceViolation(
                    "bar(bar(%s)) differs from bar(%s)" % (s, s), witness=s
                )

    def bad_simplices(self) -> List[Simplex]:
        return [s for s in self.carrier.simplices if self(s) == s.as_set()]


def good_complex(b: BadVertexAssignment) -> SimplicialComplex:
    """Subcomplex of the simplices with no bad vertices."""
    b.validate()
    return SimplicialComplex.from_simplices(s for s in b.carrier.simplices if not b(s))


def good_link(b: BadVertexAssignment, s: Simplex) -> SimplicialComplex:
    """
    Simplices t of link(X, s) with bar(s ∪ t) = bar(s).

    Raises:
        NotABadSimplex: If bar(s) differs from s.
    """
    b.validate()
    if s not in b.carrier or b(s) != s.as_set():
        raise NotABadSimplex("%s is not a bad simplex" % s)
    own = b(s)
    return SimplicialComplex.from_simplices(
        t for t in link(b.carrier, s).simplices if b(s.union(t)) == own
    )


def check_badsim(b: BadVertexAssignment, m: int) -> CheckReport:
    """
    Good links of bad simplices (m - dim)-connected imply that the inclusion of
    the good complex is a homology isomorphism through degree m and a
    surjection in degree m + 1.
    """
    good = good_complex(b)
    details: Dict[str, object] = {"m": m}
    for s in b.bad_simplices():
        if not connectivity_at_least(good_link(b, s), m - s.dimension):
            details["required"] = m - s.dimension
            return CheckReport("badsim", False, None, str(s), details)
    inclusion = SimplicialMap.inclusion(good, b.carrier)
    statuses = [induced_map_homology(inclusion, d).status for d in range(m + 2)]
    conclusion = all(s == "isomorphism" for s in statuses[:-1]) and statuses[-1] in (
        "isomorphism",
        "surjection",
    )
    details.update({"good_facets": [list(f) for f in good.facets], "induced": statuses})
    return CheckReport("badsim", True, conclusion, "", details)


class JoinKind(str, Enum):
    NOT_JOIN = "not_join"
    JOIN = "join"
    COMPLETE_JOIN = "complete_join"


@dataclass(frozen=True)
class JoinClassification:
    kind: JoinKind
    witness: Optional[Simplex] = None
    reason: str = ""


@dataclass(frozen=True)
class JoinStructure:
    """
    A simplicial map p: Y -> X viewed as a candidate join complex over X.

    The per-simplex decomposition is always recomputed from p.
    """

    p: SimplicialMap

    def lifts(self, s: Simplex) -> List[Simplex]:
        """Source simplices whose image is exactly s."""
        return [t for t in self.p.source.simplices if len(t) == len(s) and self.p.image(t) == s]

    def decomposition(self, s: Simplex) -> Dict[int, Tuple[int, ...]]:
        """Vertex sets Y_x(s) for x in s."""
        found: Dict[int, set] = {x: set() for x in s}
        for t in self.lifts(s):
            for v in t:
                found[self.p[v]].add(v)
        return {x: tuple(sorted(vs)) for x, vs in found.items()}


def check_join_complex(j: JoinStructure) -> JoinClassification:
    """
    Classifies p as not a join, a join, or a complete join.

    Raises:
        NotSimplicial: If p is not simplicial.
    """
    p = j.p
    p.check()
    images = {p.image(t) for t in p.source.simplices}
    for s in p.target.simplices:
        if s not in images:
            return JoinClassification(JoinKind.NOT_JOIN, s, "not surjective")
    for t in p.source.facets:
        if len(p.image(t)) != len(t):
            return JoinClassification(JoinKind.NOT_JOIN, t, "not injective on simplex")
    complete = True
    for s in p.target.simplices:
        parts = j.decomposition(s)
        lifted = set(j.lifts(s))
        for choice in product(*(parts[x] for x in s)):
            if Simplex.of(choice) not in lifted:
                return JoinClassification(JoinKind.NOT_JOIN, s, "lifts do not form a join")
        if complete and any(set(parts[x]) != set(p.preimage([x])) for x in s):
            complete = False
    if complete:
        return JoinClassification(JoinKind.COMPLETE_JOIN)
    return JoinClassification(JoinKind.JOIN)


def complete_join_over(
    target: SimplicialComplex, multiplicity: Mapping[int, int]
) -> JoinStructure:
    """
    Complete join in which each target vertex x has multiplicity[x] lifts
    (default 1) and every simplex lifts to all choices of vertex lifts.

    Lifts are numbered from 0 in target vertex order.
    """
    copies: Dict[int, List[int]] = {}
    mapping: Dict[int, int] = {}
    next_id = 0
    for x in target.vertex_set:
        count = multiplicity.get(x, 1)
        if count < 1:
            raise InputError("Multiplicity of vertex %d must be positive" % x)
        copies[x] = list(range(next_id, next_id + count))
        mapping.update({v: x for v in copies[x]})
        next_id += count
    facets = [
        Simplex.of(choice)
        for facet in target.facets
        for choice in product(*(copies[x] for x in facet))
    ]
    source = SimplicialComplex(tuple(facets))
    return JoinStructure(SimplicialMap.of(source, target, mapping))


def check_join2(j: JoinStructure, n: int) -> CheckReport:
    """
    For a complete join Y over X: X wCM of dimension n implies Y wCM of
    dimension n, and Y k-connected implies X k-connected for k <= n.

    Raises:
        NotCompleteJoin: If j is not a complete join.
    """
    classification = check_join_complex(j)
    if classification.kind is not JoinKind.COMPLETE_JOIN:
        raise NotCompleteJoin(
            "Not a complete join: %s" % classification.reason,
            witness=classification.witness,
        )
    target_wcm = wcm_check(j.p.target, n)
    source_wcm = wcm_check(j.p.source, n) if target_wcm.holds else None
    clause_one = source_wcm is None or source_wcm.holds
    violations = [
        k
        for k in range(-1, n + 1)
        if connectivity_at_least(j.p.source, k) and not connectivity_at_least(j.p.target, k)
    ]
    details: Dict[str, object] = {
        "n": n,
        "target_wcm": target_wcm.holds,
        "clause_connectivity_violations": violations,
    }
    witness = ""
    if source_wcm is not None:
        details["source_wcm"] = source_wcm.holds
        witness = source_wcm.describe_witness()
    logger.debug("Join check evaluated", extra=details)
    return CheckReport("join2", True, clause_one and not violations, witness, details)
