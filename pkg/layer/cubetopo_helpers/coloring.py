"""
Extension of labeled sphere triangulations to labeled disks in which equal
labels only meet on the boundary sphere.
"""
from collections import Counter
from dataclasses import dataclass
from itertools import count
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from aws_lambda_powertools import Logger

from cubetopo_helpers.errors import InputError, InsufficientLabels, NotASphere
from cubetopo_helpers.homology_engine import homology
from cubetopo_helpers.reports import CheckReport
from cubetopo_helpers.simplicial_core import (
    Simplex,
    SimplicialComplex,
    VertexLabeling,
    cone,
    full_subcomplex,
    link,
)

logger = Logger(service="cubetopo", child=True)

SUPPORTED_DIMENSIONS = (0, 1, 2)


@dataclass(frozen=True)
class LabeledTriangulation:
    """
    Attributes:
        complex (SimplicialComplex): The triangulation.
        labeling (VertexLabeling): One label per vertex.
        universe (Tuple[int, ...]): The label set E.
        interior_universe (Tuple[int, ...]): Labels allowed on new vertices.
    """

    complex: SimplicialComplex
    labeling: VertexLabeling
    universe: Tuple[int, ...]
    interior_universe: Tuple[int, ...]

    def validate(self) -> None:
        if not self.labeling.covers(self.complex):
            raise InputError("Every vertex needs a label")
        if not set(self.interior_universe) <= set(self.universe):
            raise InputError("Interior labels must be drawn from the label set")
        if not self.labeling.labels() <= set(self.universe):
            raise InputError("Labels outside the label set")


def _codim_one_counts(T: SimplicialComplex) -> Counter:
    counts: Counter = Counter()
    for facet in T.facets:
        counts.update(facet.boundary())
    return counts


def _is_pure(T: SimplicialComplex, k: int) -> bool:
    return all(f.dimension == k for f in T.facets)


def _is_cycle(T: SimplicialComplex) -> bool:
    if T.is_empty() or not _is_pure(T, 1):
        return False
    degrees = Counter(v for edge in T.facets for v in edge)
    return all(d == 2 for d in degrees.values()) and homology(T).betti == (0, 1)


def verify_sphere(T: SimplicialComplex, k: int) -> bool:
    """
    Closed pseudomanifold of dimension k with the homology of S^k; for k = 2
    every vertex link must also be a cycle.

    Raises:
        InputError: If k is not 0, 1 or 2.
    """
    if k not in SUPPORTED_DIMENSIONS:
        raise InputError("Sphere dimension must be 0, 1 or 2, got %d" % k)
    if T.is_empty() or not _is_pure(T, k):
        return False
    if k == 0:
        return len(T.facets) == 2
    if any(n != 2 for n in _codim_one_counts(T).values()):
        return False
    profile = homology(T)
    expected = tuple(int(i == k) for i in range(k + 1))
    if profile.betti != expected or any(profile.torsion):
        return False
    if k == 2:
        return all(_is_cycle(link(T, Simplex((v,)))) for v in T.vertex_set)
    return True


def _least_clashing(labels: Dict[int, int], vertices: Sequence[int], allowed: Sequence[int]) -> int:
    used = Counter(labels[v] for v in vertices)
    return min(allowed, key=lambda label: (used[label], label))


def _extend(
    S: SimplicialComplex,
    labels: Dict[int, int],
    k: int,
    allowed: Sequence[int],
    fresh: Iterator[int],
) -> SimplicialComplex:
    """
    Disk bounded by the k-sphere S; new vertices are labelled in place.
    """
    if k == -1:
        w = next(fresh)
        labels[w] = allowed[0]
        return SimplicialComplex((Simplex((w,)),))
    apex = next(fresh)
    apex_label = _least_clashing(labels, S.vertex_set, allowed)
    labels[apex] = apex_label
    disk = cone(S, apex)
    remaining = [label for label in allowed if label != apex_label]
    for v in S.vertex_set:
        if labels[v] != apex_label:
            continue
        edge = Simplex.of([apex, v])
        edge_link = link(disk, edge)
        filler = _extend(edge_link, labels, k - 1, remaining, fresh)
        kept = [f for f in disk.facets if not edge.issubset(f)]
        kept.extend(f.union([apex]) for f in filler.facets)
        kept.extend(f.union([v]) for f in filler.facets)
        disk = SimplicialComplex(tuple(kept))
    return disk


def extend_coloring(S: LabeledTriangulation, k: int) -> LabeledTriangulation:
    """
    Extends a labeled k-sphere to a labeled (k+1)-disk.

    The disk starts as a cone over S whose apex takes the interior label used
    least on S. Every edge from the apex to a vertex of the same label is then
    removed by replacing its star with the suspension-like complex ∂e * D,
    where D is a disk recursively built over the edge's link with the apex
    label excluded.

    Args:
        S (LabeledTriangulation): Labeled sphere.
        k (int): Sphere dimension, 0, 1 or 2.

    Raises:
        InsufficientLabels: If fewer than k + 2 interior labels are available.
        NotASphere: If S fails verify_sphere.

    Returns:
        LabeledTriangulation: The disk with the labeling extended.
    """
    S.validate()
    if len(set(S.interior_universe)) < k + 2:
        raise InsufficientLabels(
            "Need at least %d interior labels, got %d" % (k + 2, len(set(S.interior_universe)))
        )
    if not verify_sphere(S.complex, k):
        raise NotASphere("Input is not a triangulated %d-sphere" % k)
    labels = S.labeling.as_dict.copy()
    fresh = count(max(S.complex.vertex_set) + 1)
    disk = _extend(S.complex, labels, k, sorted(set(S.interior_universe)), fresh)
    logger.debug(
        "Coloring extended",
        extra={"k": k, "interior_vertices": len(disk.vertex_set) - len(S.complex.vertex_set)},
    )
    return LabeledTriangulation(
        disk, VertexLabeling.of(labels), S.universe, S.interior_universe
    )


def boundary_complex(D: SimplicialComplex) -> SimplicialComplex:
    """Codimension-one faces lying in exactly one facet."""
    return SimplicialComplex(
        tuple(face for face, n in _codim_one_counts(D).items() if n == 1)
    )


def _monochromatic_edge(
    S: SimplicialComplex, D: SimplicialComplex, labels: VertexLabeling
) -> Optional[Simplex]:
    for edge in D.simplices_of_dim(1):
        a, b = edge.vertices
        if labels[a] == labels[b] and edge not in S:
            return edge
    return None


def verify_extension(
    S: LabeledTriangulation, D: LabeledTriangulation, k: int
) -> CheckReport:
    """
    Checks that D is a (k+1)-disk with boundary S, S is full in D, equal
    labels meet only inside S, and interior labels come from the interior set.

    Returns:
        CheckReport: One detail entry per property; the witness is the first
            offending simplex or vertex.
    """
    X = D.complex
    sphere = S.complex
    results: Dict[str, bool] = {}
    witnesses: List[str] = []

    def record(name: str, ok: bool, witness: str = "") -> None:
        results[name] = ok
        if not ok and witness:
            witnesses.append(witness)

    acyclic = not X.is_empty() and homology(X).is_acyclic()
    record("disk", _is_pure(X, k + 1) and acyclic and not X.is_empty())
    record("boundary", boundary_complex(X) == sphere)
    full = full_subcomplex(X, sphere.vertex_set)
    record("full", full == sphere)
    clash = _monochromatic_edge(sphere, X, D.labeling) if D.labeling.covers(X) else None
    record("monochromatic", D.labeling.covers(X) and clash is None, str(clash) if clash else "")
    interior = [v for v in X.vertex_set if v not in set(sphere.vertex_set)]
    outside = [v for v in interior if D.labeling.as_dict.get(v) not in S.interior_universe]
    record("interior_labels", not outside, "vertex %d" % outside[0] if outside else "")
    details = dict(results)
    details["interior_vertices"] = len(interior)
    return CheckReport(
        "coloring", True, all(results.values()), witnesses[0] if witnesses else "", details
    )
