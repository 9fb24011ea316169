"""
Discrete flows that retract a complex onto a subcomplex.

A flow moves a simplex sigma outside Y to
    step(sigma) = (sigma - {vsel(sigma)}) ∪ {delta(vsel(sigma))}
and the hypotheses guarantee that repeated steps lower the complexity until Y
is reached.
"""
from dataclasses import dataclass
from functools import cached_property
from random import Random
from typing import Dict, List, Mapping, Set, Tuple

from aws_lambda_powertools import Logger

from cubetopo_helpers.errors import (
    BudgetExceeded,
    HypothesisViolation,
    InputError,
    NonTermination,
)
from cubetopo_helpers.homology_engine import homology
from cubetopo_helpers.random_instances import random_connected_complex
from cubetopo_helpers.reports import CheckReport
from cubetopo_helpers.simplicial_core import Simplex, SimplicialComplex, link

logger = Logger(service="cubetopo", child=True)


@dataclass(frozen=True)
class FlowData:
    """
    Attributes:
        carrier (SimplicialComplex): The complex X.
        target (SimplicialComplex): The subcomplex Y.
        complexity (Tuple[Tuple[int, int], ...]): Sorted (vertex, c) pairs.
        delta (Tuple[Tuple[int, int], ...]): Sorted (vertex, delta) pairs for
            vertices outside Y.
        vsel (Tuple[Tuple[Simplex, int], ...]): Sorted (simplex, vertex) pairs
            for simplices outside Y.
    """

    carrier: SimplicialComplex
    target: SimplicialComplex
    complexity: Tuple[Tuple[int, int], ...]
    delta: Tuple[Tuple[int, int], ...]
    vsel: Tuple[Tuple[Simplex, int], ...]

    @classmethod
    def of(
        cls,
        carrier: SimplicialComplex,
        target: SimplicialComplex,
        complexity: Mapping[int, int],
        delta: Mapping[int, int],
        vsel: Mapping[Simplex, int],
    ) -> "FlowData":
        return cls(
            carrier,
            target,
            tuple(sorted(complexity.items())),
            tuple(sorted(delta.items())),
            tuple(sorted(vsel.items())),
        )

    @cached_property
    def c_map(self) -> Dict[int, int]:
        return dict(self.complexity)

    @cached_property
    def delta_map(self) -> Dict[int, int]:
        return dict(self.delta)

    @cached_property
    def vsel_map(self) -> Dict[Simplex, int]:
        return dict(self.vsel)

    def c(self, s: Simplex) -> int:
        return sum(self.c_map[v] for v in s)

    def outside(self) -> List[Simplex]:
        """Simplices of X not in Y, largest dimension first, then lexicographic."""
        return sorted(
            (s for s in self.carrier.simplices if s not in self.target),
            key=lambda s: (-len(s), s.vertices),
        )

    def step(self, s: Simplex) -> Simplex:
        v = self.vsel_map[s]
        return s.difference([v]).union([self.delta_map[v]])

    def validate(self) -> None:
        """
        Raises:
            InputError: If Y is not a subcomplex of X, c is not zero exactly on
                Y, some delta(v) is not in the link of v, or some vsel(sigma)
                is missing, outside sigma, or a vertex of Y.
        """
        X, Y = self.carrier, self.target
        if not Y.is_subcomplex_of(X):
            raise InputError("Target is not a subcomplex of the carrier")
        in_y = set(Y.vertex_set)
        for v in X.vertex_set:
            value = self.c_map.get(v)
            if value is None or value < 0 or (value == 0) != (v in in_y):
                raise InputError("c(%d) must be 0 exactly on Y and positive elsewhere" % v)
            if v in in_y:
                continue
            w = self.delta_map.get(v)
            if w is None or w not in link(X, Simplex((v,))).vertex_set:
                raise InputError("delta(%d) must be a vertex of the link of %d" % (v, v))
        for s in self.outside():
            v = self.vsel_map.get(s)
            if v is None or v not in s or v in in_y:
                raise InputError("vsel(%s) must be a vertex of %s outside Y" % (s, s))


def _condition_one(f: FlowData, s: Simplex) -> None:
    v = f.vsel_map[s]
    if s.union([f.delta_map[v]]) not in f.carrier:
        raise HypothesisViolation(
            1, "%s joined with delta(%d) = %d is not a simplex" % (s, v, f.delta_map[v]), s
        )


def _condition_three(f: FlowData, s: Simplex) -> None:
    v = f.vsel_map[s]
    for face in s.faces():
        if v in face and f.vsel_map[face] != v:
            raise HypothesisViolation(
                3, "face %s of %s selects %d instead of %d" % (face, s, f.vsel_map[face], v), s
            )


def _descent_steps(f: FlowData, s: Simplex, k_max: int) -> int:
    start = f.c(s)
    seen: Set[Simplex] = {s}
    current = s
    for k in range(1, k_max + 1):
        if current not in f.vsel_map:
            raise HypothesisViolation(2, "iterate %s has no selected vertex" % current, s)
        _condition_one(f, current)
        current = f.step(current)
        if f.c(current) < start:
            return k
        if current in seen:
            raise HypothesisViolation(2, "flow from %s cycles without descent" % s, s)
        seen.add(current)
    raise BudgetExceeded("No descent from %s within %d steps" % (s, k_max))


def check_flow_hypotheses(f: FlowData, k_max: int = 64) -> CheckReport:
    """
    Verifies the three flow conditions on every simplex outside Y.

    Args:
        f (FlowData): The flow.
        k_max (int, optional): Steps allowed for a strict descent. Defaults to 64.

    Raises:
        HypothesisViolation: With the failed condition and the witness simplex.
        BudgetExceeded: If some simplex does not descend within k_max steps.

    Returns:
        CheckReport: Passing report with the largest descent length.
    """
    if k_max < 1:
        raise InputError("k_max must be positive, got %d" % k_max)
    f.validate()
    longest = 0
    outside = f.outside()
    for s in outside:
        _condition_one(f, s)
        _condition_three(f, s)
        longest = max(longest, _descent_steps(f, s, k_max))
    logger.debug("Flow hypotheses verified", extra={"simplices": len(outside)})
    return CheckReport(
        "flow", True, True, "", {"simplices_outside": len(outside), "max_descent_steps": longest}
    )


@dataclass(frozen=True)
class FlowTrace:
    start: Simplex
    simplices: Tuple[Simplex, ...]

    @property
    def length(self) -> int:
        return len(self.simplices) - 1


def run_flow(f: FlowData, k_max: int = 64) -> List[FlowTrace]:
    """
    Flows every simplex of X until it lands in Y.

    Raises:
        HypothesisViolation: If the flow conditions fail, before any step.
        NonTermination: If a trace exceeds k_max times the starting complexity.

    Returns:
        List[FlowTrace]: One trace per simplex in canonical order.
    """
    check_flow_hypotheses(f, k_max)
    traces = []
    for s in f.carrier.simplices:
        bound = k_max * f.c(s)
        path = [s]
        current = s
        while current not in f.target:
            if len(path) > bound:
                raise NonTermination(
                    "Flow from %s exceeds %d steps" % (s, bound), witness=s
                )
            current = f.step(current)
            path.append(current)
        traces.append(FlowTrace(s, tuple(path)))
    return traces


def cross_check_retraction(f: FlowData, k_max: int = 64) -> CheckReport:
    """
    Compares homology of X and Y after checking the flow hypotheses.
    """
    try:
        check_flow_hypotheses(f, k_max)
    except HypothesisViolation as e:
        return CheckReport(
            "retraction", False, None, str(e.witness), {"condition": e.condition}
        )
    source, target = homology(f.carrier), homology(f.target)
    details = {
        "carrier": [source.group(k) for k in range(len(source.betti))],
        "subcomplex": [target.group(k) for k in range(len(target.betti))],
    }
    return CheckReport("retraction", True, source.isomorphic_to(target), "", details)


def random_flow_data(rng: Random, base_vertices: int = 4, expansions: int = 5) -> FlowData:
    """
    Valid flow built by elementary expansions of a random connected Y.

    Each expansion adds a vertex w with delta(w) = u for an existing vertex u,
    together with the cone w * (u * L) for L generated by a random subset of
    the facets of lk(u). Complexity increases with every new vertex and
    vsel picks the vertex of largest complexity.
    """
    Y = random_connected_complex(rng, base_vertices, rng.randint(1, 4), 2)
    facets = list(Y.facets)
    complexity = {v: 0 for v in Y.vertex_set}
    delta: Dict[int, int] = {}
    next_vertex = max(Y.vertex_set) + 1
    for level in range(1, expansions + 1):
        X = SimplicialComplex(tuple(facets))
        u = rng.choice(X.vertex_set)
        around = list(link(X, Simplex((u,))).facets)
        chosen = [lf for lf in around if rng.random() < 0.5]
        w = next_vertex
        next_vertex += 1
        if chosen:
            facets.extend(lf.union([u, w]) for lf in chosen)
        else:
            facets.append(Simplex.of([u, w]))
        complexity[w] = level
        delta[w] = u
    X = SimplicialComplex(tuple(facets))
    vsel = {
        s: max(s, key=lambda v: complexity[v]) for s in X.simplices if s not in Y
    }
    return FlowData.of(X, Y, complexity, delta, vsel)
