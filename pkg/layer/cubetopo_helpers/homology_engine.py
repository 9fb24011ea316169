"""
Integer homology of simplicial and cubical complexes, homological
connectivity, the weakly Cohen-Macaulay check, induced maps and
contractibility certificates.

All homology is computed from Smith normal forms of exact integer boundary
matrices. Reduced homology uses the augmented chain complex, so the empty
complex has a single nonvanishing group in degree -1.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from typing import (
    TYPE_CHECKING,
    Callable,
    Dict,
    Hashable,
    List,
    Optional,
    Sequence,
    Tuple,
)

from aws_lambda_powertools import Logger

from cubetopo_helpers.cubical import CubicalComplex
from cubetopo_helpers.errors import InputError
from cubetopo_helpers.fundamental_group import Pi1Status, certify_trivial
from cubetopo_helpers.integer_matrix import (
    Matrix,
    apply,
    kernel_basis,
    smith_normal_form,
    solve_with,
    transpose,
    zeros,
)
from cubetopo_helpers.simplicial_core import Simplex, SimplicialComplex, link

if TYPE_CHECKING:
    from cubetopo_helpers.connectivity_toolkit import SimplicialMap

logger = Logger(service="cubetopo", child=True)

EMPTY_SIMPLEX = Simplex(())

Boundary = Callable[[Hashable], Sequence[Tuple[Hashable, int]]]


def signed_faces(s: Simplex) -> List[Tuple[Simplex, int]]:
    """Terms of the augmented simplicial boundary of s."""
    if len(s) == 1:
        return [(EMPTY_SIMPLEX, 1)]
    return [(face, -1 if i % 2 else 1) for i, face in enumerate(s.boundary())]


def _chain_matrix(
    rows: Sequence[Hashable], columns: Sequence[Hashable], boundary: Boundary
) -> Matrix:
    index = {cell: i for i, cell in enumerate(rows)}
    matrix = zeros(len(rows), len(columns))
    for j, cell in enumerate(columns):
        for face, sign in boundary(cell):
            matrix[index[face]][j] += sign
    return matrix


@dataclass(frozen=True)
class BoundaryMatrix:
    """
    Simplicial boundary map in one degree.

    Attributes:
        degree (int): k, the dimension of the column simplices.
        rows (Tuple[Simplex, ...]): (k-1)-simplices in canonical order; the
            empty simplex alone in degree 0 of the augmented complex.
        columns (Tuple[Simplex, ...]): k-simplices in canonical order.
        entries (Tuple[Tuple[int, ...], ...]): Row-major coefficients.
    """

    degree: int
    rows: Tuple[Simplex, ...]
    columns: Tuple[Simplex, ...]
    entries: Tuple[Tuple[int, ...], ...]

    def as_lists(self) -> Matrix:
        return [list(row) for row in self.entries]


def _simplicial_cells(X: SimplicialComplex, k: int, reduced: bool = True) -> List[Simplex]:
    if k == -1:
        return [EMPTY_SIMPLEX] if reduced else []
    if k < -1:
        return []
    return X.simplices_of_dim(k)


def boundary_matrix(X: SimplicialComplex, k: int, reduced: bool = True) -> BoundaryMatrix:
    """
    Boundary matrix from k-chains to (k-1)-chains.

    Args:
        X (SimplicialComplex): The complex.
        k (int): Degree, at least 0.
        reduced (bool, optional): Use the augmentation in degree 0. Defaults to True.

    Returns:
        BoundaryMatrix: Entries in {-1, 0, 1}.
    """
    if k < 0:
        raise InputError("Boundary degree must be nonnegative, got %d" % k)
    rows = _simplicial_cells(X, k - 1, reduced)
    columns = _simplicial_cells(X, k, reduced)
    matrix = _chain_matrix(rows, columns, signed_faces)
    return BoundaryMatrix(k, tuple(rows), tuple(columns), tuple(tuple(r) for r in matrix))


@dataclass(frozen=True)
class HomologyProfile:
    """
    Integer homology by degree.

    Attributes:
        betti (Tuple[int, ...]): Free ranks in degrees 0, 1, ...
        torsion (Tuple[Tuple[int, ...], ...]): Torsion coefficients per degree,
            each at least 2 and dividing the next.
        reduced (bool): Whether this is reduced homology.
        empty (bool): Whether the complex was empty; the reduced homology of
            the empty complex is Z in degree -1.
    """

    betti: Tuple[int, ...]
    torsion: Tuple[Tuple[int, ...], ...]
    reduced: bool = True
    empty: bool = False

    def rank(self, k: int) -> int:
        if k == -1:
            return int(self.empty and self.reduced)
        return self.betti[k] if 0 <= k < len(self.betti) else 0

    def torsion_in(self, k: int) -> Tuple[int, ...]:
        return self.torsion[k] if 0 <= k < len(self.torsion) else ()

    def vanishes(self, k: int) -> bool:
        return not self.rank(k) and not self.torsion_in(k)

    def first_nonvanishing(self) -> Optional[int]:
        for k in range(-1, len(self.betti)):
            if not self.vanishes(k):
                return k
        return None

    def is_acyclic(self) -> bool:
        return self.first_nonvanishing() is None

    def group(self, k: int) -> str:
        """Readable name such as 'Z^2 + Z/2', or '0'."""
        parts = []
        free = self.rank(k)
        if free:
            parts.append("Z" if free == 1 else "Z^%d" % free)
        parts.extend("Z/%d" % t for t in self.torsion_in(k))
        return " + ".join(parts) or "0"

    def euler_characteristic(self) -> int:
        total = sum((-1) ** k * b for k, b in enumerate(self.betti))
        if self.reduced:
            total += 1 - self.rank(-1)
        return total

    def _trimmed(self) -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
        groups = [(self.rank(k), self.torsion_in(k)) for k in range(len(self.betti))]
        while groups and groups[-1] == (0, ()):
            groups.pop()
        return tuple(groups)

    def isomorphic_to(self, other: "HomologyProfile") -> bool:
        return (
            self.reduced == other.reduced
            and self.rank(-1) == other.rank(-1)
            and self._trimmed() == other._trimmed()
        )


def _chain_homology(
    cells: Sequence[Sequence[Hashable]], boundary: Boundary, reduced: bool, top: int
) -> HomologyProfile:
    """
    Homology in degrees 0..top of a chain complex whose k-cells are cells[k].
    """

    def matrix(k: int) -> Tuple[Matrix, int]:
        columns = cells[k] if k < len(cells) else []
        if k == 0:
            return ([[1] * len(columns)] if reduced else []), len(columns)
        return _chain_matrix(cells[k - 1], columns, boundary), len(columns)

    forms = []
    for k in range(top + 2):
        entries, n_cols = matrix(k)
        forms.append(smith_normal_form(entries, n_cols))
    betti = []
    torsion = []
    for k in range(top + 1):
        count = len(cells[k]) if k < len(cells) else 0
        betti.append(count - forms[k].rank - forms[k + 1].rank)
        torsion.append(forms[k + 1].torsion)
    logger.debug(
        "Homology computed",
        extra={"cells": [len(c) for c in cells], "top": top, "reduced": reduced},
    )
    return HomologyProfile(tuple(betti), tuple(torsion), reduced)


def homology(
    X: SimplicialComplex, reduced: bool = True, top: Optional[int] = None
) -> HomologyProfile:
    """
    Integer homology of a simplicial complex.

    Args:
        X (SimplicialComplex): Any complex, the empty one included.
        reduced (bool, optional): Reduced homology. Defaults to True.
        top (int, optional): Highest degree to compute. Defaults to dim X.

    Returns:
        HomologyProfile: Groups in degrees 0..top.
    """
    if X.is_empty():
        return HomologyProfile((), (), reduced, empty=True)
    top = X.dimension if top is None else min(top, X.dimension)
    cells = [X.simplices_of_dim(k) for k in range(X.dimension + 1)]
    return _chain_homology(cells, signed_faces, reduced, top)


def cubical_homology(C: CubicalComplex, reduced: bool = True) -> HomologyProfile:
    """
    Integer homology of a cubical complex.

    Raises:
        MalformedCubicalComplex: If a face of some cube is missing.
    """
    C.validate()
    if C.is_empty():
        return HomologyProfile((), (), reduced, empty=True)
    return _chain_homology(C.cells_by_dimension(), C.boundary, reduced, C.dimension)


@dataclass(frozen=True)
class ConnectivityReport:
    """
    Homological connectivity of a complex.

    Attributes:
        hconn (int): Largest k with vanishing reduced homology through degree
            k, -2 for the empty complex and capped at the dimension.
        acyclic (bool): All reduced homology vanishes.
        certified_pi1_trivial (Pi1Status): Fundamental group certificate.
        dimension (int): Dimension of the complex.
        profile (HomologyProfile): Reduced homology.
    """

    hconn: int
    acyclic: bool
    certified_pi1_trivial: Pi1Status
    dimension: int
    profile: HomologyProfile
    subject: SimplicialComplex = field(default_factory=SimplicialComplex, repr=False, compare=False)

    def at_least(self, n: int) -> bool:
        """Homologically n-connected; acyclic complexes qualify for every n."""
        if n <= -2:
            return True
        if self.profile.empty:
            return False
        return n == -1 or self.acyclic or self.hconn >= n


def hconnectivity(X: SimplicialComplex, tietze_budget: int = 10000) -> ConnectivityReport:
    """
    Homological connectivity plus a bounded fundamental group certificate.

    Args:
        X (SimplicialComplex): Any complex.
        tietze_budget (int, optional): Rewriting steps for the fundamental
            group simplifier. Defaults to 10000.

    Returns:
        ConnectivityReport: hconn, acyclicity and the tri-state certificate.
    """
    profile = homology(X)
    if X.is_empty():
        return ConnectivityReport(-2, False, Pi1Status.UNKNOWN, -1, profile, X)
    first = profile.first_nonvanishing()
    acyclic = first is None
    hconn = X.dimension if acyclic else first - 1
    if not profile.vanishes(1):
        pi1 = Pi1Status.NO
    elif certify_trivial(X, tietze_budget):
        pi1 = Pi1Status.YES
    else:
        pi1 = Pi1Status.UNKNOWN
    return ConnectivityReport(hconn, acyclic, pi1, X.dimension, profile, X)


def connectivity_at_least(X: SimplicialComplex, n: int) -> bool:
    """
    Same answer as hconnectivity(X).at_least(n), computing homology only
    through degree n.
    """
    if n <= -2:
        return True
    if X.is_empty():
        return False
    if n == -1:
        return True
    return homology(X, top=n).is_acyclic()


@dataclass(frozen=True)
class WcmResult:
    """
    Outcome of a weakly Cohen-Macaulay check.

    Attributes:
        holds (bool): Whether every condition holds.
        witness (Simplex, optional): Simplex whose link is not connected
            enough; None for the global stage or on success.
        stage (str): "global", "link" or "" on success.
        required (int, optional): Connectivity that the failing object lacked.
    """

    holds: bool
    witness: Optional[Simplex] = None
    stage: str = ""
    required: Optional[int] = None

    def describe_witness(self) -> str:
        if self.stage == "global":
            return "global"
        return str(self.witness) if self.witness is not None else ""


def wcm_check(X: SimplicialComplex, n: int) -> WcmResult:
    """
    Weakly Cohen-Macaulay of dimension n, homologically: X is (n-1)-connected
    and the link of every d-simplex is (n-d-2)-connected.

    Links are visited in canonical simplex order and the first failure is
    returned as the witness.

    Raises:
        InputError: If n is negative.
    """
    if n < 0:
        raise InputError("wCM dimension must be nonnegative, got %d" % n)
    if not connectivity_at_least(X, n - 1):
        return WcmResult(False, None, "global", n - 1)
    for s in X.simplices:
        required = n - s.dimension - 2
        if not connectivity_at_least(link(X, s), required):
            return WcmResult(False, s, "link", required)
    return WcmResult(True)


class _DegreePresentation:
    """
    Reduced homology in one degree as a direct sum of cyclic groups, with
    cycle representatives and a coordinate map from cycles to generators.
    """

    def __init__(self, X: SimplicialComplex, degree: int) -> None:
        self.cells = _simplicial_cells(X, degree)
        self.index = {cell: i for i, cell in enumerate(self.cells)}
        below = _simplicial_cells(X, degree - 1)
        above = _simplicial_cells(X, degree + 1)
        n = len(self.cells)
        kernel = kernel_basis(_chain_matrix(below, self.cells, signed_faces), n)
        z = len(kernel)
        cycles = transpose(kernel, n)
        self.kernel_form = smith_normal_form(cycles, z, transforms=True)
        relations = []
        for column in transpose(_chain_matrix(self.cells, above, signed_faces), len(above)):
            relations.append(solve_with(self.kernel_form, column))
        relation_form = smith_normal_form(transpose(relations, z), len(above), transforms=True)
        diagonal = [
            relation_form.diagonal[i] if i < len(relation_form.diagonal) else 0
            for i in range(z)
        ]
        self.generators = [i for i in range(z) if diagonal[i] != 1]
        self.orders = tuple(diagonal[i] for i in self.generators)
        self.left = relation_form.left
        self.representatives = [
            apply(cycles, [row[i] for row in relation_form.left_inverse])
            for i in self.generators
        ]

    def coordinates(self, cycle: Sequence[int]) -> List[int]:
        x = solve_with(self.kernel_form, cycle)
        if x is None:
            raise ValueError("Chain is not a cycle")
        w = apply(self.left, x)
        return [
            w[i] % order if order else w[i] for i, order in zip(self.generators, self.orders)
        ]


def _permutation_sign(values: Sequence[int]) -> int:
    inversions = sum(
        1 for i in range(len(values)) for j in range(i + 1, len(values)) if values[i] > values[j]
    )
    return -1 if inversions % 2 else 1


def _is_surjective(matrix: Matrix, n_cols: int, orders: Sequence[int]) -> bool:
    rows = len(orders)
    augmented = [row + [orders[i] if i == j else 0 for j in range(rows)] for i, row in enumerate(matrix)]
    form = smith_normal_form(augmented, n_cols + rows)
    return form.rank == rows and all(d == 1 for d in form.invariant_factors)


def _is_injective(
    matrix: Matrix, source_orders: Sequence[int], target_orders: Sequence[int]
) -> bool:
    rows = len(target_orders)
    n_cols = len(source_orders)
    augmented = [
        row + [target_orders[i] if i == j else 0 for j in range(rows)]
        for i, row in enumerate(matrix)
    ]
    for vector in kernel_basis(augmented, n_cols + rows):
        for value, order in zip(vector[:n_cols], source_orders):
            if (value % order) if order else value:
                return False
    return True


@dataclass(frozen=True)
class InducedMap:
    """
    Homomorphism induced on reduced homology in one degree.

    Attributes:
        degree (int): Homological degree.
        source_orders (Tuple[int, ...]): Orders of the source generators, 0
            meaning infinite cyclic.
        target_orders (Tuple[int, ...]): Orders of the target generators.
        matrix (Tuple[Tuple[int, ...], ...]): Rows indexed by target
            generators, columns by source generators.
        injective (bool): Whether the map is injective.
        surjective (bool): Whether the map is surjective.
    """

    degree: int
    source_orders: Tuple[int, ...]
    target_orders: Tuple[int, ...]
    matrix: Tuple[Tuple[int, ...], ...]
    injective: bool
    surjective: bool

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.surjective

    @property
    def status(self) -> str:
        if self.isomorphism:
            return "isomorphism"
        if self.surjective:
            return "surjection"
        if self.injective:
            return "injection"
        return "neither"


def induced_map_homology(f: "SimplicialMap", degree: int) -> InducedMap:
    """
    Homomorphism induced by a simplicial map on reduced homology.

    The map is expressed on the Smith normal form generators of both sides:
    each source generator's representative cycle is pushed forward, with
    degenerate images dropped and orientation given by the vertex permutation.

    Args:
        f (SimplicialMap): The map.
        degree (int): Degree, at least -1.

    Raises:
        NotSimplicial: If some simplex is not mapped onto a simplex.
        InputError: If degree is below -1.

    Returns:
        InducedMap: Matrix and injectivity/surjectivity.
    """
    if degree < -1:
        raise InputError("Homology degree must be at least -1, got %d" % degree)
    f.check()
    source = _DegreePresentation(f.source, degree)
    target = _DegreePresentation(f.target, degree)
    mapping = f.as_dict

    def push(cell: Simplex) -> Optional[Tuple[Simplex, int]]:
        image = [mapping[v] for v in cell]
        if len(set(image)) < len(image):
            return None
        return Simplex(tuple(sorted(image))), _permutation_sign(image)

    columns = []
    for representative in source.representatives:
        chain = [0] * len(target.cells)
        for j, coefficient in enumerate(representative):
            if not coefficient:
                continue
            pushed = push(source.cells[j])
            if pushed is not None:
                chain[target.index[pushed[0]]] += coefficient * pushed[1]
        columns.append(target.coordinates(chain))
    matrix = transpose(columns, len(target.orders))
    logger.debug(
        "Induced map computed",
        extra={"degree": degree, "source": source.orders, "target": target.orders},
    )
    return InducedMap(
        degree,
        source.orders,
        target.orders,
        tuple(tuple(row) for row in matrix),
        _is_injective(matrix, source.orders, target.orders),
        _is_surjective(matrix, len(source.orders), target.orders),
    )


def induced_maps(f: "SimplicialMap", top: int) -> List[InducedMap]:
    """Induced maps in degrees 0..top."""
    return [induced_map_homology(f, d) for d in range(top + 1)]


def cone_apex(X: SimplicialComplex) -> Optional[int]:
    """Least vertex lying in every facet, if X is a cone."""
    if X.is_empty():
        return None
    common = set(X.facets[0])
    for facet in X.facets[1:]:
        common &= set(facet)
    return min(common) if common else None


def collapses_to_point(X: SimplicialComplex, budget: int = 100000) -> bool:
    """
    Greedy elementary collapses: each pass removes pairwise disjoint free
    pairs (tau, sigma) where sigma is maximal and the unique proper coface of
    tau, scanning tau in canonical order.

    Returns:
        bool: True when a single vertex remains within the budget.
    """
    remaining = set(X.simplices)
    steps = 0
    while len(remaining) > 1:
        cofaces: Dict[Simplex, List[Simplex]] = defaultdict(list)
        for s in remaining:
            for face in s.boundary():
                cofaces[face].append(s)
        used = set()
        for tau in sorted(remaining):
            above = cofaces.get(tau, [])
            if len(above) != 1:
                continue
            sigma = above[0]
            if sigma in cofaces or tau in used or sigma in used:
                continue
            remaining.difference_update((tau, sigma))
            used.update((tau, sigma))
            steps += 1
            if steps > budget:
                logger.debug("Collapse budget exhausted", extra={"steps": steps})
                return False
        if not used:
            break
    return len(remaining) == 1


@dataclass(frozen=True)
class ContractibilityCertificate:
    certified: bool
    method: str = ""


def certify_contractible(
    X: SimplicialComplex, collapse_budget: int = 100000, tietze_budget: int = 10000
) -> ContractibilityCertificate:
    """
    Tries, in order: cone detection, greedy collapse to a point, and
    acyclicity together with a certified trivial fundamental group.

    Returns:
        ContractibilityCertificate: method is "cone", "collapse" or
            "homology" when certified.
    """
    if X.is_empty():
        return ContractibilityCertificate(False)
    if cone_apex(X) is not None:
        return ContractibilityCertificate(True, "cone")
    if collapses_to_point(X, collapse_budget):
        return ContractibilityCertificate(True, "collapse")
    report = hconnectivity(X, tietze_budget)
    if report.acyclic and report.certified_pi1_trivial is Pi1Status.YES:
        return ContractibilityCertificate(True, "homology")
    return ContractibilityCertificate(False)
