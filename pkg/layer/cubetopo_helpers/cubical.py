"""
Finite cubical complexes given cell by cell.

A cube lists, for each of its coordinates, the pair (front face, back face).
Coordinates are ordered, so the boundary of a q-cube is the alternating sum
over j of (back_j - front_j) with sign (-1)^j.
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Dict, Hashable, Iterable, List, Tuple

from cubetopo_helpers.errors import MalformedCubicalComplex

Interval = Tuple[int, int]


@dataclass(frozen=True)
class Cube:
    """
    Attributes:
        key (Hashable): Identifier of the cube inside its complex.
        faces (Tuple[Tuple[Hashable, Hashable], ...]): (front, back) keys per
            coordinate; the dimension is the number of coordinates.
    """

    key: Hashable
    faces: Tuple[Tuple[Hashable, Hashable], ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.faces)


@dataclass(frozen=True)
class CubicalComplex:
    cubes: Tuple[Cube, ...] = ()

    @cached_property
    def by_key(self) -> Dict[Hashable, Cube]:
        return {cube.key: cube for cube in self.cubes}

    @property
    def dimension(self) -> int:
        return max((cube.dimension for cube in self.cubes), default=-1)

    def is_empty(self) -> bool:
        return not self.cubes

    def cells_by_dimension(self) -> List[List[Hashable]]:
        cells: List[List[Hashable]] = [[] for _ in range(self.dimension + 1)]
        for cube in self.cubes:
            cells[cube.dimension].append(cube.key)
        return cells

    def f_vector(self) -> List[int]:
        return [len(cells) for cells in self.cells_by_dimension()]

    def boundary(self, key: Hashable) -> List[Tuple[Hashable, int]]:
        terms: List[Tuple[Hashable, int]] = []
        for j, (front, back) in enumerate(self.by_key[key].faces):
            sign = -1 if j % 2 else 1
            terms.append((back, sign))
            terms.append((front, -sign))
        return terms

    def validate(self) -> None:
        """
        Raises:
            MalformedCubicalComplex: On duplicate keys, a missing face or a face
                of the wrong dimension.
        """
        if len(self.by_key) != len(self.cubes):
            raise MalformedCubicalComplex("Duplicate cube keys")
        for cube in self.cubes:
            for pair in cube.faces:
                for face in pair:
                    found = self.by_key.get(face)
                    if found is None or found.dimension != cube.dimension - 1:
                        raise MalformedCubicalComplex(
                            "Cube %s has a missing or misdimensioned face %s"
                            % (cube.key, face),
                            witness=cube.key,
                        )


def _grid_faces(cell: Tuple[Interval, ...]) -> Tuple[Tuple[Hashable, Hashable], ...]:
    faces = []
    for j, (low, high) in enumerate(cell):
        if low == high:
            continue
        front = cell[:j] + ((low, low),) + cell[j + 1 :]
        back = cell[:j] + ((high, high),) + cell[j + 1 :]
        faces.append((front, back))
    return tuple(faces)


def grid_complex(maximal: Iterable[Iterable[Interval]]) -> CubicalComplex:
    """
    Cubical complex generated by elementary grid cubes.

    Each maximal cube is a product of intervals (a, a) or (a, a + 1); all
    its faces are added.

    Args:
        maximal (Iterable[Iterable[Interval]]): Generating cubes of one
            common ambient dimension.

    Returns:
        CubicalComplex: The closure, cells keyed by their interval tuples.
    """
    cells = set()
    for generator in maximal:
        options = []
        for low, high in generator:
            if high - low not in (0, 1):
                raise MalformedCubicalComplex(
                    "Elementary intervals have length 0 or 1, got (%d, %d)" % (low, high)
                )
            options.append(
                [(low, low)] if low == high else [(low, low), (high, high), (low, high)]
            )
        cells.update(product(*options))
    ordered = sorted(cells, key=lambda c: (sum(h - l for l, h in c), c))
    return CubicalComplex(tuple(Cube(cell, _grid_faces(cell)) for cell in ordered))


def grid_boundary(maximal: Iterable[Iterable[Interval]]) -> CubicalComplex:
    """Proper faces of the given grid cubes."""
    full = grid_complex(maximal)
    top = full.dimension
    return CubicalComplex(tuple(c for c in full.cubes if c.dimension < top))

