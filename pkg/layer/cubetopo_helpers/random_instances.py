"""
Seeded generators of small complexes used by the property batteries and the
flow generator.
"""
from random import Random
from typing import List

from cubetopo_helpers.simplicial_core import Simplex, SimplicialComplex


def random_complex(
    rng: Random, n_vertices: int = 6, n_facets: int = 5, max_dimension: int = 3
) -> SimplicialComplex:
    """
    Complex generated by random facets on vertices 0..n_vertices-1.

    Args:
        rng (Random): Source of randomness.
        n_vertices (int, optional): Size of the vertex pool. Defaults to 6.
        n_facets (int, optional): Number of generating simplices. Defaults to 5.
        max_dimension (int, optional): Largest generator dimension. Defaults to 3.

    Returns:
        SimplicialComplex: Nonempty complex.
    """
    pool = list(range(n_vertices))
    generators: List[Simplex] = []
    for _ in range(max(1, n_facets)):
        size = rng.randint(1, min(max_dimension + 1, n_vertices))
        generators.append(Simplex.of(rng.sample(pool, size)))
    return SimplicialComplex(tuple(generators))


def random_connected_complex(
    rng: Random, n_vertices: int = 6, n_facets: int = 5, max_dimension: int = 3
) -> SimplicialComplex:
    """
    Random complex made connected by chaining its components with edges
    between their least vertices.
    """
    X = random_complex(rng, n_vertices, n_facets, max_dimension)
    components: List[set] = []
    for facet in X.facets:
        touching = [c for c in components if c & set(facet)]
        merged = set(facet).union(*touching)
        components = [c for c in components if c not in touching] + [merged]
    least = sorted(min(c) for c in components)
    extra = [Simplex.of(pair) for pair in zip(least, least[1:])]
    return SimplicialComplex(X.facets + tuple(extra))
