"""
Edge-path presentations of the fundamental group and a bounded Tietze
simplifier that can certify triviality.
"""
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import networkx as nx
from aws_lambda_powertools import Logger

from cubetopo_helpers.simplicial_core import SimplicialComplex

logger = Logger(service="cubetopo", child=True)

Word = Tuple[int, ...]


class Pi1Status(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Presentation:
    """
    Group presentation with generators 1..n; a word is a tuple of nonzero
    ints where -g denotes the inverse of generator g.
    """

    generators: Tuple[int, ...]
    relators: Tuple[Word, ...]


def free_reduce(word: Sequence[int]) -> Word:
    stack: List[int] = []
    for letter in word:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def cyclic_reduce(word: Sequence[int]) -> Word:
    word = free_reduce(word)
    start, end = 0, len(word)
    while end - start > 1 and word[start] == -word[end - 1]:
        start += 1
        end -= 1
    return word[start:end]


def invert(word: Sequence[int]) -> Word:
    return tuple(-letter for letter in reversed(word))


def edge_path_presentation(X: SimplicialComplex) -> Presentation:
    """
    Presentation from a breadth-first spanning forest of the 1-skeleton:
    generators are the non-tree edges, relators come from the triangles.

    Args:
        X (SimplicialComplex): Any complex, possibly disconnected.

    Returns:
        Presentation: Free product of the component groups.
    """
    graph = nx.Graph()
    graph.add_nodes_from(X.vertex_set)
    edges = [tuple(e.vertices) for e in X.simplices_of_dim(1)]
    graph.add_edges_from(edges)
    tree = set()
    for component in sorted(nx.connected_components(graph), key=min):
        for u, v in nx.bfs_edges(graph, min(component)):
            tree.add((min(u, v), max(u, v)))
    generator_of: Dict[Tuple[int, int], int] = {}
    for edge in edges:
        if edge not in tree:
            generator_of[edge] = len(generator_of) + 1

    def letter(u: int, v: int) -> Word:
        g = generator_of.get((u, v))
        return (g,) if g else ()

    relators = []
    for triangle in X.simplices_of_dim(2):
        a, b, c = triangle.vertices
        relators.append(letter(a, b) + letter(b, c) + invert(letter(a, c)))
    return Presentation(tuple(generator_of.values()), tuple(relators))


def simplify(presentation: Presentation, budget: int = 10000) -> Tuple[Presentation, bool]:
    """
    Bounded Tietze simplification.

    Repeatedly takes the shortest relator (ties broken lexicographically) in
    which some generator occurs exactly once, solves it for the smallest such
    generator and substitutes everywhere. Each substituted letter costs one
    step.

    Args:
        presentation (Presentation): Input presentation.
        budget (int, optional): Maximum rewriting steps. Defaults to 10000.

    Returns:
        Tuple[Presentation, bool]: The simplified presentation and whether the
            budget was exhausted.
    """
    generators = set(presentation.generators)
    relators = [cyclic_reduce(r) for r in presentation.relators]
    relators = [r for r in relators if r]
    steps = 0
    while generators:
        relators.sort(key=lambda r: (len(r), r))
        choice = None
        for index, relator in enumerate(relators):
            counts = Counter(abs(letter) for letter in relator)
            single = sorted(g for g, n in counts.items() if n == 1)
            if single:
                choice = (index, single[0])
                break
        if choice is None:
            break
        index, generator = choice
        relator = relators.pop(index)
        position = next(i for i, x in enumerate(relator) if abs(x) == generator)
        rotated = relator[position:] + relator[:position]
        rest = rotated[1:]
        # g^e * rest = 1
        replacement = invert(rest) if rotated[0] > 0 else rest
        rewritten = []
        for other in relators:
            word: List[int] = []
            for x in other:
                if x == generator:
                    word.extend(replacement)
                    steps += len(replacement) or 1
                elif x == -generator:
                    word.extend(invert(replacement))
                    steps += len(replacement) or 1
                else:
                    word.append(x)
            word_ = cyclic_reduce(word)
            if word_:
                rewritten.append(word_)
        relators = rewritten
        generators.discard(generator)
        steps += 1
        if steps > budget:
            logger.debug("Tietze budget exhausted", extra={"steps": steps})
            return Presentation(tuple(sorted(generators)), tuple(relators)), True
    return Presentation(tuple(sorted(generators)), tuple(relators)), False


def certify_trivial(X: SimplicialComplex, budget: int = 10000) -> bool:
    """True when the edge-path presentation reduces to the trivial group."""
    reduced, exhausted = simplify(edge_path_presentation(X), budget)
    return not exhausted and not reduced.generators
