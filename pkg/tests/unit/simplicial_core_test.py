from unittest import TestCase

from hypothesis import given, settings
from hypothesis import strategies as st

from cubetopo_helpers.errors import (
    EmptyComplex,
    InputError,
    SimplexNotInComplex,
    VertexCollision,
)
from cubetopo_helpers.simplicial_core import (
    Simplex,
    SimplicialComplex,
    VertexLabeling,
    barycentric,
    cone,
    delete_simplex,
    full_simplex,
    full_subcomplex,
    join,
    link,
    relabel,
    simplex_boundary,
    skeleton,
    star,
    suspension,
    xm_subcomplex,
)


def complexes(max_vertex: int = 5, max_facets: int = 5, offset: int = 0):
    facet = st.frozensets(st.integers(offset, offset + max_vertex), min_size=1, max_size=4)
    return st.lists(facet, min_size=1, max_size=max_facets).map(
        lambda facets: SimplicialComplex.of(*facets)
    )


def facets(X: SimplicialComplex):
    return [list(f) for f in X.facets]


class TestSimplex(TestCase):
    def test_of_sorts_and_deduplicates(self):
        self.assertEqual(Simplex.of([3, 1, 3]).vertices, (1, 3))

    def test_unsorted_vertices_rejected(self):
        self.assertRaises(InputError, Simplex, (2, 1))

    def test_repeated_vertices_rejected(self):
        self.assertRaises(InputError, Simplex, (1, 1))

    def test_canonical_order_by_dimension_first(self):
        ordered = sorted([Simplex.of([0, 1]), Simplex.of([5]), Simplex.of([0, 2]), Simplex.of([1])])
        self.assertEqual([s.vertices for s in ordered], [(1,), (5,), (0, 1), (0, 2)])

    def test_faces_include_itself(self):
        self.assertEqual(len(list(Simplex.of([0, 1, 2]).faces())), 7)

    def test_boundary_omits_one_vertex_each(self):
        self.assertEqual(
            [f.vertices for f in Simplex.of([0, 1, 2]).boundary()], [(1, 2), (0, 2), (0, 1)]
        )

    def test_str(self):
        self.assertEqual(str(Simplex.of([2, 0])), "{0,2}")


class TestSimplicialComplex(TestCase):
    def test_non_maximal_facets_dropped(self):
        X = SimplicialComplex.of([0, 1, 2], [0, 1], [3])
        self.assertEqual(facets(X), [[3], [0, 1, 2]])

    def test_empty_complex(self):
        X = SimplicialComplex()
        self.assertTrue(X.is_empty())
        self.assertEqual(X.dimension, -1)
        self.assertEqual(X.f_vector(), [])

    def test_simplices_of_triangle(self):
        X = full_simplex([0, 1, 2])
        self.assertEqual(len(X), 7)
        self.assertEqual(X.f_vector(), [3, 3, 1])
        self.assertEqual(X.euler_characteristic(), 1)

    def test_sphere_euler_characteristic(self):
        self.assertEqual(simplex_boundary([0, 1, 2, 3]).euler_characteristic(), 2)

    def test_contains_faces(self):
        X = full_simplex([0, 1, 2])
        self.assertIn(Simplex.of([0, 2]), X)
        self.assertNotIn(Simplex.of([0, 3]), X)

    def test_two_points_boundary_is_s0(self):
        self.assertEqual(facets(simplex_boundary([4, 7])), [[4], [7]])

    def test_point_boundary_is_empty(self):
        self.assertTrue(simplex_boundary([4]).is_empty())


class TestLink(TestCase):
    def test_vertex_of_triangle_boundary(self):
        X = simplex_boundary([1, 2, 3])
        self.assertEqual(facets(link(X, Simplex.of([1]))), [[2], [3]])

    def test_edge_of_full_triangle(self):
        X = full_simplex([1, 2, 3])
        self.assertEqual(facets(link(X, Simplex.of([1, 2]))), [[3]])

    def test_vertex_of_tetrahedron_boundary(self):
        X = simplex_boundary([1, 2, 3, 4])
        self.assertEqual(link(X, Simplex.of([1])), simplex_boundary([2, 3, 4]))

    def test_facet_has_empty_link(self):
        self.assertTrue(link(full_simplex([0, 1]), Simplex.of([0, 1])).is_empty())

    def test_missing_simplex(self):
        X = simplex_boundary([1, 2, 3])
        self.assertRaises(SimplexNotInComplex, link, X, Simplex.of([1, 2, 3]))

    def test_empty_simplex(self):
        self.assertRaises(SimplexNotInComplex, link, full_simplex([0]), Simplex(()))


class TestStar(TestCase):
    def test_vertex_of_triangle_boundary(self):
        X = simplex_boundary([1, 2, 3])
        self.assertEqual(facets(star(X, Simplex.of([1]))), [[1, 2], [1, 3]])

    def test_single_vertex(self):
        X = full_simplex([5])
        self.assertEqual(star(X, Simplex.of([5])), X)

    def test_vertex_of_square(self):
        X = SimplicialComplex.of([0, 1], [1, 2], [2, 3], [0, 3])
        self.assertEqual(facets(star(X, Simplex.of([0]))), [[0, 1], [0, 3]])

    def test_missing_simplex(self):
        self.assertRaises(SimplexNotInComplex, star, full_simplex([0, 1]), Simplex.of([2]))


class TestJoin(TestCase):
    def test_two_points(self):
        self.assertEqual(facets(join(full_simplex([0]), full_simplex([1]))), [[0, 1]])

    def test_two_zero_spheres_give_square(self):
        X = join(simplex_boundary([0, 1]), simplex_boundary([2, 3]))
        self.assertEqual(facets(X), [[0, 2], [0, 3], [1, 2], [1, 3]])

    def test_edge_boundary_with_triangle_boundary(self):
        X = join(simplex_boundary([0, 1]), simplex_boundary([2, 3, 4]))
        self.assertEqual(len(X.vertex_set), 5)
        self.assertEqual(len(X.facets), 6)

    def test_empty_is_neutral(self):
        X = simplex_boundary([0, 1, 2])
        self.assertEqual(join(X, SimplicialComplex()), X)
        self.assertEqual(join(SimplicialComplex(), X), X)

    def test_shared_vertices(self):
        self.assertRaises(VertexCollision, join, full_simplex([0, 1]), full_simplex([1, 2]))

    def test_cone_and_suspension(self):
        circle = simplex_boundary([0, 1, 2])
        self.assertEqual(cone(circle, 9).f_vector(), [4, 6, 3])
        self.assertEqual(suspension(circle, 8, 9).f_vector(), [5, 9, 6])


class TestBarycentric(TestCase):
    def test_edge_becomes_path(self):
        X = barycentric(full_simplex([0, 1]))
        self.assertEqual(X.f_vector(), [3, 2])
        # ids: {0} -> 0, {1} -> 1, {0,1} -> 2
        self.assertEqual(facets(X), [[0, 2], [1, 2]])

    def test_vertex(self):
        self.assertEqual(barycentric(full_simplex([7])).f_vector(), [1])

    def test_triangle_counts(self):
        self.assertEqual(barycentric(full_simplex([0, 1, 2])).f_vector(), [7, 12, 6])

    def test_empty(self):
        self.assertRaises(EmptyComplex, barycentric, SimplicialComplex())

    def test_deterministic(self):
        X = simplex_boundary([3, 5, 8, 9])
        self.assertEqual(barycentric(X), barycentric(X))


class TestXmSubcomplex(TestCase):
    def test_triangle_m2_is_tree(self):
        X = xm_subcomplex(full_simplex([0, 1, 2]), 2)
        self.assertEqual(X.f_vector(), [4, 3])

    def test_m0_is_subdivision(self):
        X = simplex_boundary([0, 1, 2])
        self.assertEqual(xm_subcomplex(X, 0), barycentric(X))

    def test_sphere_m1_has_fourteen_vertices(self):
        X = xm_subcomplex(simplex_boundary([0, 1, 2, 3]), 1)
        self.assertEqual(len(X.vertex_set), 14)

    def test_negative_m(self):
        self.assertRaises(InputError, xm_subcomplex, full_simplex([0]), -1)

    def test_empty(self):
        self.assertRaises(EmptyComplex, xm_subcomplex, SimplicialComplex(), 1)


class TestSkeleton(TestCase):
    def test_tetrahedron_one_skeleton_is_k4(self):
        X = skeleton(full_simplex([0, 1, 2, 3]), 1)
        self.assertEqual(X.f_vector(), [4, 6])
        self.assertEqual(X.dimension, 1)

    def test_full_dimension_is_identity(self):
        X = simplex_boundary([0, 1, 2, 3])
        self.assertEqual(skeleton(X, X.dimension), X)

    def test_zero_skeleton(self):
        self.assertEqual(facets(skeleton(simplex_boundary([0, 1, 2, 3]), 0)), [[0], [1], [2], [3]])

    def test_minus_one_is_empty(self):
        self.assertTrue(skeleton(full_simplex([0, 1]), -1).is_empty())

    def test_below_minus_one(self):
        self.assertRaises(InputError, skeleton, full_simplex([0]), -2)


class TestOtherConstructions(TestCase):
    def test_full_subcomplex(self):
        X = full_simplex([0, 1, 2, 3])
        self.assertEqual(full_subcomplex(X, [0, 2, 9]), full_simplex([0, 2]))

    def test_delete_vertex_from_triangle(self):
        X = delete_simplex(full_simplex([0, 1, 2]), Simplex.of([0]))
        self.assertEqual(facets(X), [[1, 2]])

    def test_delete_edge_from_triangle(self):
        X = delete_simplex(full_simplex([0, 1, 2]), Simplex.of([0, 1]))
        self.assertEqual(facets(X), [[0, 2], [1, 2]])

    def test_relabel(self):
        X = relabel(full_simplex([0, 1]), {0: 5, 1: 3})
        self.assertEqual(facets(X), [[3, 5]])

    def test_relabel_not_injective(self):
        self.assertRaises(InputError, relabel, full_simplex([0, 1]), {0: 5, 1: 5})


class TestVertexLabeling(TestCase):
    def setUp(self) -> None:
        self.labeling = VertexLabeling.of({2: 7, 0: 5})
        return super().setUp()

    def test_sorted_assignment(self):
        self.assertEqual(self.labeling.assignment, ((0, 5), (2, 7)))

    def test_covers(self):
        self.assertTrue(self.labeling.covers(SimplicialComplex.of([0, 2])))
        self.assertFalse(self.labeling.covers(SimplicialComplex.of([0, 1])))

    def test_extended_and_restricted(self):
        extended = self.labeling.extended({1: 5})
        self.assertEqual(extended[1], 5)
        self.assertEqual(extended.restricted([0]).assignment, ((0, 5),))
        self.assertEqual(extended.labels(), frozenset({5, 7}))


class TestProperties(TestCase):
    @settings(max_examples=50, deadline=None)
    @given(st.data(), complexes())
    def test_star_is_simplex_joined_with_link(self, data, X):
        s = data.draw(st.sampled_from(X.simplices))
        expected = join(full_simplex(s.vertices), link(X, s))
        self.assertEqual(star(X, s).simplex_set, expected.simplex_set)

    @settings(max_examples=30, deadline=None)
    @given(complexes(max_facets=4), st.integers(0, 3))
    def test_next_xm_is_full_in_previous(self, X, m):
        smaller = xm_subcomplex(X, m + 1)
        self.assertEqual(full_subcomplex(xm_subcomplex(X, m), smaller.vertex_set), smaller)

    @settings(max_examples=50, deadline=None)
    @given(st.data(), complexes(), complexes(offset=10))
    def test_link_in_join(self, data, X, Y):
        s = data.draw(st.sampled_from(X.simplices))
        self.assertEqual(link(join(X, Y), s), join(link(X, s), Y))

    @settings(max_examples=50, deadline=None)
    @given(complexes())
    def test_facets_are_maximal(self, X):
        for a in X.facets:
            for b in X.facets:
                if a != b:
                    self.assertFalse(a.issubset(b))
