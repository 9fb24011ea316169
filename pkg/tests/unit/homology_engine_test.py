from random import Random
from unittest import TestCase

from hypothesis import given, settings
from hypothesis import strategies as st

from cubetopo_helpers.connectivity_toolkit import SimplicialMap
from cubetopo_helpers.cubical import Cube, CubicalComplex, grid_boundary, grid_complex
from cubetopo_helpers.errors import InputError, MalformedCubicalComplex, NotSimplicial
from cubetopo_helpers.fundamental_group import Pi1Status
from cubetopo_helpers.homology_engine import (
    HomologyProfile,
    boundary_matrix,
    certify_contractible,
    collapses_to_point,
    cone_apex,
    connectivity_at_least,
    cubical_homology,
    hconnectivity,
    homology,
    induced_map_homology,
    wcm_check,
)
from cubetopo_helpers.integer_matrix import is_zero, matmul
from cubetopo_helpers.random_instances import random_complex
from cubetopo_helpers.simplicial_core import (
    Simplex,
    SimplicialComplex,
    barycentric,
    full_simplex,
    simplex_boundary,
    suspension,
)

PROJECTIVE_PLANE = SimplicialComplex.of(
    [1, 2, 4], [1, 2, 6], [1, 3, 5], [1, 3, 6], [1, 4, 5],
    [2, 3, 4], [2, 3, 5], [2, 5, 6], [3, 4, 6], [4, 5, 6],
)
TORUS = SimplicialComplex.of(
    *[[i, (i + 1) % 7, (i + 3) % 7] for i in range(7)],
    *[[i, (i + 2) % 7, (i + 3) % 7] for i in range(7)],
)


def small_complexes(max_vertex: int = 4, max_size: int = 3):
    facet = st.frozensets(st.integers(0, max_vertex), min_size=1, max_size=max_size)
    return st.lists(facet, min_size=1, max_size=4).map(lambda fs: SimplicialComplex.of(*fs))


class TestHomologyOracleBattery(TestCase):
    def test_sphere_boundaries(self):
        for n in (1, 2, 3):
            profile = homology(simplex_boundary(range(n + 2)))
            self.assertEqual(profile.betti, tuple(int(k == n) for k in range(n + 1)))
            self.assertFalse(any(profile.torsion))

    def test_projective_plane(self):
        profile = homology(PROJECTIVE_PLANE)
        self.assertEqual(profile.betti, (0, 0, 0))
        self.assertEqual(profile.torsion, ((), (2,), ()))
        self.assertEqual(profile.group(1), "Z/2")

    def test_torus(self):
        self.assertEqual(len(TORUS.facets), 14)
        profile = homology(TORUS)
        self.assertEqual(profile.betti, (0, 2, 1))
        self.assertEqual(profile.group(1), "Z^2")
        self.assertEqual(profile.group(2), "Z")

    def test_unreduced_point(self):
        self.assertEqual(homology(full_simplex([0]), reduced=False).betti, (1,))
        self.assertEqual(homology(full_simplex([0])).betti, (0,))

    def test_empty_complex(self):
        profile = homology(SimplicialComplex())
        self.assertTrue(profile.empty)
        self.assertEqual(profile.rank(-1), 1)
        self.assertEqual(profile.first_nonvanishing(), -1)

    def test_top_degree_limit(self):
        self.assertEqual(homology(simplex_boundary(range(4)), top=1).betti, (0, 0))


class TestBoundaryMatrix(TestCase):
    def test_triangle_columns(self):
        matrix = boundary_matrix(full_simplex([0, 1, 2]), 2)
        self.assertEqual(matrix.entries, ((1,), (-1,), (1,)))

    def test_augmentation(self):
        matrix = boundary_matrix(simplex_boundary([0, 1]), 0)
        self.assertEqual(matrix.rows, (Simplex(()),))
        self.assertEqual(matrix.entries, ((1, 1),))

    def test_negative_degree(self):
        self.assertRaises(InputError, boundary_matrix, full_simplex([0]), -1)

    def test_random_boundary_of_boundary_and_euler(self):
        rng = Random(7)
        for _ in range(100):
            X = random_complex(rng, 8, rng.randint(1, 6), 3)
            for k in range(X.dimension):
                lower = boundary_matrix(X, k)
                upper = boundary_matrix(X, k + 1)
                product = matmul(lower.as_lists(), upper.as_lists(), len(upper.columns))
                self.assertTrue(is_zero(product))
                for j in range(len(upper.columns)):
                    column = [row[j] for row in upper.entries]
                    self.assertEqual(sum(1 for x in column if x), k + 2)
            self.assertEqual(
                homology(X, reduced=False).euler_characteristic(), X.euler_characteristic()
            )
            self.assertEqual(homology(X).euler_characteristic(), X.euler_characteristic())


class TestHomologyProperties(TestCase):
    @settings(max_examples=40, deadline=None)
    @given(small_complexes())
    def test_subdivision_invariance(self, X):
        self.assertTrue(homology(barycentric(X)).isomorphic_to(homology(X)))

    @settings(max_examples=40, deadline=None)
    @given(small_complexes())
    def test_suspension_shifts_degree(self, X):
        shifted = homology(suspension(X, 10, 11))
        original = homology(X)
        self.assertEqual(shifted.rank(0), 0)
        for k in range(X.dimension + 1):
            self.assertEqual(shifted.rank(k + 1), original.rank(k))
            self.assertEqual(shifted.torsion_in(k + 1), original.torsion_in(k))

    @settings(max_examples=40, deadline=None)
    @given(small_complexes())
    def test_torsion_chain(self, X):
        for coefficients in homology(X).torsion:
            self.assertTrue(all(t >= 2 for t in coefficients))
            for a, b in zip(coefficients, coefficients[1:]):
                self.assertEqual(b % a, 0)


class TestProfile(TestCase):
    def test_group_names(self):
        profile = HomologyProfile((2, 0), ((3,), ()))
        self.assertEqual(profile.group(0), "Z^2 + Z/3")
        self.assertEqual(profile.group(1), "0")
        self.assertEqual(profile.group(5), "0")

    def test_isomorphic_ignores_trailing_zeros(self):
        self.assertTrue(HomologyProfile((0, 0, 0), ((), (), ())).isomorphic_to(HomologyProfile((0,), ((),))))
        self.assertFalse(HomologyProfile((1,), ((),)).isomorphic_to(HomologyProfile((0,), ((),))))


class TestHconnectivity(TestCase):
    def test_empty(self):
        report = hconnectivity(SimplicialComplex())
        self.assertEqual(report.hconn, -2)
        self.assertFalse(report.at_least(-1))
        self.assertTrue(report.at_least(-2))

    def test_sphere(self):
        report = hconnectivity(simplex_boundary([0, 1, 2, 3]))
        self.assertEqual(report.hconn, 1)
        self.assertIs(report.certified_pi1_trivial, Pi1Status.YES)

    def test_two_points(self):
        report = hconnectivity(simplex_boundary([0, 1]))
        self.assertEqual(report.hconn, -1)
        self.assertFalse(report.at_least(0))

    def test_circle(self):
        report = hconnectivity(simplex_boundary([0, 1, 2]))
        self.assertEqual(report.hconn, 0)
        self.assertIs(report.certified_pi1_trivial, Pi1Status.NO)

    def test_projective_plane_pi1_not_trivial(self):
        self.assertIs(hconnectivity(PROJECTIVE_PLANE).certified_pi1_trivial, Pi1Status.NO)

    def test_acyclic_capped_at_dimension(self):
        report = hconnectivity(full_simplex([0, 1]))
        self.assertTrue(report.acyclic)
        self.assertEqual(report.hconn, 1)
        self.assertTrue(report.at_least(5))

    def test_unknown_when_budget_runs_out(self):
        report = hconnectivity(simplex_boundary([0, 1, 2, 3]), tietze_budget=0)
        self.assertIs(report.certified_pi1_trivial, Pi1Status.UNKNOWN)

    def test_connectivity_at_least_agrees(self):
        rng = Random(11)
        for _ in range(30):
            X = random_complex(rng, 6, rng.randint(1, 5), 3)
            report = hconnectivity(X)
            for n in range(-2, 4):
                self.assertEqual(connectivity_at_least(X, n), report.at_least(n))


class TestWcmCheck(TestCase):
    def test_sphere(self):
        self.assertTrue(wcm_check(simplex_boundary([0, 1, 2, 3]), 2).holds)

    def test_edge_fails_at_its_own_link(self):
        result = wcm_check(full_simplex([0, 1]), 2)
        self.assertFalse(result.holds)
        self.assertEqual(result.stage, "link")
        self.assertEqual(result.describe_witness(), "{0,1}")
        self.assertEqual(result.required, -1)

    def test_two_triangles_fail_globally(self):
        X = SimplicialComplex.of([0, 1, 2], [3, 4, 5])
        result = wcm_check(X, 1)
        self.assertFalse(result.holds)
        self.assertEqual(result.describe_witness(), "global")

    def test_circle_dimension_one(self):
        self.assertTrue(wcm_check(simplex_boundary([0, 1, 2]), 1).holds)

    def test_negative_dimension(self):
        self.assertRaises(InputError, wcm_check, full_simplex([0]), -1)


class TestCubicalHomology(TestCase):
    def test_square(self):
        self.assertTrue(cubical_homology(grid_complex([[(0, 1), (0, 1)]])).is_acyclic())

    def test_square_boundary(self):
        self.assertEqual(cubical_homology(grid_boundary([[(0, 1), (0, 1)]])).betti, (0, 1))

    def test_hollow_cube(self):
        self.assertEqual(cubical_homology(grid_boundary([[(0, 1)] * 3])).betti, (0, 0, 1))

    def test_malformed(self):
        C = CubicalComplex((Cube("e", (("a", "b"),)),))
        self.assertRaises(MalformedCubicalComplex, cubical_homology, C)

    def test_empty(self):
        self.assertTrue(cubical_homology(CubicalComplex()).empty)


class TestInducedMap(TestCase):
    def test_edge_into_triangle(self):
        f = SimplicialMap.inclusion(full_simplex([0, 1]), full_simplex([0, 1, 2]))
        for degree in range(2):
            self.assertTrue(induced_map_homology(f, degree).isomorphism)

    def test_circle_into_disk(self):
        f = SimplicialMap.inclusion(simplex_boundary([0, 1, 2]), full_simplex([0, 1, 2]))
        induced = induced_map_homology(f, 1)
        self.assertEqual(induced.source_orders, (0,))
        self.assertEqual(induced.target_orders, ())
        self.assertFalse(induced.injective)
        self.assertEqual(induced.status, "surjection")

    def test_double_cover_of_circle(self):
        hexagon = SimplicialComplex.of(*[[i, (i + 1) % 6] for i in range(6)])
        f = SimplicialMap.of(hexagon, simplex_boundary([0, 1, 2]), {i: i % 3 for i in range(6)})
        induced = induced_map_homology(f, 1)
        self.assertEqual(abs(induced.matrix[0][0]), 2)
        self.assertEqual(induced.status, "injection")

    def test_reflection_of_sphere(self):
        sphere = simplex_boundary([0, 1, 2, 3])
        f = SimplicialMap.of(sphere, sphere, {0: 1, 1: 0, 2: 2, 3: 3})
        induced = induced_map_homology(f, 2)
        self.assertTrue(induced.isomorphism)
        self.assertEqual(induced.matrix, ((-1,),))

    def test_identity_on_projective_plane(self):
        induced = induced_map_homology(SimplicialMap.identity(PROJECTIVE_PLANE), 1)
        self.assertEqual(induced.source_orders, (2,))
        self.assertTrue(induced.isomorphism)

    def test_not_simplicial(self):
        f = SimplicialMap.of(full_simplex([0, 1]), simplex_boundary([0, 1]), {0: 0, 1: 1})
        self.assertRaises(NotSimplicial, induced_map_homology, f, 0)

    def test_degree_below_minus_one(self):
        f = SimplicialMap.identity(full_simplex([0]))
        self.assertRaises(InputError, induced_map_homology, f, -2)


class TestContractibility(TestCase):
    def test_cone_apex(self):
        self.assertEqual(cone_apex(SimplicialComplex.of([0, 1, 2], [0, 3])), 0)
        self.assertIsNone(cone_apex(simplex_boundary([0, 1, 2])))

    def test_collapsible_path(self):
        path = SimplicialComplex.of([0, 1], [1, 2], [2, 3])
        self.assertTrue(collapses_to_point(path))
        self.assertEqual(certify_contractible(path).method, "collapse")

    def test_cone_first(self):
        self.assertEqual(certify_contractible(full_simplex([0, 1, 2])).method, "cone")

    def test_homology_fallback(self):
        path = SimplicialComplex.of([0, 1], [1, 2], [2, 3])
        certificate = certify_contractible(path, collapse_budget=0)
        self.assertTrue(certificate.certified)
        self.assertEqual(certificate.method, "homology")

    def test_circle_not_certified(self):
        self.assertFalse(certify_contractible(simplex_boundary([0, 1, 2])).certified)

    def test_empty_not_certified(self):
        self.assertFalse(certify_contractible(SimplicialComplex()).certified)
