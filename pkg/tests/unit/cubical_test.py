from unittest import TestCase

from cubetopo_helpers.cubical import Cube, CubicalComplex, grid_boundary, grid_complex
from cubetopo_helpers.errors import MalformedCubicalComplex


class TestGridComplex(TestCase):
    def test_square_cells(self):
        C = grid_complex([[(0, 1), (0, 1)]])
        self.assertEqual(C.f_vector(), [4, 4, 1])
        self.assertEqual(C.dimension, 2)

    def test_square_faces(self):
        C = grid_complex([[(0, 1), (0, 1)]])
        square = C.by_key[((0, 1), (0, 1))]
        self.assertEqual(
            square.faces,
            (
                (((0, 0), (0, 1)), ((1, 1), (0, 1))),
                (((0, 1), (0, 0)), ((0, 1), (1, 1))),
            ),
        )

    def test_shared_edge(self):
        C = grid_complex([[(0, 1), (0, 0)], [(1, 2), (0, 0)]])
        self.assertEqual(C.f_vector(), [3, 2])

    def test_long_interval_rejected(self):
        self.assertRaises(MalformedCubicalComplex, grid_complex, [[(0, 2)]])

    def test_boundary_drops_top_cell(self):
        self.assertEqual(grid_boundary([[(0, 1)] * 3]).f_vector(), [8, 12, 6])


class TestCubicalComplex(TestCase):
    def test_boundary_signs(self):
        C = grid_complex([[(0, 1), (0, 1)]])
        terms = dict(C.boundary(((0, 1), (0, 1))))
        self.assertEqual(terms[((1, 1), (0, 1))], 1)
        self.assertEqual(terms[((0, 0), (0, 1))], -1)
        self.assertEqual(terms[((0, 1), (1, 1))], -1)
        self.assertEqual(terms[((0, 1), (0, 0))], 1)

    def test_missing_face(self):
        C = CubicalComplex((Cube("a"), Cube("e", (("a", "b"),))))
        self.assertRaises(MalformedCubicalComplex, C.validate)

    def test_misdimensioned_face(self):
        C = CubicalComplex((Cube("a"), Cube("b", (("a", "a"),)), Cube("s", (("a", "b"),))))
        self.assertRaises(MalformedCubicalComplex, C.validate)

    def test_duplicate_keys(self):
        C = CubicalComplex((Cube("a"), Cube("a")))
        self.assertRaises(MalformedCubicalComplex, C.validate)

    def test_empty(self):
        C = CubicalComplex()
        self.assertTrue(C.is_empty())
        self.assertEqual(C.dimension, -1)
