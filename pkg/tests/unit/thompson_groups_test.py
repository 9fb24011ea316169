from itertools import product
from random import Random
from unittest import TestCase

from cubetopo_helpers.errors import (
    AddressTooShallow,
    InputError,
    ParameterMismatch,
    ParseError,
)
from cubetopo_helpers.thompson_groups import (
    Address,
    Forest,
    TreePair,
    act,
    compose,
    expand,
    inverse,
    parse_forest,
    random_address,
    random_forest,
    random_tree_pair,
    reduce,
    root_permutations,
    standard_generators,
)

PARAMETERS = list(product((1, 2, 3), repeat=2))


def address(text: str) -> Address:
    return Address.parse(text)


class TestForest(TestCase):
    def test_parse_and_render(self):
        forest = parse_forest("(x (x x)),x", 2, 2)
        self.assertEqual(forest.carets, frozenset({(0, ()), (0, (1,))}))
        self.assertEqual(str(forest), "(x (x x)),x")
        self.assertEqual(forest.leaves, ((0, (0,)), (0, (1, 0)), (0, (1, 1)), (1, ())))

    def test_removable_carets(self):
        forest = parse_forest("((x x) (x x))", 2, 1)
        self.assertEqual(forest.removable(), [(0, (0,)), (0, (1,))])

    def test_leaf_count(self):
        rng = Random(1)
        for d, r in PARAMETERS:
            for n in range(6):
                self.assertEqual(len(random_forest(rng, d, r, n).leaves), r + n * (d - 1))

    def test_wrong_arity(self):
        self.assertRaises(ParseError, parse_forest, "(x x x)", 2, 1)

    def test_wrong_root_count(self):
        self.assertRaises(ParseError, parse_forest, "x,x", 2, 1)

    def test_syntax_error(self):
        self.assertRaises(ParseError, parse_forest, "(x", 2, 1)

    def test_orphan_caret(self):
        self.assertRaises(InputError, Forest, 2, 1, frozenset({(0, (1,))}))

    def test_bad_parameters(self):
        self.assertRaises(InputError, Forest, 0, 1)

    def test_remove_internal_caret(self):
        forest = parse_forest("(x (x x))", 2, 1)
        self.assertRaises(InputError, forest.without, (0, ()))


class TestAddress(TestCase):
    def test_parse(self):
        self.assertEqual(address("1:0210"), Address(1, (0, 2, 1, 0)))
        self.assertEqual(address("2:"), Address(2, ()))

    def test_str(self):
        self.assertEqual(str(Address(0, (1, 1))), "0:11")

    def test_invalid(self):
        for text in ("abc", "0:1a", ":01", "01"):
            self.assertRaises(ParseError, Address.parse, text)


class TestTreePair(TestCase):
    def test_leaf_mismatch(self):
        caret = Forest(2, 1, frozenset({(0, ())}))
        self.assertRaises(InputError, TreePair, caret, Forest.trivial(2, 1), (0, 1))

    def test_not_a_permutation(self):
        caret = Forest(2, 1, frozenset({(0, ())}))
        self.assertRaises(InputError, TreePair, caret, caret, (0, 0))

    def test_parameter_mismatch(self):
        self.assertRaises(
            ParameterMismatch, TreePair, Forest.trivial(2, 1), Forest.trivial(3, 1), (0,)
        )

    def test_compose_across_groups(self):
        self.assertRaises(
            ParameterMismatch, compose, TreePair.identity(2, 1), TreePair.identity(2, 2)
        )


class TestGenerators(TestCase):
    def test_counts(self):
        self.assertEqual(len(standard_generators(2, 1)), 3)
        self.assertEqual(len(standard_generators(3, 2)), 5)
        self.assertEqual(len(standard_generators(1, 3)), 3)
        self.assertEqual(root_permutations(2, 1), [])

    def test_generators_are_reduced(self):
        for d, r in PARAMETERS:
            for g in standard_generators(d, r):
                self.assertEqual(reduce(g), g)
                self.assertFalse(g.is_identity())

    def test_first_generator_action(self):
        x0 = standard_generators(2, 1)[0]
        self.assertEqual(act(x0, address("0:1")), address("0:11"))
        self.assertEqual(act(x0, address("0:00101")), address("0:0101"))
        self.assertEqual(act(x0, address("0:01")), address("0:10"))

    def test_child_swap(self):
        swap = standard_generators(2, 1)[2]
        self.assertEqual(act(swap, address("0:0110")), address("0:1110"))
        self.assertTrue(compose(swap, swap).is_identity())

    def test_root_swap(self):
        swap = root_permutations(2, 2)[0]
        self.assertEqual(act(swap, address("0:10")), address("1:10"))
        self.assertTrue(compose(swap, swap).is_identity())

    def test_root_cycle_has_order_r(self):
        cycle = root_permutations(2, 3)[1]
        self.assertTrue(compose(cycle, compose(cycle, cycle)).is_identity())
        self.assertFalse(compose(cycle, cycle).is_identity())

    def test_depth_shift(self):
        shift = standard_generators(1, 2)[0]
        self.assertEqual(act(shift, address("0:000")), address("0:00"))
        self.assertEqual(act(shift, address("1:0")), address("1:0"))

    def test_too_shallow(self):
        x0 = standard_generators(2, 1)[0]
        self.assertRaises(AddressTooShallow, act, x0, address("0:"))


class TestGroupLaws(TestCase):
    def test_random_samples(self):
        rng = Random(8)
        for i in range(500):
            d, r = PARAMETERS[i % len(PARAMETERS)]
            f = random_tree_pair(rng, d, r, 4)
            g = random_tree_pair(rng, d, r, 4)
            h = random_tree_pair(rng, d, r, 4)
            a = random_address(rng, d, r)
            gh = compose(g, h)
            self.assertEqual(act(gh, a), act(g, act(h, a)))
            self.assertEqual(act(inverse(g), act(g, a)), a)
            self.assertTrue(compose(g, inverse(g)).is_identity())
            self.assertEqual(compose(compose(f, g), h), compose(f, gh))
            self.assertEqual(reduce(gh), gh)

    def test_expand_then_reduce(self):
        rng = Random(12)
        for d, r in PARAMETERS:
            for _ in range(10):
                g = random_tree_pair(rng, d, r)
                leaf = rng.choice(g.domain.leaves)
                expanded = expand(g, leaf)
                self.assertEqual(len(expanded.domain.leaves), len(g.domain.leaves) + d - 1)
                self.assertEqual(reduce(expanded), g)

    def test_identity_is_neutral(self):
        rng = Random(4)
        for d, r in PARAMETERS:
            g = random_tree_pair(rng, d, r)
            e = TreePair.identity(d, r)
            self.assertEqual(compose(e, g), g)
            self.assertEqual(compose(g, e), g)
