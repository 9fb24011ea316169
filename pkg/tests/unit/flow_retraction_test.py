from random import Random
from unittest import TestCase
from unittest.mock import patch

from cubetopo_helpers.errors import (
    BudgetExceeded,
    HypothesisViolation,
    InputError,
    NonTermination,
)
from cubetopo_helpers.flow_retraction import (
    FlowData,
    check_flow_hypotheses,
    cross_check_retraction,
    random_flow_data,
    run_flow,
)
from cubetopo_helpers.simplicial_core import Simplex, SimplicialComplex, full_simplex

PATH = SimplicialComplex.of([0, 1], [1, 2])
POINT = full_simplex([0])


def s(*vertices: int) -> Simplex:
    return Simplex.of(vertices)


def path_flow(delta=None, vsel=None) -> FlowData:
    return FlowData.of(
        PATH,
        POINT,
        {0: 0, 1: 1, 2: 2},
        delta or {1: 0, 2: 1},
        vsel or {s(1): 1, s(2): 2, s(0, 1): 1, s(1, 2): 2},
    )


def triangle_onto_edge() -> FlowData:
    X = full_simplex([1, 2, 3])
    vsel = {t: 3 for t in X.simplices if 3 in t}
    return FlowData.of(X, full_simplex([1, 2]), {1: 0, 2: 0, 3: 1}, {3: 1}, vsel)


def triangle_flow(delta, vsel) -> FlowData:
    return FlowData.of(full_simplex([0, 1, 2]), POINT, {0: 0, 1: 1, 2: 1}, delta, vsel)


SLOW_VSEL = {s(1): 1, s(2): 2, s(0, 1): 1, s(0, 2): 2, s(1, 2): 1, s(0, 1, 2): 1}


class TestFlowData(TestCase):
    def test_complexity_sums_vertices(self):
        self.assertEqual(path_flow().c(s(1, 2)), 3)

    def test_step(self):
        self.assertEqual(path_flow().step(s(1, 2)), s(1))

    def test_outside_order(self):
        self.assertEqual(path_flow().outside(), [s(0, 1), s(1, 2), s(1), s(2)])

    def test_delta_outside_link(self):
        self.assertRaises(InputError, path_flow(delta={1: 0, 2: 0}).validate)

    def test_complexity_positive_on_y(self):
        f = FlowData.of(PATH, POINT, {0: 1, 1: 1, 2: 2}, {1: 0, 2: 1}, path_flow().vsel_map)
        self.assertRaises(InputError, f.validate)

    def test_vsel_in_y(self):
        vsel = dict(path_flow().vsel_map)
        vsel[s(0, 1)] = 0
        self.assertRaises(InputError, path_flow(vsel=vsel).validate)

    def test_target_not_subcomplex(self):
        f = FlowData.of(PATH, full_simplex([0, 2]), {0: 0, 1: 1, 2: 0}, {1: 0}, {})
        self.assertRaises(InputError, f.validate)


class TestCheckFlowHypotheses(TestCase):
    def test_path(self):
        report = check_flow_hypotheses(path_flow())
        self.assertTrue(report.passed)
        self.assertEqual(report.details, {"simplices_outside": 4, "max_descent_steps": 1})

    def test_target_is_everything(self):
        f = FlowData.of(PATH, PATH, {0: 0, 1: 0, 2: 0}, {}, {})
        report = check_flow_hypotheses(f)
        self.assertTrue(report.passed)
        self.assertEqual(report.details["simplices_outside"], 0)

    def test_join_leaves_carrier(self):
        vsel = dict(path_flow().vsel_map)
        vsel[s(1, 2)] = 1
        with self.assertRaises(HypothesisViolation) as caught:
            check_flow_hypotheses(path_flow(vsel=vsel))
        self.assertEqual(caught.exception.condition, 1)
        self.assertEqual(caught.exception.witness, s(1, 2))

    def test_face_selects_other_vertex(self):
        vsel = dict(SLOW_VSEL)
        vsel[s(0, 1, 2)] = 2
        with self.assertRaises(HypothesisViolation) as caught:
            check_flow_hypotheses(triangle_flow({1: 2, 2: 0}, vsel))
        self.assertEqual(caught.exception.condition, 3)
        self.assertEqual(caught.exception.witness, s(0, 1, 2))

    def test_flow_cycles(self):
        vsel = dict(SLOW_VSEL)
        vsel[s(0, 2)] = 2
        with self.assertRaises(HypothesisViolation) as caught:
            check_flow_hypotheses(triangle_flow({1: 2, 2: 1}, vsel))
        self.assertEqual(caught.exception.condition, 2)
        self.assertEqual(caught.exception.witness, s(0, 1))

    def test_two_step_descent(self):
        report = check_flow_hypotheses(triangle_flow({1: 2, 2: 0}, SLOW_VSEL))
        self.assertEqual(report.details["max_descent_steps"], 2)

    def test_descent_budget(self):
        f = triangle_flow({1: 2, 2: 0}, SLOW_VSEL)
        self.assertRaises(BudgetExceeded, check_flow_hypotheses, f, 1)

    def test_non_positive_budget(self):
        self.assertRaises(InputError, check_flow_hypotheses, path_flow(), 0)


class TestRunFlow(TestCase):
    def test_path_traces(self):
        traces = {t.start: t for t in run_flow(path_flow())}
        self.assertEqual(traces[s(1, 2)].simplices, (s(1, 2), s(1), s(0)))
        self.assertEqual(traces[s(0)].length, 0)
        self.assertTrue(all(t.simplices[-1] in POINT for t in traces.values()))

    def test_triangle_onto_edge(self):
        f = triangle_onto_edge()
        for trace in run_flow(f):
            self.assertLessEqual(trace.length, 2)
            self.assertIn(trace.simplices[-1], f.target)
        self.assertEqual(len(run_flow(f)), 7)

    def test_cycling_flow_is_rejected(self):
        with self.assertRaises(HypothesisViolation) as caught:
            run_flow(triangle_flow({1: 2, 2: 1}, SLOW_VSEL))
        self.assertEqual(caught.exception.condition, 2)
        self.assertEqual(caught.exception.witness, s(0, 1))

    def test_join_leaving_carrier_is_rejected_before_stepping(self):
        vsel = dict(path_flow().vsel_map)
        vsel[s(1, 2)] = 1
        with self.assertRaises(HypothesisViolation) as caught:
            run_flow(path_flow(vsel=vsel))
        self.assertEqual(caught.exception.condition, 1)
        self.assertEqual(caught.exception.witness, s(1, 2))

    @patch("cubetopo_helpers.flow_retraction.check_flow_hypotheses")
    def test_cycling_flow_does_not_terminate(self, check_flow_hypotheses):
        f = triangle_flow({1: 2, 2: 1}, SLOW_VSEL)
        with self.assertRaises(NonTermination) as caught:
            run_flow(f)
        check_flow_hypotheses.assert_called_once_with(f, 64)
        self.assertEqual(caught.exception.witness, s(1))


class TestCrossCheckRetraction(TestCase):
    def test_path(self):
        report = cross_check_retraction(path_flow())
        self.assertTrue(report.passed)
        self.assertEqual(report.details["carrier"], ["0", "0"])

    def test_triangle_onto_edge(self):
        self.assertTrue(cross_check_retraction(triangle_onto_edge()).passed)

    def test_violation_is_reported(self):
        vsel = dict(path_flow().vsel_map)
        vsel[s(1, 2)] = 1
        report = cross_check_retraction(path_flow(vsel=vsel))
        self.assertFalse(report.hypothesis_holds)
        self.assertEqual(report.witness, "{1,2}")
        self.assertEqual(report.details["condition"], 1)

    def test_random_flows_preserve_homology(self):
        rng = Random(2)
        for _ in range(50):
            f = random_flow_data(rng)
            report = cross_check_retraction(f)
            self.assertTrue(report.hypothesis_holds)
            self.assertTrue(report.conclusion_holds)
            for trace in run_flow(f):
                self.assertIn(trace.simplices[-1], f.target)

    def test_random_flow_is_deterministic(self):
        self.assertEqual(random_flow_data(Random(4)), random_flow_data(Random(4)))
