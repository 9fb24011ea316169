import argparse
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from aws_lambda_powertools import Logger
from cubetopo_helpers import (
    coloring,
    connectivity_toolkit,
    flow_retraction,
    homology_engine,
    interchange,
    reports,
    selftest,
    stein_farley,
    thompson_groups,
)
from cubetopo_helpers.errors import (
    BudgetExceeded,
    CheckFailure,
    InputError,
    ParseError,
)
from cubetopo_helpers.settings import Settings, load_settings
from cubetopo_helpers.simplicial_core import xm_subcomplex

logger = Logger(service="cubetopo", stream=sys.stderr)

EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_INPUT_ERROR = 2

Body = Tuple[Dict[str, Any], str]


def dispatch(event: Dict[str, Any]) -> Dict[str, Any]:
    """
    Runs exactly one toolkit operation.

    Args:
        event (Dict[str, Any]): The run configuration: "command", optional
            "verb", "inputs" (paths or parsed documents), numeric parameters,
            budgets, "settings", "output" and "format".

    Returns:
        Dict[str, Any]: "exit" (0 pass, 1 failure, 2 input error), "report"
            (the report dictionary) and "content" (the rendered report).
    """
    command = event.get("command", "")
    logger.info("Dispatching", extra={"command": command, "verb": event.get("verb")})
    template = "result.txt"
    try:
        settings = load_settings(_optional_path(event.get("settings"))).updated(event)
        handler = HANDLERS.get(command)
        if handler is None:
            raise InputError("Unknown command %r" % command)
        body, template = handler(event, settings)
        status = EXIT_PASS if body["passed"] else EXIT_FAILURE
    except InputError as e:
        status, body = EXIT_INPUT_ERROR, _error_body(e)
        template = "result.txt"
    except (CheckFailure, BudgetExceeded) as e:
        status, body = EXIT_FAILURE, _error_body(e)
        template = "result.txt"
    report = {"command": command, **body}
    content = reports.render(report, event.get("format", reports.HUMAN), template)
    if event.get("output"):
        reports.write_file(Path(event["output"]), content)
    logger.info("Finished", extra={"command": command, "exit": status})
    return {"exit": status, "report": report, "content": content}


def _error_body(error: Exception) -> Dict[str, Any]:
    body: Dict[str, Any] = {
        "passed": False,
        "error": type(error).__name__,
        "message": str(error),
    }
    if isinstance(error, ParseError) and error.line is not None:
        body["line"] = error.line
    witness = getattr(error, "witness", None)
    if witness is not None:
        body["witness"] = str(witness)
    return body


def _optional_path(value: Optional[str]) -> Optional[Path]:
    return Path(value) if value else None


def _documents(event: Dict[str, Any], count: int) -> List[interchange.Document]:
    inputs = event.get("inputs") or []
    if len(inputs) != count:
        raise InputError(
            "%s expects %d input document(s), got %d" % (event.get("command"), count, len(inputs))
        )
    return [
        interchange.validate_document(dict(item)) if isinstance(item, dict)
        else interchange.read_document(Path(item))
        for item in inputs
    ]


def _int(event: Dict[str, Any], name: str, minimum: int) -> int:
    value = event.get(name)
    if value is None:
        raise InputError("Parameter %s is required" % name)
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError("Parameter %s must be an integer, got %r" % (name, value))
    if value < minimum:
        raise InputError("Parameter %s must be at least %d, got %d" % (name, minimum, value))
    return value


def _groups(profile: homology_engine.HomologyProfile) -> List[str]:
    return [profile.group(k) for k in range(len(profile.betti))]


def run_homology(event: Dict[str, Any], settings: Settings) -> Body:
    X = interchange.to_complex(_documents(event, 1)[0])
    reduced = homology_engine.homology(X)
    unreduced = homology_engine.homology(X, reduced=False)
    return {
        "passed": True,
        "dimension": X.dimension,
        "f_vector": X.f_vector(),
        "euler_characteristic": X.euler_characteristic(),
        "betti": list(unreduced.betti),
        "reduced_betti": list(reduced.betti),
        "torsion": [list(t) for t in reduced.torsion],
        "groups": _groups(reduced),
    }, "homology.txt"


def run_hconn(event: Dict[str, Any], settings: Settings) -> Body:
    X = interchange.to_complex(_documents(event, 1)[0])
    report = homology_engine.hconnectivity(X, settings.tietze_budget)
    return {
        "passed": True,
        "hconn": report.hconn,
        "acyclic": report.acyclic,
        "pi1_trivial": report.certified_pi1_trivial.value,
        "dimension": report.dimension,
        "groups": _groups(report.profile),
    }, "result.txt"


def run_wcm_check(event: Dict[str, Any], settings: Settings) -> Body:
    X = interchange.to_complex(_documents(event, 1)[0])
    n = _int(event, "n", 0)
    result = homology_engine.wcm_check(X, n)
    details: Dict[str, Any] = {"n": n}
    if not result.holds:
        details.update({"stage": result.stage, "required": result.required})
    check = reports.CheckReport("wcm", True, result.holds, result.describe_witness(), details)
    return check.as_dict(), "check.txt"


def run_xm(event: Dict[str, Any], settings: Settings) -> Body:
    X = interchange.to_complex(_documents(event, 1)[0])
    m = _int(event, "m", 0)
    xm = xm_subcomplex(X, m)
    return {
        "passed": True,
        "m": m,
        "f_vector": xm.f_vector(),
        "hconn": homology_engine.hconnectivity(xm, settings.tietze_budget).hconn,
        "complex": interchange.complex_document(xm),
    }, "result.txt"


def run_teo_m_check(event: Dict[str, Any], settings: Settings) -> Body:
    X = interchange.to_complex(_documents(event, 1)[0])
    check = connectivity_toolkit.check_teo_m(X, _int(event, "n", 0), _int(event, "m", 0))
    return check.as_dict(), "check.txt"


def run_fiber_check(event: Dict[str, Any], settings: Settings) -> Body:
    p = interchange.to_map(_documents(event, 1)[0])
    check = connectivity_toolkit.check_fiber_theorem(p, _int(event, "n", -1))
    return check.as_dict(), "check.txt"


def run_fiber2_check(event: Dict[str, Any], settings: Settings) -> Body:
    p = interchange.to_map(_documents(event, 1)[0])
    check = connectivity_toolkit.check_fiber2(
        p, _int(event, "m", 0), settings.collapse_budget, settings.tietze_budget
    )
    return check.as_dict(), "check.txt"


def run_badsimplex_check(event: Dict[str, Any], settings: Settings) -> Body:
    b = interchange.to_bad_assignment(_documents(event, 1)[0])
    check = connectivity_toolkit.check_badsim(b, _int(event, "m", 0))
    return check.as_dict(), "check.txt"


def run_join_check(event: Dict[str, Any], settings: Settings) -> Body:
    p = interchange.to_map(_documents(event, 1)[0])
    result = connectivity_toolkit.check_join_complex(connectivity_toolkit.JoinStructure(p))
    body: Dict[str, Any] = {
        "passed": result.kind is not connectivity_toolkit.JoinKind.NOT_JOIN,
        "kind": result.kind.value,
    }
    if result.witness is not None:
        body.update({"witness": str(result.witness), "reason": result.reason})
    return body, "result.txt"


def run_join2_check(event: Dict[str, Any], settings: Settings) -> Body:
    p = interchange.to_map(_documents(event, 1)[0])
    check = connectivity_toolkit.check_join2(
        connectivity_toolkit.JoinStructure(p), _int(event, "n", 0)
    )
    return check.as_dict(), "check.txt"


def run_flow_check(event: Dict[str, Any], settings: Settings) -> Body:
    f = interchange.to_flow(_documents(event, 1)[0])
    check = flow_retraction.check_flow_hypotheses(f, settings.k_max)
    return check.as_dict(), "check.txt"


def run_flow_run(event: Dict[str, Any], settings: Settings) -> Body:
    f = interchange.to_flow(_documents(event, 1)[0])
    retraction = flow_retraction.cross_check_retraction(f, settings.k_max)
    if not retraction.passed:
        return retraction.as_dict(), "check.txt"
    traces = flow_retraction.run_flow(f, settings.k_max)
    return {
        "passed": True,
        "longest": max((t.length for t in traces), default=0),
        "carrier": retraction.details["carrier"],
        "subcomplex": retraction.details["subcomplex"],
        "traces": [
            {"start": str(t.start), "length": t.length, "path": [str(s) for s in t.simplices]}
            for t in traces
        ],
    }, "result.txt"


def run_coloring_extend(event: Dict[str, Any], settings: Settings) -> Body:
    S = interchange.to_labeled(_documents(event, 1)[0])
    k = _int(event, "k", 0)
    D = coloring.extend_coloring(S, k)
    check = coloring.verify_extension(S, D, k)
    return {
        "passed": check.passed,
        "interior_vertices": check.details["interior_vertices"],
        "verification": check.as_dict(),
        "disk": interchange.labeled_document(D),
    }, "result.txt"


def run_coloring_verify(event: Dict[str, Any], settings: Settings) -> Body:
    sphere, disk = (interchange.to_labeled(d) for d in _documents(event, 2))
    check = coloring.verify_extension(sphere, disk, _int(event, "k", 0))
    return check.as_dict(), "check.txt"


def run_thompson(event: Dict[str, Any], settings: Settings) -> Body:
    verb = event.get("verb")
    if verb == "compose":
        g, h = (interchange.to_tree_pair(d) for d in _documents(event, 2))
        result = thompson_groups.compose(g, h)
    elif verb in ("inverse", "reduce", "act"):
        g = interchange.to_tree_pair(_documents(event, 1)[0])
        if verb == "act":
            address = thompson_groups.Address.parse(str(event.get("address", "")))
            image = thompson_groups.act(g, address)
            return {
                "passed": True,
                "verb": verb,
                "address": str(address),
                "image": str(image),
            }, "result.txt"
        result = thompson_groups.inverse(g) if verb == "inverse" else g
        result = thompson_groups.reduce(result)
    else:
        raise InputError("Unknown thompson verb %r" % verb)
    return {
        "passed": True,
        "verb": verb,
        "identity": result.is_identity(),
        "element": interchange.tree_pair_document(result),
    }, "result.txt"


def _generators(event: Dict[str, Any]) -> Optional[List[thompson_groups.TreePair]]:
    if event.get("gens"):
        return interchange.to_element_set(
            interchange.read_document(Path(event["gens"]), ["element_set"])
        )
    if event.get("inputs"):
        return interchange.to_element_set(_documents(event, 1)[0])
    return None


def _truncation(event: Dict[str, Any], settings: Settings) -> stein_farley.Truncation:
    d, r = _int(event, "d", 1), _int(event, "r", 1)
    generators = _generators(event)
    if generators is None:
        generators = thompson_groups.standard_generators(d, r)
    return stein_farley.build_truncation(
        d,
        r,
        _int(event, "height", 0),
        generators,
        settings.saturation_rounds,
        settings.vertex_cap,
    )


def run_stein_farley(event: Dict[str, Any], settings: Settings) -> Body:
    verb = event.get("verb")
    if verb == "build":
        T = _truncation(event, settings)
        profile = homology_engine.cubical_homology(T.cubical())
        intervals_ok = all(
            len(stein_farley.interval(c.bottom, c.top)) == 2 ** c.dimension for c in T.cubes
        )
        leaves_ok = all(
            len(v.forest.leaves) == T.r + v.height * (T.d - 1) for v in T.vertices
        )
        by_height = [0] * (T.max_height + 1)
        for v in T.vertices:
            by_height[v.height] += 1
        return {
            "passed": intervals_ok and leaves_ok,
            "verb": verb,
            "vertices": len(T.vertices),
            "vertices_by_height": by_height,
            "f_vector": T.f_vector(),
            "groups": _groups(profile),
            "intervals_ok": intervals_ok,
            "leaf_counts_ok": leaves_ok,
        }, "result.txt"
    if verb == "desclink":
        T = _truncation(event, settings)
        index = _int(event, "vertex", 0)
        if index >= len(T.vertices):
            raise InputError("Vertex %d out of range, truncation has %d" % (index, len(T.vertices)))
        v = T.vertices[index]
        link = stein_farley.descending_link(v)
        body: Dict[str, Any] = {
            "passed": True,
            "verb": verb,
            "vertex": str(v),
            "height": v.height,
            "dimension": link.complex.dimension,
            "lower_neighbours": [str(w) for w in link.neighbours],
            "groups": _groups(homology_engine.homology(link.complex)),
            "connectivity_bound": stein_farley.link_connectivity_bound(T.d, T.r, v.height),
        }
        if event.get("fiber") is not None:
            fiber = _int(event, "fiber", 1)
            join = stein_farley.descending_link_join(
                v, {x: fiber for x in link.complex.vertex_set}
            )
            body["join_groups"] = _groups(homology_engine.homology(join.p.source))
        return body, "result.txt"
    if verb == "census":
        T = _truncation(event, settings)
        generators = _generators(event) or thompson_groups.standard_generators(T.d, T.r)
        census = stein_farley.orbit_census(T, generators)
        return {
            "passed": True,
            "verb": verb,
            "vertices": len(T.vertices),
            **census.as_dict(),
        }, "result.txt"
    raise InputError("Unknown stein-farley verb %r" % verb)


def run_selftest(event: Dict[str, Any], settings: Settings) -> Body:
    directory = _optional_path(event.get("fixtures")) or selftest.BUNDLED_FIXTURES

    def run(fixture_event: Dict[str, Any]) -> Tuple[int, Dict[str, Any]]:
        outcome = dispatch(fixture_event)
        return outcome["exit"], outcome["report"]

    result = selftest.run_fixtures(run, directory)
    return result.as_dict(), "selftest.txt"


HANDLERS: Dict[str, Callable[[Dict[str, Any], Settings], Body]] = {
    "homology": run_homology,
    "hconn": run_hconn,
    "wcm-check": run_wcm_check,
    "xm": run_xm,
    "teo-m-check": run_teo_m_check,
    "fiber-check": run_fiber_check,
    "fiber2-check": run_fiber2_check,
    "badsimplex-check": run_badsimplex_check,
    "join-check": run_join_check,
    "join2-check": run_join2_check,
    "flow-check": run_flow_check,
    "flow-run": run_flow_run,
    "coloring-extend": run_coloring_extend,
    "coloring-verify": run_coloring_verify,
    "thompson": run_thompson,
    "stein-farley": run_stein_farley,
    "selftest": run_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="Write the report here instead of stdout")
    common.add_argument(
        "--format", choices=(reports.HUMAN, reports.STRUCTURED), default=reports.HUMAN
    )
    common.add_argument("--settings", help="TOML file with budgets and caps")
    for flag in ("n", "m", "k"):
        common.add_argument("-%s" % flag, type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("-s", "--height", "--max-height", dest="height", type=int)
    common.add_argument("--vertex", type=int)
    common.add_argument("--fiber", type=int)
    common.add_argument("--address")
    common.add_argument("--gens", help="element_set document for truncations")
    common.add_argument("--fixtures")
    common.add_argument("--vertex-cap", "--cap", dest="vertex_cap", type=int)
    for budget in ("tietze-budget", "collapse-budget", "k-max", "saturation-rounds"):
        common.add_argument("--%s" % budget, type=int)

    parser = argparse.ArgumentParser(
        prog="cubetopo", description="Desk-scale computational topology checks"
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name in HANDLERS:
        sub = commands.add_parser(name, parents=[common])
        if name == "thompson":
            sub.add_argument("verb", choices=("compose", "inverse", "reduce", "act"))
        elif name == "stein-farley":
            sub.add_argument("verb", choices=("build", "desclink", "census"))
        sub.add_argument("inputs", nargs="*", help="Interchange documents")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    event = {key: value for key, value in vars(args).items() if value is not None}
    outcome = dispatch(event)
    if not event.get("output"):
        sys.stdout.write(outcome["content"])
    return outcome["exit"]


if __name__ == "__main__":
    sys.exit(main())
