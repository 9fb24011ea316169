"""
Fixture battery: every fixture names a command, its inputs and parameters,
and the exit status plus a subset of the structured report it must produce.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from aws_lambda_powertools import Logger

from cubetopo_helpers.errors import ToolkitError
from cubetopo_helpers.interchange import Document, read_document

logger = Logger(service="cubetopo", child=True)

Runner = Callable[[Dict[str, Any]], Tuple[int, Dict[str, Any]]]

BUNDLED_FIXTURES = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class SelftestResult:
    total: int
    failures: List[Dict[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.total > 0 and not self.failures

    def as_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "total": self.total,
            "failed": len(self.failures),
            "failures": self.failures,
        }


def mismatch(expected: Any, actual: Any, path: str = "report") -> Optional[str]:
    """
    First place where actual does not contain expected; dictionaries are
    compared key by key, everything else by equality.
    """
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            return path
        for key, value in expected.items():
            if key not in actual:
                return "%s.%s" % (path, key)
            found = mismatch(value, actual[key], "%s.%s" % (path, key))
            if found:
                return found
        return None
    return None if expected == actual else path


def fixture_event(fixture: Document) -> Dict[str, Any]:
    event: Dict[str, Any] = dict(fixture.get("params", {}))
    event["command"] = fixture["command"]
    if "verb" in fixture:
        event["verb"] = fixture["verb"]
    event["inputs"] = fixture.get("inputs", [])
    event["format"] = "structured"
    return event


def run_fixtures(run: Runner, directory: Path = BUNDLED_FIXTURES) -> SelftestResult:
    """
    Runs every *.toml fixture in directory, in name order.

    Args:
        run (Runner): Executes one event and returns (exit status, report).
        directory (Path, optional): Fixture directory. Defaults to the
            fixtures shipped with the package.

    Returns:
        SelftestResult: An empty directory gives zero fixtures, which does
            not pass.
    """
    paths = sorted(Path(directory).glob("*.toml"))
    failures: List[Dict[str, str]] = []
    for path in paths:
        try:
            fixture = read_document(path, ["fixture"])
            status, report = run(fixture_event(fixture))
        except ToolkitError as e:
            failures.append({"fixture": path.name, "reason": str(e)})
            continue
        expected = fixture["expected"]
        if status != expected["exit"]:
            reason = "exit %d, expected %d" % (status, expected["exit"])
        else:
            found = mismatch(expected.get("report", {}), report)
            reason = "mismatch at %s" % found if found else ""
        if reason:
            failures.append({"fixture": path.name, "reason": reason})
    logger.info("Selftest finished", extra={"total": len(paths), "failed": len(failures)})
    return SelftestResult(len(paths), failures)
