"""
Check reports and their rendering as TOML or Jinja2 text.
"""
from dataclasses import dataclass, field
from os import makedirs
from os.path import exists
from pathlib import Path
from typing import Any, Dict, Optional

import jinja2
import toml

STRUCTURED = "structured"
HUMAN = "human"


@dataclass(frozen=True)
class CheckReport:
    """
    Outcome of a checker run.

    Attributes:
        check (str): Name of the check.
        hypothesis_holds (bool): Whether the hypotheses were verified.
        conclusion_holds (bool, optional): Whether the conclusion was verified;
            None when it was not evaluated or does not apply.
        witness (str): Canonical description of the first failing object.
        details (Dict[str, Any]): Further data, rendered in insertion order.
    """

    check: str
    hypothesis_holds: bool
    conclusion_holds: Optional[bool] = None
    witness: str = ""
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.hypothesis_holds and self.conclusion_holds is not False

    def as_dict(self) -> Dict[str, Any]:
        report: Dict[str, Any] = {
            "check": self.check,
            "passed": self.passed,
            "hypothesis_holds": self.hypothesis_holds,
        }
        if self.conclusion_holds is not None:
            report["conclusion_holds"] = self.conclusion_holds
        if self.witness:
            report["witness"] = self.witness
        report["details"] = dict(self.details)
        return report


def _drop_none(value: Any) -> Any:
    # TOML has no null
    if isinstance(value, dict):
        return {k: _drop_none(v) for k, v in value.items() if v is not None}
    if isinstance(value, (list, tuple)):
        return [_drop_none(v) for v in value]
    return value


def get_jinja_template(template_name: str) -> jinja2.Template:
    """
    Load the requested template.

    Args:
        template_name (str): File name of the desired template.

    Returns:
        jinja2.Template: The requested jinja2 template.
    """
    template_env = jinja2.Environment(
        loader=jinja2.PackageLoader("cubetopo_helpers"),
        autoescape=jinja2.select_autoescape(),
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )
    return template_env.get_template(template_name)


def render(report: Dict[str, Any], report_format: str, template_name: str) -> str:
    """
    Renders a report dictionary.

    Args:
        report (Dict[str, Any]): Report data, keys in output order.
        report_format (str): "structured" for TOML, "human" for the template.
        template_name (str): Template used for the human format.

    Returns:
        str: Report text ending in a newline.
    """
    if report_format == STRUCTURED:
        content = toml.dumps(_drop_none(report))
    else:
        content = get_jinja_template(template_name).render(report=report)
    if content[-1:] != "\n":
        content += "\n"
    return content


def write_file(output_path: Path, file_content: str) -> None:
    """
    Writes contents to file at specified path. Any necessary directories will be created
    in the process.

    Args:
        output_path (Path): Output path of the file.
        file_content (str): Contents to be written to the file.
    """
    if not exists(output_path.parent):
        makedirs(output_path.parent)
    with open(output_path, "w") as file:
        if file_content[-1:] != "\n":
            file_content += "\n"
        file.write(file_content)
