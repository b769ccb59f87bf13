"""Functions that render and save query reports."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import markdown as md
from bs4 import BeautifulSoup  # type: ignore
from jinja2 import Template

from trustlogic._options import resolve_config_option
from trustlogic.publish.queries import CorpusResult, QueryReport

logger = logging.getLogger(__name__)


def _report_context(report: QueryReport) -> Dict[str, Any]:
    context = report.to_dict()
    context["proof_text"] = report.proof.render() if report.proof is not None else ""
    context["countermodel_text"] = (
        report.countermodel.render() if report.countermodel is not None else ""
    )
    return context


def _corpus_context(result: CorpusResult) -> Dict[str, Any]:
    return {
        "path": result.path,
        "met": sum(r.passed for r in result.results),
        "total": len(result.results),
        "lines": [r.render() for r in result.results],
    }


def render_text(
    reports: Sequence[QueryReport] = (),
    corpus: Sequence[CorpusResult] = (),
    title: Optional[str] = None,
    jinja_template: Optional[str] = None,
) -> str:
    """Render reports as markdown text.

    Args:
      reports (list): Query reports, in query order.
      corpus (list): Corpus results, one per workspace file.
      title (str): Heading of the document (default = None).
      jinja_template (str): Path to Jinja template (default = `report_template` option).

    Returns:
      str: Markdown text.

    """
    template = Template(
        Path(resolve_config_option("report_template", jinja_template)).read_text(),
        trim_blocks=True,
        lstrip_blocks=True,
    )
    text: str = template.render(
        title=title,
        reports=[_report_context(r) for r in reports],
        corpus=[_corpus_context(c) for c in corpus],
    )
    return text.strip() + "\n"


def reports_to_json(
    reports: Sequence[QueryReport] = (), corpus: Sequence[CorpusResult] = ()
) -> str:
    """Serialize reports with the stable keys of `QueryReport.to_dict`."""
    data: Dict[str, List[Any]] = {"reports": [r.to_dict() for r in reports]}
    if corpus:
        data["corpus"] = [
            {
                "path": c.path,
                "passed": c.passed,
                "expectations": [
                    {
                        "line": r.expectation.line,
                        "text": r.expectation.text,
                        "passed": r.passed,
                        "report": r.report.to_dict(),
                    }
                    for r in c.results
                ],
            }
            for c in corpus
        ]
    return json.dumps(data, indent=2)


def publish_html(
    reports: Union[str, Sequence[QueryReport]] = (),
    filepath: Optional[Union[str, Path]] = "./trustlogic-report.html",
    return_html: bool = False,
    corpus: Sequence[CorpusResult] = (),
    title: str = "trustlogic report",
    jinja_template: Optional[str] = None,
) -> Optional[str]:
    """Save reports to HTML.

    Args:
      reports (str, list): Query reports, or markdown already rendered by `render_text`.
      filepath (str): Filepath to write to.
      return_html (bool): Returns HTML string if True.
      corpus (list): Corpus results to include.
      title (str): Document title.
      jinja_template (str): Path to Jinja template (default = `html_template` option).

    Returns:
      str: HTML string if return_html is True.

    """
    if isinstance(reports, str):
        text = reports
    else:
        text = render_text(reports, corpus, title)
    content = md.markdown(text, extensions=["extra", "smarty"])
    jinja_template_object = Template(
        Path(resolve_config_option("html_template", jinja_template)).read_text()
    )
    html_rendered: str = jinja_template_object.render(doc_title=title, content=content)
    html_rendered = prettify_html(html_rendered)

    if filepath:
        Path(filepath).write_text(html_rendered, encoding="utf-8")
        logger.info("report written to %s", filepath)

    if return_html:
        return html_rendered
    return None


def prettify_html(html: Optional[str]) -> str:
    """Prettify HTML."""
    html = html or ""
    html = str(BeautifulSoup(html, features="html.parser").prettify())

    return html
