"""Workspace files, query dispatch and report output."""

from trustlogic.publish.output import publish_html, render_text, reports_to_json
from trustlogic.publish.queries import (
    CorpusResult,
    ExpectationResult,
    Query,
    QueryError,
    QueryReport,
    run_corpus,
    run_expectations,
    run_query,
)
from trustlogic.publish.workspace import (
    Expectation,
    Workspace,
    WorkspaceError,
    load_workspace,
    parse_spec,
)
