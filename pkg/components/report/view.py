from report_export import Report

from .sections import (
    show_chain_derivations,
    show_cohomology,
    show_derivations,
    show_error,
    show_lower_grading,
    show_morphism_check,
    show_peel,
    show_rigidity,
    show_ring,
    show_text,
)

SECTIONS = {
    "cohomology": show_cohomology,
    "ring": show_ring,
    "derivations": show_derivations,
    "chain-derivations": show_chain_derivations,
    "rigidity": show_rigidity,
    "lower-grading": show_lower_grading,
    "peel": show_peel,
    "morphism-check": show_morphism_check,
}


class ReportView:
    """Plain-text rendering of a report for the terminal."""

    def __init__(self, report: Report):
        self.report = report

    def render(self) -> str:
        results = self.report.results
        if "error" in results:
            return show_error(results)
        command = self.report.command[0] if self.report.command else ""
        header = results.get("metrics")
        body = SECTIONS.get(command, show_text)(results)
        if header:
            return f"{header}\n\n{body}"
        return body
