import logging
from pathlib import Path

from report_export import Report, ReportExporter

logger = logging.getLogger(__name__)


def write_report(report: Report, path: str, table: str = "") -> Path:
    """Write a report next to its tables; the format follows the file suffix."""
    target = Path(path)
    exporter = ReportExporter(report)
    suffix = target.suffix.lower()
    if suffix == ".xlsx":
        target.write_bytes(exporter.to_excel())
    elif suffix in (".csv", ".tsv"):
        name = table or next(iter(report.tables), "")
        if not name:
            raise ValueError("this report has no table to export")
        text = exporter.to_tsv(name) if suffix == ".tsv" else exporter.to_csv(name)
        target.write_text(text, encoding="utf-8")
    else:
        target.write_text(exporter.to_json(), encoding="utf-8")
    logger.info("wrote %s", target)
    return target
