import hashlib
import io
import json
from dataclasses import dataclass, field
from datetime import datetime
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from gca_kernel import format_fraction

SCHEMA_VERSION = 1


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def sparse_vector(names: Sequence[str], v: Sequence[Fraction]) -> Dict[str, str]:
    """Nonzero coordinates keyed by basis name, rationals as strings."""
    return {names[i]: format_fraction(c) for i, c in enumerate(v) if c}


def dense_vector(names: Sequence[str], data: Dict[str, str]) -> tuple:
    return tuple(parse_rational(data[n]) if n in data else Fraction(0) for n in names)


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class Report:
    command: List[str]
    inputs_digest: str = ""
    results: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    schema: int = SCHEMA_VERSION

    def as_dict(self) -> Dict[str, Any]:
        return {
            "schema": self.schema,
            "command": list(self.command),
            "inputs_digest": self.inputs_digest,
            "results": self.results,
        }


def load_report(text: str) -> Report:
    data = json.loads(text)
    if data.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema {data.get('schema')!r}")
    return Report(
        command=list(data.get("command", [])),
        inputs_digest=data.get("inputs_digest", ""),
        results=data.get("results", {}),
    )


class ReportExporter:
    def __init__(self, report: Report):
        self.report = report
        self.timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")

    def to_json(self, indent: Optional[int] = 2) -> str:
        """Export the report as JSON"""
        return json.dumps(self.report.as_dict(), indent=indent, sort_keys=True)

    def to_csv(self, table: str, index=False, separator=','):
        """Export one table to CSV format"""
        return self.report.tables[table].to_csv(index=index, sep=separator)

    def to_tsv(self, table: str, index=False):
        """Export one table to TSV format"""
        return self.report.tables[table].to_csv(index=index, sep='\t')

    def to_excel(self) -> bytes:
        """Export every table to one workbook, a sheet per table"""
        output = io.BytesIO()
        tables = self.report.tables or {
            "summary": pd.DataFrame(
                [{"key": k, "value": json.dumps(v)} for k, v in self.report.results.items()]
            )
        }
        with pd.ExcelWriter(output, engine='openpyxl') as writer:
            for name, frame in tables.items():
                frame.to_excel(writer, index=False, sheet_name=name[:31])
        return output.getvalue()
