"""Infrastructure adapter exports."""

from .reports import CsvReportSink, JsonReportSink, read_reports, report_sink

__all__ = [
    "CsvReportSink",
    "JsonReportSink",
    "read_reports",
    "report_sink",
]
