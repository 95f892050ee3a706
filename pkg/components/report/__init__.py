from .view import ReportView

__all__ = ["ReportView"]
