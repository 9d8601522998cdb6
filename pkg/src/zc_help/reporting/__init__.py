"""
Reporting

Versioned JSON report schema and the text renderer.
"""

from .render import render_text
from .schemas import SCHEMA_VERSION, Report, build_report

__all__ = ["SCHEMA_VERSION", "Report", "build_report", "render_text"]
